//! Labelled square grids: cost matrices and confusion matrices.
//!
//! The header row and the first column carry inventory labels in any order;
//! the top-left cell is ignored.
//!
//! ```text
//! ,AA,AE,...,<eps>
//! AA,0,1,...,1
//! ```

use std::str::FromStr;
use std::sync::Arc;

use phonvar_core::alignment::CostMatrix;
use phonvar_core::confusion::ConfusionMatrix;
use phonvar_core::inventory::PhonemeInventory;

use crate::error::{Error, Result};

/// Reads a grid into row-major inventory order.
pub fn parse_grid<T>(text: &str, inventory: &PhonemeInventory) -> Result<Vec<T>>
where
    T: FromStr + Copy + Default,
{
    let n = inventory.len();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = match records.next() {
        Some(r) => r.map_err(|e| csv_error(&e))?,
        None => return Err(Error::parse(1, "empty grid")),
    };
    let columns = label_order(header.iter().skip(1), inventory, 1, "column")?;

    let mut grid = vec![T::default(); n * n];
    let mut seen = vec![false; n];
    for record in records {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != n + 1 {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", n + 1, record.len()),
            ));
        }
        let label = &record[0];
        let row = inventory
            .lookup(label)
            .ok_or_else(|| Error::parse(line, format!("unknown row label `{label}`")))?;
        if std::mem::replace(&mut seen[row.index()], true) {
            return Err(Error::parse(line, format!("duplicate row label `{label}`")));
        }
        for (&col, cell) in columns.iter().zip(record.iter().skip(1)) {
            grid[row.index() * n + col] = cell.parse().map_err(|_| {
                Error::parse(line, format!("bad value `{cell}` in row `{label}`"))
            })?;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::Invalid(format!(
            "grid is missing row `{}`",
            inventory.symbols()[missing]
        )));
    }
    Ok(grid)
}

fn label_order<'a>(
    labels: impl Iterator<Item = &'a str>,
    inventory: &PhonemeInventory,
    line: usize,
    what: &str,
) -> Result<Vec<usize>> {
    let n = inventory.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for label in labels {
        let p = inventory
            .lookup(label)
            .ok_or_else(|| Error::parse(line, format!("unknown {what} label `{label}`")))?;
        if std::mem::replace(&mut seen[p.index()], true) {
            return Err(Error::parse(line, format!("duplicate {what} label `{label}`")));
        }
        order.push(p.index());
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::parse(
            line,
            format!("grid is missing {what} `{}`", inventory.symbols()[missing]),
        ));
    }
    Ok(order)
}

fn csv_error(e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::parse(line, e.to_string())
}

/// Writes a grid in inventory order. Values use their shortest exact
/// decimal representation.
pub fn write_grid<T: std::fmt::Display>(values: &[T], inventory: &PhonemeInventory) -> String {
    let n = inventory.len();
    let mut out = String::new();
    for s in inventory.symbols() {
        out.push(',');
        out.push_str(s);
    }
    out.push('\n');
    for (label, row) in inventory.symbols().iter().zip(values.chunks(n)) {
        out.push_str(label);
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_cost_matrix(text: &str, inventory: Arc<PhonemeInventory>) -> Result<CostMatrix> {
    let grid = parse_grid::<f64>(text, &inventory)?;
    Ok(CostMatrix::from_grid(inventory, grid)?)
}

pub fn write_cost_matrix(costs: &CostMatrix) -> String {
    write_grid(costs.as_slice(), costs.inventory())
}

/// The (epsilon, epsilon) cell must be zero.
pub fn parse_confusion(text: &str, inventory: Arc<PhonemeInventory>) -> Result<ConfusionMatrix> {
    let grid = parse_grid::<u64>(text, &inventory)?;
    Ok(ConfusionMatrix::from_counts(inventory, grid)?)
}

pub fn write_confusion(matrix: &ConfusionMatrix) -> String {
    write_grid(matrix.as_slice(), matrix.inventory())
}

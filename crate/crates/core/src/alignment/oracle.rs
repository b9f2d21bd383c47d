//! Exhaustive enumeration of edit scripts, used to check the dynamic program.
//!
//! Nothing here shares code with [`align`](super::align): scripts are built
//! by plain recursion over the three possible next steps and summed from the
//! front, so the minimum is found without any table.

use alloc::vec::Vec;

use super::{check_sequence, CostMatrix, EditOp};
use crate::inventory::Phoneme;
use crate::{Error, Result};

/// Largest combined input length accepted by the enumerators.
pub const BRUTE_FORCE_LIMIT: usize = 12;

fn check(expected: &[Phoneme], observed: &[Phoneme], costs: &CostMatrix) -> Result<()> {
    let len = expected.len() + observed.len();
    if len > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceTooLong {
            len,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    check_sequence(costs.inventory(), expected)?;
    check_sequence(costs.inventory(), observed)
}

/// Minimum total cost over every monotone edit script.
pub fn align_bruteforce(
    expected: &[Phoneme],
    observed: &[Phoneme],
    costs: &CostMatrix,
) -> Result<f64> {
    check(expected, observed, costs)?;
    let mut best = f64::INFINITY;
    walk(expected, observed, costs, 0.0, &mut |total| {
        if total < best {
            best = total;
        }
    });
    Ok(best)
}

fn walk(
    expected: &[Phoneme],
    observed: &[Phoneme],
    costs: &CostMatrix,
    acc: f64,
    visit: &mut impl FnMut(f64),
) {
    if expected.is_empty() && observed.is_empty() {
        visit(acc);
        return;
    }
    let eps = costs.inventory().epsilon();
    if let (Some((&a, ra)), Some((&b, rb))) = (expected.split_first(), observed.split_first()) {
        walk(ra, rb, costs, acc + costs.cost(a, b), visit);
    }
    if let Some((&a, ra)) = expected.split_first() {
        walk(ra, observed, costs, acc + costs.cost(a, eps), visit);
    }
    if let Some((&b, rb)) = observed.split_first() {
        walk(expected, rb, costs, acc + costs.cost(eps, b), visit);
    }
}

/// Every edit script with its total cost, in enumeration order
/// (diagonal, then delete, then insert at each step).
pub fn enumerate_scripts(
    expected: &[Phoneme],
    observed: &[Phoneme],
    costs: &CostMatrix,
) -> Result<Vec<(Vec<EditOp>, f64)>> {
    check(expected, observed, costs)?;
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    collect(expected, observed, costs, 0.0, &mut prefix, &mut out);
    Ok(out)
}

fn collect(
    expected: &[Phoneme],
    observed: &[Phoneme],
    costs: &CostMatrix,
    acc: f64,
    prefix: &mut Vec<EditOp>,
    out: &mut Vec<(Vec<EditOp>, f64)>,
) {
    if expected.is_empty() && observed.is_empty() {
        out.push((prefix.clone(), acc));
        return;
    }
    let eps = costs.inventory().epsilon();
    if let (Some((&a, ra)), Some((&b, rb))) = (expected.split_first(), observed.split_first()) {
        let c = costs.cost(a, b);
        prefix.push(EditOp::diagonal(a, b, c));
        collect(ra, rb, costs, acc + c, prefix, out);
        prefix.pop();
    }
    if let Some((&a, ra)) = expected.split_first() {
        let c = costs.cost(a, eps);
        prefix.push(EditOp::delete(a, c));
        collect(ra, observed, costs, acc + c, prefix, out);
        prefix.pop();
    }
    if let Some((&b, rb)) = observed.split_first() {
        let c = costs.cost(eps, b);
        prefix.push(EditOp::insert(b, c));
        collect(expected, rb, costs, acc + c, prefix, out);
        prefix.pop();
    }
}

/// Scripts whose total equals the minimum exactly.
pub fn optimal_scripts(
    expected: &[Phoneme],
    observed: &[Phoneme],
    costs: &CostMatrix,
) -> Result<Vec<Vec<EditOp>>> {
    let all = enumerate_scripts(expected, observed, costs)?;
    let best = all.iter().map(|(_, c)| *c).fold(f64::INFINITY, f64::min);
    Ok(all
        .into_iter()
        .filter(|(_, c)| *c == best)
        .map(|(ops, _)| ops)
        .collect())
}

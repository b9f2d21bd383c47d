//! SVG heatmaps of square labelled grids.

use std::fmt::Write;

use phonvar_core::alignment::CostMatrix;
use phonvar_core::confusion::ConfusionMatrix;

const CELL: usize = 14;
const MARGIN: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Darkness = value / row maximum. Used for confusion counts.
    RowMax,
    /// Darkness = 1 - value / global maximum, so cheap (similar) pairs are
    /// dark. Used for cost matrices.
    InverseGlobalMax,
}

/// Darkness in [0, 1] for every cell, row-major.
pub fn darkness(values: &[f64], n: usize, scale: Scale) -> Vec<f64> {
    match scale {
        Scale::RowMax => values
            .chunks(n)
            .flat_map(|row| {
                let max = row.iter().copied().fold(0.0, f64::max);
                row.iter().map(move |&v| if max > 0.0 { v / max } else { 0.0 })
            })
            .collect(),
        Scale::InverseGlobalMax => {
            let max = values.iter().copied().fold(0.0, f64::max);
            values
                .iter()
                .map(|&v| if max > 0.0 { 1.0 - v / max } else { 0.0 })
                .collect()
        }
    }
}

/// Grey level for a darkness value: 255 is white, 0 is black.
pub fn grey(darkness: f64) -> u8 {
    (255.0 * (1.0 - darkness.clamp(0.0, 1.0))).round() as u8
}

/// Renders an `n x n` grid with row labels on the left (expected) and column
/// labels on top (observed).
pub fn render(values: &[f64], labels: &[String], scale: Scale, title: &str) -> String {
    let n = labels.len();
    assert_eq!(values.len(), n * n, "grid must be square over the labels");
    let size = MARGIN + n * CELL + 8;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="monospace" font-size="8">"#
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(title));
    let _ = writeln!(svg, r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##);
    for (i, label) in labels.iter().enumerate() {
        let c = MARGIN + i * CELL + CELL / 2;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            MARGIN - 3,
            c,
            escape(label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{c}" y="{}" text-anchor="start" dominant-baseline="middle" transform="rotate(-90 {c} {})">{}</text>"#,
            MARGIN - 3,
            MARGIN - 3,
            escape(label)
        );
    }
    for (k, d) in darkness(values, n, scale).into_iter().enumerate() {
        let (r, c) = (k / n, k % n);
        let g = grey(d);
        let _ = writeln!(
            svg,
            r##"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="#{g:02x}{g:02x}{g:02x}"><title>{} {}: {}</title></rect>"##,
            MARGIN + c * CELL,
            MARGIN + r * CELL,
            escape(&labels[r]),
            escape(&labels[c]),
            values[k]
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn confusion_svg(matrix: &ConfusionMatrix, title: &str) -> String {
    let values: Vec<f64> = matrix.as_slice().iter().map(|&c| c as f64).collect();
    render(&values, matrix.inventory().symbols(), Scale::RowMax, title)
}

pub fn cost_svg(costs: &CostMatrix, title: &str) -> String {
    render(costs.as_slice(), costs.inventory().symbols(), Scale::InverseGlobalMax, title)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Reads back `(row, col, grey)` for every cell rectangle of an SVG written
/// by [`render`].
pub fn cells(svg: &str) -> Vec<(usize, usize, u8)> {
    svg.lines()
        .filter(|l| l.starts_with("<rect x="))
        .filter_map(|l| {
            let attr = |name: &str| {
                let start = l.find(&format!("{name}=\""))? + name.len() + 2;
                let end = start + l[start..].find('"')?;
                Some(&l[start..end])
            };
            let x: usize = attr("x")?.parse().ok()?;
            let y: usize = attr("y")?.parse().ok()?;
            let g = u8::from_str_radix(&attr("fill")?[1..3], 16).ok()?;
            Some(((y - MARGIN) / CELL, (x - MARGIN) / CELL, g))
        })
        .collect()
}

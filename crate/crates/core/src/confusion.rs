//! Per-speaker confusion matrices and the rates derived from them.
//!
//! Rows are expected (prompt) symbols and columns observed symbols. Deletions
//! land in the epsilon column and insertions in the epsilon row, so a
//! target's row sums to the number of times it was expected and insertions
//! never touch any target's rates.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::alignment::{Alignment, EditOp};
use crate::inventory::{Phoneme, PhonemeInventory};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    inventory: Arc<PhonemeInventory>,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(inventory: Arc<PhonemeInventory>) -> Self {
        let n = inventory.len();
        ConfusionMatrix {
            inventory,
            counts: vec![0; n * n],
        }
    }

    /// Wraps a row-major count grid. The (epsilon, epsilon) cell must be zero.
    pub fn from_counts(inventory: Arc<PhonemeInventory>, counts: Vec<u64>) -> Result<Self> {
        let n = inventory.len();
        assert_eq!(counts.len(), n * n, "count grid must be {n}x{n}");
        let eps = inventory.epsilon().index();
        if counts[eps * n + eps] != 0 {
            return Err(Error::EpsilonCell);
        }
        Ok(ConfusionMatrix { inventory, counts })
    }

    pub fn inventory(&self) -> &Arc<PhonemeInventory> {
        &self.inventory
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, expected: Phoneme, observed: Phoneme) -> u64 {
        self.counts[expected.index() * self.inventory.len() + observed.index()]
    }

    /// Adds `n` to a cell. Panics on the (epsilon, epsilon) cell.
    pub fn add(&mut self, expected: Phoneme, observed: Phoneme, n: u64) {
        let eps = self.inventory.epsilon();
        assert!(
            !(expected == eps && observed == eps),
            "epsilon/epsilon is not an edit"
        );
        let width = self.inventory.len();
        self.counts[expected.index() * width + observed.index()] += n;
    }

    pub fn record(&mut self, op: &EditOp) {
        let eps = self.inventory.epsilon();
        self.add(op.expected.unwrap_or(eps), op.observed.unwrap_or(eps), 1);
    }

    pub fn row(&self, expected: Phoneme) -> &[u64] {
        let n = self.inventory.len();
        &self.counts[expected.index() * n..(expected.index() + 1) * n]
    }

    pub fn row_sum(&self, expected: Phoneme) -> u64 {
        self.row(expected).iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Elementwise sum.
    pub fn merge(&self, other: &ConfusionMatrix) -> Result<ConfusionMatrix> {
        if !same_inventory(&self.inventory, &other.inventory) {
            return Err(Error::InventoryMismatch);
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ConfusionMatrix {
            inventory: self.inventory.clone(),
            counts,
        })
    }
}

pub(crate) fn same_inventory(a: &Arc<PhonemeInventory>, b: &Arc<PhonemeInventory>) -> bool {
    Arc::ptr_eq(a, b) || a.symbols() == b.symbols()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeakerProfile {
    pub speaker_id: String,
    pub l1_label: Option<String>,
    pub matrix: ConfusionMatrix,
    pub utterance_count: u64,
}

impl SpeakerProfile {
    pub fn new(
        speaker_id: impl Into<String>,
        l1_label: Option<String>,
        inventory: Arc<PhonemeInventory>,
    ) -> Self {
        SpeakerProfile {
            speaker_id: speaker_id.into(),
            l1_label,
            matrix: ConfusionMatrix::zeros(inventory),
            utterance_count: 0,
        }
    }

    /// Counts every op of one utterance's alignment.
    pub fn accumulate(&mut self, alignment: &Alignment) {
        for op in &alignment.ops {
            self.matrix.record(op);
        }
        self.utterance_count += 1;
    }
}

/// An exact fraction of counts, formatted as a one-decimal percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rate {
    pub numerator: u64,
    pub denominator: u64,
}

impl Rate {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator > 0, "rate with zero denominator");
        Rate {
            numerator,
            denominator,
        }
    }

    pub fn value(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Percentage in tenths, rounded half up with integer arithmetic.
    pub fn percent_tenths(self) -> u64 {
        let scaled = self.numerator as u128 * 2000 + self.denominator as u128;
        (scaled / (2 * self.denominator as u128)) as u64
    }
}

impl PartialOrd for Rate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numerator as u128 * other.denominator as u128)
            .cmp(&(other.numerator as u128 * self.denominator as u128))
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.percent_tenths();
        write!(f, "{}.{}%", t / 10, t % 10)
    }
}

fn checked_row(matrix: &ConfusionMatrix, target: Phoneme) -> Result<u64> {
    let inv = matrix.inventory();
    if target == inv.epsilon() {
        return Err(Error::EpsilonTarget);
    }
    if target.index() >= inv.len() {
        return Err(Error::IndexOutOfRange(target.index()));
    }
    match matrix.row_sum(target) {
        0 => Err(Error::UndefinedRate(inv.label(target).to_string())),
        total => Ok(total),
    }
}

/// Share of the target's occurrences observed as the target itself.
pub fn recognition_rate(matrix: &ConfusionMatrix, target: Phoneme) -> Result<Rate> {
    let total = checked_row(matrix, target)?;
    Ok(Rate::new(matrix.get(target, target), total))
}

/// The most frequent off-diagonal column of the target's row, with its
/// substitution rate. Epsilon (deletion) is only considered when
/// `include_deletion` is set; ties go to the lowest inventory index.
pub fn most_common_substitute(
    matrix: &ConfusionMatrix,
    target: Phoneme,
    include_deletion: bool,
) -> Result<Option<(Phoneme, Rate)>> {
    let total = checked_row(matrix, target)?;
    let eps = matrix.inventory().epsilon();
    let mut best: Option<(Phoneme, u64)> = None;
    for (i, &count) in matrix.row(target).iter().enumerate() {
        let p = Phoneme::new(i);
        if p == target || (p == eps && !include_deletion) || count == 0 {
            continue;
        }
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((p, count));
        }
    }
    Ok(best.map(|(p, c)| (p, Rate::new(c, total))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitute {
    /// Observed symbol; epsilon for deletions.
    pub observed: Phoneme,
    pub count: u64,
    pub rate: Rate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeStats {
    pub target: Phoneme,
    pub occurrences: u64,
    pub recognition_rate: Rate,
    /// Every non-zero off-diagonal cell, deletions included, by count
    /// descending then inventory index.
    pub substitutes: Vec<Substitute>,
}

pub fn phoneme_stats(matrix: &ConfusionMatrix, target: Phoneme) -> Result<PhonemeStats> {
    let occurrences = checked_row(matrix, target)?;
    let mut substitutes: Vec<Substitute> = matrix
        .row(target)
        .iter()
        .enumerate()
        .filter(|&(i, &c)| i != target.index() && c > 0)
        .map(|(i, &count)| Substitute {
            observed: Phoneme::new(i),
            count,
            rate: Rate::new(count, occurrences),
        })
        .collect();
    substitutes.sort_by(|a, b| b.count.cmp(&a.count).then(a.observed.cmp(&b.observed)));
    Ok(PhonemeStats {
        target,
        occurrences,
        recognition_rate: Rate::new(matrix.get(target, target), occurrences),
        substitutes,
    })
}

/// Non-zero epsilon-row cells by count descending, ties by inventory index.
pub fn insertion_stats(matrix: &ConfusionMatrix) -> Vec<(Phoneme, u64)> {
    let mut out: Vec<(Phoneme, u64)> = matrix
        .row(matrix.inventory().epsilon())
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(i, &c)| (Phoneme::new(i), c))
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    out
}

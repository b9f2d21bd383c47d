//! Weighted edit-distance alignment of expected against observed phonemes.
//!
//! The dynamic program is the Wagner-Fischer recurrence with per-pair costs:
//! every cell takes the minimum of a deletion (expected symbol against
//! epsilon), an insertion (epsilon against observed symbol) and a diagonal
//! move (match or substitution). Costs are compared exactly; two moves tie
//! only when their path sums are bitwise equal, and ties are settled by an
//! explicit [`TieBreak`] order during backtrace.

mod costs;
mod lattice;
pub mod oracle;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use costs::CostMatrix;
pub use lattice::{align_min_variant, LatticeAlignment, DEFAULT_VARIANT_CAP};

use crate::inventory::{Phoneme, PhonemeInventory};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Match,
    Substitute,
    Delete,
    Insert,
}

impl OpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::Match => "match",
            OpKind::Substitute => "substitute",
            OpKind::Delete => "delete",
            OpKind::Insert => "insert",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OpKind {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "match" => Ok(OpKind::Match),
            "substitute" => Ok(OpKind::Substitute),
            "delete" => Ok(OpKind::Delete),
            "insert" => Ok(OpKind::Insert),
            _ => Err(()),
        }
    }
}

/// One step of an edit script. `None` stands for epsilon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EditOp {
    pub kind: OpKind,
    pub expected: Option<Phoneme>,
    pub observed: Option<Phoneme>,
    pub cost: f64,
}

impl EditOp {
    /// Diagonal step: a match when both symbols agree, a substitution otherwise.
    pub fn diagonal(expected: Phoneme, observed: Phoneme, cost: f64) -> Self {
        let kind = if expected == observed {
            OpKind::Match
        } else {
            OpKind::Substitute
        };
        EditOp {
            kind,
            expected: Some(expected),
            observed: Some(observed),
            cost,
        }
    }

    pub fn delete(expected: Phoneme, cost: f64) -> Self {
        EditOp {
            kind: OpKind::Delete,
            expected: Some(expected),
            observed: None,
            cost,
        }
    }

    pub fn insert(observed: Phoneme, cost: f64) -> Self {
        EditOp {
            kind: OpKind::Insert,
            expected: None,
            observed: Some(observed),
            cost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Alignment {
    pub ops: Vec<EditOp>,
    pub total_cost: f64,
}

impl Alignment {
    pub fn expected_sequence(&self) -> Vec<Phoneme> {
        self.ops.iter().filter_map(|op| op.expected).collect()
    }

    pub fn observed_sequence(&self) -> Vec<Phoneme> {
        self.ops.iter().filter_map(|op| op.observed).collect()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// A backtrace step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// Match or substitution.
    Diagonal,
    Delete,
    Insert,
}

/// Preference order among backtrace moves that reach a cell at equal cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TieBreak([Move; 3]);

impl TieBreak {
    /// `order` must be a permutation of the three moves.
    pub fn new(order: [Move; 3]) -> Option<Self> {
        let distinct = order[0] != order[1] && order[1] != order[2] && order[0] != order[2];
        distinct.then_some(TieBreak(order))
    }

    pub fn order(&self) -> [Move; 3] {
        self.0
    }
}

impl Default for TieBreak {
    fn default() -> Self {
        TieBreak([Move::Diagonal, Move::Delete, Move::Insert])
    }
}

impl FromStr for TieBreak {
    type Err = alloc::string::String;

    /// Parses a comma-separated order such as `diag,del,ins`.
    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let moves: Vec<Move> = s
            .split(',')
            .map(|t| match t.trim() {
                "diag" | "diagonal" | "sub" | "substitute" => Ok(Move::Diagonal),
                "del" | "delete" => Ok(Move::Delete),
                "ins" | "insert" => Ok(Move::Insert),
                other => Err(alloc::format!("unknown move `{other}`")),
            })
            .collect::<core::result::Result<_, _>>()?;
        let order: [Move; 3] = moves
            .try_into()
            .map_err(|_| alloc::string::String::from("tie-break needs exactly three moves"))?;
        TieBreak::new(order).ok_or_else(|| "tie-break moves must be distinct".into())
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(match m {
                Move::Diagonal => "diag",
                Move::Delete => "del",
                Move::Insert => "ins",
            })?;
        }
        Ok(())
    }
}

pub(crate) fn check_sequence(inventory: &PhonemeInventory, seq: &[Phoneme]) -> Result<()> {
    seq.iter().try_for_each(|&p| inventory.check_phoneme(p))
}

/// Minimum-cost alignment of `expected` against `observed`.
pub fn align(
    expected: &[Phoneme],
    observed: &[Phoneme],
    costs: &CostMatrix,
    tie_break: TieBreak,
) -> Result<Alignment> {
    let inv = costs.inventory();
    check_sequence(inv, expected)?;
    check_sequence(inv, observed)?;
    let eps = inv.epsilon();
    let (n, m) = (expected.len(), observed.len());
    let width = m + 1;
    let mut table = vec![0.0f64; (n + 1) * width];

    for j in 1..=m {
        table[j] = table[j - 1] + costs.cost(eps, observed[j - 1]);
    }
    for i in 1..=n {
        let a = expected[i - 1];
        let row = i * width;
        let prev = row - width;
        table[row] = table[prev] + costs.cost(a, eps);
        for j in 1..=m {
            let b = observed[j - 1];
            let del = table[prev + j] + costs.cost(a, eps);
            let ins = table[row + j - 1] + costs.cost(eps, b);
            let diag = table[prev + j - 1] + costs.cost(a, b);
            table[row + j] = diag.min(del).min(ins);
        }
    }

    let mut ops = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = table[i * width + j];
        let step = tie_break
            .order()
            .into_iter()
            .find_map(|mv| match mv {
                Move::Diagonal if i > 0 && j > 0 => {
                    let (a, b) = (expected[i - 1], observed[j - 1]);
                    let c = costs.cost(a, b);
                    (table[(i - 1) * width + j - 1] + c == here).then(|| EditOp::diagonal(a, b, c))
                }
                Move::Delete if i > 0 => {
                    let a = expected[i - 1];
                    let c = costs.cost(a, eps);
                    (table[(i - 1) * width + j] + c == here).then(|| EditOp::delete(a, c))
                }
                Move::Insert if j > 0 => {
                    let b = observed[j - 1];
                    let c = costs.cost(eps, b);
                    (table[i * width + j - 1] + c == here).then(|| EditOp::insert(b, c))
                }
                _ => None,
            })
            .expect("every reachable cell has an optimal predecessor");
        if step.expected.is_some() {
            i -= 1;
        }
        if step.observed.is_some() {
            j -= 1;
        }
        ops.push(step);
    }
    ops.reverse();

    let total_cost = ops.iter().fold(0.0, |acc, op| acc + op.cost);
    debug_assert_eq!(total_cost.to_bits(), table[n * width + m].to_bits());
    Ok(Alignment { ops, total_cost })
}

use alloc::vec;
use alloc::vec::Vec;

use super::{align, Alignment, CostMatrix, TieBreak};
use crate::inventory::Phoneme;
use crate::lexicon::PronunciationVariant;
use crate::{Error, Result};

/// Default cap on the number of variant combinations tried per utterance.
pub const DEFAULT_VARIANT_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeAlignment {
    pub alignment: Alignment,
    /// Chosen variant index for every word.
    pub choice: Vec<usize>,
}

/// Aligns every full concatenation of per-word variants against `observed`
/// and keeps the cheapest. Equal totals keep the combination enumerated
/// first, where the last word's variant index changes fastest.
pub fn align_min_variant(
    lattice: &[Vec<PronunciationVariant>],
    observed: &[Phoneme],
    costs: &CostMatrix,
    tie_break: TieBreak,
    cap: u64,
) -> Result<LatticeAlignment> {
    let mut combinations: u128 = 1;
    for (i, alts) in lattice.iter().enumerate() {
        if alts.is_empty() {
            return Err(Error::EmptyLattice(i));
        }
        combinations = combinations.saturating_mul(alts.len() as u128);
    }
    if combinations > cap as u128 {
        return Err(Error::TooManyVariantCombinations { combinations, cap });
    }

    let mut choice = vec![0usize; lattice.len()];
    let mut best: Option<LatticeAlignment> = None;
    loop {
        let expected: Vec<Phoneme> = lattice
            .iter()
            .zip(&choice)
            .flat_map(|(alts, &c)| alts[c].phonemes().iter().copied())
            .collect();
        let alignment = align(&expected, observed, costs, tie_break)?;
        if best
            .as_ref()
            .is_none_or(|b| alignment.total_cost < b.alignment.total_cost)
        {
            best = Some(LatticeAlignment {
                alignment,
                choice: choice.clone(),
            });
        }
        // odometer step
        let mut pos = lattice.len();
        loop {
            if pos == 0 {
                return Ok(best.expect("at least one combination"));
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < lattice[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

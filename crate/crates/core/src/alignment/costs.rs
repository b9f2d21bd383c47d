use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::inventory::{Phoneme, PhonemeInventory};
use crate::{Error, Result};

/// Edit weights indexed by (expected, observed) over the full inventory.
///
/// Row epsilon holds insertion costs, column epsilon deletion costs. The
/// (epsilon, epsilon) cell is never used and is always stored as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    inventory: Arc<PhonemeInventory>,
    costs: Vec<f64>,
}

impl CostMatrix {
    /// Builds and validates a matrix from a row-major grid.
    pub fn from_grid(inventory: Arc<PhonemeInventory>, mut costs: Vec<f64>) -> Result<Self> {
        let n = inventory.len();
        assert_eq!(costs.len(), n * n, "cost grid must be {n}x{n}");
        let eps = inventory.epsilon().index();
        costs[eps * n + eps] = 0.0;
        for e in 0..n {
            for o in 0..n {
                let value = costs[e * n + o];
                let reason = if !value.is_finite() {
                    Some("not finite")
                } else if value < 0.0 {
                    Some("negative")
                } else if e == o && value != 0.0 {
                    Some("diagonal must be zero")
                } else {
                    None
                };
                if let Some(reason) = reason {
                    return Err(Error::InvalidCost {
                        expected: inventory.symbols()[e].to_string(),
                        observed: inventory.symbols()[o].to_string(),
                        value,
                        reason,
                    });
                }
            }
        }
        Ok(CostMatrix { inventory, costs })
    }

    pub fn from_fn(
        inventory: Arc<PhonemeInventory>,
        mut f: impl FnMut(Phoneme, Phoneme) -> f64,
    ) -> Result<Self> {
        let n = inventory.len();
        let mut costs = Vec::with_capacity(n * n);
        for e in 0..n {
            for o in 0..n {
                costs.push(f(Phoneme::new(e), Phoneme::new(o)));
            }
        }
        Self::from_grid(inventory, costs)
    }

    /// Levenshtein weights: every edit costs 1.
    pub fn uniform(inventory: Arc<PhonemeInventory>) -> Self {
        Self::from_fn(inventory, |e, o| if e == o { 0.0 } else { 1.0 })
            .expect("uniform matrix is valid")
    }

    pub fn inventory(&self) -> &Arc<PhonemeInventory> {
        &self.inventory
    }

    #[inline]
    pub fn cost(&self, expected: Phoneme, observed: Phoneme) -> f64 {
        self.costs[expected.index() * self.inventory.len() + observed.index()]
    }

    /// Row-major weights.
    pub fn as_slice(&self) -> &[f64] {
        &self.costs
    }

    /// Swaps the roles of expected and observed.
    pub fn transpose(&self) -> Self {
        let n = self.inventory.len();
        let mut costs = alloc::vec![0.0; n * n];
        for e in 0..n {
            for o in 0..n {
                costs[o * n + e] = self.costs[e * n + o];
            }
        }
        CostMatrix {
            inventory: self.inventory.clone(),
            costs,
        }
    }

    /// `cost(x, z) <= cost(x, y) + cost(y, z)` for every symbol triple,
    /// epsilon included.
    pub fn satisfies_triangle(&self) -> bool {
        let n = self.inventory.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    self.costs[x * n + z] <= self.costs[x * n + y] + self.costs[y * n + z]
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_matrix() {
        let inv = Arc::new(PhonemeInventory::arpabet());
        let u = CostMatrix::uniform(inv.clone());
        let eps = inv.epsilon();
        let aa = inv.lookup("AA").unwrap();
        assert_eq!(u.cost(aa, aa), 0.0);
        assert_eq!(u.cost(aa, eps), 1.0);
        assert_eq!(u.cost(eps, eps), 0.0);
        assert!(u.satisfies_triangle());
    }

    #[test]
    fn rejects_negative_and_nonzero_diagonal() {
        let inv = Arc::new(PhonemeInventory::arpabet());
        let err = CostMatrix::from_fn(inv.clone(), |e, o| if e == o { 0.0 } else { -1.0 })
            .unwrap_err();
        assert!(matches!(err, Error::InvalidCost { reason: "negative", .. }));
        let err = CostMatrix::from_fn(inv.clone(), |_, _| 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidCost { reason: "diagonal must be zero", .. }));
    }

    #[test]
    fn epsilon_corner_forced_to_zero() {
        let inv = Arc::new(PhonemeInventory::arpabet());
        let eps = inv.epsilon();
        let m = CostMatrix::from_fn(inv.clone(), |e, o| if e == o && e != eps { 0.0 } else { 2.0 })
            .unwrap();
        assert_eq!(m.cost(eps, eps), 0.0);
    }

    #[test]
    fn asymmetric_deletion_costs_and_transpose() {
        let inv = Arc::new(PhonemeInventory::arpabet());
        let hh = inv.lookup("HH").unwrap();
        let ih = inv.lookup("IH").unwrap();
        let eps = inv.epsilon();
        let m = CostMatrix::from_fn(inv.clone(), |e, o| match (e, o) {
            _ if e == o => 0.0,
            (x, y) if x == hh && y == eps => 0.2,
            (x, y) if x == ih && y == eps => 0.9,
            _ => 1.0,
        })
        .unwrap();
        assert_eq!(m.cost(hh, eps), 0.2);
        assert_eq!(m.cost(eps, hh), 1.0);
        let t = m.transpose();
        assert_eq!(t.cost(eps, hh), 0.2);
        assert_eq!(t.transpose(), m);
    }
}

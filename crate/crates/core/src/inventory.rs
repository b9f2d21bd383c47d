//! The closed phoneme symbol set that indexes every matrix and vector.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Spelling of the empty symbol in every text format.
pub const EPSILON_LABEL: &str = "<eps>";

/// Number of symbols in an inventory, epsilon included.
pub const INVENTORY_SIZE: usize = 40;

/// The 39 stress-free ARPAbet phonemes, in the built-in index order.
pub const ARPABET: [&str; 39] = [
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH", "EH", "ER", "EY", "F", "G", "HH",
    "IH", "IY", "JH", "K", "L", "M", "N", "NG", "OW", "OY", "P", "R", "S", "SH", "T", "TH", "UH",
    "UW", "V", "W", "Y", "Z", "ZH",
];

/// Index of a symbol within a [`PhonemeInventory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phoneme(u8);

impl Phoneme {
    /// Wraps a raw index. Range checks happen where the index meets an inventory.
    pub const fn new(index: usize) -> Self {
        assert!(index < INVENTORY_SIZE);
        Phoneme(index as u8)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeInventory {
    symbols: Vec<String>,
    epsilon: Phoneme,
    by_label: BTreeMap<String, Phoneme>,
}

impl PhonemeInventory {
    /// Built-in inventory: [`ARPABET`] in order, then epsilon at index 39.
    pub fn arpabet() -> Self {
        Self::from_symbols(ARPABET.iter().copied().chain([EPSILON_LABEL]))
            .expect("built-in inventory is valid")
    }

    /// Builds an inventory from an ordered symbol list, which must hold exactly
    /// [`INVENTORY_SIZE`] unique labels, one of them [`EPSILON_LABEL`].
    pub fn from_symbols<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(|s| s.as_ref().to_string()).collect();
        if symbols.len() != INVENTORY_SIZE {
            return Err(Error::InvalidInventory(format!(
                "expected {INVENTORY_SIZE} symbols, found {}",
                symbols.len()
            )));
        }
        let mut by_label = BTreeMap::new();
        let mut epsilon = None;
        for (i, label) in symbols.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::InvalidInventory(format!("bad symbol `{label}`")));
            }
            if by_label.insert(label.clone(), Phoneme(i as u8)).is_some() {
                return Err(Error::InvalidInventory(format!("duplicate symbol `{label}`")));
            }
            if label == EPSILON_LABEL {
                epsilon = Some(Phoneme(i as u8));
            }
        }
        let epsilon = epsilon.ok_or_else(|| {
            Error::InvalidInventory(format!("missing epsilon symbol `{EPSILON_LABEL}`"))
        })?;
        Ok(PhonemeInventory {
            symbols,
            epsilon,
            by_label,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn epsilon(&self) -> Phoneme {
        self.epsilon
    }

    pub fn is_epsilon(&self, p: Phoneme) -> bool {
        p == self.epsilon
    }

    pub fn label(&self, p: Phoneme) -> &str {
        &self.symbols[p.index()]
    }

    pub fn lookup(&self, label: &str) -> Option<Phoneme> {
        self.by_label.get(label).copied()
    }

    /// Like [`lookup`](Self::lookup) but an unknown label is an error.
    pub fn phoneme(&self, label: &str) -> Result<Phoneme> {
        self.lookup(label)
            .ok_or_else(|| Error::UnknownPhoneme(label.to_string()))
    }

    /// Maps a raw dictionary label such as `AH0` onto its stress-free
    /// inventory symbol (`AH`). Labels without a stress digit pass through.
    pub fn strip_stress(&self, label: &str) -> Result<Phoneme> {
        let bare = strip_stress_digit(label);
        match self.lookup(bare) {
            Some(p) if p != self.epsilon => Ok(p),
            _ => Err(Error::UnknownPhoneme(label.to_string())),
        }
    }

    /// All non-epsilon symbols in index order.
    pub fn phonemes(&self) -> impl Iterator<Item = Phoneme> + '_ {
        (0..self.len())
            .map(|i| Phoneme(i as u8))
            .filter(move |&p| p != self.epsilon)
    }

    /// Checks that `p` belongs to this inventory and is not epsilon.
    pub fn check_phoneme(&self, p: Phoneme) -> Result<()> {
        if p.index() >= self.len() {
            Err(Error::IndexOutOfRange(p.index()))
        } else if p == self.epsilon {
            Err(Error::EpsilonInSequence)
        } else {
            Ok(())
        }
    }

    /// Renders a sequence as space-separated labels.
    pub fn render(&self, seq: &[Phoneme]) -> String {
        let mut out = String::new();
        for (i, &p) in seq.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(self.label(p));
        }
        out
    }

    /// Parses space-separated labels (no stress digits, no epsilon).
    pub fn parse_sequence(&self, text: &str) -> Result<Vec<Phoneme>> {
        text.split_whitespace()
            .map(|label| {
                let p = self.phoneme(label)?;
                self.check_phoneme(p)?;
                Ok(p)
            })
            .collect()
    }
}

impl Default for PhonemeInventory {
    fn default() -> Self {
        Self::arpabet()
    }
}

impl fmt::Display for PhonemeInventory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbols.join(" "))
    }
}

/// Removes one trailing stress digit (0, 1 or 2).
pub fn strip_stress_digit(label: &str) -> &str {
    label
        .strip_suffix(['0', '1', '2'])
        .unwrap_or(label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_forty_unique_symbols() {
        let inv = PhonemeInventory::arpabet();
        assert_eq!(inv.len(), 40);
        assert_eq!(inv.label(inv.epsilon()), EPSILON_LABEL);
        assert_eq!(inv.epsilon().index(), 39);
        assert_eq!(inv.phonemes().count(), 39);
    }

    #[test]
    fn strip_stress_examples() {
        let inv = PhonemeInventory::arpabet();
        assert_eq!(inv.label(inv.strip_stress("AH0").unwrap()), "AH");
        assert_eq!(inv.label(inv.strip_stress("Z").unwrap()), "Z");
        assert_eq!(inv.label(inv.strip_stress("AY2").unwrap()), "AY");
        assert!(matches!(inv.strip_stress("QQ1"), Err(Error::UnknownPhoneme(l)) if l == "QQ1"));
        assert!(inv.strip_stress(EPSILON_LABEL).is_err());
    }

    #[test]
    fn rejects_bad_symbol_sets() {
        let mut syms: Vec<&str> = ARPABET.to_vec();
        assert!(PhonemeInventory::from_symbols(&syms).is_err());
        syms.push("AA");
        assert!(matches!(
            PhonemeInventory::from_symbols(&syms),
            Err(Error::InvalidInventory(m)) if m.contains("duplicate")
        ));
        syms.pop();
        syms.push("XX");
        assert!(matches!(
            PhonemeInventory::from_symbols(&syms),
            Err(Error::InvalidInventory(m)) if m.contains("epsilon")
        ));
    }

    #[test]
    fn custom_order_is_kept() {
        let mut syms: Vec<&str> = ARPABET.to_vec();
        syms.reverse();
        syms.insert(0, EPSILON_LABEL);
        let inv = PhonemeInventory::from_symbols(&syms).unwrap();
        assert_eq!(inv.epsilon().index(), 0);
        assert_eq!(inv.lookup("ZH").unwrap().index(), 1);
    }
}

//! Word to phoneme conversion through a pronouncing dictionary.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::inventory::{Phoneme, PhonemeInventory};
use crate::{Error, Result};

/// One pronunciation of a word: a non-empty, epsilon-free phoneme sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PronunciationVariant(Vec<Phoneme>);

impl PronunciationVariant {
    pub fn new(phonemes: Vec<Phoneme>, inventory: &PhonemeInventory) -> Result<Self> {
        if phonemes.is_empty() {
            return Err(Error::InvalidVariant);
        }
        for &p in &phonemes {
            inventory.check_phoneme(p).map_err(|_| Error::InvalidVariant)?;
        }
        Ok(PronunciationVariant(phonemes))
    }

    pub fn phonemes(&self) -> &[Phoneme] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Normalized headword -> pronunciation variants in source order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<PronunciationVariant>>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a variant for `word`. The word is normalized first; a word that
    /// normalizes to nothing is rejected as [`Error::InvalidVariant`].
    pub fn insert(&mut self, word: &str, variant: PronunciationVariant) -> Result<()> {
        let key = normalize_word(word).ok_or(Error::InvalidVariant)?;
        self.entries.entry(key).or_default().push(variant);
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<&[PronunciationVariant]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// Number of headwords.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[PronunciationVariant])> {
        self.entries
            .iter()
            .map(|(w, v)| (w.as_str(), v.as_slice()))
    }
}

/// Uppercases and trims leading/trailing punctuation, keeping internal
/// apostrophes. Returns `None` when nothing is left.
pub fn normalize_word(raw: &str) -> Option<String> {
    let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        None
    } else {
        Some(trimmed.to_uppercase())
    }
}

/// Splits a prompt or transcript into normalized word tokens. Punctuation other
/// than apostrophes separates words.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || !(c.is_alphanumeric() || c == '\''))
        .filter_map(normalize_word)
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub enum OovPolicy<'a> {
    /// Any miss fails the utterance with the full list of missing words.
    #[default]
    Fail,
    /// Misses flag the utterance so downstream stages exclude it.
    SkipUtterance,
    /// Misses are looked up in a second lexicon; words missing from both fail.
    Supplementary(&'a Lexicon),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VariantRule {
    /// Use variant 0 of every word.
    #[default]
    First,
    /// Keep every variant; the aligner picks the cheapest combination.
    All,
}

/// Result of [`phonemize`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Phonemized {
    /// Per-word alternatives. Under [`VariantRule::First`] each has exactly one.
    pub lattice: Vec<Vec<PronunciationVariant>>,
    /// Every token missing from the lexicon (including supplementary hits).
    pub oov: Vec<String>,
    /// Set under [`OovPolicy::SkipUtterance`] when `oov` is non-empty; the
    /// lattice is then empty.
    pub skipped: bool,
}

impl Phonemized {
    /// Concatenation of the first variant of every word.
    pub fn sequence(&self) -> Vec<Phoneme> {
        self.lattice
            .iter()
            .flat_map(|alts| alts[0].phonemes().iter().copied())
            .collect()
    }
}

/// Converts normalized tokens into phonemes.
pub fn phonemize<S: AsRef<str>>(
    tokens: &[S],
    lexicon: &Lexicon,
    policy: OovPolicy<'_>,
    rule: VariantRule,
) -> Result<Phonemized> {
    let mut out = Phonemized::default();
    let mut unresolved = Vec::new();
    for token in tokens {
        let word = token.as_ref();
        let variants = match lexicon.get(word) {
            Some(v) => Some(v),
            None => {
                out.oov.push(word.to_string());
                match policy {
                    OovPolicy::Supplementary(extra) => extra.get(word),
                    _ => None,
                }
            }
        };
        match variants {
            Some(v) => out.lattice.push(match rule {
                VariantRule::First => alloc::vec![v[0].clone()],
                VariantRule::All => v.to_vec(),
            }),
            None => unresolved.push(word.to_string()),
        }
    }
    if unresolved.is_empty() {
        return Ok(out);
    }
    match policy {
        OovPolicy::SkipUtterance => {
            out.lattice.clear();
            out.skipped = true;
            Ok(out)
        }
        OovPolicy::Fail | OovPolicy::Supplementary(_) => Err(Error::OutOfVocabulary(unresolved)),
    }
}

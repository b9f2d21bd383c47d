//! CMU-style pronouncing dictionary text.
//!
//! ```text
//! ;;; comment
//! READ  R IY1 D
//! READ(1)  R EH1 D
//! ```

use phonvar_core::inventory::PhonemeInventory;
use phonvar_core::lexicon::{Lexicon, PronunciationVariant};

use crate::error::{Error, Result};

/// Parses dictionary text. Stress digits are stripped; variants of a word are
/// kept in file order.
pub fn parse_lexicon(text: &str, inventory: &PhonemeInventory) -> Result<Lexicon> {
    let mut lexicon = Lexicon::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with(";;;") {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let head = fields.next().expect("line is not blank");
        let word = headword(head).map_err(|m| Error::parse(line, m))?;
        let phonemes = fields
            .map(|label| {
                inventory
                    .strip_stress(label)
                    .map_err(|_| Error::parse(line, format!("unknown phoneme `{label}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if phonemes.is_empty() {
            return Err(Error::parse(line, format!("`{head}` has no pronunciation")));
        }
        let variant = PronunciationVariant::new(phonemes, inventory)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        lexicon
            .insert(word, variant)
            .map_err(|_| Error::parse(line, format!("headword `{head}` is empty after normalization")))?;
    }
    Ok(lexicon)
}

/// Splits off a `(n)` variant suffix, returning the bare headword.
fn headword(head: &str) -> std::result::Result<&str, String> {
    let Some(open) = head.find('(') else {
        return Ok(head);
    };
    let malformed = || format!("malformed variant index in `{head}`");
    let digits = head[open + 1..].strip_suffix(')').ok_or_else(malformed)?;
    if open == 0 || digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    Ok(&head[..open])
}

/// Writes variant 0 as `WORD` and variant k as `WORD(k)`, headwords sorted.
pub fn write_lexicon(lexicon: &Lexicon, inventory: &PhonemeInventory) -> String {
    let mut out = String::new();
    for (word, variants) in lexicon.iter() {
        for (k, v) in variants.iter().enumerate() {
            out.push_str(word);
            if k > 0 {
                out.push_str(&format!("({k})"));
            }
            out.push_str("  ");
            out.push_str(&inventory.render(v.phonemes()));
            out.push('\n');
        }
    }
    out
}

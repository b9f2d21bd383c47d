//! Praat TextGrid text files, long and short forms.
//!
//! Both forms carry the same sequence of values; the long form merely adds
//! `name = ` decorations. The tokenizer keeps strings, numbers and the
//! `<exists>`/`<absent>` flag and drops everything else, so one reader covers
//! both.

use phonvar_core::annotations::{AnnotationKind, AnnotationRecord, AnnotationSet};
use phonvar_core::inventory::{Phoneme, PhonemeInventory};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TextGrid {
    pub xmin: f64,
    pub xmax: f64,
    pub tiers: Vec<Tier>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tier {
    pub name: String,
    pub xmin: f64,
    pub xmax: f64,
    pub items: TierItems,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TierItems {
    Intervals(Vec<Interval>),
    Points(Vec<Point>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub xmin: f64,
    pub xmax: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub time: f64,
    pub mark: String,
}

impl TextGrid {
    pub fn parse(text: &str) -> Result<TextGrid> {
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        let mut p = Reader {
            tokens: tokenize(text)?,
            pos: 0,
            len: text.len(),
        };
        let file_type = p.string()?;
        if file_type != "ooTextFile" {
            return Err(p.error_back(format!("expected file type \"ooTextFile\", found {file_type:?}")));
        }
        let class = p.string()?;
        if class != "TextGrid" {
            return Err(p.error_back(format!("expected object class \"TextGrid\", found {class:?}")));
        }
        let xmin = p.number()?;
        let xmax = p.number()?;
        let tiers = if p.flag()? {
            let n = p.count()?;
            (0..n).map(|_| p.tier()).collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        if let Some(t) = p.tokens.get(p.pos) {
            return Err(Error::Structure {
                offset: t.offset,
                message: "unexpected content after the last tier".into(),
            });
        }
        Ok(TextGrid { xmin, xmax, tiers })
    }

    pub fn tier(&self, name: &str) -> Result<&Tier> {
        self.tiers.iter().find(|t| t.name == name).ok_or_else(|| Error::MissingTier {
            name: name.to_string(),
            available: self.tiers.iter().map(|t| t.name.clone()).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Str(String),
    Num(f64),
    Flag(bool),
}

#[derive(Debug)]
struct Token {
    offset: usize,
    value: Value,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let err = |offset, message: &str| Error::Structure {
        offset,
        message: message.to_string(),
    };
    while i < bytes.len() {
        let start = i;
        match bytes[i] {
            b if b.is_ascii_whitespace() || matches!(b, b'=' | b':' | b'?') => i += 1,
            b'!' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'[' => {
                while i < bytes.len() && bytes[i] != b']' {
                    i += 1;
                }
                if i == bytes.len() {
                    return Err(err(start, "unterminated `[`"));
                }
                i += 1;
            }
            b'"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    let Some(rel) = text[i..].find('"') else {
                        return Err(err(start, "unterminated string"));
                    };
                    s.push_str(&text[i..i + rel]);
                    i += rel + 1;
                    if bytes.get(i) == Some(&b'"') {
                        s.push('"');
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token { offset: start, value: Value::Str(s) });
            }
            b'<' => {
                let Some(rel) = text[i..].find('>') else {
                    return Err(err(start, "unterminated `<`"));
                };
                let flag = match &text[i..i + rel + 1] {
                    "<exists>" => true,
                    "<absent>" => false,
                    _ => return Err(err(start, "expected <exists> or <absent>")),
                };
                i += rel + 1;
                tokens.push(Token { offset: start, value: Value::Flag(flag) });
            }
            b'0'..=b'9' | b'-' | b'+' | b'.' => {
                while i < bytes.len() && matches!(bytes[i], b'0'..=b'9' | b'-' | b'+' | b'.' | b'e' | b'E') {
                    i += 1;
                }
                let n = text[start..i]
                    .parse::<f64>()
                    .map_err(|_| err(start, &format!("bad number `{}`", &text[start..i])))?;
                tokens.push(Token { offset: start, value: Value::Num(n) });
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(err(start, &format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(tokens)
}

struct Reader {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Reader {
    fn next(&mut self, what: &str) -> Result<&Token> {
        let len = self.len;
        let t = self.tokens.get(self.pos).ok_or_else(|| Error::Structure {
            offset: len,
            message: format!("unexpected end of file, expected {what}"),
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn error_back(&self, message: String) -> Error {
        Error::Structure {
            offset: self.tokens[self.pos - 1].offset,
            message,
        }
    }

    fn string(&mut self) -> Result<String> {
        let t = self.next("a string")?;
        match &t.value {
            Value::Str(s) => Ok(s.clone()),
            other => Err(mismatch(t.offset, "a string", other)),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let t = self.next("a number")?;
        match t.value {
            Value::Num(n) => Ok(n),
            ref other => Err(mismatch(t.offset, "a number", other)),
        }
    }

    fn flag(&mut self) -> Result<bool> {
        let t = self.next("<exists>")?;
        match t.value {
            Value::Flag(f) => Ok(f),
            ref other => Err(mismatch(t.offset, "<exists>", other)),
        }
    }

    fn count(&mut self) -> Result<usize> {
        let n = self.number()?;
        if n < 0.0 || n.fract() != 0.0 {
            return Err(self.error_back(format!("bad count {n}")));
        }
        Ok(n as usize)
    }

    fn tier(&mut self) -> Result<Tier> {
        let class = self.string()?;
        let class_offset = self.tokens[self.pos - 1].offset;
        let name = self.string()?;
        let xmin = self.number()?;
        let xmax = self.number()?;
        let n = self.count()?;
        let items = match class.as_str() {
            "IntervalTier" => TierItems::Intervals(
                (0..n)
                    .map(|_| {
                        Ok(Interval {
                            xmin: self.number()?,
                            xmax: self.number()?,
                            text: self.string()?,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            "TextTier" => TierItems::Points(
                (0..n)
                    .map(|_| {
                        Ok(Point {
                            time: self.number()?,
                            mark: self.string()?,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            other => {
                return Err(Error::Structure {
                    offset: class_offset,
                    message: format!("unknown tier class {other:?}"),
                })
            }
        };
        Ok(Tier { name, xmin, xmax, items })
    }
}

fn mismatch(offset: usize, expected: &str, found: &Value) -> Error {
    let found = match found {
        Value::Str(s) => format!("string {s:?}"),
        Value::Num(n) => format!("number {n}"),
        Value::Flag(true) => "<exists>".into(),
        Value::Flag(false) => "<absent>".into(),
    };
    Error::Structure {
        offset,
        message: format!("expected {expected}, found {found}"),
    }
}

/// How interval labels encode annotator judgements.
///
/// A bare label (`T`) is a correct realization. A coded label
/// (`T,D,s`) is target, observed and kind code joined by `separator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelConvention {
    pub separator: char,
    pub substitution: String,
    pub deletion: String,
    pub insertion: String,
    /// Spellings of epsilon inside coded labels.
    pub epsilon: Vec<String>,
    /// Labels that carry no judgement (silence, empty intervals).
    pub blank: Vec<String>,
}

impl Default for LabelConvention {
    fn default() -> Self {
        LabelConvention {
            separator: ',',
            substitution: "s".into(),
            deletion: "d".into(),
            insertion: "i".into(),
            epsilon: vec!["<eps>".into(), "sil".into()],
            blank: vec!["".into(), "sil".into(), "sp".into(), "spn".into()],
        }
    }
}

/// Interval labels that matched neither the convention nor the blank list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SkipReport {
    /// (interval index, label, reason)
    pub skipped: Vec<(usize, String, String)>,
    pub blank: usize,
}

impl LabelConvention {
    fn is_epsilon(&self, label: &str) -> bool {
        self.epsilon.iter().any(|e| e.eq_ignore_ascii_case(label))
    }

    fn phoneme(&self, label: &str, inventory: &PhonemeInventory) -> std::result::Result<Option<Phoneme>, String> {
        if self.is_epsilon(label) {
            return Ok(None);
        }
        inventory
            .strip_stress(&label.to_ascii_uppercase())
            .map(Some)
            .map_err(|_| format!("unknown phoneme `{label}`"))
    }

    fn decode(
        &self,
        label: &str,
        inventory: &PhonemeInventory,
    ) -> std::result::Result<(Option<Phoneme>, Option<Phoneme>, AnnotationKind), String> {
        let parts: Vec<&str> = label.split(self.separator).map(str::trim).collect();
        match parts.as_slice() {
            [bare] => {
                let p = self.phoneme(bare, inventory)?.ok_or("bare epsilon label")?;
                Ok((Some(p), Some(p), AnnotationKind::Correct))
            }
            [target, observed, code] => {
                let kind = if code.eq_ignore_ascii_case(&self.substitution) {
                    AnnotationKind::Substitution
                } else if code.eq_ignore_ascii_case(&self.deletion) {
                    AnnotationKind::Deletion
                } else if code.eq_ignore_ascii_case(&self.insertion) {
                    AnnotationKind::Insertion
                } else {
                    return Err(format!("unknown kind code `{code}`"));
                };
                Ok((self.phoneme(target, inventory)?, self.phoneme(observed, inventory)?, kind))
            }
            _ => Err(format!("expected 1 or 3 fields, found {}", parts.len())),
        }
    }
}

/// Reads one interval tier into annotation records. Positions are interval
/// indices within the tier. Labels that do not decode are skipped and listed
/// in the report.
pub fn tier_annotations(
    grid: &TextGrid,
    tier_name: &str,
    convention: &LabelConvention,
    speaker_id: &str,
    utterance_id: &str,
    inventory: &PhonemeInventory,
) -> Result<(AnnotationSet, SkipReport)> {
    let tier = grid.tier(tier_name)?;
    let TierItems::Intervals(intervals) = &tier.items else {
        return Err(Error::Invalid(format!("tier `{tier_name}` is a point tier, not an interval tier")));
    };
    let mut set = AnnotationSet::new(speaker_id);
    let mut report = SkipReport::default();
    for (i, interval) in intervals.iter().enumerate() {
        let label = interval.text.trim();
        if convention.blank.iter().any(|b| b.eq_ignore_ascii_case(label)) {
            report.blank += 1;
            continue;
        }
        let record = convention.decode(label, inventory).and_then(|(t, o, k)| {
            AnnotationRecord::new(utterance_id, i as u64, t, o, k, inventory).map_err(|e| e.to_string())
        });
        match record {
            Ok(r) => set.push(r)?,
            Err(reason) => report.skipped.push((i, label.to_string(), reason)),
        }
    }
    Ok((set, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LONG: &str = r#"File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0 
xmax = 1.5 
tiers? <exists> 
size = 2 
item []: 
    item [1]:
        class = "IntervalTier" 
        name = "words" 
        xmin = 0 
        xmax = 1.5 
        intervals: size = 1 
        intervals [1]:
            xmin = 0 
            xmax = 1.5 
            text = "say ""this""" 
    item [2]:
        class = "IntervalTier" 
        name = "phones" 
        xmin = 0 
        xmax = 1.5 
        intervals: size = 4 
        intervals [1]:
            xmin = 0 
            xmax = 0.5 
            text = "T" 
        intervals [2]:
            xmin = 0.5 
            xmax = 1 
            text = "T,D,s" 
        intervals [3]:
            xmin = 1 
            xmax = 1.2 
            text = "" 
        intervals [4]:
            xmin = 1.2 
            xmax = 1.5 
            text = "X,Y,q" 
"#;

    const SHORT: &str = "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n0\n1.5\n<exists>\n2\n\
        \"IntervalTier\"\n\"words\"\n0\n1.5\n1\n0\n1.5\n\"say \"\"this\"\"\"\n\
        \"IntervalTier\"\n\"phones\"\n0\n1.5\n4\n0\n0.5\n\"T\"\n0.5\n1\n\"T,D,s\"\n1\n1.2\n\"\"\n1.2\n1.5\n\"X,Y,q\" ! trailing comment\n";

    #[test]
    fn long_and_short_agree() {
        let long = TextGrid::parse(LONG).unwrap();
        let short = TextGrid::parse(SHORT).unwrap();
        assert_eq!(long, short);
        assert_eq!(long.tiers.len(), 2);
        let TierItems::Intervals(words) = &long.tiers[0].items else { panic!() };
        assert_eq!(words[0].text, "say \"this\"");
    }

    #[test]
    fn decodes_the_phone_tier() {
        let inv = PhonemeInventory::arpabet();
        let grid = TextGrid::parse(LONG).unwrap();
        let (set, report) =
            tier_annotations(&grid, "phones", &LabelConvention::default(), "s", "u", &inv).unwrap();
        let kinds: Vec<_> = set.records().iter().map(|r| r.kind).collect();
        assert_eq!(kinds, [AnnotationKind::Correct, AnnotationKind::Substitution]);
        assert_eq!(set.records()[1].observed, inv.lookup("D"));
        assert_eq!(report.blank, 1);
        assert_eq!(report.skipped.len(), 1);
        assert_eq!(report.skipped[0].0, 3);
    }

    #[test]
    fn missing_tier_lists_available() {
        let grid = TextGrid::parse(LONG).unwrap();
        let err = grid.tier("phonemes").unwrap_err().to_string();
        assert!(err.contains("words, phones"), "{err}");
    }

    #[test]
    fn empty_tier_gives_empty_set() {
        let text = "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n0\n1\n<exists>\n1\n\"IntervalTier\"\n\"phones\"\n0\n1\n0\n";
        let grid = TextGrid::parse(text).unwrap();
        let inv = PhonemeInventory::arpabet();
        let (set, _) =
            tier_annotations(&grid, "phones", &LabelConvention::default(), "s", "u", &inv).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn structure_errors_carry_offsets() {
        let truncated = &SHORT[..SHORT.find("\"T,D,s\"").unwrap()];
        match TextGrid::parse(truncated).unwrap_err() {
            Error::Structure { offset, .. } => assert_eq!(offset, truncated.len()),
            e => panic!("{e}"),
        }
        let bad = SHORT.replacen("\"IntervalTier\"\n\"phones\"", "\"Weird\"\n\"phones\"", 1);
        match TextGrid::parse(&bad).unwrap_err() {
            Error::Structure { offset, message } => {
                assert_eq!(offset, bad.find("\"Weird\"").unwrap());
                assert!(message.contains("Weird"));
            }
            e => panic!("{e}"),
        }
        assert!(TextGrid::parse("File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n0\n1\n<exists>\n1\n\"IntervalTier\" \"p\" 0 1 1 0 1 \"oops").is_err());
    }
}

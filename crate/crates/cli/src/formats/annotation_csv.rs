//! Annotator judgements as CSV.
//!
//! ```text
//! utterance,position,target,observed,kind
//! arctic_a0001,4,T,D,substitution
//! arctic_a0001,5,HH,<eps>,deletion
//! ```

use phonvar_core::annotations::{AnnotationKind, AnnotationRecord, AnnotationSet};
use phonvar_core::inventory::{Phoneme, PhonemeInventory, EPSILON_LABEL};

use crate::error::{Error, Result};

pub const HEADER: [&str; 5] = ["utterance", "position", "target", "observed", "kind"];

pub fn parse_annotation_csv(
    text: &str,
    speaker_id: &str,
    inventory: &PhonemeInventory,
) -> Result<AnnotationSet> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::parse(1, e.to_string()))?;
    if header.iter().ne(HEADER) {
        return Err(Error::parse(1, format!("expected header `{}`", HEADER.join(","))));
    }
    let mut set = AnnotationSet::new(speaker_id);
    for record in reader.records() {
        let record = record.map_err(|e| {
            Error::parse(e.position().map_or(0, |p| p.line() as usize), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let fail = |m: String| Error::parse(line, m);
        let position = record[1]
            .parse::<u64>()
            .map_err(|_| fail(format!("bad position `{}`", &record[1])))?;
        let target = side(&record[2], inventory).map_err(fail)?;
        let observed = side(&record[3], inventory).map_err(fail)?;
        let kind = record[4]
            .parse::<AnnotationKind>()
            .map_err(|()| fail(format!("unknown kind `{}`", &record[4])))?;
        let rec = AnnotationRecord::new(&record[0], position, target, observed, kind, inventory)
            .map_err(|e| fail(e.to_string()))?;
        set.push(rec).map_err(|e| fail(e.to_string()))?;
    }
    Ok(set)
}

fn side(label: &str, inventory: &PhonemeInventory) -> std::result::Result<Option<Phoneme>, String> {
    if label == EPSILON_LABEL {
        return Ok(None);
    }
    inventory
        .strip_stress(label)
        .map(Some)
        .map_err(|_| format!("unknown phoneme `{label}`"))
}

pub fn write_annotation_csv(set: &AnnotationSet, inventory: &PhonemeInventory) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(HEADER).expect("in-memory write");
    let label = |p: Option<Phoneme>| p.map_or(EPSILON_LABEL, |p| inventory.label(p));
    for r in set.records() {
        writer
            .write_record([
                r.utterance_id.as_str(),
                &r.position.to_string(),
                label(r.target),
                label(r.observed),
                r.kind.as_str(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

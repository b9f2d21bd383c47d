//! Comparison tables in the column order
//! L1, target, recognition (ASR, HA), most common substitute (ASR, HA),
//! substitute rate (ASR, HA).
//!
//! Cell markers: `n/a` when no annotator data was supplied, `undef` when the
//! target never occurs, `-` when the target was never substituted.

use phonvar_core::annotations::{ComparisonTable, SideStats};
use phonvar_core::confusion::{recognition_rate, SpeakerProfile};
use phonvar_core::inventory::PhonemeInventory;

use crate::formats::tables::into_string;

pub const ABSENT: &str = "n/a";
pub const UNDEFINED: &str = "undef";
pub const NONE: &str = "-";

pub const COLUMNS: [&str; 8] = [
    "l1",
    "target",
    "recognition_asr",
    "recognition_ha",
    "mcs_asr",
    "mcs_ha",
    "mcs_rate_asr",
    "mcs_rate_ha",
];

const TEXT_COLUMNS: [&str; 8] = [
    "L1",
    "Target",
    "Recognition (ASR)",
    "Recognition (HA)",
    "MCS (ASR)",
    "MCS (HA)",
    "MCS rate (ASR)",
    "MCS rate (HA)",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupComparison {
    pub l1: String,
    pub table: ComparisonTable,
}

/// (recognition, substitute, substitute rate); `slash` wraps phonemes as `/S/`.
fn side_cells(side: &SideStats, inventory: &PhonemeInventory, slash: bool) -> [String; 3] {
    match side {
        SideStats::Absent => [ABSENT.into(), ABSENT.into(), ABSENT.into()],
        SideStats::Undefined => [UNDEFINED.into(), UNDEFINED.into(), UNDEFINED.into()],
        SideStats::Defined { recognition, substitute } => {
            let (mcs, rate) = match substitute {
                Some((p, r)) => (phoneme(inventory.label(*p), slash), r.to_string()),
                None => (NONE.into(), NONE.into()),
            };
            [recognition.to_string(), mcs, rate]
        }
    }
}

fn phoneme(label: &str, slash: bool) -> String {
    if slash {
        format!("/{label}/")
    } else {
        label.to_string()
    }
}

fn rows(groups: &[GroupComparison], inventory: &PhonemeInventory, slash: bool) -> Vec<[String; 8]> {
    let mut out = Vec::new();
    for g in groups {
        for row in &g.table.rows {
            let [ra, ma, sa] = side_cells(&row.asr, inventory, slash);
            let [rh, mh, sh] = side_cells(&row.annotator, inventory, slash);
            out.push([
                g.l1.clone(),
                phoneme(inventory.label(row.target), slash),
                ra,
                rh,
                ma,
                mh,
                sa,
                sh,
            ]);
        }
    }
    out
}

pub fn comparison_csv(groups: &[GroupComparison], inventory: &PhonemeInventory) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for r in rows(groups, inventory, false) {
        w.write_record(&r).expect("in-memory write");
    }
    into_string(w)
}

/// Space-padded columns; the L1 name is printed on the first row of its group.
pub fn comparison_text(groups: &[GroupComparison], inventory: &PhonemeInventory) -> String {
    let mut table: Vec<[String; 8]> = vec![TEXT_COLUMNS.map(String::from)];
    let mut last_l1: Option<String> = None;
    for mut r in rows(groups, inventory, true) {
        if last_l1.as_deref() == Some(r[0].as_str()) {
            r[0].clear();
        } else {
            last_l1 = Some(r[0].clone());
        }
        table.push(r);
    }
    let widths: Vec<usize> = (0..8)
        .map(|c| table.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, r) in table.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

/// Per-speaker recognition of every target the speaker produced:
/// `speaker_id,l1,target,recognized,occurrences,recognition_rate`.
pub fn speaker_rates_csv(profiles: &[SpeakerProfile]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["speaker_id", "l1", "target", "recognized", "occurrences", "recognition_rate"])
        .expect("in-memory write");
    for p in profiles {
        let inv = p.matrix.inventory();
        for target in inv.phonemes() {
            let Ok(rate) = recognition_rate(&p.matrix, target) else {
                continue;
            };
            w.write_record([
                p.speaker_id.as_str(),
                p.l1_label.as_deref().unwrap_or(""),
                inv.label(target),
                &rate.numerator.to_string(),
                &rate.denominator.to_string(),
                &rate.to_string(),
            ])
            .expect("in-memory write");
        }
    }
    into_string(w)
}

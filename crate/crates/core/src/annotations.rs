//! Human phoneme-level annotations and ASR-vs-annotator comparison.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::confusion::{
    most_common_substitute, recognition_rate, same_inventory, ConfusionMatrix, Rate,
};
use crate::inventory::{Phoneme, PhonemeInventory};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnnotationKind {
    Correct,
    Substitution,
    Deletion,
    Insertion,
}

impl AnnotationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AnnotationKind::Correct => "correct",
            AnnotationKind::Substitution => "substitution",
            AnnotationKind::Deletion => "deletion",
            AnnotationKind::Insertion => "insertion",
        }
    }
}

impl fmt::Display for AnnotationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AnnotationKind {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "correct" => Ok(AnnotationKind::Correct),
            "substitution" => Ok(AnnotationKind::Substitution),
            "deletion" => Ok(AnnotationKind::Deletion),
            "insertion" => Ok(AnnotationKind::Insertion),
            _ => Err(()),
        }
    }
}

/// One annotator judgement. `None` stands for epsilon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub utterance_id: String,
    pub position: u64,
    pub target: Option<Phoneme>,
    pub observed: Option<Phoneme>,
    pub kind: AnnotationKind,
}

impl AnnotationRecord {
    /// Validates the epsilon pattern against `kind`.
    pub fn new(
        utterance_id: impl Into<String>,
        position: u64,
        target: Option<Phoneme>,
        observed: Option<Phoneme>,
        kind: AnnotationKind,
        inventory: &PhonemeInventory,
    ) -> Result<Self> {
        for p in [target, observed].into_iter().flatten() {
            inventory.check_phoneme(p)?;
        }
        let ok = match kind {
            AnnotationKind::Correct => target.is_some() && target == observed,
            AnnotationKind::Substitution => {
                target.is_some() && observed.is_some() && target != observed
            }
            AnnotationKind::Deletion => target.is_some() && observed.is_none(),
            AnnotationKind::Insertion => target.is_none() && observed.is_some(),
        };
        if !ok {
            let label = |p: Option<Phoneme>| {
                p.map_or(inventory.label(inventory.epsilon()), |p| inventory.label(p))
                    .to_string()
            };
            return Err(Error::InconsistentAnnotation {
                kind: kind.as_str(),
                target: label(target),
                observed: label(observed),
            });
        }
        Ok(AnnotationRecord {
            utterance_id: utterance_id.into(),
            position,
            target,
            observed,
            kind,
        })
    }
}

/// All annotation records of one speaker.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnnotationSet {
    pub speaker_id: String,
    records: Vec<AnnotationRecord>,
    last_position: BTreeMap<String, u64>,
}

impl AnnotationSet {
    pub fn new(speaker_id: impl Into<String>) -> Self {
        AnnotationSet {
            speaker_id: speaker_id.into(),
            ..Default::default()
        }
    }

    /// Appends a record; positions may not decrease within an utterance.
    pub fn push(&mut self, record: AnnotationRecord) -> Result<()> {
        if let Some(&last) = self.last_position.get(&record.utterance_id) {
            if record.position < last {
                return Err(Error::PositionOrder(record.utterance_id));
            }
        }
        self.last_position
            .insert(record.utterance_id.clone(), record.position);
        self.records.push(record);
        Ok(())
    }

    pub fn extend(&mut self, other: AnnotationSet) -> Result<()> {
        other.records.into_iter().try_for_each(|r| self.push(r))
    }

    pub fn records(&self) -> &[AnnotationRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Counts annotation records the same way alignment ops are counted.
pub fn annotations_to_confusion(
    set: &AnnotationSet,
    inventory: Arc<PhonemeInventory>,
) -> ConfusionMatrix {
    let eps = inventory.epsilon();
    let mut m = ConfusionMatrix::zeros(inventory);
    for r in set.records() {
        m.add(r.target.unwrap_or(eps), r.observed.unwrap_or(eps), 1);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSelection {
    Explicit(Vec<Phoneme>),
    /// The `k` phonemes with the lowest ASR recognition rate among those
    /// expected at least `min_occurrences` times. Ties go to the lower index.
    LowestRecognition { k: usize, min_occurrences: u64 },
}

impl Default for TargetSelection {
    fn default() -> Self {
        TargetSelection::LowestRecognition {
            k: 3,
            min_occurrences: 20,
        }
    }
}

/// One side (ASR or annotator) of a comparison row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideStats {
    /// No matrix was supplied for this side.
    Absent,
    /// The target never occurs in this side's matrix.
    Undefined,
    Defined {
        recognition: Rate,
        /// Most common substitute with its rate; `None` when never substituted.
        substitute: Option<(Phoneme, Rate)>,
    },
}

impl SideStats {
    fn of(matrix: Option<&ConfusionMatrix>, target: Phoneme) -> Result<Self> {
        let Some(m) = matrix else {
            return Ok(SideStats::Absent);
        };
        match recognition_rate(m, target) {
            Ok(recognition) => Ok(SideStats::Defined {
                recognition,
                substitute: most_common_substitute(m, target, false)?,
            }),
            Err(Error::UndefinedRate(_)) => Ok(SideStats::Undefined),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub target: Phoneme,
    pub asr: SideStats,
    pub annotator: SideStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

/// Recognition rate and most common substitute per target, ASR against
/// annotator.
pub fn compare(
    asr: &ConfusionMatrix,
    annotator: Option<&ConfusionMatrix>,
    selection: &TargetSelection,
) -> Result<ComparisonTable> {
    if let Some(ha) = annotator {
        if !same_inventory(asr.inventory(), ha.inventory()) {
            return Err(Error::InventoryMismatch);
        }
    }
    let targets = match selection {
        TargetSelection::Explicit(t) => t.clone(),
        &TargetSelection::LowestRecognition { k, min_occurrences } => {
            let mut ranked: Vec<(Rate, Phoneme)> = asr
                .inventory()
                .phonemes()
                .filter(|&p| {
                    let n = asr.row_sum(p);
                    n > 0 && n >= min_occurrences
                })
                .map(|p| (recognition_rate(asr, p).expect("row is non-empty"), p))
                .collect();
            ranked.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
            ranked.into_iter().take(k).map(|(_, p)| p).collect()
        }
    };
    let rows = targets
        .into_iter()
        .map(|target| {
            Ok(ComparisonRow {
                target,
                asr: SideStats::of(Some(asr), target)?,
                annotator: SideStats::of(annotator, target)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ComparisonTable { rows })
}

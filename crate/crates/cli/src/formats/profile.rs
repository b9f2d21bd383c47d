//! Speaker profile JSON: `{speaker_id, l1_label, utterance_count, counts}`,
//! where `counts` is the confusion grid as a list of rows in inventory order.

use std::sync::Arc;

use phonvar_core::confusion::{ConfusionMatrix, SpeakerProfile};
use phonvar_core::inventory::PhonemeInventory;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct ProfileJson {
    speaker_id: String,
    l1_label: Option<String>,
    utterance_count: u64,
    counts: Vec<Vec<u64>>,
}

pub fn write_profile_json(profile: &SpeakerProfile) -> String {
    let n = profile.matrix.inventory().len();
    let json = ProfileJson {
        speaker_id: profile.speaker_id.clone(),
        l1_label: profile.l1_label.clone(),
        utterance_count: profile.utterance_count,
        counts: profile.matrix.as_slice().chunks(n).map(<[u64]>::to_vec).collect(),
    };
    let mut s = serde_json::to_string_pretty(&json).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_profile_json(text: &str, inventory: Arc<PhonemeInventory>) -> Result<SpeakerProfile> {
    let json: ProfileJson = serde_json::from_str(text)?;
    let n = inventory.len();
    if json.counts.len() != n || json.counts.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid(format!("profile counts must be a {n}x{n} grid")));
    }
    let matrix = ConfusionMatrix::from_counts(inventory, json.counts.concat())?;
    Ok(SpeakerProfile {
        speaker_id: json.speaker_id,
        l1_label: json.l1_label,
        matrix,
        utterance_count: json.utterance_count,
    })
}

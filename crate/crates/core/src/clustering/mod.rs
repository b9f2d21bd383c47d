//! Speaker vectors, k-means clustering and t-SNE embedding.
//!
//! Distances are squared Euclidean throughout. Every routine is a pure
//! function of its inputs and seed.

mod kmeans;
mod tsne;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use kmeans::{kmeans, ClusterResult, Init, KMeansConfig};
pub use tsne::{
    conditional_affinities, embed_speakers, joint_affinities, tsne, EmbeddingPoint, PointKind,
    TsneConfig, TsneResult,
};

use crate::confusion::ConfusionMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Counts as they are.
    #[default]
    RawCounts,
    /// Every non-empty row divided by its sum.
    RowFrequency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeakerVector {
    pub speaker_id: String,
    pub values: Vec<f64>,
    pub normalization: Normalization,
}

/// Flattens a confusion matrix row-major into one vector of `n * n` values.
pub fn vectorize(
    speaker_id: impl Into<String>,
    matrix: &ConfusionMatrix,
    normalization: Normalization,
) -> SpeakerVector {
    let n = matrix.inventory().len();
    let counts = matrix.as_slice();
    let mut values = Vec::with_capacity(n * n);
    for row in counts.chunks(n) {
        let scale = match normalization {
            Normalization::RawCounts => 1.0,
            Normalization::RowFrequency => match row.iter().sum::<u64>() {
                0 => 1.0,
                s => 1.0 / s as f64,
            },
        };
        values.extend(row.iter().map(|&c| c as f64 * scale));
    }
    SpeakerVector {
        speaker_id: speaker_id.into(),
        values,
        normalization,
    }
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Fraction of speakers whose cluster's majority label is their own label.
pub fn purity(result: &ClusterResult, labels: &BTreeMap<String, String>) -> Result<f64> {
    let mut per_cluster: BTreeMap<usize, BTreeMap<&str, usize>> = BTreeMap::new();
    for (id, &c) in result.speaker_ids.iter().zip(&result.assignments) {
        let label = labels
            .get(id)
            .ok_or_else(|| Error::MissingLabel(id.to_string()))?;
        *per_cluster.entry(c).or_default().entry(label).or_default() += 1;
    }
    let n = result.assignments.len();
    if n == 0 {
        return Ok(1.0);
    }
    let majority: usize = per_cluster
        .values()
        .map(|m| m.values().copied().max().unwrap_or(0))
        .sum();
    Ok(majority as f64 / n as f64)
}

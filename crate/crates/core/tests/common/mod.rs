#![allow(dead_code)]

use phonvar_core::clustering::{Normalization, SpeakerVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GROUPS: usize = 6;
pub const PER_GROUP: usize = 4;
pub const DIM: usize = 1600;

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Six count-like templates, four noisy copies each. The noise vector's RMS
/// norm is `noise_ratio` times the smallest distance between templates.
/// Returns the vectors and each vector's group label.
pub fn speaker_fixture(seed: u64, noise_ratio: f64) -> (Vec<SpeakerVector>, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let templates: Vec<Vec<f64>> = (0..GROUPS)
        .map(|_| (0..DIM).map(|_| (rng.random::<f64>() * 20.0).floor()).collect())
        .collect();
    let mut min_dist = f64::INFINITY;
    for i in 0..GROUPS {
        for j in (i + 1)..GROUPS {
            min_dist = min_dist.min(dist(&templates[i], &templates[j]));
        }
    }
    let sigma = noise_ratio * min_dist / (DIM as f64).sqrt();
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for (g, t) in templates.iter().enumerate() {
        for c in 0..PER_GROUP {
            vectors.push(SpeakerVector {
                speaker_id: format!("g{g}s{c}"),
                values: t.iter().map(|&x| x + sigma * gaussian(&mut rng)).collect(),
                normalization: Normalization::RawCounts,
            });
            labels.push(format!("L1_{g}"));
        }
    }
    (vectors, labels)
}

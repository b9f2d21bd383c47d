use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sq_dist, SpeakerVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Init {
    #[default]
    KMeansPlusPlus,
    /// k distinct input vectors chosen uniformly.
    Forgy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub init: Init,
    pub max_iter: usize,
    /// Stop once inertia improves by less than this fraction.
    pub rel_tol: f64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            k: 6,
            seed: 0,
            init: Init::KMeansPlusPlus,
            max_iter: 300,
            rel_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    /// Input order.
    pub speaker_ids: Vec<String>,
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Sum of squared distances to the assigned centroids.
    pub inertia: f64,
    /// Number of assignment passes.
    pub iterations: usize,
    pub seed: u64,
    /// Inertia after every assignment pass.
    pub inertia_history: Vec<f64>,
}

/// Lloyd's algorithm.
///
/// Runs until the assignment is a fixpoint, inertia improves by less than
/// `rel_tol` relative to the previous pass, or `max_iter` passes are spent.
/// A cluster left empty by an update is moved onto the point farthest from
/// its own centroid.
pub fn kmeans(vectors: &[SpeakerVector], config: &KMeansConfig) -> Result<ClusterResult> {
    let n = vectors.len();
    let k = config.k;
    if k == 0 || k > n {
        return Err(Error::ClusterCount { k, n });
    }
    let dim = vectors[0].values.len();
    if let Some(v) = vectors.iter().find(|v| v.values.len() != dim) {
        return Err(Error::DimensionMismatch(dim, v.values.len()));
    }
    let points: Vec<&[f64]> = vectors.iter().map(|v| v.values.as_slice()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut centroids: Vec<Vec<f64>> = match config.init {
        Init::KMeansPlusPlus => plus_plus(&points, k, &mut rng),
        Init::Forgy => forgy(&points, k, &mut rng),
    };

    let mut assignments = vec![usize::MAX; n];
    let mut history = Vec::new();
    let mut iterations = 0;
    let inertia = loop {
        let mut changed = false;
        let mut inertia = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (best, d) = nearest(p, &centroids);
            if assignments[i] != best {
                assignments[i] = best;
                changed = true;
            }
            inertia += d;
        }
        iterations += 1;
        let improvement = history.last().map(|&prev: &f64| {
            debug_assert!(inertia <= prev, "inertia increased: {prev} -> {inertia}");
            if prev > 0.0 {
                (prev - inertia) / prev
            } else {
                0.0
            }
        });
        history.push(inertia);
        let converged = !changed || improvement.is_some_and(|r| r < config.rel_tol);
        if converged || iterations >= config.max_iter {
            break inertia;
        }
        update(&points, &assignments, &mut centroids, dim);
    };

    Ok(ClusterResult {
        speaker_ids: vectors.iter().map(|v| v.speaker_id.clone()).collect(),
        assignments,
        centroids,
        inertia,
        iterations,
        seed: config.seed,
        inertia_history: history,
    })
}

/// Nearest centroid, ties to the lowest index.
fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(p, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn update(points: &[&[f64]], assignments: &[usize], centroids: &mut [Vec<f64>], dim: usize) {
    let k = centroids.len();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut sizes = vec![0usize; k];
    for (p, &c) in points.iter().zip(assignments) {
        sizes[c] += 1;
        for (s, x) in sums[c].iter_mut().zip(p.iter()) {
            *s += x;
        }
    }
    for c in 0..k {
        if sizes[c] > 0 {
            let inv = 1.0 / sizes[c] as f64;
            centroids[c] = sums[c].iter().map(|s| s * inv).collect();
        }
    }
    let mut used = vec![false; points.len()];
    for c in 0..k {
        if sizes[c] > 0 {
            continue;
        }
        let mut far = None;
        for (i, p) in points.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = sq_dist(p, &centroids[assignments[i]]);
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        if let Some((i, _)) = far {
            used[i] = true;
            centroids[c] = points[i].to_vec();
        }
    }
}

fn plus_plus(points: &[&[f64]], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![points[first].to_vec()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, points[first])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d <= 0.0 {
                    continue;
                }
                acc += d;
                pick = Some(i);
                if acc > target {
                    break;
                }
            }
            pick.expect("positive total implies a positive weight")
        } else {
            // every remaining point duplicates a centroid
            (0..n).find(|&i| !chosen[i]).expect("k <= n")
        };
        chosen[pick] = true;
        centroids.push(points[pick].to_vec());
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, points[pick]));
        }
    }
    centroids
}

fn forgy(points: &[&[f64]], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    for i in 0..k {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
    }
    idx[..k].iter().map(|&i| points[i].to_vec()).collect()
}

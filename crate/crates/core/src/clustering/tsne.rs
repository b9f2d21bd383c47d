//! Exact t-SNE: dense affinities, no tree approximation.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sq_dist, ClusterResult, SpeakerVector};
use crate::{Error, Result};

const ENTROPY_TOL_BITS: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsneConfig {
    pub perplexity: f64,
    pub learning_rate: f64,
    pub iterations: usize,
    pub seed: u64,
    pub early_exaggeration: f64,
    /// Iterations run with exaggerated affinities and low momentum.
    pub exaggeration_iters: usize,
}

impl Default for TsneConfig {
    fn default() -> Self {
        TsneConfig {
            perplexity: 5.0,
            learning_rate: 200.0,
            iterations: 1000,
            seed: 0,
            early_exaggeration: 12.0,
            exaggeration_iters: 250,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TsneResult {
    pub embedding: Vec<[f64; 2]>,
    /// Symmetric joint affinities, row-major `n x n`.
    pub affinities: Vec<f64>,
    /// Achieved entropy (bits) of every conditional distribution.
    pub entropies: Vec<f64>,
    /// KL(P || Q) right after initialization.
    pub initial_kl: f64,
    pub final_kl: f64,
}

fn check(n: usize, perplexity: f64) -> Result<()> {
    if n < 3 || !(perplexity >= 1.0 && perplexity < (n - 1) as f64) {
        return Err(Error::Perplexity { perplexity, n });
    }
    Ok(())
}

/// Conditional affinities `p(j|i)` (row-major) and the entropy in bits that
/// each row reached. Each row's Gaussian precision is bisected until its
/// entropy equals `log2(perplexity)`; rows whose entropy cannot move (all
/// neighbours equidistant) end at the uniform distribution.
pub fn conditional_affinities(points: &[&[f64]], perplexity: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = points.len();
    check(n, perplexity)?;
    let target = libm::log2(perplexity);
    let mut cond = vec![0.0; n * n];
    let mut entropies = Vec::with_capacity(n);
    let mut shifted = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            shifted[j] = if i == j { 0.0 } else { sq_dist(points[i], points[j]) };
        }
        let min = (0..n)
            .filter(|&j| j != i)
            .map(|j| shifted[j])
            .fold(f64::INFINITY, f64::min);
        let mut mean = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            shifted[j] -= min;
            mean += shifted[j];
        }
        mean /= (n - 1) as f64;

        let row = &mut cond[i * n..(i + 1) * n];
        let mut beta = if mean > 0.0 { 1.0 / mean } else { 1.0 };
        let (mut lo, mut hi) = (0.0, f64::INFINITY);
        let mut entropy = row_entropy(row, &shifted, i, beta);
        for _ in 0..MAX_BISECTIONS {
            if libm::fabs(entropy - target) < ENTROPY_TOL_BITS {
                break;
            }
            if entropy > target {
                lo = beta;
                beta = if hi.is_finite() { (lo + hi) / 2.0 } else { beta * 2.0 };
            } else {
                hi = beta;
                beta = (lo + hi) / 2.0;
            }
            entropy = row_entropy(row, &shifted, i, beta);
        }
        entropies.push(entropy);
    }
    Ok((cond, entropies))
}

/// Fills `row` with the normalized kernel and returns its entropy in bits.
fn row_entropy(row: &mut [f64], shifted: &[f64], i: usize, beta: f64) -> f64 {
    let mut sum = 0.0;
    let mut weighted = 0.0;
    for (j, (p, &d)) in row.iter_mut().zip(shifted).enumerate() {
        if j == i {
            *p = 0.0;
            continue;
        }
        *p = libm::exp(-beta * d);
        sum += *p;
        weighted += *p * d;
    }
    for p in row.iter_mut() {
        *p /= sum;
    }
    (libm::log(sum) + beta * weighted / sum) / core::f64::consts::LN_2
}

/// Symmetric joint affinities `(p(j|i) + p(i|j)) / 2n`, summing to one.
pub fn joint_affinities(points: &[&[f64]], perplexity: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = points.len();
    let (cond, entropies) = conditional_affinities(points, perplexity)?;
    let mut joint = vec![0.0; n * n];
    let scale = 2.0 * n as f64;
    for i in 0..n {
        for j in 0..n {
            joint[i * n + j] = (cond[i * n + j] + cond[j * n + i]) / scale;
        }
    }
    Ok((joint, entropies))
}

/// Embeds `points` in two dimensions by gradient descent on KL(P || Q) with
/// momentum and per-coordinate adaptive gains.
pub fn tsne(points: &[&[f64]], config: &TsneConfig) -> Result<TsneResult> {
    let n = points.len();
    let (p, entropies) = joint_affinities(points, config.perplexity)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut y: Vec<[f64; 2]> = (0..n)
        .map(|_| [gaussian(&mut rng) * 1e-4, gaussian(&mut rng) * 1e-4])
        .collect();

    let mut num = vec![0.0; n * n];
    let z = low_dim_kernel(&y, &mut num);
    let initial_kl = kl(&p, &num, z);

    let mut velocity = vec![[0.0f64; 2]; n];
    let mut gains = vec![[1.0f64; 2]; n];
    for iter in 0..config.iterations {
        let early = iter < config.exaggeration_iters;
        let exaggeration = if early { config.early_exaggeration } else { 1.0 };
        let momentum = if early { 0.5 } else { 0.8 };
        let z = low_dim_kernel(&y, &mut num);
        for i in 0..n {
            let mut grad = [0.0; 2];
            for j in 0..n {
                if i == j {
                    continue;
                }
                let w = num[i * n + j];
                let coeff = (exaggeration * p[i * n + j] - w / z) * w;
                grad[0] += coeff * (y[i][0] - y[j][0]);
                grad[1] += coeff * (y[i][1] - y[j][1]);
            }
            for d in 0..2 {
                let g = 4.0 * grad[d];
                gains[i][d] = if (g > 0.0) != (velocity[i][d] > 0.0) {
                    gains[i][d] + 0.2
                } else {
                    (gains[i][d] * 0.8).max(0.01)
                };
                velocity[i][d] = momentum * velocity[i][d] - config.learning_rate * gains[i][d] * g;
            }
        }
        for (yi, vi) in y.iter_mut().zip(&velocity) {
            yi[0] += vi[0];
            yi[1] += vi[1];
        }
        let (mx, my) = y
            .iter()
            .fold((0.0, 0.0), |(a, b), yi| (a + yi[0], b + yi[1]));
        for yi in y.iter_mut() {
            yi[0] -= mx / n as f64;
            yi[1] -= my / n as f64;
        }
    }
    let z = low_dim_kernel(&y, &mut num);
    let final_kl = kl(&p, &num, z);
    Ok(TsneResult {
        embedding: y,
        affinities: p,
        entropies,
        initial_kl,
        final_kl,
    })
}

/// Fills `num` with Student-t kernel values and returns their sum.
fn low_dim_kernel(y: &[[f64; 2]], num: &mut [f64]) -> f64 {
    let n = y.len();
    let mut z = 0.0;
    for i in 0..n {
        num[i * n + i] = 0.0;
        for j in (i + 1)..n {
            let dx = y[i][0] - y[j][0];
            let dy = y[i][1] - y[j][1];
            let w = 1.0 / (1.0 + dx * dx + dy * dy);
            num[i * n + j] = w;
            num[j * n + i] = w;
            z += 2.0 * w;
        }
    }
    z
}

/// KL(P || Q) with `Q = num / z`; zero-affinity pairs contribute nothing.
fn kl(p: &[f64], num: &[f64], z: f64) -> f64 {
    p.iter()
        .zip(num)
        .filter(|(&pij, _)| pij > 0.0)
        .map(|(&pij, &w)| pij * libm::log(pij * z / w))
        .sum()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; 1 - u keeps the logarithm finite.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Speaker,
    Centroid,
}

impl PointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PointKind::Speaker => "speaker",
            PointKind::Centroid => "centroid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingPoint {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub kind: PointKind,
}

/// Embeds speakers together with the cluster centroids, so both share one
/// layout. Centroids are named `cluster<k>`.
pub fn embed_speakers(
    vectors: &[SpeakerVector],
    clusters: Option<&ClusterResult>,
    config: &TsneConfig,
) -> Result<(Vec<EmbeddingPoint>, TsneResult)> {
    let mut ids: Vec<(String, PointKind)> = vectors
        .iter()
        .map(|v| (v.speaker_id.clone(), PointKind::Speaker))
        .collect();
    let mut points: Vec<&[f64]> = vectors.iter().map(|v| v.values.as_slice()).collect();
    if let Some(c) = clusters {
        for (k, centroid) in c.centroids.iter().enumerate() {
            ids.push((format!("cluster{k}"), PointKind::Centroid));
            points.push(centroid);
        }
    }
    let result = tsne(&points, config)?;
    let embedded = ids
        .into_iter()
        .zip(&result.embedding)
        .map(|((id, kind), &[x, y])| EmbeddingPoint { id, x, y, kind })
        .collect();
    Ok((embedded, result))
}

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use phonvar::pipeline::RunConfig;
use phonvar_core::annotations::TargetSelection;
use phonvar_core::clustering::{KMeansConfig, Normalization, SpeakerVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GROUPS: usize = 6;
pub const PER_GROUP: usize = 4;
pub const DIM: usize = 1600;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic")
}

/// Configuration for the bundled six-speaker corpus: three L1 groups, so
/// k = 3 and a low occurrence floor for target selection.
pub fn bundled_config(out_dir: &Path) -> RunConfig {
    let dir = fixture_dir();
    RunConfig {
        lexicon: Some(dir.join("lexicon.dict")),
        cost_matrix: Some(dir.join("costs.csv")),
        kmeans: KMeansConfig { k: 3, ..Default::default() },
        selection: TargetSelection::LowestRecognition { k: 3, min_occurrences: 3 },
        out_dir: out_dir.to_path_buf(),
        ..Default::default()
    }
}

/// Every file under `root`, keyed by relative path.
pub fn read_tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

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

const PROMPTS: [&str; 6] = [
    "author of the danger trail",
    "it was simple in its way",
    "and no virtue is easy",
    "i think this street is very good",
    "they told me the ship was in the park",
    "we saw the best boat in the world",
];

/// Word swaps that make up each group's accent.
const ACCENTS: [&[(&str, &str)]; GROUPS] = [
    &[("think", "sink"), ("park", "bark"), ("simple", "symbol")],
    &[("think", "tink"), ("this", "zis"), ("very", "wery")],
    &[("no", "a no"), ("ship", "sheep"), ("very", "berry")],
    &[("best", "vest"), ("world", "word"), ("trail", "tree")],
    &[("told", "toe"), ("its", "it"), ("easy", "ease")],
    &[("is", "his"), ("best", "bid"), ("good", "go")],
];

/// Writes a manifest of `GROUPS * PER_GROUP` speakers under `dir`. Each
/// speaker reads every prompt three times and applies each of its group's
/// swaps with probability 0.9. Uses the bundled lexicon.
pub fn synthetic_corpus(dir: &Path, seed: u64) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut speakers = Vec::new();
    for (g, accent) in ACCENTS.iter().enumerate() {
        for s in 0..PER_GROUP {
            let mut utterances = Vec::new();
            for rep in 0..3 {
                for (p, prompt) in PROMPTS.iter().enumerate() {
                    let asr: Vec<&str> = prompt
                        .split(' ')
                        .map(|w| match accent.iter().find(|(from, _)| *from == w) {
                            Some((_, to)) if rng.random::<f64>() < 0.9 => *to,
                            _ => w,
                        })
                        .collect();
                    utterances.push(serde_json::json!({
                        "utterance_id": format!("u{rep}_{p}"),
                        "prompt": prompt,
                        "asr_transcript": asr.join(" "),
                    }));
                }
            }
            speakers.push(serde_json::json!({
                "speaker_id": format!("g{g}s{s}"),
                "l1_label": format!("L1_{g}"),
                "utterances": utterances,
            }));
        }
    }
    let path = dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&serde_json::json!({ "speakers": speakers })).unwrap()).unwrap();
    path
}

//! Acceptance gate. Prints one line per criterion and exits nonzero if any
//! criterion fails or runs over its time bound.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{bundled_config, fixture_dir, read_tree, speaker_fixture, GROUPS};
use phonvar::formats::annotation_csv::{parse_annotation_csv, write_annotation_csv};
use phonvar::formats::grid::{parse_confusion, parse_cost_matrix, write_confusion};
use phonvar::formats::lexicon::{parse_lexicon, write_lexicon};
use phonvar::pipeline::run;
use phonvar::report::{comparison_csv, GroupComparison};
use phonvar_core::alignment::oracle::{align_bruteforce, optimal_scripts};
use phonvar_core::alignment::{align, CostMatrix, OpKind, TieBreak};
use phonvar_core::annotations::{
    annotations_to_confusion, compare, AnnotationKind, AnnotationRecord, AnnotationSet,
    TargetSelection,
};
use phonvar_core::clustering::{joint_affinities, kmeans, purity, tsne, KMeansConfig, TsneConfig};
use phonvar_core::confusion::{phoneme_stats, ConfusionMatrix, SpeakerProfile};
use phonvar_core::inventory::{Phoneme, PhonemeInventory};
use phonvar_core::lexicon::{Lexicon, PronunciationVariant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn inv() -> Arc<PhonemeInventory> {
    Arc::new(PhonemeInventory::arpabet())
}

fn seq(inv: &PhonemeInventory, s: &str) -> Vec<Phoneme> {
    inv.parse_sequence(s).unwrap()
}

fn random_seq(rng: &mut ChaCha8Rng, alphabet: usize, max: usize) -> Vec<Phoneme> {
    let n = rng.random_range(0..=max);
    (0..n).map(|_| Phoneme::new(rng.random_range(0..alphabet))).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// HH IH Z against IY Z: deletion of HH plus IH->IY whenever that pair is
/// cheaper than HH->IY plus deletion of IH and the script is optimal; two
/// optimal scripts of cost 2 under uniform costs.
fn his_ease() -> Outcome {
    let inv = inv();
    let (a, b) = (seq(&inv, "HH IH Z"), seq(&inv, "IY Z"));
    let [hh, ih, iy] = ["HH", "IH", "IY"].map(|s| inv.lookup(s).unwrap());
    let eps = inv.epsilon();

    let check = |costs: &CostMatrix, label: &str| -> Result<(), String> {
        let al = align(&a, &b, costs, TieBreak::default()).map_err(|e| e.to_string())?;
        let kinds: Vec<OpKind> = al.ops.iter().map(|o| o.kind).collect();
        ensure(kinds == [OpKind::Delete, OpKind::Substitute, OpKind::Match], || {
            format!("{label}: ops {kinds:?}")
        })?;
        ensure(al.ops[0].expected == Some(hh) && al.ops[1].observed == Some(iy), || {
            format!("{label}: wrong phonemes in {:?}", al.ops)
        })
    };

    let text = std::fs::read_to_string(fixture_dir().join("costs.csv")).map_err(|e| e.to_string())?;
    let bundled = parse_cost_matrix(&text, inv.clone()).map_err(|e| e.to_string())?;
    check(&bundled, "bundled costs")?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut tried = 0;
    while tried < 200 {
        let mut grid: Vec<f64> = (0..1600).map(|_| rng.random_range(0.05..1.5)).collect();
        for i in 0..40 {
            grid[i * 41] = 0.0;
        }
        let costs = CostMatrix::from_grid(inv.clone(), grid).unwrap();
        let want = costs.cost(hh, eps) + costs.cost(ih, iy);
        let other = costs.cost(hh, iy) + costs.cost(ih, eps);
        if want >= other {
            continue;
        }
        let best = align_bruteforce(&a, &b, &costs).map_err(|e| e.to_string())?;
        if want > best {
            continue;
        }
        let unique = optimal_scripts(&a, &b, &costs).map_err(|e| e.to_string())?.len() == 1;
        if !unique {
            continue;
        }
        tried += 1;
        check(&costs, &format!("random matrix {tried}"))?;
    }

    let uniform = CostMatrix::uniform(inv.clone());
    let scripts = optimal_scripts(&a, &b, &uniform).map_err(|e| e.to_string())?;
    ensure(scripts.len() == 2, || format!("{} optimal uniform scripts", scripts.len()))?;
    for s in &scripts {
        let total: f64 = s.iter().map(|o| o.cost).sum();
        ensure(total == 2.0, || format!("uniform script cost {total}"))?;
    }
    Ok(format!("bundled + {tried} random matrices; 2 uniform optima of cost 2"))
}

fn random_costs(rng: &mut ChaCha8Rng, inv: &Arc<PhonemeInventory>) -> CostMatrix {
    // Coarse values make exact ties common.
    let mut grid: Vec<f64> = (0..1600)
        .map(|_| match rng.random_range(0..3) {
            0 => 1.0,
            1 => rng.random_range(0..8) as f64 / 4.0,
            _ => rng.random_range(0.0..2.0),
        })
        .collect();
    for i in 0..40 {
        grid[i * 41] = 0.0;
    }
    CostMatrix::from_grid(inv.clone(), grid).unwrap()
}

fn matches_bruteforce() -> Outcome {
    let inv = inv();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 1500;
    for i in 0..n {
        let costs = random_costs(&mut rng, &inv);
        let a = random_seq(&mut rng, 6, 5);
        let b = random_seq(&mut rng, 6, 5);
        let got = align(&a, &b, &costs, TieBreak::default()).map_err(|e| e.to_string())?;
        let want = align_bruteforce(&a, &b, &costs).map_err(|e| e.to_string())?;
        ensure(got.total_cost == want, || format!("instance {i}: {} != {want}", got.total_cost))?;
        let script: f64 = got.ops.iter().map(|o| o.cost).sum();
        ensure(script == got.total_cost, || format!("instance {i}: script sums to {script}"))?;
        ensure(got.expected_sequence() == a && got.observed_sequence() == b, || {
            format!("instance {i}: script does not reconstruct inputs")
        })?;
    }
    Ok(format!("{n} instances, lengths <= 5, exact equality"))
}

fn levenshtein(a: &[Phoneme], b: &[Phoneme]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(x != y)).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

fn uniform_is_levenshtein() -> Outcome {
    let inv = inv();
    let costs = CostMatrix::uniform(inv);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 2000;
    for i in 0..n {
        let a = random_seq(&mut rng, 8, 30);
        let b = random_seq(&mut rng, 8, 30);
        let got = align(&a, &b, &costs, TieBreak::default()).map_err(|e| e.to_string())?;
        let want = levenshtein(&a, &b) as f64;
        ensure(got.total_cost == want, || format!("pair {i}: {} != {want}", got.total_cost))?;
    }
    Ok(format!("{n} pairs, lengths <= 30"))
}

fn rates_and_conservation() -> Outcome {
    let inv = inv();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut rows = 0;
    for i in 0..100 {
        let counts: Vec<u64> = (0..1600)
            .map(|k| if k == 1599 || rng.random_range(0..3) > 0 { 0 } else { rng.random_range(0..500) })
            .collect();
        let m = ConfusionMatrix::from_counts(inv.clone(), counts).unwrap();
        for p in inv.phonemes() {
            if m.row_sum(p) == 0 {
                continue;
            }
            let st = phoneme_stats(&m, p).map_err(|e| e.to_string())?;
            let total = st.recognition_rate.value()
                + st.substitutes.iter().map(|s| s.rate.value()).sum::<f64>();
            ensure((total - 1.0).abs() <= 1e-9, || format!("matrix {i} row {p:?}: sum {total}"))?;
            rows += 1;
        }
    }

    let costs = random_costs(&mut rng, &inv);
    let mut profile = SpeakerProfile::new("s", None, inv.clone());
    let mut expected = [0u64; 40];
    for _ in 0..200 {
        let a = random_seq(&mut rng, 39, 12);
        let b = random_seq(&mut rng, 39, 12);
        for p in &a {
            expected[p.index()] += 1;
        }
        profile.accumulate(&align(&a, &b, &costs, TieBreak::default()).map_err(|e| e.to_string())?);
    }
    for p in inv.phonemes() {
        let got = profile.matrix.row_sum(p);
        ensure(got == expected[p.index()], || format!("row {p:?}: {got} != {}", expected[p.index()]))?;
    }
    Ok(format!("100 matrices ({rows} rows) within 1e-9; 200 alignments conserve row sums"))
}

/// ASR and annotator judgements for /TH/ among Arabic speakers, scaled to
/// 1000 occurrences so every rate is exact to a tenth of a percent.
fn comparison_row() -> Outcome {
    let inv = inv();
    let th = inv.lookup("TH").unwrap();
    let s = inv.lookup("S").unwrap();
    let others = ["T", "F", "D", "DH", "Z", "SH", "HH"].map(|l| inv.lookup(l).unwrap());

    // ASR: 792 correct, 75 as S, 133 spread thinly.
    let mut asr = ConfusionMatrix::zeros(inv.clone());
    asr.add(th, th, 792);
    asr.add(th, s, 75);
    for &o in &others {
        asr.add(th, o, 19);
    }
    let asr_text = write_confusion(&asr);
    let asr = parse_confusion(&asr_text, inv.clone()).map_err(|e| e.to_string())?;

    // Annotator: 810 correct, 131 as S, 59 spread thinly.
    let mut csv = String::from("utterance,position,target,observed,kind\n");
    let mut pos = 0;
    let mut push = |observed: &str, kind: &str, n: usize| {
        for _ in 0..n {
            csv.push_str(&format!("u{},{},TH,{observed},{kind}\n", pos / 10, pos % 10));
            pos += 1;
        }
    };
    push("TH", "correct", 810);
    push("S", "substitution", 131);
    for (k, o) in ["T", "F", "D", "DH", "Z", "SH"].iter().enumerate() {
        push(o, "substitution", if k == 0 { 9 } else { 10 });
    }
    let set = parse_annotation_csv(&csv, "arabic", &inv).map_err(|e| e.to_string())?;
    ensure(set.len() == 1000, || format!("{} annotation records", set.len()))?;
    let ha = annotations_to_confusion(&set, inv.clone());

    let table = compare(&asr, Some(&ha), &TargetSelection::Explicit(vec![th]))
        .map_err(|e| e.to_string())?;
    let out = comparison_csv(&[GroupComparison { l1: "Arabic".into(), table }], &inv);
    let row = out.lines().nth(1).unwrap_or_default();
    let want = "Arabic,TH,79.2%,81.0%,S,S,7.5%,13.1%";
    ensure(row == want, || format!("got `{row}`"))?;
    Ok(format!("`{row}`"))
}

fn kmeans_purity() -> Outcome {
    let (vectors, labels) = speaker_fixture(7, 0.1);
    let map: BTreeMap<String, String> =
        vectors.iter().map(|v| v.speaker_id.clone()).zip(labels.iter().cloned()).collect();
    let mut perfect = 0;
    for seed in 0..10 {
        let r = kmeans(&vectors, &KMeansConfig { k: GROUPS, seed, ..Default::default() })
            .map_err(|e| e.to_string())?;
        for w in r.inertia_history.windows(2) {
            ensure(w[1] <= w[0], || format!("seed {seed}: inertia rose {:?}", r.inertia_history))?;
        }
        if purity(&r, &map).map_err(|e| e.to_string())? == 1.0 {
            perfect += 1;
        }
    }
    ensure(perfect >= 9, || format!("purity 1 on {perfect}/10 seeds"))?;
    Ok(format!("purity 1 on {perfect}/10 seeds, inertia non-increasing"))
}

fn tsne_properties() -> Outcome {
    let (vectors, labels) = speaker_fixture(11, 0.1);
    let refs: Vec<&[f64]> = vectors.iter().map(|v| v.values.as_slice()).collect();
    let n = refs.len();
    let (p, entropies) = joint_affinities(&refs, 5.0).map_err(|e| e.to_string())?;
    let total: f64 = p.iter().sum();
    ensure((total - 1.0).abs() < 1e-9, || format!("affinities sum to {total}"))?;
    for i in 0..n {
        ensure(p[i * n + i] == 0.0, || format!("diagonal {i} nonzero"))?;
        for j in 0..n {
            ensure(p[i * n + j] >= 0.0 && p[i * n + j] == p[j * n + i], || {
                format!("affinity ({i},{j}) not symmetric and non-negative")
            })?;
        }
    }
    let target = 5f64.log2();
    let worst = entropies.iter().map(|h| (h - target).abs()).fold(0.0, f64::max);
    ensure(worst < 1e-5, || format!("entropy off by {worst}"))?;

    let mut dropped = 0;
    for seed in 0..5 {
        let r = tsne(&refs, &TsneConfig { seed, ..Default::default() }).map_err(|e| e.to_string())?;
        if r.final_kl < r.initial_kl {
            dropped += 1;
        }
        let (mut inter, mut n_inter, mut intra, mut n_intra) = (0.0, 0, 0.0, 0);
        for i in 0..n {
            for j in (i + 1)..n {
                let [xi, yi] = r.embedding[i];
                let [xj, yj] = r.embedding[j];
                let d = ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt();
                if labels[i] == labels[j] {
                    intra += d;
                    n_intra += 1;
                } else {
                    inter += d;
                    n_inter += 1;
                }
            }
        }
        let (inter, intra) = (inter / n_inter as f64, intra / n_intra as f64);
        ensure(inter > intra, || format!("seed {seed}: inter {inter} <= intra {intra}"))?;
    }
    ensure(dropped == 5, || format!("KL dropped on {dropped}/5 seeds"))?;
    Ok(format!("entropy error {worst:.1e}, KL dropped on 5/5 seeds, inter > intra"))
}

fn deterministic_run() -> Outcome {
    let manifest = fixture_dir().join("manifest.json");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run(&manifest, &bundled_config(&a)).map_err(|e| e.to_string())?;
    run(&manifest, &bundled_config(&b)).map_err(|e| e.to_string())?;
    let (ta, tb) = (read_tree(&a), read_tree(&b));
    ensure(!ta.is_empty(), || "no output written".into())?;
    ensure(ta.keys().eq(tb.keys()), || "file sets differ".into())?;
    for (path, bytes) in &ta {
        ensure(tb[path] == *bytes, || format!("{} differs", path.display()))?;
    }
    Ok(format!("{} files byte-identical", ta.len()))
}

fn round_trips() -> Outcome {
    let inv = inv();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 200;
    let letters = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ'";
    for i in 0..n {
        let mut lex = Lexicon::new();
        for _ in 0..rng.random_range(0..15) {
            let len = rng.random_range(1..8);
            let mut w = String::from(letters[rng.random_range(0..26)] as char);
            for _ in 1..len {
                w.push(letters[rng.random_range(0..letters.len())] as char);
            }
            for _ in 0..rng.random_range(1..4) {
                let mut v = random_seq(&mut rng, 39, 6);
                if v.is_empty() {
                    v.push(Phoneme::new(0));
                }
                lex.insert(&w, PronunciationVariant::new(v, &inv).unwrap()).unwrap();
            }
        }
        let back = parse_lexicon(&write_lexicon(&lex, &inv), &inv).map_err(|e| e.to_string())?;
        ensure(back == lex, || format!("lexicon {i} changed"))?;

        let mut set = AnnotationSet::new("spk");
        for u in 0..rng.random_range(0..4) {
            for pos in 0..rng.random_range(0..10u64) {
                let t = Phoneme::new(rng.random_range(0..39));
                let o = Phoneme::new(rng.random_range(0..39));
                let (target, observed, kind) = match rng.random_range(0..4) {
                    1 if t != o => (Some(t), Some(o), AnnotationKind::Substitution),
                    0 | 1 => (Some(t), Some(t), AnnotationKind::Correct),
                    2 => (Some(t), None, AnnotationKind::Deletion),
                    _ => (None, Some(o), AnnotationKind::Insertion),
                };
                let r = AnnotationRecord::new(format!("utt{u}"), pos, target, observed, kind, &inv)
                    .unwrap();
                set.push(r).unwrap();
            }
        }
        let back = parse_annotation_csv(&write_annotation_csv(&set, &inv), "spk", &inv)
            .map_err(|e| e.to_string())?;
        ensure(back == set, || format!("annotation set {i} changed"))?;

        let counts: Vec<u64> = (0..1600)
            .map(|k| if k == 1599 || rng.random_range(0..4) > 0 { 0 } else { rng.random() })
            .collect();
        let m = ConfusionMatrix::from_counts(inv.clone(), counts).unwrap();
        let back = parse_confusion(&write_confusion(&m), inv.clone()).map_err(|e| e.to_string())?;
        ensure(back == m, || format!("confusion matrix {i} changed"))?;
    }
    Ok(format!("{n} lexicons, {n} annotation sets, {n} confusion matrices"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("disambiguation", Duration::from_secs(1), his_ease),
        ("align-vs-bruteforce", Duration::from_secs(30), matches_bruteforce),
        ("uniform-levenshtein", Duration::from_secs(10), uniform_is_levenshtein),
        ("rates-conservation", Duration::from_secs(10), rates_and_conservation),
        ("comparison-row", Duration::from_secs(1), comparison_row),
        ("kmeans-purity", Duration::from_secs(10), kmeans_purity),
        ("tsne", Duration::from_secs(60), tsne_properties),
        ("deterministic-run", Duration::from_secs(30), deterministic_run),
        ("format-round-trips", Duration::from_secs(30), round_trips),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over time bound; {d}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {status} ({:.2}s, limit {}s) {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {}/9 passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Pipeline stages behind the command-line front end.
//!
//! Each stage computes its results in manifest order, then writes files under
//! the output directory. Utterance alignment fans out across threads; all
//! aggregation and file output stay sequential, so reruns with the same
//! inputs and seed produce byte-identical trees.
//!
//! Output layout:
//!
//! ```text
//! phonemes/<speaker>/<utterance>.tsv    expected and observed phoneme lines
//! oov.tsv                                every out-of-vocabulary token
//! alignments/<speaker>/<utterance>.tsv  one edit op per line
//! variants.tsv                           chosen pronunciation per word (variant rule `all`)
//! alignment_summary.tsv                  per-speaker utterance, op and cost totals
//! profiles/<speaker>.csv|.json           confusion matrix per speaker
//! heatmaps/<speaker>.svg, costs.svg      (run only)
//! clusters.csv, embedding.csv, clustering.txt, purity.txt
//! comparison.csv, comparison.txt, speaker_rates.csv, annotation_skips.tsv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use phonvar_core::alignment::{
    align_min_variant, CostMatrix, LatticeAlignment, TieBreak, DEFAULT_VARIANT_CAP,
};
use phonvar_core::annotations::{annotations_to_confusion, compare, AnnotationSet, TargetSelection};
use phonvar_core::clustering::{
    embed_speakers, kmeans, purity, vectorize, ClusterResult, EmbeddingPoint, KMeansConfig,
    Normalization, TsneConfig, TsneResult,
};
use phonvar_core::confusion::{ConfusionMatrix, SpeakerProfile};
use phonvar_core::inventory::PhonemeInventory;
use phonvar_core::lexicon::{phonemize, tokenize, Lexicon, OovPolicy, Phonemized, VariantRule};
use rayon::prelude::*;

use crate::error::{read_to_string, write_file, Error, Result};
use crate::formats::annotation_csv::parse_annotation_csv;
use crate::formats::grid::{parse_confusion, parse_cost_matrix, write_confusion};
use crate::formats::inventory::parse_inventory;
use crate::formats::lexicon::parse_lexicon;
use crate::formats::profile::{parse_profile_json, write_profile_json};
use crate::formats::tables::{write_alignment_dump, write_clusters_csv, write_embedding_csv};
use crate::formats::textgrid::{tier_annotations, LabelConvention, TextGrid};
use crate::heatmap;
use crate::manifest::Manifest;
use crate::report::{comparison_csv, comparison_text, speaker_rates_csv, GroupComparison};

/// Group name for speakers without an L1 label.
pub const UNLABELLED: &str = "unlabelled";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OovMode {
    #[default]
    Fail,
    Skip,
    Supplementary,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub lexicon: Option<PathBuf>,
    pub supplementary_lexicon: Option<PathBuf>,
    /// Uniform (Levenshtein) costs when absent.
    pub cost_matrix: Option<PathBuf>,
    /// Built-in ARPAbet inventory when absent.
    pub inventory: Option<PathBuf>,
    pub oov_policy: OovMode,
    /// Applies to prompts; ASR transcripts always use the first variant.
    pub variant_rule: VariantRule,
    pub variant_cap: u64,
    pub tie_break: TieBreak,
    pub kmeans: KMeansConfig,
    pub tsne: TsneConfig,
    pub normalization: Normalization,
    /// Embed cluster centroids alongside speakers.
    pub embed_centroids: bool,
    /// `run` skips clustering when false.
    pub cluster: bool,
    pub selection: TargetSelection,
    pub tier: String,
    pub label_convention: LabelConvention,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lexicon: None,
            supplementary_lexicon: None,
            cost_matrix: None,
            inventory: None,
            oov_policy: OovMode::Fail,
            variant_rule: VariantRule::First,
            variant_cap: DEFAULT_VARIANT_CAP,
            tie_break: TieBreak::default(),
            kmeans: KMeansConfig::default(),
            tsne: TsneConfig::default(),
            normalization: Normalization::RawCounts,
            embed_centroids: true,
            cluster: true,
            selection: TargetSelection::default(),
            tier: "phones".into(),
            label_convention: LabelConvention::default(),
            out_dir: PathBuf::from("out"),
        }
    }
}

pub fn load_inventory(config: &RunConfig) -> Result<Arc<PhonemeInventory>> {
    match &config.inventory {
        Some(path) => {
            let inv = parse_inventory(&read_to_string(path)?).map_err(|e| e.in_file(path))?;
            Ok(Arc::new(inv))
        }
        None => Ok(Arc::new(PhonemeInventory::arpabet())),
    }
}

/// Everything parsed from the configuration's files, loaded before any
/// utterance is touched.
#[derive(Debug, Clone)]
pub struct Resources {
    pub inventory: Arc<PhonemeInventory>,
    pub lexicon: Lexicon,
    pub supplementary: Option<Lexicon>,
    pub costs: CostMatrix,
}

impl Resources {
    pub fn load(config: &RunConfig) -> Result<Resources> {
        let inventory = load_inventory(config)?;
        let lexicon_at = |path: &Path| -> Result<Lexicon> {
            parse_lexicon(&read_to_string(path)?, &inventory).map_err(|e| e.in_file(path))
        };
        let lexicon = match &config.lexicon {
            Some(path) => lexicon_at(path)?,
            None => return Err(Error::Invalid("a lexicon is required (--lexicon)".into())),
        };
        let supplementary = config.supplementary_lexicon.as_deref().map(lexicon_at).transpose()?;
        if config.oov_policy == OovMode::Supplementary && supplementary.is_none() {
            return Err(Error::Invalid(
                "oov policy `supplementary` needs --supplementary-lexicon".into(),
            ));
        }
        let costs = match &config.cost_matrix {
            Some(path) => parse_cost_matrix(&read_to_string(path)?, inventory.clone())
                .map_err(|e| e.in_file(path))?,
            None => CostMatrix::uniform(inventory.clone()),
        };
        Ok(Resources {
            inventory,
            lexicon,
            supplementary,
            costs,
        })
    }

    fn policy(&self, mode: OovMode) -> OovPolicy<'_> {
        match mode {
            OovMode::Fail => OovPolicy::Fail,
            OovMode::Skip => OovPolicy::SkipUtterance,
            OovMode::Supplementary => {
                OovPolicy::Supplementary(self.supplementary.as_ref().expect("checked at load"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemizedUtterance {
    /// Index into the manifest's speaker list.
    pub speaker: usize,
    pub utterance_id: String,
    pub expected: Phonemized,
    pub observed: Phonemized,
    /// Set when either side had a word missing from every lexicon.
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OovEntry {
    pub speaker_id: String,
    pub utterance_id: String,
    pub side: &'static str,
    pub word: String,
    /// `failed`, `skipped` or `supplementary`.
    pub resolution: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhonemizeOutput {
    pub utterances: Vec<PhonemizedUtterance>,
    pub oov: Vec<OovEntry>,
    /// Sorted, deduplicated words that failed under the fail policy.
    pub failed: Vec<String>,
}

pub fn phonemize_corpus(
    manifest: &Manifest,
    resources: &Resources,
    config: &RunConfig,
) -> Result<PhonemizeOutput> {
    let mut out = PhonemizeOutput::default();
    let policy = resources.policy(config.oov_policy);
    for (si, speaker) in manifest.speakers.iter().enumerate() {
        for utt in &speaker.utterances {
            let mut excluded = false;
            let mut side = |name: &'static str, text: String, rule| -> Phonemized {
                let tokens = tokenize(&text);
                match phonemize(&tokens, &resources.lexicon, policy, rule) {
                    Ok(p) => {
                        let resolution = if p.skipped { "skipped" } else { "supplementary" };
                        excluded |= p.skipped;
                        for word in &p.oov {
                            out.oov.push(OovEntry {
                                speaker_id: speaker.speaker_id.clone(),
                                utterance_id: utt.utterance_id.clone(),
                                side: name,
                                word: word.clone(),
                                resolution,
                            });
                        }
                        p
                    }
                    Err(phonvar_core::Error::OutOfVocabulary(words)) => {
                        excluded = true;
                        for word in words {
                            out.oov.push(OovEntry {
                                speaker_id: speaker.speaker_id.clone(),
                                utterance_id: utt.utterance_id.clone(),
                                side: name,
                                word: word.clone(),
                                resolution: "failed",
                            });
                            out.failed.push(word);
                        }
                        Phonemized::default()
                    }
                    Err(e) => unreachable!("phonemize only fails on OOV words: {e}"),
                }
            };
            let expected = side("expected", manifest.text(&utt.prompt)?, config.variant_rule);
            let observed = side("observed", manifest.text(&utt.asr_transcript)?, VariantRule::First);
            out.utterances.push(PhonemizedUtterance {
                speaker: si,
                utterance_id: utt.utterance_id.clone(),
                expected,
                observed,
                excluded,
            });
        }
    }
    out.failed.sort();
    out.failed.dedup();
    Ok(out)
}

pub fn write_phonemize(
    out: &PhonemizeOutput,
    manifest: &Manifest,
    inventory: &PhonemeInventory,
    dir: &Path,
) -> Result<()> {
    for u in out.utterances.iter().filter(|u| !u.excluded) {
        let speaker = &manifest.speakers[u.speaker].speaker_id;
        let text = format!(
            "expected\t{}\nobserved\t{}\n",
            inventory.render(&u.expected.sequence()),
            inventory.render(&u.observed.sequence())
        );
        write_file(&dir.join("phonemes").join(speaker).join(format!("{}.tsv", u.utterance_id)), text)?;
    }
    let mut tsv = String::from("speaker_id\tutterance_id\tside\tword\tresolution\n");
    for e in &out.oov {
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            e.speaker_id, e.utterance_id, e.side, e.word, e.resolution
        ));
    }
    write_file(&dir.join("oov.tsv"), tsv)
}

fn oov_failure(out: &PhonemizeOutput) -> Result<()> {
    if out.failed.is_empty() {
        Ok(())
    } else {
        Err(phonvar_core::Error::OutOfVocabulary(out.failed.clone()).into())
    }
}

/// Phonemizes every utterance and writes sequences plus the OOV report. Fails
/// with the full word list when the fail policy rejected anything.
pub fn cmd_phonemize(manifest: &Manifest, config: &RunConfig) -> Result<PhonemizeOutput> {
    let resources = Resources::load(config)?;
    let out = phonemize_corpus(manifest, &resources, config)?;
    write_phonemize(&out, manifest, &resources.inventory, &config.out_dir)?;
    oov_failure(&out)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignedUtterance {
    pub speaker: usize,
    pub utterance_id: String,
    pub result: LatticeAlignment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignOutput {
    /// One per manifest speaker, in manifest order.
    pub profiles: Vec<SpeakerProfile>,
    pub utterances: Vec<AlignedUtterance>,
}

pub fn align_corpus(
    manifest: &Manifest,
    phonemized: &PhonemizeOutput,
    resources: &Resources,
    config: &RunConfig,
) -> Result<AlignOutput> {
    let jobs: Vec<&PhonemizedUtterance> =
        phonemized.utterances.iter().filter(|u| !u.excluded).collect();
    let results: Vec<Result<LatticeAlignment>> = jobs
        .par_iter()
        .map(|u| {
            align_min_variant(
                &u.expected.lattice,
                &u.observed.sequence(),
                &resources.costs,
                config.tie_break,
                config.variant_cap,
            )
            .map_err(|e| Error::InUtterance {
                speaker_id: manifest.speakers[u.speaker].speaker_id.clone(),
                utterance_id: u.utterance_id.clone(),
                source: Box::new(e.into()),
            })
        })
        .collect();

    let mut profiles: Vec<SpeakerProfile> = manifest
        .speakers
        .iter()
        .map(|s| SpeakerProfile::new(&s.speaker_id, s.l1_label.clone(), resources.inventory.clone()))
        .collect();
    let mut utterances = Vec::with_capacity(jobs.len());
    for (job, result) in jobs.into_iter().zip(results) {
        let result = result?;
        profiles[job.speaker].accumulate(&result.alignment);
        utterances.push(AlignedUtterance {
            speaker: job.speaker,
            utterance_id: job.utterance_id.clone(),
            result,
        });
    }
    Ok(AlignOutput { profiles, utterances })
}

pub fn write_align(
    out: &AlignOutput,
    config: &RunConfig,
    inventory: &PhonemeInventory,
    dir: &Path,
) -> Result<()> {
    let mut totals: Vec<(u64, f64)> = vec![(0, 0.0); out.profiles.len()];
    let mut variants = String::from("speaker_id\tutterance_id\tvariants\n");
    for u in &out.utterances {
        let speaker = &out.profiles[u.speaker].speaker_id;
        let al = &u.result.alignment;
        write_file(
            &dir.join("alignments").join(speaker).join(format!("{}.tsv", u.utterance_id)),
            write_alignment_dump(al, inventory),
        )?;
        totals[u.speaker].0 += al.ops.len() as u64;
        totals[u.speaker].1 += al.total_cost;
        let choice: Vec<String> = u.result.choice.iter().map(usize::to_string).collect();
        variants.push_str(&format!("{speaker}\t{}\t{}\n", u.utterance_id, choice.join(",")));
    }
    if config.variant_rule == VariantRule::All {
        write_file(&dir.join("variants.tsv"), variants)?;
    }
    let mut summary = String::from("speaker_id\tutterances\tops\ttotal_cost\n");
    for (p, (ops, cost)) in out.profiles.iter().zip(totals) {
        summary.push_str(&format!("{}\t{}\t{ops}\t{cost}\n", p.speaker_id, p.utterance_count));
        let base = dir.join("profiles").join(&p.speaker_id);
        write_file(&base.with_extension("csv"), write_confusion(&p.matrix))?;
        write_file(&base.with_extension("json"), write_profile_json(p))?;
    }
    write_file(&dir.join("alignment_summary.tsv"), summary)
}

/// Phonemizes, aligns and writes per-speaker profiles.
pub fn cmd_align(manifest: &Manifest, config: &RunConfig) -> Result<AlignOutput> {
    let resources = Resources::load(config)?;
    align_stage(manifest, &resources, config)
}

fn align_stage(manifest: &Manifest, resources: &Resources, config: &RunConfig) -> Result<AlignOutput> {
    let phonemized = phonemize_corpus(manifest, resources, config)?;
    write_phonemize(&phonemized, manifest, &resources.inventory, &config.out_dir)?;
    oov_failure(&phonemized)?;
    let out = align_corpus(manifest, &phonemized, resources, config)?;
    write_align(&out, config, &resources.inventory, &config.out_dir)?;
    Ok(out)
}

/// Reads every `*.json` profile in `dir`, ordered by file name.
pub fn load_profiles(dir: &Path, inventory: Arc<PhonemeInventory>) -> Result<Vec<SpeakerProfile>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Read {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|source| Error::Read {
                path: dir.to_path_buf(),
                source,
            })?
            .path();
        if path.extension().is_some_and(|e| e == "json") {
            paths.push(path);
        }
    }
    paths.sort();
    paths
        .iter()
        .map(|p| parse_profile_json(&read_to_string(p)?, inventory.clone()).map_err(|e| e.in_file(p)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterOutput {
    pub result: ClusterResult,
    pub embedding: Vec<EmbeddingPoint>,
    pub tsne: TsneResult,
    /// Present when every speaker has an L1 label.
    pub purity: Option<f64>,
}

pub fn cluster_profiles(profiles: &[SpeakerProfile], config: &RunConfig) -> Result<ClusterOutput> {
    let vectors: Vec<_> = profiles
        .iter()
        .map(|p| vectorize(&p.speaker_id, &p.matrix, config.normalization))
        .collect();
    let result = kmeans(&vectors, &config.kmeans)?;
    let centroids = config.embed_centroids.then_some(&result);
    let (embedding, tsne) = embed_speakers(&vectors, centroids, &config.tsne)?;
    let labels: Option<BTreeMap<String, String>> = profiles
        .iter()
        .map(|p| p.l1_label.clone().map(|l| (p.speaker_id.clone(), l)))
        .collect();
    let purity = labels.map(|l| purity(&result, &l)).transpose()?;
    Ok(ClusterOutput {
        result,
        embedding,
        tsne,
        purity,
    })
}

pub fn write_cluster(out: &ClusterOutput, config: &RunConfig, dir: &Path) -> Result<()> {
    write_file(&dir.join("clusters.csv"), write_clusters_csv(&out.result))?;
    write_file(&dir.join("embedding.csv"), write_embedding_csv(&out.embedding))?;
    let summary = format!(
        "k\t{}\nseed\t{}\nnormalization\t{}\niterations\t{}\ninertia\t{}\ntsne_initial_kl\t{}\ntsne_final_kl\t{}\n",
        config.kmeans.k,
        out.result.seed,
        match config.normalization {
            Normalization::RawCounts => "raw",
            Normalization::RowFrequency => "row",
        },
        out.result.iterations,
        out.result.inertia,
        out.tsne.initial_kl,
        out.tsne.final_kl,
    );
    write_file(&dir.join("clustering.txt"), summary)?;
    if let Some(p) = out.purity {
        write_file(&dir.join("purity.txt"), format!("{p}\n"))?;
    }
    Ok(())
}

pub fn cmd_cluster(profiles: &[SpeakerProfile], config: &RunConfig) -> Result<ClusterOutput> {
    let out = cluster_profiles(profiles, config)?;
    write_cluster(&out, config, &config.out_dir)?;
    Ok(out)
}

/// One skipped TextGrid interval: (file as named in the manifest, interval
/// index, label, reason).
pub type Skip = (PathBuf, usize, String, String);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoadedAnnotations {
    /// Speaker id -> all of that speaker's records.
    pub sets: BTreeMap<String, AnnotationSet>,
    pub skips: Vec<Skip>,
}

/// Reads every annotation file the manifest references. A file shared by
/// several utterances of one speaker is read once.
pub fn load_annotations(
    manifest: &Manifest,
    inventory: &PhonemeInventory,
    config: &RunConfig,
) -> Result<LoadedAnnotations> {
    let mut out = LoadedAnnotations::default();
    for speaker in &manifest.speakers {
        let mut seen: Vec<&Path> = Vec::new();
        let mut set: Option<AnnotationSet> = None;
        for utt in &speaker.utterances {
            let Some(rel) = utt.annotation.as_deref() else {
                continue;
            };
            if seen.contains(&rel) {
                continue;
            }
            seen.push(rel);
            let path = manifest.resolve(rel);
            let text = read_to_string(&path)?;
            let is_textgrid = path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("textgrid"));
            let parsed = if is_textgrid {
                TextGrid::parse(&text).and_then(|grid| {
                    tier_annotations(
                        &grid,
                        &config.tier,
                        &config.label_convention,
                        &speaker.speaker_id,
                        &utt.utterance_id,
                        inventory,
                    )
                })
            } else {
                parse_annotation_csv(&text, &speaker.speaker_id, inventory).map(|s| (s, Default::default()))
            };
            let (records, report) = parsed.map_err(|e| e.in_file(&path))?;
            for (i, label, reason) in report.skipped {
                out.skips.push((rel.to_path_buf(), i, label, reason));
            }
            match &mut set {
                Some(s) => s.extend(records).map_err(|e| Error::from(e).in_file(&path))?,
                None => set = Some(records),
            }
        }
        if let Some(s) = set {
            out.sets.insert(speaker.speaker_id.clone(), s);
        }
    }
    Ok(out)
}

/// Pools ASR profiles per L1 label and compares them with the pooled
/// annotations of the same group's annotated speakers.
pub fn compare_groups(
    profiles: &[SpeakerProfile],
    annotations: &LoadedAnnotations,
    inventory: &Arc<PhonemeInventory>,
    config: &RunConfig,
) -> Result<Vec<GroupComparison>> {
    let mut groups: BTreeMap<String, (ConfusionMatrix, Option<ConfusionMatrix>)> = BTreeMap::new();
    for p in profiles {
        let l1 = p.l1_label.clone().unwrap_or_else(|| UNLABELLED.into());
        let (asr, ha) = groups
            .entry(l1)
            .or_insert_with(|| (ConfusionMatrix::zeros(inventory.clone()), None));
        *asr = asr.merge(&p.matrix)?;
        if let Some(set) = annotations.sets.get(&p.speaker_id) {
            let m = annotations_to_confusion(set, inventory.clone());
            *ha = Some(match ha.take() {
                Some(acc) => acc.merge(&m)?,
                None => m,
            });
        }
    }
    groups
        .into_iter()
        .map(|(l1, (asr, ha))| {
            Ok(GroupComparison {
                l1,
                table: compare(&asr, ha.as_ref(), &config.selection)?,
            })
        })
        .collect()
}

pub fn write_compare(
    groups: &[GroupComparison],
    profiles: &[SpeakerProfile],
    annotations: &LoadedAnnotations,
    inventory: &PhonemeInventory,
    dir: &Path,
) -> Result<()> {
    write_file(&dir.join("comparison.csv"), comparison_csv(groups, inventory))?;
    write_file(&dir.join("comparison.txt"), comparison_text(groups, inventory))?;
    write_file(&dir.join("speaker_rates.csv"), speaker_rates_csv(profiles))?;
    let mut skips = String::from("file\tinterval\tlabel\treason\n");
    for (path, i, label, reason) in &annotations.skips {
        skips.push_str(&format!("{}\t{i}\t{label}\t{reason}\n", path.display()));
    }
    write_file(&dir.join("annotation_skips.tsv"), skips)
}

/// Compares ASR profiles against the manifest's annotations, if any.
pub fn cmd_compare(
    profiles: &[SpeakerProfile],
    manifest: Option<&Manifest>,
    config: &RunConfig,
) -> Result<Vec<GroupComparison>> {
    let inventory = load_inventory(config)?;
    let annotations = match manifest {
        Some(m) => load_annotations(m, &inventory, config)?,
        None => LoadedAnnotations::default(),
    };
    let groups = compare_groups(profiles, &annotations, &inventory, config)?;
    write_compare(&groups, profiles, &annotations, &inventory, &config.out_dir)?;
    Ok(groups)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Confusion,
    Cost,
}

/// Renders a matrix CSV as an SVG heatmap.
pub fn cmd_heatmap(matrix: &Path, kind: MatrixKind, out: &Path, config: &RunConfig) -> Result<()> {
    let inventory = load_inventory(config)?;
    let text = read_to_string(matrix)?;
    let title = matrix
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let svg = match kind {
        MatrixKind::Confusion => {
            heatmap::confusion_svg(&parse_confusion(&text, inventory).map_err(|e| e.in_file(matrix))?, &title)
        }
        MatrixKind::Cost => {
            heatmap::cost_svg(&parse_cost_matrix(&text, inventory).map_err(|e| e.in_file(matrix))?, &title)
        }
    };
    write_file(out, svg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub align: AlignOutput,
    pub cluster: Option<ClusterOutput>,
    pub comparison: Vec<GroupComparison>,
}

/// The full pipeline. Configuration files, the manifest and every annotation
/// file are parsed before alignment starts.
pub fn run(manifest_path: &Path, config: &RunConfig) -> Result<RunOutput> {
    let resources = Resources::load(config)?;
    let manifest = Manifest::load(manifest_path)?;
    let annotations = load_annotations(&manifest, &resources.inventory, config)?;
    let dir = &config.out_dir;

    let align = align_stage(&manifest, &resources, config)?;
    write_file(&dir.join("heatmaps").join("costs.svg"), heatmap::cost_svg(&resources.costs, "costs"))?;
    for p in &align.profiles {
        write_file(
            &dir.join("heatmaps").join(format!("{}.svg", p.speaker_id)),
            heatmap::confusion_svg(&p.matrix, &p.speaker_id),
        )?;
    }

    let cluster = if config.cluster {
        Some(cmd_cluster(&align.profiles, config)?)
    } else {
        None
    };

    let comparison = compare_groups(&align.profiles, &annotations, &resources.inventory, config)?;
    write_compare(&comparison, &align.profiles, &annotations, &resources.inventory, dir)?;
    Ok(RunOutput {
        align,
        cluster,
        comparison,
    })
}

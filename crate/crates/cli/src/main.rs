use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phonvar::error::Result;
use phonvar::manifest::Manifest;
use phonvar::pipeline::{self, load_inventory, load_profiles, MatrixKind, OovMode, RunConfig};
use phonvar_core::alignment::{TieBreak, DEFAULT_VARIANT_CAP};
use phonvar_core::annotations::TargetSelection;
use phonvar_core::clustering::{Init, KMeansConfig, Normalization, TsneConfig};
use phonvar_core::lexicon::VariantRule;

/// Phoneme-level error analysis of ASR transcripts.
#[derive(Parser)]
#[command(name = "phonvar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert prompts and ASR transcripts to phoneme sequences.
    Phonemize {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Align expected and observed phonemes and build per-speaker profiles.
    Align {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Cluster speaker profiles and embed them in two dimensions.
    Cluster {
        /// Directory of profile JSON files written by `align`.
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long)]
        inventory: Option<PathBuf>,
        #[command(flatten)]
        cluster: ClusterArgs,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Compare ASR profiles with annotator judgements per L1 group.
    Compare {
        /// Directory of profile JSON files written by `align`.
        #[arg(long)]
        profiles: PathBuf,
        /// Manifest naming the annotation files; omit for ASR-only tables.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        inventory: Option<PathBuf>,
        #[command(flatten)]
        compare: CompareArgs,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Render a confusion or cost matrix CSV as an SVG heatmap.
    Heatmap {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Confusion)]
        kind: KindArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        inventory: Option<PathBuf>,
    },
    /// Run phonemize, align, heatmaps, cluster and compare in one go.
    Run {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cluster: ClusterArgs,
        #[command(flatten)]
        compare: CompareArgs,
        /// Skip clustering and embedding.
        #[arg(long)]
        no_cluster: bool,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Pronouncing dictionary (CMU format).
    #[arg(long)]
    lexicon: PathBuf,
    #[arg(long)]
    supplementary_lexicon: Option<PathBuf>,
    /// Cost matrix CSV; uniform costs when omitted.
    #[arg(long)]
    cost_matrix: Option<PathBuf>,
    /// Inventory override, one symbol per line.
    #[arg(long)]
    inventory: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OovArg::Fail)]
    oov_policy: OovArg,
    #[arg(long, value_enum, default_value_t = VariantArg::First)]
    variant_rule: VariantArg,
    /// Most variant combinations tried per utterance under `--variant-rule all`.
    #[arg(long, default_value_t = DEFAULT_VARIANT_CAP)]
    variant_cap: u64,
    /// Preference among equal-cost moves, e.g. `diag,del,ins`.
    #[arg(long, default_value = "diag,del,ins", value_parser = parse_tie_break)]
    tie_break: TieBreak,
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long, default_value_t = 6)]
    k: usize,
    /// Seed for both k-means and t-SNE.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = InitArg::KmeansPlusPlus)]
    init: InitArg,
    #[arg(long, default_value_t = 300)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value_t = NormArg::Raw)]
    normalization: NormArg,
    #[arg(long, default_value_t = 5.0)]
    perplexity: f64,
    #[arg(long, default_value_t = 200.0)]
    learning_rate: f64,
    #[arg(long, default_value_t = 1000)]
    tsne_iterations: usize,
    #[arg(long, default_value_t = 12.0)]
    early_exaggeration: f64,
    #[arg(long, default_value_t = 250)]
    exaggeration_iters: usize,
    /// Leave cluster centroids out of the embedding.
    #[arg(long)]
    no_centroids: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated target phonemes; overrides the lowest-recognition pick.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    /// Number of lowest-recognition targets per L1 group.
    #[arg(long, default_value_t = 3)]
    top_k: usize,
    /// Targets expected fewer times are never picked.
    #[arg(long, default_value_t = 20)]
    min_occurrences: u64,
    /// TextGrid tier holding phone annotations.
    #[arg(long, default_value = "phones")]
    tier: String,
    #[arg(long, default_value_t = ',')]
    label_separator: char,
    #[arg(long, default_value = "s")]
    substitution_code: String,
    #[arg(long, default_value = "d")]
    deletion_code: String,
    #[arg(long, default_value = "i")]
    insertion_code: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum OovArg {
    Fail,
    Skip,
    Supplementary,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    First,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    #[value(name = "kmeans++")]
    KmeansPlusPlus,
    Forgy,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Raw,
    Row,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Confusion,
    Cost,
}

fn parse_tie_break(s: &str) -> std::result::Result<TieBreak, String> {
    s.parse()
}

impl CorpusArgs {
    fn apply(&self, config: &mut RunConfig) {
        config.lexicon = Some(self.lexicon.clone());
        config.supplementary_lexicon = self.supplementary_lexicon.clone();
        config.cost_matrix = self.cost_matrix.clone();
        config.inventory = self.inventory.clone();
        config.oov_policy = match self.oov_policy {
            OovArg::Fail => OovMode::Fail,
            OovArg::Skip => OovMode::Skip,
            OovArg::Supplementary => OovMode::Supplementary,
        };
        config.variant_rule = match self.variant_rule {
            VariantArg::First => VariantRule::First,
            VariantArg::All => VariantRule::All,
        };
        config.variant_cap = self.variant_cap;
        config.tie_break = self.tie_break;
    }
}

impl ClusterArgs {
    fn apply(&self, config: &mut RunConfig) {
        config.kmeans = KMeansConfig {
            k: self.k,
            seed: self.seed,
            init: match self.init {
                InitArg::KmeansPlusPlus => Init::KMeansPlusPlus,
                InitArg::Forgy => Init::Forgy,
            },
            max_iter: self.max_iter,
            rel_tol: self.rel_tol,
        };
        config.tsne = TsneConfig {
            perplexity: self.perplexity,
            learning_rate: self.learning_rate,
            iterations: self.tsne_iterations,
            seed: self.seed,
            early_exaggeration: self.early_exaggeration,
            exaggeration_iters: self.exaggeration_iters,
        };
        config.normalization = match self.normalization {
            NormArg::Raw => Normalization::RawCounts,
            NormArg::Row => Normalization::RowFrequency,
        };
        config.embed_centroids = !self.no_centroids;
    }
}

impl CompareArgs {
    /// Needs the inventory already set on `config` to resolve `--targets`.
    fn apply(&self, config: &mut RunConfig) -> Result<()> {
        config.selection = if self.targets.is_empty() {
            TargetSelection::LowestRecognition {
                k: self.top_k,
                min_occurrences: self.min_occurrences,
            }
        } else {
            let inventory = load_inventory(config)?;
            let targets = self
                .targets
                .iter()
                .map(|t| inventory.strip_stress(t.trim()))
                .collect::<std::result::Result<_, _>>()?;
            TargetSelection::Explicit(targets)
        };
        config.tier = self.tier.clone();
        config.label_convention.separator = self.label_separator;
        config.label_convention.substitution = self.substitution_code.clone();
        config.label_convention.deletion = self.deletion_code.clone();
        config.label_convention.insertion = self.insertion_code.clone();
        Ok(())
    }
}

fn execute(command: Command) -> Result<()> {
    let mut config = RunConfig::default();
    match command {
        Command::Phonemize { corpus, out_dir } => {
            corpus.apply(&mut config);
            config.out_dir = out_dir;
            let manifest = Manifest::load(&corpus.manifest)?;
            let out = pipeline::cmd_phonemize(&manifest, &config)?;
            eprintln!("phonemized {} utterances", out.utterances.len());
        }
        Command::Align { corpus, out_dir } => {
            corpus.apply(&mut config);
            config.out_dir = out_dir;
            let manifest = Manifest::load(&corpus.manifest)?;
            let out = pipeline::cmd_align(&manifest, &config)?;
            eprintln!(
                "aligned {} utterances for {} speakers",
                out.utterances.len(),
                out.profiles.len()
            );
        }
        Command::Cluster { profiles, inventory, cluster, out_dir } => {
            config.inventory = inventory;
            cluster.apply(&mut config);
            config.out_dir = out_dir;
            let loaded = load_profiles(&profiles, load_inventory(&config)?)?;
            let out = pipeline::cmd_cluster(&loaded, &config)?;
            if let Some(p) = out.purity {
                eprintln!("purity {p}");
            }
        }
        Command::Compare { profiles, manifest, inventory, compare, out_dir } => {
            config.inventory = inventory;
            compare.apply(&mut config)?;
            config.out_dir = out_dir;
            let loaded = load_profiles(&profiles, load_inventory(&config)?)?;
            let manifest = manifest.as_deref().map(Manifest::load).transpose()?;
            pipeline::cmd_compare(&loaded, manifest.as_ref(), &config)?;
        }
        Command::Heatmap { matrix, kind, out, inventory } => {
            config.inventory = inventory;
            let kind = match kind {
                KindArg::Confusion => MatrixKind::Confusion,
                KindArg::Cost => MatrixKind::Cost,
            };
            pipeline::cmd_heatmap(&matrix, kind, &out, &config)?;
        }
        Command::Run { corpus, cluster, compare, no_cluster, out_dir } => {
            corpus.apply(&mut config);
            cluster.apply(&mut config);
            compare.apply(&mut config)?;
            config.cluster = !no_cluster;
            config.out_dir = out_dir;
            let out = pipeline::run(&corpus.manifest, &config)?;
            eprintln!(
                "aligned {} utterances for {} speakers",
                out.align.utterances.len(),
                out.align.profiles.len()
            );
            if let Some(p) = out.cluster.and_then(|c| c.purity) {
                eprintln!("purity {p}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| execute(cli.command)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(1),
    }
}

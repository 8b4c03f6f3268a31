use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::selection::Limits;

const LANGS: [&str; 3] = ["es", "fr", "it"];

#[derive(Debug, Parser)]
#[command(
    name = "cfgen",
    version,
    about = "Counterfactual gender-balanced fine-tuning data and gender-accuracy evaluation"
)]
pub struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, env = "CFGEN_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Worker threads; 0 uses all cores. Outputs do not depend on it.
    #[arg(long, global = true, env = "CFGEN_JOBS", default_value_t = 0)]
    pub jobs: usize,

    /// Suppress info and warning logs on stderr.
    #[arg(long, global = true, env = "CFGEN_QUIET")]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter a parallel corpus: gendered pairs for counterfactuals, or a
    /// neutral random sample.
    Select(SelectArgs),
    /// Swap the gendered pronoun of English CoNLL-U sentences.
    SwapSrc(SwapArgs),
    /// Train agreement potentials from a treebank.
    TrainMrf(TrainArgs),
    /// Generate target counterfactuals and the balanced GB corpus.
    CfGen(CfGenArgs),
    /// Mix corpus components into a fine-tuning set.
    Assemble(AssembleArgs),
    /// Score translations of a challenge set.
    Evaluate(EvaluateArgs),
    /// select, swap-src, train-mrf, cf-gen and assemble in one run.
    Pipeline(PipelineArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Select(_) => "select",
            Command::SwapSrc(_) => "swap-src",
            Command::TrainMrf(_) => "train-mrf",
            Command::CfGen(_) => "cf-gen",
            Command::Assemble(_) => "assemble",
            Command::Evaluate(_) => "evaluate",
            Command::Pipeline(_) => "pipeline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Gendered,
    Neutral,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LimitArgs {
    /// Maximum whitespace tokens per side of a gendered pair.
    #[arg(long, env = "CFGEN_MAX_TOKENS", default_value_t = 20)]
    pub max_tokens: usize,
    /// Maximum whitespace tokens per side of a neutral pair.
    #[arg(long, env = "CFGEN_MAX_TOKENS_NEUTRAL", default_value_t = 100)]
    pub max_tokens_neutral: usize,
    /// Maximum token-count ratio between the two sides.
    #[arg(long, env = "CFGEN_MAX_RATIO", default_value_t = 3.0)]
    pub max_ratio: f64,
}

impl LimitArgs {
    pub fn limits(&self) -> Limits {
        Limits {
            gendered_max_tokens: self.max_tokens,
            neutral_max_tokens: self.max_tokens_neutral,
            max_ratio: self.max_ratio,
        }
    }
}

impl Default for LimitArgs {
    fn default() -> Self {
        let l = Limits::default();
        LimitArgs {
            max_tokens: l.gendered_max_tokens,
            max_tokens_neutral: l.neutral_max_tokens,
            max_ratio: l.max_ratio,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelectArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Target language.
    #[arg(long, env = "CFGEN_LANG", value_parser = LANGS)]
    pub lang: String,
    /// English side as CoNLL-U.
    #[arg(long, requires = "tgt", conflicts_with = "corpus")]
    pub src: Option<PathBuf>,
    /// Target side as CoNLL-U, sentence-aligned with --src.
    #[arg(long, requires = "src")]
    pub tgt: Option<PathBuf>,
    /// Raw two-column TSV corpus (neutral mode only).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Profession lexicon (gendered mode).
    #[arg(long, env = "CFGEN_ANIMACY")]
    pub animacy: Option<PathBuf>,
    /// Maximum selections per profession (gendered mode).
    #[arg(long, env = "CFGEN_CAP", default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    /// Neutral sample size [default: 200 for es, 500 otherwise].
    #[arg(long, env = "CFGEN_SAMPLE")]
    pub sample: Option<usize>,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Output directory.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SwapArgs {
    /// English CoNLL-U.
    #[arg(long)]
    pub input: PathBuf,
    /// Output CoNLL-U; its manifest goes next to it.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    /// Treebank CoNLL-U; repeat for several files.
    #[arg(long, required = true)]
    pub treebank: Vec<PathBuf>,
    #[arg(long, env = "CFGEN_LANG", value_parser = LANGS)]
    pub lang: String,
    /// Add-k smoothing constant.
    #[arg(long, env = "CFGEN_SMOOTHING", default_value_t = 0.1)]
    pub smoothing: f64,
    /// Model file; its manifest goes next to it.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    /// Profession lexicon.
    #[arg(long, env = "CFGEN_ANIMACY")]
    pub animacy: PathBuf,
    /// Extra inflection rows, merged over the builtin lexicon.
    #[arg(long, env = "CFGEN_INFLECTIONS")]
    pub inflections: Option<PathBuf>,
    /// Suffix rules replacing the builtin set.
    #[arg(long, env = "CFGEN_RULES")]
    pub rules: Option<PathBuf>,
    /// Contraction table replacing the builtin one.
    #[arg(long, env = "CFGEN_CONTRACTIONS")]
    pub contractions: Option<PathBuf>,
    /// Log bonus for keeping a token's original tag.
    #[arg(long, env = "CFGEN_BETA", default_value_t = 2.0)]
    pub beta: f64,
    /// Drop counterfactuals flagged by the pronoun hazard lint.
    #[arg(long, env = "CFGEN_STRICT_LINT")]
    pub strict_lint: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CfGenArgs {
    /// Selected English CoNLL-U.
    #[arg(long)]
    pub src: PathBuf,
    /// Selected target CoNLL-U.
    #[arg(long)]
    pub tgt: PathBuf,
    /// Pronoun-swapped English CoNLL-U from swap-src; swapped here if absent.
    #[arg(long)]
    pub swapped: Option<PathBuf>,
    /// Trained agreement model.
    #[arg(long, env = "CFGEN_MRF")]
    pub mrf: PathBuf,
    #[arg(long, env = "CFGEN_LANG", value_parser = LANGS)]
    pub lang: String,
    #[command(flatten)]
    pub gen: GenArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AssembleArgs {
    /// TOML recipe; relative component paths are taken from its directory.
    #[arg(long)]
    pub recipe: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvaluateArgs {
    /// Challenge set TSV.
    #[arg(long)]
    pub challenge: PathBuf,
    /// Stereotype labels, one per item, when the challenge set has four columns.
    #[arg(long)]
    pub stereotypes: Option<PathBuf>,
    /// Translations, one per line, aligned with the challenge set.
    #[arg(long)]
    pub translations: PathBuf,
    #[arg(long, env = "CFGEN_ANIMACY")]
    pub animacy: PathBuf,
    #[arg(long, env = "CFGEN_LANG", value_parser = LANGS)]
    pub lang: String,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PipelineArgs {
    /// English CoNLL-U of the gendered candidates.
    #[arg(long)]
    pub src: PathBuf,
    /// Target CoNLL-U of the gendered candidates.
    #[arg(long)]
    pub tgt: PathBuf,
    /// Raw TSV corpus for the neutral Random component.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Handcrafted TSV for the SB component.
    #[arg(long)]
    pub handcrafted: Option<PathBuf>,
    /// Treebank for the agreement model; repeatable.
    #[arg(long, required_unless_present = "mrf", conflicts_with = "mrf")]
    pub treebank: Vec<PathBuf>,
    /// Pretrained agreement model instead of --treebank.
    #[arg(long, env = "CFGEN_MRF")]
    pub mrf: Option<PathBuf>,
    #[arg(long, env = "CFGEN_LANG", value_parser = LANGS)]
    pub lang: String,
    #[arg(long, env = "CFGEN_CAP", default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    /// Neutral sample size [default: 200 for es, 500 otherwise].
    #[arg(long, env = "CFGEN_SAMPLE")]
    pub sample: Option<usize>,
    #[arg(long, env = "CFGEN_SMOOTHING", default_value_t = 0.1)]
    pub smoothing: f64,
    #[command(flatten)]
    pub gen: GenArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

/// Neutral sample size used when none is given.
pub fn default_sample(lang: &str) -> usize {
    if lang == "es" {
        200
    } else {
        500
    }
}

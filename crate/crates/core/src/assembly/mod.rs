//! Fine-tuning corpora: balanced original/counterfactual pairs, hazard
//! lint, handcrafted data and the seeded mix of components.

mod balance;
mod lint;
mod mix;

pub use balance::{build_balanced_dataset, BalancedDataset};
pub use lint::{
    count_lint_tsv, lint_counterfactual_pair, subject_pronouns, write_lint_tsv, LintFlag, LintKind,
};
pub use mix::{
    load_handcrafted, mix_corpora, ComponentCount, ComponentKind, ComponentSpec, DatasetRecipe,
    MixManifest, MixedCorpus, OutputOptions,
};

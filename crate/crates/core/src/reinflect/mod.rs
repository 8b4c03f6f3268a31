//! Realizing new agreement tags as surface forms: lexicon lookup, suffix
//! rules, determiner context forms, contractions and detokenization.

mod articles;
mod contraction;
pub mod detok;
mod generate;
mod rules;
mod token;

pub use articles::repair_articles;
pub use contraction::{apply_contractions, contract_sentence};
pub use detok::{detokenize, SurfaceToken};
pub use generate::{
    Counterfactual, CounterfactualGenerator, ReinflectionReport, Skip, SkipReason,
    TargetCounterfactual, TokenRecord,
};
pub use rules::{Direction, RuleSet, SuffixRule};
pub use token::{reinflect_token, FormSource, Reinflected};

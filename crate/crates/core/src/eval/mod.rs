//! Gender-accuracy evaluation of translations of a challenge set.

mod challenge;
mod extract;
mod metrics;

pub use challenge::{
    load_challenge, parse_challenge, parse_stereotypes, ChallengeItem, Stereotype,
};
pub use extract::{extract_predicted_gender, DeterminerTable, GenderPrediction};
pub use metrics::{audit_tsv, compute_metrics, Confusion, MetricsReport};

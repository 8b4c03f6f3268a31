//! Choosing gendered pairs for counterfactual generation and a neutral
//! random sample of the corpus.

mod filter;
mod sample;

pub use filter::{
    filter_gendered, filter_neutral, FilterVerdict, GenderedSelection, Limits, RejectReason,
};
pub use sample::{random_sample, sample_per_profession, Reservoir};

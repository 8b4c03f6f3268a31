//! Tree-shaped Markov random field over agreement tags. Given a gender
//! intervention on one token, finds which other tokens must change.

mod infer;
mod model;
mod tags;

pub use infer::{infer_tags, mark_reinflection_targets, InferOptions, Intervention};
pub use model::AgreementModel;
pub use tags::{Tag, TagSpace};

//! Counterfactual data augmentation for gender-balanced machine translation
//! fine-tuning, and gender-accuracy evaluation on a challenge set.

pub mod assembly;
pub mod cli;
pub mod corpus;
mod data;
pub mod error;
pub mod eval;
pub mod mrf;
pub mod reinflect;
pub mod selection;
pub mod swap;

pub use error::{Error, Result};

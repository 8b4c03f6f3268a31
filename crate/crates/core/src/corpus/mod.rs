//! Core data types and readers/writers for CoNLL-U, parallel corpora and
//! lexicons.

pub mod conllu;
pub mod features;
pub mod lexicon;
pub mod parallel;
pub(crate) mod tsv;

pub use conllu::{
    parse_conllu, serialize_conllu, AnnotatedSentence, ConlluReader, Multiword, Token,
};
pub use features::{Gender, MorphFeatures, Number};
pub use lexicon::{
    english_pronoun_gender, AnimacyLexicon, ContractionTable, GenderedForms, InflectionLexicon,
};
pub use parallel::{Origin, PairLines, ParallelPair};

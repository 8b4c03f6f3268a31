//! Config tables shipped with the crate.

pub const CONTRACTIONS: &str = include_str!("../data/contractions.tsv");
pub const SUFFIX_RULES: &str = include_str!("../data/suffix_rules.tsv");
pub const DETERMINERS: &str = include_str!("../data/determiners.tsv");
pub const DETERMINER_FORMS: &str = include_str!("../data/determiner_forms.tsv");

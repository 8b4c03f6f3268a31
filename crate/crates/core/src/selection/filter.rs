use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{english_pronoun_gender, AnimacyLexicon, Gender, Number, ParallelPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RejectReason {
    Length,
    LengthRatio,
    Animacy,
    Wellformedness,
    ProperNoun,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectReason::Length => "Length",
            RejectReason::LengthRatio => "LengthRatio",
            RejectReason::Animacy => "Animacy",
            RejectReason::Wellformedness => "Wellformedness",
            RejectReason::ProperNoun => "ProperNoun",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for RejectReason {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Length" => RejectReason::Length,
            "LengthRatio" => RejectReason::LengthRatio,
            "Animacy" => RejectReason::Animacy,
            "Wellformedness" => RejectReason::Wellformedness,
            "ProperNoun" => RejectReason::ProperNoun,
            other => return Err(format!("unknown reject reason `{other}`")),
        })
    }
}

/// Outcome of a filter: every failed criterion, as a set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterVerdict {
    pub reasons: BTreeSet<RejectReason>,
}

impl FilterVerdict {
    pub fn accepted(&self) -> bool {
        self.reasons.is_empty()
    }

    fn reject_if(&mut self, failed: bool, reason: RejectReason) {
        if failed {
            self.reasons.insert(reason);
        }
    }

    /// Comma-separated reason list, empty when accepted.
    pub fn reasons_label(&self) -> String {
        self.reasons
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Numeric thresholds of the selection criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Limits {
    /// Maximum whitespace tokens on the English side of gendered pairs.
    pub gendered_max_tokens: usize,
    /// Maximum whitespace tokens on the English side of neutral pairs.
    pub neutral_max_tokens: usize,
    /// Maximum ratio between the token counts of the two sides.
    pub max_ratio: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            gendered_max_tokens: 20,
            neutral_max_tokens: 100,
            max_ratio: 3.0,
        }
    }
}

/// A pair accepted for counterfactual generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenderedSelection {
    pub pair: ParallelPair,
    /// Index of the single gendered pronoun in the English sentence.
    pub pronoun_index: usize,
    /// Index of the single profession noun in the English sentence.
    pub profession_index: usize,
    pub profession_lemma: String,
}

impl GenderedSelection {
    pub fn pronoun_gender(&self) -> Gender {
        let t = self
            .pair
            .src
            .token(self.pronoun_index)
            .expect("pronoun index in range");
        english_pronoun_gender(&t.surface).expect("selection holds a gendered pronoun")
    }
}

impl AsRef<ParallelPair> for GenderedSelection {
    fn as_ref(&self) -> &ParallelPair {
        &self.pair
    }
}

fn whitespace_tokens(s: &str) -> usize {
    s.split_whitespace().count()
}

fn ratio_ok(src: &str, tgt: &str, max_ratio: f64) -> bool {
    let (a, b) = (whitespace_tokens(src), whitespace_tokens(tgt));
    if a == 0 || b == 0 {
        return false;
    }
    let (hi, lo) = (a.max(b) as f64, a.min(b) as f64);
    hi / lo <= max_ratio
}

/// Starts with a capital letter and ends with `.`, `!` or `?`.
fn well_formed(s: &str) -> bool {
    let s = s.trim();
    let starts = s.chars().next().is_some_and(char::is_uppercase);
    let ends = s
        .chars()
        .last()
        .is_some_and(|c| matches!(c, '.' | '!' | '?'));
    starts && ends
}

fn length_ok(src: &str, max_tokens: usize) -> bool {
    whitespace_tokens(src) <= max_tokens
}

/// Criteria for the neutral random sample: English length, length ratio
/// and English well-formedness.
pub fn filter_neutral(pair: &ParallelPair, limits: &Limits) -> FilterVerdict {
    filter_neutral_with_bound(pair, limits, limits.neutral_max_tokens)
}

pub(crate) fn filter_neutral_with_bound(
    pair: &ParallelPair,
    limits: &Limits,
    max_tokens: usize,
) -> FilterVerdict {
    let mut v = FilterVerdict::default();
    v.reject_if(!length_ok(pair.src_raw(), max_tokens), RejectReason::Length);
    v.reject_if(
        !ratio_ok(pair.src_raw(), pair.tgt_raw(), limits.max_ratio),
        RejectReason::LengthRatio,
    );
    v.reject_if(!well_formed(pair.src_raw()), RejectReason::Wellformedness);
    v
}

/// Selection criteria for gendered pairs. Every failed criterion is listed.
///
/// Animacy requires exactly one pronoun from {he, him, his, she, her} and
/// exactly one token whose lemma is a listed profession; that token must
/// be a singular NOUN. The English side needs annotation for Animacy and
/// ProperNoun; an unannotated pair fails Animacy.
pub fn filter_gendered(
    pair: &ParallelPair,
    lex: &AnimacyLexicon,
    limits: &Limits,
) -> (FilterVerdict, Option<GenderedSelection>) {
    let mut v = filter_neutral_with_bound(pair, limits, limits.gendered_max_tokens);

    let src = &pair.src;
    let pronouns: Vec<usize> = src
        .tokens
        .iter()
        .filter(|t| english_pronoun_gender(&t.surface).is_some())
        .map(|t| t.index)
        .collect();
    let professions: Vec<usize> = src
        .tokens
        .iter()
        .filter(|t| lex.contains(&t.lemma))
        .map(|t| t.index)
        .collect();
    let profession_ok = match professions.as_slice() {
        [i] => {
            let t = src.token(*i).expect("index from the same sentence");
            t.upos == "NOUN" && t.feats.number() == Some(Number::Sing)
        }
        _ => false,
    };
    v.reject_if(pronouns.len() != 1 || !profession_ok, RejectReason::Animacy);
    v.reject_if(
        src.tokens.iter().any(|t| t.upos == "PROPN"),
        RejectReason::ProperNoun,
    );

    if !v.accepted() {
        return (v, None);
    }
    let profession_index = professions[0];
    let selection = GenderedSelection {
        pair: pair.clone(),
        pronoun_index: pronouns[0],
        profession_index,
        profession_lemma: src
            .token(profession_index)
            .expect("checked above")
            .lemma
            .to_lowercase(),
    };
    (v, Some(selection))
}

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::corpus::{AnnotatedSentence, Gender, ParallelPair};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LintKind {
    /// The swapped English pronoun and the target subject pronoun disagree.
    PronounMappingHazard,
    /// The counterfactual target is the same string as the original.
    IdenticalCounterfactual,
}

impl fmt::Display for LintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintFlag {
    pub pair_id: String,
    pub kind: LintKind,
    pub detail: String,
}

fn pronoun_table(lang: &str) -> &'static [(&'static str, Gender)] {
    match lang {
        "en" => &[("he", Gender::Masc), ("she", Gender::Fem)],
        "fr" => &[("il", Gender::Masc), ("elle", Gender::Fem)],
        "es" => &[("él", Gender::Masc), ("ella", Gender::Fem)],
        "it" => &[
            ("lui", Gender::Masc),
            ("egli", Gender::Masc),
            ("lei", Gender::Fem),
            ("ella", Gender::Fem),
        ],
        _ => &[],
    }
}

/// Third-person singular subject pronouns of a sentence, in order. With
/// annotation, a target token must be attached as a subject (or carry no
/// relation); without it, words are split at non-letters.
pub fn subject_pronouns(sent: &AnnotatedSentence) -> Vec<(String, Gender)> {
    let table = pronoun_table(&sent.lang);
    let lookup = |w: &str| {
        let lower = w.to_lowercase();
        table
            .iter()
            .find(|(p, _)| *p == lower)
            .map(|&(_, g)| (w.to_owned(), g))
    };
    if sent.is_annotated() {
        sent.tokens
            .iter()
            .filter(|t| {
                sent.lang == "en"
                    || t.deprel.starts_with("nsubj")
                    || t.deprel.is_empty()
                    || t.deprel == "_"
            })
            .filter_map(|t| lookup(&t.surface))
            .collect()
    } else {
        sent.raw
            .split(|c: char| !c.is_alphabetic())
            .filter_map(lookup)
            .collect()
    }
}

fn only(pronouns: &[(String, Gender)]) -> Option<(&str, Gender)> {
    let (first, g) = pronouns.first()?;
    pronouns
        .iter()
        .all(|(_, h)| h == g)
        .then_some((first.as_str(), *g))
}

/// Flags a pair whose English subject pronouns are all of one gender while
/// the target's are all of the other, e.g. *She didn't wait* / *Il n'a pas
/// attendu*.
pub fn lint_counterfactual_pair(pair: &ParallelPair) -> Vec<LintFlag> {
    let (src, tgt) = (subject_pronouns(&pair.src), subject_pronouns(&pair.tgt));
    let (Some((en, en_g)), Some((tg, tg_g))) = (only(&src), only(&tgt)) else {
        return Vec::new();
    };
    if en_g == tg_g {
        return Vec::new();
    }
    vec![LintFlag {
        pair_id: pair.id.clone(),
        kind: LintKind::PronounMappingHazard,
        detail: format!("English `{en}` ({en_g}) aligned with target `{tg}` ({tg_g})"),
    }]
}

/// `pair_id \t kind \t detail` lines with a header.
pub fn write_lint_tsv(flags: &[LintFlag]) -> String {
    let mut out = String::from("pair_id\tkind\tdetail\n");
    for f in flags {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            f.pair_id,
            f.kind,
            f.detail.replace(['\t', '\n'], " ")
        ));
    }
    out
}

/// Counts of each flag kind in a file written by [`write_lint_tsv`].
pub fn count_lint_tsv(text: &str) -> Result<BTreeMap<String, usize>> {
    let mut counts = BTreeMap::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let kind = line
            .split('\t')
            .nth(1)
            .ok_or_else(|| Error::format(i + 1, "expected `pair_id \\t kind \\t detail`"))?;
        *counts.entry(kind.to_owned()).or_insert(0) += 1;
    }
    Ok(counts)
}

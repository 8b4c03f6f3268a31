use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use crate::corpus::tsv::records;
use crate::corpus::Gender;
use crate::error::{in_file, read_to_string, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    MascToFem,
    FemToMasc,
}

impl Direction {
    /// Direction that produces `target`.
    pub fn towards(target: Gender) -> Direction {
        match target {
            Gender::Fem => Direction::MascToFem,
            Gender::Masc => Direction::FemToMasc,
        }
    }

    fn parse(s: &str) -> Option<Direction> {
        match s {
            "M>F" => Some(Direction::MascToFem),
            "F>M" => Some(Direction::FemToMasc),
            _ => None,
        }
    }
}

/// Rewrites a word ending: `match_suffix` → `replace_suffix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRule {
    pub lang: String,
    /// Allowed upos values; empty means any.
    pub pos_scope: BTreeSet<String>,
    pub match_suffix: String,
    pub replace_suffix: String,
    pub direction: Direction,
    pub priority: i32,
}

impl SuffixRule {
    fn applies(&self, lang: &str, upos: &str, lower: &str, direction: Direction) -> bool {
        self.lang == lang
            && self.direction == direction
            && (self.pos_scope.is_empty() || self.pos_scope.contains(upos))
            && lower.ends_with(&self.match_suffix)
            && lower.len() > self.match_suffix.len()
    }
}

/// Ordered suffix rules for several languages.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<SuffixRule>,
}

fn suffix_col(s: &str) -> String {
    if s == "_" {
        String::new()
    } else {
        s.to_lowercase()
    }
}

impl RuleSet {
    /// Parses `lang \t pos \t match \t replace \t M>F|F>M \t priority` rows.
    /// `pos` is a comma list or `*`; `_` is the empty suffix. Priorities must
    /// be unique within a language and direction.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        let mut seen = HashSet::new();
        for (line, cols) in records(text) {
            let bad = |msg: String| Error::Lexicon(format!("line {line}: {msg}"));
            if cols.len() != 6 {
                return Err(bad(format!("expected 6 columns, found {}", cols.len())));
            }
            let direction = Direction::parse(cols[4])
                .ok_or_else(|| bad(format!("bad direction `{}`", cols[4])))?;
            let priority: i32 = cols[5]
                .parse()
                .map_err(|_| bad(format!("bad priority `{}`", cols[5])))?;
            if !seen.insert((cols[0].to_owned(), direction, priority)) {
                return Err(bad(format!(
                    "priority {priority} used twice for {} {}",
                    cols[0], cols[4]
                )));
            }
            let pos_scope = if cols[1] == "*" {
                BTreeSet::new()
            } else {
                cols[1].split(',').map(|p| p.trim().to_owned()).collect()
            };
            rules.push(SuffixRule {
                lang: cols[0].to_owned(),
                pos_scope,
                match_suffix: suffix_col(cols[2]),
                replace_suffix: suffix_col(cols[3]),
                direction,
                priority,
            });
        }
        Ok(RuleSet { rules })
    }

    pub fn load(path: &Path) -> Result<Self> {
        in_file(path, Self::from_tsv(&read_to_string(path)?))
    }

    /// Rules shipped with the crate for fr, es and it.
    pub fn builtin() -> Self {
        Self::from_tsv(crate::data::SUFFIX_RULES).expect("builtin suffix rules are valid")
    }

    pub fn rules(&self) -> &[SuffixRule] {
        &self.rules
    }

    /// The winning rule for a word: longest matching suffix, then highest
    /// priority. The word itself must be longer than the suffix.
    pub fn find(
        &self,
        lang: &str,
        upos: &str,
        word: &str,
        direction: Direction,
    ) -> Option<&SuffixRule> {
        let lower = word.to_lowercase();
        self.rules
            .iter()
            .filter(|r| r.applies(lang, upos, &lower, direction))
            .max_by_key(|r| (r.match_suffix.chars().count(), r.priority))
    }

    /// Rewritten lowercase word and the rule used.
    pub fn apply(
        &self,
        lang: &str,
        upos: &str,
        word: &str,
        direction: Direction,
    ) -> Option<(String, &SuffixRule)> {
        let rule = self.find(lang, upos, word, direction)?;
        let lower = word.to_lowercase();
        let stem = &lower[..lower.len() - rule.match_suffix.len()];
        Some((format!("{stem}{}", rule.replace_suffix), rule))
    }
}

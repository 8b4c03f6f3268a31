use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::corpus::Gender;
use crate::error::{in_file, read_to_string, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stereotype {
    Pro,
    Anti,
    Neither,
}

impl Stereotype {
    pub fn parse(s: &str) -> Option<Stereotype> {
        match s.trim().to_lowercase().as_str() {
            "pro" => Some(Stereotype::Pro),
            "anti" => Some(Stereotype::Anti),
            "neither" | "none" | "neutral" => Some(Stereotype::Neither),
            _ => None,
        }
    }
}

impl fmt::Display for Stereotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stereotype::Pro => "pro",
            Stereotype::Anti => "anti",
            Stereotype::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChallengeItem {
    pub gold: Gender,
    /// Whitespace-token position of the entity in `source`, as given.
    pub entity_index: usize,
    pub source: String,
    pub entity_word: String,
    pub stereotype: Stereotype,
}

fn parse_gold(s: &str) -> Option<Gender> {
    match s.trim().to_lowercase().as_str() {
        "male" | "m" | "masc" => Some(Gender::Masc),
        "female" | "f" | "fem" => Some(Gender::Fem),
        _ => None,
    }
}

pub(crate) fn contains_word(haystack: &str, word: &str) -> bool {
    let word = word.to_lowercase();
    let hay = haystack.to_lowercase();
    hay.match_indices(&word).any(|(i, m)| {
        let before = hay[..i].chars().next_back();
        let after = hay[i + m.len()..].chars().next();
        !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
    })
}

/// Parses `gold \t entity_index \t source \t entity_word [\t stereotype]`.
/// Without the fifth column the stereotypes must be supplied separately,
/// one per line, in the same order.
pub fn parse_challenge(
    text: &str,
    stereotypes: Option<&[Stereotype]>,
) -> Result<Vec<ChallengeItem>> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if !(4..=5).contains(&cols.len()) {
            return Err(Error::format(
                lineno,
                format!("expected 4 or 5 columns, found {}", cols.len()),
            ));
        }
        let gold = parse_gold(cols[0])
            .ok_or_else(|| Error::format(lineno, format!("bad gold gender `{}`", cols[0])))?;
        let entity_index = cols[1]
            .trim()
            .parse()
            .map_err(|_| Error::format(lineno, format!("bad entity index `{}`", cols[1])))?;
        let (source, entity_word) = (cols[2].trim(), cols[3].trim());
        if !contains_word(source, entity_word) {
            return Err(Error::format(
                lineno,
                format!("entity `{entity_word}` does not occur in the sentence"),
            ));
        }
        let stereotype = match (cols.get(4), stereotypes) {
            (Some(s), _) => Stereotype::parse(s)
                .ok_or_else(|| Error::format(lineno, format!("bad stereotype `{s}`")))?,
            (None, Some(list)) => *list.get(items.len()).ok_or_else(|| {
                Error::format(lineno, "stereotype list is shorter than the challenge set")
            })?,
            (None, None) => {
                return Err(Error::format(
                    lineno,
                    "no stereotype column and no stereotype file",
                ))
            }
        };
        items.push(ChallengeItem {
            gold,
            entity_index,
            source: source.to_owned(),
            entity_word: entity_word.to_owned(),
            stereotype,
        });
    }
    if let Some(list) = stereotypes {
        if list.len() != items.len() {
            return Err(Error::Config(format!(
                "{} stereotypes for {} challenge items",
                list.len(),
                items.len()
            )));
        }
    }
    Ok(items)
}

/// One stereotype label per non-blank line.
pub fn parse_stereotypes(text: &str) -> Result<Vec<Stereotype>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            Stereotype::parse(l)
                .ok_or_else(|| Error::format(i + 1, format!("bad stereotype `{}`", l.trim())))
        })
        .collect()
}

pub fn load_challenge(path: &Path, stereotypes: Option<&Path>) -> Result<Vec<ChallengeItem>> {
    let labels = match stereotypes {
        Some(p) => Some(in_file(p, parse_stereotypes(&read_to_string(p)?))?),
        None => None,
    };
    in_file(
        path,
        parse_challenge(&read_to_string(path)?, labels.as_deref()),
    )
}

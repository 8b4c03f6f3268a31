use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::corpus::tsv::records;
use crate::corpus::{AnimacyLexicon, Gender};
use crate::error::{Error, Result};
use crate::eval::challenge::ChallengeItem;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenderPrediction {
    /// None is Unknown.
    pub predicted: Option<Gender>,
    /// The target form found in the translation, if any.
    pub matched_form: Option<String>,
}

impl GenderPrediction {
    fn unknown(matched_form: Option<String>) -> Self {
        GenderPrediction {
            predicted: None,
            matched_form,
        }
    }
}

/// Articles and demonstratives that reveal the gender of the next word.
#[derive(Debug, Clone, Default)]
pub struct DeterminerTable {
    map: BTreeMap<(String, String), Gender>,
}

impl DeterminerTable {
    /// Parses `lang \t surface \t Masc|Fem` rows.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (line, cols) in records(text) {
            let [lang, surface, gender] = cols[..] else {
                return Err(Error::Lexicon(format!("line {line}: expected 3 columns")));
            };
            let g = Gender::parse(gender)
                .ok_or_else(|| Error::Lexicon(format!("line {line}: bad gender `{gender}`")))?;
            map.insert((lang.to_owned(), surface.to_lowercase()), g);
        }
        Ok(DeterminerTable { map })
    }

    pub fn builtin() -> &'static Self {
        static TABLE: OnceLock<DeterminerTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            Self::from_tsv(crate::data::DETERMINERS).expect("builtin determiner table is valid")
        })
    }

    pub fn gender(&self, lang: &str, word: &str) -> Option<Gender> {
        self.map
            .get(&(lang.to_owned(), word.to_lowercase()))
            .copied()
    }
}

/// Maximal runs of letters, lowercased, with their original text.
fn words(s: &str) -> Vec<(String, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (start, c.is_alphabetic()) {
            (None, true) => start = Some(i),
            (Some(b), false) => {
                out.push((s[b..i].to_lowercase(), &s[b..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Finds the entity's gendered target form in a translation. Both forms are
/// matched as whole word sequences, case-insensitively; at each position the
/// longest form wins and the first position with a match decides. A form
/// shared by both genders is resolved by the word right before it through
/// the builtin determiner table.
pub fn extract_predicted_gender(
    item: &ChallengeItem,
    translation: &str,
    lex: &AnimacyLexicon,
    lang: &str,
) -> Result<GenderPrediction> {
    let entity = item.entity_word.to_lowercase();
    let forms = lex.forms(&entity, lang).ok_or_else(|| {
        Error::Config(format!(
            "profession `{}` has no {lang} forms in the animacy lexicon",
            item.entity_word
        ))
    })?;
    let mut candidates: Vec<(Vec<String>, Option<Gender>)> = if forms.is_epicene() {
        vec![(words(&forms.masc).into_iter().map(|w| w.0).collect(), None)]
    } else {
        [
            (forms.masc.as_str(), Gender::Masc),
            (forms.fem.as_str(), Gender::Fem),
        ]
        .into_iter()
        .map(|(f, g)| (words(f).into_iter().map(|w| w.0).collect(), Some(g)))
        .collect()
    };
    candidates.retain(|(w, _)| !w.is_empty());
    candidates.sort_by_key(|(w, _)| {
        std::cmp::Reverse((w.len(), w.iter().map(|s| s.chars().count()).sum::<usize>()))
    });

    let text = words(translation);
    for start in 0..text.len() {
        for (form, gender) in &candidates {
            let end = start + form.len();
            if end > text.len() || text[start..end].iter().map(|w| &w.0).ne(form.iter()) {
                continue;
            }
            let matched = text[start..end]
                .iter()
                .map(|w| w.1)
                .collect::<Vec<_>>()
                .join(" ");
            let predicted = gender.or_else(|| {
                start
                    .checked_sub(1)
                    .and_then(|p| DeterminerTable::builtin().gender(lang, &text[p].0))
            });
            return Ok(match predicted {
                Some(g) => GenderPrediction {
                    predicted: Some(g),
                    matched_form: Some(matched),
                },
                None => GenderPrediction::unknown(Some(matched)),
            });
        }
    }
    Ok(GenderPrediction::unknown(None))
}

//! Opposite-gender English sentences by pronoun replacement.

use crate::corpus::{english_pronoun_gender, AnnotatedSentence, Gender, Token};
use crate::error::{Error, Result};

/// Replacement for one pronoun of the swap set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapRule {
    pub from: &'static str,
    pub to_possessive: Option<&'static str>,
    pub to_nonpossessive: Option<&'static str>,
}

pub const SWAP_RULES: [SwapRule; 5] = [
    SwapRule {
        from: "he",
        to_possessive: None,
        to_nonpossessive: Some("she"),
    },
    SwapRule {
        from: "she",
        to_possessive: None,
        to_nonpossessive: Some("he"),
    },
    SwapRule {
        from: "him",
        to_possessive: None,
        to_nonpossessive: Some("her"),
    },
    SwapRule {
        from: "his",
        to_possessive: Some("her"),
        to_nonpossessive: Some("her"),
    },
    SwapRule {
        from: "her",
        to_possessive: Some("his"),
        to_nonpossessive: Some("him"),
    },
];

fn is_possessive(t: &Token) -> bool {
    t.upos == "DET" || t.feats.get("Poss") == Some("Yes")
}

/// Target pronoun for a token of the swap set, lowercase.
pub fn swapped_pronoun(t: &Token) -> Option<&'static str> {
    let lower = t.surface.to_lowercase();
    let rule = SWAP_RULES.iter().find(|r| r.from == lower)?;
    if is_possessive(t) {
        rule.to_possessive.or(rule.to_nonpossessive)
    } else {
        rule.to_nonpossessive.or(rule.to_possessive)
    }
}

/// Applies the case pattern of `model` (lower, Title or UPPER) to `word`.
pub(crate) fn match_case(model: &str, word: &str) -> String {
    let mut letters = model.chars().filter(|c| c.is_alphabetic());
    let Some(first) = letters.next() else {
        return word.to_owned();
    };
    let rest: Vec<char> = letters.collect();
    if first.is_uppercase() && !rest.is_empty() && rest.iter().all(|c| c.is_uppercase()) {
        return word.to_uppercase();
    }
    if first.is_uppercase() {
        let mut chars = word.chars();
        return match chars.next() {
            Some(c) => c
                .to_uppercase()
                .chain(chars.flat_map(char::to_lowercase))
                .collect(),
            None => String::new(),
        };
    }
    word.to_lowercase()
}

/// Swaps the gender of the pronoun at `pronoun_index`: he↔she, him→her,
/// his→her, and her→his when possessive (upos DET or Poss=Yes), else
/// her→him. Only that token changes; `raw` is regenerated.
pub fn swap_english_gender(
    sent: &AnnotatedSentence,
    pronoun_index: usize,
) -> Result<AnnotatedSentence> {
    let token = sent
        .token(pronoun_index)
        .ok_or_else(|| Error::Contract(format!("pronoun index {pronoun_index} out of range")))?;
    let (Some(gender), Some(replacement)) = (
        english_pronoun_gender(&token.surface),
        swapped_pronoun(token),
    ) else {
        return Err(Error::Contract(format!(
            "token `{}` is not a swappable pronoun",
            token.surface
        )));
    };
    let new_surface = match_case(&token.surface, replacement);
    let new_gender = gender.opposite();

    let mut out = sent.clone();
    let old_surface = token.surface.clone();
    let t = out.token_mut(pronoun_index).expect("index checked above");
    t.surface = new_surface.clone();
    if t.feats.gender().is_some() {
        t.feats.set_gender(Some(new_gender));
    }
    let lemma = t.lemma.to_lowercase();
    if lemma == "he" || lemma == "she" {
        let base = if new_gender == Gender::Masc {
            "he"
        } else {
            "she"
        };
        t.lemma = match_case(&t.lemma, base);
    }

    let raw = splice_raw(sent, pronoun_index, &old_surface, &new_surface)
        .unwrap_or_else(|| out.text_from_tokens());
    out.set_raw(raw);
    Ok(out)
}

/// Replaces the span of one token in `raw`, locating token surfaces left to
/// right. None when the tokens cannot be aligned to the string.
fn splice_raw(sent: &AnnotatedSentence, index: usize, old: &str, new: &str) -> Option<String> {
    let raw = &sent.raw;
    let mut pos = 0;
    let mut i = 1;
    while i <= sent.tokens.len() {
        let (surface, last) = match sent.multiwords.iter().find(|m| m.start == i) {
            Some(mw) if mw.covers(index) => return None,
            Some(mw) => (mw.surface.as_str(), mw.end),
            None => (sent.tokens[i - 1].surface.as_str(), i),
        };
        let rest = &raw[pos..];
        let trimmed = rest.trim_start();
        let start = pos + (rest.len() - trimmed.len());
        if !trimmed.starts_with(surface) {
            return None;
        }
        if i == index {
            debug_assert_eq!(surface, old);
            let mut s = String::with_capacity(raw.len() + new.len());
            s.push_str(&raw[..start]);
            s.push_str(new);
            s.push_str(&raw[start + old.len()..]);
            return Some(s);
        }
        pos = start + surface.len();
        i = last + 1;
    }
    None
}

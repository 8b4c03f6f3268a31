//! Determiner forms that depend on the next word: French *le/la → l'*,
//! *ce → cet*, *ma → mon*; Italian *il/lo/l'*, *un/uno/un'*.

use std::collections::BTreeSet;

use crate::corpus::{AnnotatedSentence, Gender, Number};
use crate::reinflect::detok::ends_with_apostrophe;
use crate::swap::match_case;

fn starts_with_vowel(word: &str, lang: &str) -> bool {
    let Some(c) = word
        .chars()
        .next()
        .map(|c| c.to_lowercase().next().unwrap_or(c))
    else {
        return false;
    };
    let vowels = match lang {
        "fr" => "aeiouyhàâäéèêëîïôöûùü",
        _ => "aeiouàèéìíòóùú",
    };
    vowels.contains(c)
}

/// Italian words taking *lo*/*uno*/*gli*: s + consonant, z, gn, ps, x, y.
fn italian_impure(word: &str) -> bool {
    let w = word.to_lowercase();
    let mut cs = w.chars();
    match (cs.next(), cs.next()) {
        (Some('s'), Some(c)) => !"aeiouàèéìòù".contains(c),
        (Some('z' | 'x' | 'y'), _) => true,
        (Some('g'), Some('n')) | (Some('p'), Some('s')) => true,
        _ => false,
    }
}

fn normalize_apostrophe(s: &str) -> String {
    s.to_lowercase().replace('’', "'")
}

/// Context form for a determiner, or None when the word is not one the
/// pass knows about.
fn context_form(
    det: &str,
    gender: Gender,
    number: Option<Number>,
    next: &str,
    lang: &str,
) -> Option<&'static str> {
    let d = normalize_apostrophe(det);
    let vowel = starts_with_vowel(next, lang);
    let plural = number == Some(Number::Plur);
    let fem = gender == Gender::Fem;
    match lang {
        "fr" => match d.as_str() {
            "le" | "la" | "l'" if !plural => Some(if vowel {
                "l'"
            } else if fem {
                "la"
            } else {
                "le"
            }),
            "ce" | "cet" | "cette" if !plural => Some(if fem {
                "cette"
            } else if vowel {
                "cet"
            } else {
                "ce"
            }),
            "mon" | "ma" if !plural => Some(if fem && !vowel { "ma" } else { "mon" }),
            "ton" | "ta" if !plural => Some(if fem && !vowel { "ta" } else { "ton" }),
            "son" | "sa" if !plural => Some(if fem && !vowel { "sa" } else { "son" }),
            _ => None,
        },
        "it" => {
            let impure = italian_impure(next);
            match d.as_str() {
                "il" | "lo" | "l'" | "la" | "i" | "gli" | "le" => Some(match (fem, plural) {
                    (_, false) if vowel => "l'",
                    (true, false) => "la",
                    (false, false) if impure => "lo",
                    (false, false) => "il",
                    (true, true) => "le",
                    (false, true) if vowel || impure => "gli",
                    (false, true) => "i",
                }),
                "un" | "uno" | "una" | "un'" if !plural => Some(match fem {
                    true if vowel => "un'",
                    true => "una",
                    false if impure => "uno",
                    false => "un",
                }),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Re-derives context-dependent determiner forms for DET tokens that are
/// in `marked` or immediately precede a marked token. Returns the indices
/// whose surface changed. Elided forms get no trailing space.
pub fn repair_articles(
    sent: &mut AnnotatedSentence,
    marked: &BTreeSet<usize>,
    lang: &str,
) -> BTreeSet<usize> {
    let mut changed = BTreeSet::new();
    // idx is the 1-based determiner index; tokens[idx] is the next word
    for idx in 1..sent.tokens.len() {
        if !(marked.contains(&idx) || marked.contains(&(idx + 1))) {
            continue;
        }
        let det = &sent.tokens[idx - 1];
        if det.upos != "DET" {
            continue;
        }
        let Some(gender) = det.feats.gender() else {
            continue;
        };
        let next = sent.tokens[idx].surface.clone();
        let Some(form) = context_form(&det.surface, gender, det.feats.number(), &next, lang) else {
            continue;
        };
        let mut form = match_case(&det.surface, form);
        if det.surface.contains('’') {
            form = form.replace('\'', "’");
        }
        if form != det.surface {
            let det = &mut sent.tokens[idx - 1];
            let was_elided = ends_with_apostrophe(&det.surface);
            let elided = ends_with_apostrophe(&form);
            if elided {
                det.space_after = false;
            } else if was_elided {
                det.space_after = true;
            }
            det.surface = form;
            changed.insert(idx);
        }
    }
    changed
}

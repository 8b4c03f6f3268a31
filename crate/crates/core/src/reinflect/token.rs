use serde::Serialize;

use crate::corpus::{Gender, InflectionLexicon, Number, Token};
use crate::reinflect::rules::{Direction, RuleSet};
use crate::swap::match_case;

/// Where a reinflected form came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FormSource {
    Lexicon,
    SuffixRule,
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reinflected {
    pub surface: String,
    pub source: FormSource,
    pub warning: Option<String>,
}

/// Surface form of `token` under the target gender and number: inflection
/// lexicon first, then the suffix rule for the direction away from the
/// token's current gender, else unchanged with a warning. A token already
/// in the target gender is returned unchanged without a warning. The case
/// pattern of the original surface is kept.
pub fn reinflect_token(
    token: &Token,
    target: (Gender, Option<Number>),
    lang: &str,
    lexicon: &InflectionLexicon,
    rules: &RuleSet,
) -> Reinflected {
    let (gender, number) = target;
    let unchanged = |warning: Option<String>| Reinflected {
        surface: token.surface.clone(),
        source: FormSource::Unchanged,
        warning,
    };
    let current = token.feats.gender();
    if current == Some(gender) && token.feats.number() == number {
        return unchanged(None);
    }
    if let Some(form) = lexicon.lookup(lang, &token.lemma, Some(gender), number) {
        return Reinflected {
            surface: match_case(&token.surface, form),
            source: FormSource::Lexicon,
            warning: None,
        };
    }
    if current == Some(gender) {
        return unchanged(None);
    }
    match rules.apply(
        lang,
        &token.upos,
        &token.surface,
        Direction::towards(gender),
    ) {
        Some((form, _)) => Reinflected {
            surface: match_case(&token.surface, &form),
            source: FormSource::SuffixRule,
            warning: None,
        },
        None => unchanged(Some(format!(
            "no lexicon row or suffix rule for `{}` ({}, lemma `{}`) towards {gender}",
            token.surface, token.upos, token.lemma
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> InflectionLexicon {
        let mut lex = InflectionLexicon::builtin();
        lex.insert(
            "fr",
            "soldat",
            Some(Gender::Fem),
            Some(Number::Sing),
            "soldate",
        );
        lex
    }

    const FS: (Gender, Option<Number>) = (Gender::Fem, Some(Number::Sing));

    #[test]
    fn lexicon_first() {
        let t = Token::new(2, "soldat", "soldat", "NOUN", 0, "root")
            .with_feats("Gender=Masc|Number=Sing");
        let r = reinflect_token(&t, FS, "fr", &lex(), &RuleSet::builtin());
        assert_eq!(
            (r.surface.as_str(), r.source),
            ("soldate", FormSource::Lexicon)
        );

        let t = Token::new(1, "Le", "le", "DET", 2, "det").with_feats("Gender=Masc|Number=Sing");
        let r = reinflect_token(&t, FS, "fr", &lex(), &RuleSet::builtin());
        assert_eq!((r.surface.as_str(), r.source), ("La", FormSource::Lexicon));
    }

    #[test]
    fn rule_fallback() {
        let t = Token::new(6, "content", "content", "ADJ", 0, "root")
            .with_feats("Gender=Masc|Number=Sing");
        let r = reinflect_token(&t, FS, "fr", &lex(), &RuleSet::builtin());
        assert_eq!(
            (r.surface.as_str(), r.source),
            ("contente", FormSource::SuffixRule)
        );
        assert!(r.warning.is_none());
    }

    #[test]
    fn unknown_word_is_unchanged_with_warning() {
        let t = Token::new(1, "xyz", "xyz", "X", 0, "root").with_feats("Gender=Masc|Number=Sing");
        let r = reinflect_token(&t, FS, "fr", &lex(), &RuleSet::builtin());
        assert_eq!(r.source, FormSource::Unchanged);
        assert_eq!(r.surface, "xyz");
        assert!(r.warning.unwrap().contains("xyz"));
    }

    #[test]
    fn already_in_target_gender() {
        let t =
            Token::new(1, "belle", "beau", "ADJ", 0, "root").with_feats("Gender=Fem|Number=Sing");
        let r = reinflect_token(&t, FS, "fr", &lex(), &RuleSet::builtin());
        assert_eq!(
            r,
            Reinflected {
                surface: "belle".into(),
                source: FormSource::Unchanged,
                warning: None
            }
        );
    }
}

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::corpus::{
    english_pronoun_gender, AnimacyLexicon, AnnotatedSentence, Gender, GenderedForms,
    InflectionLexicon, Origin, ParallelPair,
};
use crate::error::Error;
use crate::mrf::{
    infer_tags, mark_reinflection_targets, AgreementModel, InferOptions, Intervention,
};
use crate::reinflect::articles::repair_articles;
use crate::reinflect::contraction::contract_sentence;
use crate::reinflect::rules::RuleSet;
use crate::reinflect::token::{reinflect_token, FormSource};
use crate::selection::GenderedSelection;
use crate::swap::{match_case, swap_english_gender};

/// Why a selection produced no counterfactual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SkipReason {
    /// The target side has no annotation.
    Unannotated,
    /// The profession has no forms for the target language.
    NotInLexicon,
    /// No target token matches the profession's forms.
    NounNotFound,
    /// Several target tokens match the profession's forms.
    AmbiguousNoun,
    /// The matched noun's gender cannot be determined.
    UnknownGender,
    /// The English pronoun could not be swapped.
    SourceSwap,
    /// No English token is a listed profession.
    NoProfession,
    /// Several English tokens are listed professions.
    AmbiguousProfession,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skip {
    pub reason: SkipReason,
    pub detail: String,
}

impl Skip {
    fn new(reason: SkipReason, detail: impl Into<String>) -> Self {
        Skip {
            reason,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Skip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.reason, self.detail)
    }
}

/// What happened to one marked token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenRecord {
    pub index: usize,
    pub before: String,
    pub after: String,
    pub source: FormSource,
}

/// Audit trail of one counterfactual: every marked token once, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReinflectionReport {
    pub tokens: Vec<TokenRecord>,
    pub warnings: Vec<String>,
}

impl ReinflectionReport {
    pub fn count(&self, source: FormSource) -> usize {
        self.tokens.iter().filter(|t| t.source == source).count()
    }
}

#[derive(Debug, Clone)]
pub struct TargetCounterfactual {
    pub sentence: AnnotatedSentence,
    pub intervention: Intervention,
    pub report: ReinflectionReport,
}

#[derive(Debug, Clone)]
pub struct Counterfactual {
    pub pair: ParallelPair,
    pub report: ReinflectionReport,
    /// English profession lemma, lowercase.
    pub profession: String,
    /// Gender of the original English pronoun, if there was one.
    pub source_gender: Option<Gender>,
    /// Gender of the target noun before the intervention.
    pub target_gender: Gender,
}

/// Everything needed to rewrite target sentences.
#[derive(Debug, Clone, Copy)]
pub struct CounterfactualGenerator<'a> {
    pub model: &'a AgreementModel,
    pub animacy: &'a AnimacyLexicon,
    pub inflections: &'a InflectionLexicon,
    pub rules: &'a RuleSet,
    pub options: InferOptions,
}

impl<'a> CounterfactualGenerator<'a> {
    /// Finds the target token for an English profession lemma: the single
    /// token whose lemma or surface equals its masculine or feminine form.
    pub fn locate_noun(
        &self,
        tgt: &AnnotatedSentence,
        en_lemma: &str,
    ) -> Result<(usize, Gender), Skip> {
        if !tgt.is_annotated() {
            return Err(Skip::new(
                SkipReason::Unannotated,
                "target side has no tokens",
            ));
        }
        let forms = self.animacy.forms(en_lemma, &tgt.lang).ok_or_else(|| {
            Skip::new(
                SkipReason::NotInLexicon,
                format!("`{en_lemma}` has no {} forms", tgt.lang),
            )
        })?;
        let (m, f) = (forms.masc.to_lowercase(), forms.fem.to_lowercase());
        let is_form = |s: &str| {
            let s = s.to_lowercase();
            s == m || s == f
        };
        let hits: Vec<_> = tgt
            .tokens
            .iter()
            .filter(|t| is_form(&t.lemma) || is_form(&t.surface))
            .collect();
        let tok = match hits.as_slice() {
            [t] => *t,
            [] => {
                return Err(Skip::new(
                    SkipReason::NounNotFound,
                    format!("no `{}`/`{}` in target", forms.masc, forms.fem),
                ))
            }
            _ => {
                return Err(Skip::new(
                    SkipReason::AmbiguousNoun,
                    format!("{} matches of `{}`/`{}`", hits.len(), forms.masc, forms.fem),
                ))
            }
        };
        let gender = tok.feats.gender().or_else(|| {
            let s = tok.surface.to_lowercase();
            match (s == m, s == f) {
                (true, false) => Some(Gender::Masc),
                (false, true) => Some(Gender::Fem),
                _ => None,
            }
        });
        gender.map(|g| (tok.index, g)).ok_or_else(|| {
            Skip::new(
                SkipReason::UnknownGender,
                format!("gender of `{}` unknown", tok.surface),
            )
        })
    }

    /// Flips the gender of the profession noun in a target sentence and
    /// repairs agreement.
    pub fn generate_target(
        &self,
        tgt: &AnnotatedSentence,
        en_lemma: &str,
    ) -> Result<TargetCounterfactual, Skip> {
        let (index, gender) = self.locate_noun(tgt, en_lemma)?;
        let number = tgt.token(index).expect("located token").feats.number();
        let iv = Intervention::new(index, gender.opposite(), number);
        Ok(self.apply_intervention(tgt, iv, self.animacy.forms(en_lemma, &tgt.lang)))
    }

    /// MRF marking, reinflection of every marked token, determiner context
    /// repair, contractions and detokenization. `noun_forms`, when given,
    /// supplies the intervened token's new surface.
    pub fn apply_intervention(
        &self,
        tgt: &AnnotatedSentence,
        iv: Intervention,
        noun_forms: Option<&GenderedForms>,
    ) -> TargetCounterfactual {
        let lang = tgt.lang.as_str();
        let tags = infer_tags(tgt, self.model, iv, self.options);
        let marks = mark_reinflection_targets(tgt, &tags, iv, lang);
        let forced = iv
            .forced_tag
            .gender()
            .expect("intervention tag has a gender");
        let det_rule = matches!(lang, "fr" | "it");

        let mut out = tgt.clone();
        let mut report = ReinflectionReport::default();
        for &m in &marks {
            let Some(tok) = tgt.token(m) else {
                continue;
            };
            let own_number = tok.feats.number();
            let target = if m == iv.token_index
                || (det_rule && tok.upos == "DET" && tok.head == iv.token_index)
            {
                Some(forced)
            } else {
                tags[m - 1].gender()
            };
            let Some(gender) = target else {
                report.warnings.push(format!(
                    "token {m} `{}` lost agreement; left unchanged",
                    tok.surface
                ));
                report.tokens.push(TokenRecord {
                    index: m,
                    before: tok.surface.clone(),
                    after: tok.surface.clone(),
                    source: FormSource::Unchanged,
                });
                continue;
            };
            let (surface, source) = match noun_forms {
                Some(forms) if m == iv.token_index => (
                    match_case(&tok.surface, forms.get(gender)),
                    FormSource::Lexicon,
                ),
                _ => {
                    let r = reinflect_token(
                        tok,
                        (gender, own_number),
                        lang,
                        self.inflections,
                        self.rules,
                    );
                    if let Some(w) = r.warning {
                        report.warnings.push(format!("token {m}: {w}"));
                    }
                    (r.surface, r.source)
                }
            };
            let t = out.token_mut(m).expect("same tokens");
            if source != FormSource::Unchanged || m == iv.token_index {
                t.feats.set_gender(Some(gender));
            }
            t.surface = surface.clone();
            report.tokens.push(TokenRecord {
                index: m,
                before: tok.surface.clone(),
                after: surface,
                source,
            });
        }

        repair_articles(&mut out, &marks, lang);
        for rec in &mut report.tokens {
            rec.after = out.token(rec.index).expect("same tokens").surface.clone();
        }
        let modified: BTreeSet<usize> = tgt
            .tokens
            .iter()
            .zip(&out.tokens)
            .filter(|(a, b)| a.surface != b.surface)
            .map(|(a, _)| a.index)
            .collect();
        contract_sentence(&mut out, &self.inflections.contractions, &modified);
        let raw = out.text_from_tokens();
        out.set_raw(raw);
        TargetCounterfactual {
            sentence: out,
            intervention: iv,
            report,
        }
    }

    /// Swaps the English pronoun and rewrites the target side.
    pub fn generate(&self, sel: &GenderedSelection) -> Result<Counterfactual, Skip> {
        self.generate_with_source(sel, None)
    }

    /// Like [`generate`](Self::generate), but takes the English side from
    /// `swapped_src` when one was produced separately.
    pub fn generate_with_source(
        &self,
        sel: &GenderedSelection,
        swapped_src: Option<AnnotatedSentence>,
    ) -> Result<Counterfactual, Skip> {
        let src = match swapped_src {
            Some(s) => s,
            None => swap_english_gender(&sel.pair.src, sel.pronoun_index).map_err(|e| match e {
                Error::Contract(msg) => Skip::new(SkipReason::SourceSwap, msg),
                other => Skip::new(SkipReason::SourceSwap, other.to_string()),
            })?,
        };
        let tgt = self.generate_target(&sel.pair.tgt, &sel.profession_lemma)?;
        Ok(counterfactual(
            &sel.pair,
            src,
            tgt,
            &sel.profession_lemma,
            Some(sel.pronoun_gender()),
        ))
    }

    /// Counterfactual of a pair without prior selection. The profession is
    /// the single English token whose lemma is in the animacy lexicon. The
    /// English side is `swapped_src` if given; otherwise its one gendered
    /// pronoun is swapped, and a sentence without one is kept as is.
    pub fn generate_pair(
        &self,
        pair: &ParallelPair,
        swapped_src: Option<AnnotatedSentence>,
    ) -> Result<Counterfactual, Skip> {
        let en = &pair.src;
        let professions: Vec<&str> = en
            .tokens
            .iter()
            .filter(|t| self.animacy.contains(&t.lemma))
            .map(|t| t.lemma.as_str())
            .collect();
        let lemma = match professions[..] {
            [l] => l.to_lowercase(),
            [] => {
                return Err(Skip::new(
                    SkipReason::NoProfession,
                    "no listed profession in the English sentence",
                ))
            }
            _ => {
                return Err(Skip::new(
                    SkipReason::AmbiguousProfession,
                    professions.join(", "),
                ))
            }
        };
        let pronouns: Vec<(usize, Gender)> = en
            .tokens
            .iter()
            .filter_map(|t| english_pronoun_gender(&t.surface).map(|g| (t.index, g)))
            .collect();
        let source_gender = match pronouns[..] {
            [] => None,
            [(_, g)] => Some(g),
            _ => {
                return Err(Skip::new(
                    SkipReason::SourceSwap,
                    format!("{} gendered pronouns", pronouns.len()),
                ))
            }
        };
        let src = match (swapped_src, pronouns.first()) {
            (Some(s), _) => s,
            (None, Some(&(i, _))) => swap_english_gender(en, i)
                .map_err(|e| Skip::new(SkipReason::SourceSwap, e.to_string()))?,
            (None, None) => en.clone(),
        };
        let tgt = self.generate_target(&pair.tgt, &lemma)?;
        Ok(counterfactual(pair, src, tgt, &lemma, source_gender))
    }
}

fn counterfactual(
    orig: &ParallelPair,
    src: AnnotatedSentence,
    tgt: TargetCounterfactual,
    profession: &str,
    source_gender: Option<Gender>,
) -> Counterfactual {
    let target_gender = tgt
        .intervention
        .forced_tag
        .gender()
        .expect("intervention tag has a gender")
        .opposite();
    let mut pair = ParallelPair::new(
        format!("{}-cf", orig.id),
        src,
        tgt.sentence,
        Origin::Counterfactual,
    );
    pair.parent = Some(orig.id.clone());
    Counterfactual {
        pair,
        report: tgt.report,
        profession: profession.to_owned(),
        source_gender,
        target_gender,
    }
}

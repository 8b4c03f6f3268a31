//! C ABI over the cfgen library.
//!
//! Strings cross the boundary as NUL-terminated UTF-8. Every function
//! returns a [`CfgenStatus`]; on failure the message is available from
//! [`cfgen_last_error`] on the same thread. Strings handed out through
//! `out` parameters are owned by the caller and released with
//! [`cfgen_string_free`]. Handles are released with their `_free`
//! function. Panics never unwind into C; they surface as
//! [`CfgenStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cfgen::corpus::{
    english_pronoun_gender, parse_conllu, serialize_conllu, AnimacyLexicon, InflectionLexicon,
};
use cfgen::eval::{compute_metrics, extract_predicted_gender, parse_challenge};
use cfgen::mrf::{AgreementModel, InferOptions};
use cfgen::reinflect::{CounterfactualGenerator, RuleSet};
use cfgen::swap::swap_english_gender;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfgenStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed or inconsistent input data.
    InvalidInput = 3,
    /// The sentence was not eligible for a counterfactual; the reason is in
    /// the last error.
    Skipped = 4,
    /// A broken internal invariant or a caught panic.
    Internal = 5,
}

/// Trained agreement model.
pub struct CfgenModel(AgreementModel);

/// Counterfactual generator: model, lexicons and rules.
pub struct CfgenGenerator {
    model: AgreementModel,
    animacy: AnimacyLexicon,
    inflections: InflectionLexicon,
    rules: RuleSet,
    options: InferOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Fail(CfgenStatus, String);

impl From<cfgen::Error> for Fail {
    fn from(e: cfgen::Error) -> Self {
        let status = if e.is_input_error() {
            CfgenStatus::InvalidInput
        } else {
            CfgenStatus::Internal
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CfgenStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CfgenStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal error: {msg}"));
            CfgenStatus::Internal
        }
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for the call.
unsafe fn arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(CfgenStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(CfgenStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

unsafe fn opt_arg<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        arg(p, name).map(Some)
    }
}

fn check_out<T>(out: *mut T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(CfgenStatus::NullArgument, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c =
        CString::new(s).map_err(|_| Fail(CfgenStatus::Internal, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next cfgen call on the thread.
#[no_mangle]
pub extern "C" fn cfgen_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn cfgen_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfgen_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Trains agreement potentials from a CoNLL-U treebank.
///
/// # Safety
/// String arguments are NUL-terminated; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cfgen_model_train(
    treebank_conllu: *const c_char,
    lang: *const c_char,
    smoothing: f64,
    out: *mut *mut CfgenModel,
) -> CfgenStatus {
    guard(|| {
        check_out(out, "out")?;
        let lang = arg(lang, "lang")?;
        let sents = parse_conllu(arg(treebank_conllu, "treebank_conllu")?, lang)?;
        let model = AgreementModel::train(&sents, lang, smoothing)?;
        *out = Box::into_raw(Box::new(CfgenModel(model)));
        Ok(())
    })
}

/// Loads a model from its text form.
///
/// # Safety
/// As for [`cfgen_model_train`].
#[no_mangle]
pub unsafe extern "C" fn cfgen_model_parse(
    text: *const c_char,
    out: *mut *mut CfgenModel,
) -> CfgenStatus {
    guard(|| {
        check_out(out, "out")?;
        let model = AgreementModel::parse(arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(CfgenModel(model)));
        Ok(())
    })
}

/// Text form of a model, as written by the `train-mrf` command.
///
/// # Safety
/// `model` is a live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cfgen_model_to_text(
    model: *const CfgenModel,
    out: *mut *mut c_char,
) -> CfgenStatus {
    guard(|| {
        check_out(out, "out")?;
        let model = model
            .as_ref()
            .ok_or_else(|| Fail(CfgenStatus::NullArgument, "`model` is null".into()))?;
        put_string(out, model.0.to_text())
    })
}

/// # Safety
/// `model` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfgen_model_free(model: *mut CfgenModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Builds a generator. The model is copied, so the model handle may be
/// freed afterwards. `inflections_tsv` adds rows to the builtin lexicon
/// and may be null. `beta` is the bonus for keeping a token's tag.
///
/// # Safety
/// String arguments are null where allowed or NUL-terminated; `model` is a
/// live handle; `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cfgen_generator_new(
    model: *const CfgenModel,
    animacy_tsv: *const c_char,
    inflections_tsv: *const c_char,
    beta: f64,
    out: *mut *mut CfgenGenerator,
) -> CfgenStatus {
    guard(|| {
        check_out(out, "out")?;
        let model = model
            .as_ref()
            .ok_or_else(|| Fail(CfgenStatus::NullArgument, "`model` is null".into()))?;
        if !beta.is_finite() || beta < 0.0 {
            return Err(Fail(
                CfgenStatus::InvalidInput,
                format!("beta must be non-negative, got {beta}"),
            ));
        }
        let animacy = AnimacyLexicon::from_tsv(arg(animacy_tsv, "animacy_tsv")?)?;
        let mut inflections = InflectionLexicon::builtin();
        if let Some(t) = opt_arg(inflections_tsv, "inflections_tsv")? {
            inflections.merge(InflectionLexicon::from_tsv(t)?);
        }
        let g = CfgenGenerator {
            model: model.0.clone(),
            animacy,
            inflections,
            rules: RuleSet::builtin(),
            options: InferOptions { beta },
        };
        *out = Box::into_raw(Box::new(g));
        Ok(())
    })
}

/// # Safety
/// `generator` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cfgen_generator_free(generator: *mut CfgenGenerator) {
    if !generator.is_null() {
        drop(Box::from_raw(generator));
    }
}

/// Flips the gender of the profession `en_lemma` in a one-sentence target
/// CoNLL-U block and repairs agreement. On success `out_conllu` receives
/// the rewritten sentence and `out_text`, if not null, its surface string.
/// [`CfgenStatus::Skipped`] means the sentence is not eligible.
///
/// # Safety
/// `generator` is a live handle; strings are NUL-terminated; `out_conllu`
/// points to writable storage and `out_text` is null or does.
#[no_mangle]
pub unsafe extern "C" fn cfgen_generator_generate_target(
    generator: *const CfgenGenerator,
    target_conllu: *const c_char,
    en_lemma: *const c_char,
    out_conllu: *mut *mut c_char,
    out_text: *mut *mut c_char,
) -> CfgenStatus {
    guard(|| {
        check_out(out_conllu, "out_conllu")?;
        let g = generator
            .as_ref()
            .ok_or_else(|| Fail(CfgenStatus::NullArgument, "`generator` is null".into()))?;
        let lang = g.model.lang().to_owned();
        let sents = parse_conllu(arg(target_conllu, "target_conllu")?, &lang)?;
        let [sent] = &sents[..] else {
            return Err(Fail(
                CfgenStatus::InvalidInput,
                format!("expected one sentence, got {}", sents.len()),
            ));
        };
        let gen = CounterfactualGenerator {
            model: &g.model,
            animacy: &g.animacy,
            inflections: &g.inflections,
            rules: &g.rules,
            options: g.options,
        };
        let cf = gen
            .generate_target(sent, &arg(en_lemma, "en_lemma")?.to_lowercase())
            .map_err(|s| Fail(CfgenStatus::Skipped, s.to_string()))?;
        if !out_text.is_null() {
            put_string(out_text, cf.sentence.raw.clone())?;
        }
        put_string(
            out_conllu,
            serialize_conllu(std::slice::from_ref(&cf.sentence)),
        )
    })
}

/// Swaps the gendered pronoun of every English sentence that has exactly
/// one; other sentences are returned unchanged. `out_swapped`, if not
/// null, receives how many were swapped.
///
/// # Safety
/// `conllu` is NUL-terminated; `out` points to writable storage and
/// `out_swapped` is null or does.
#[no_mangle]
pub unsafe extern "C" fn cfgen_swap_english(
    conllu: *const c_char,
    out: *mut *mut c_char,
    out_swapped: *mut usize,
) -> CfgenStatus {
    guard(|| {
        check_out(out, "out")?;
        let sents = parse_conllu(arg(conllu, "conllu")?, "en")?;
        let mut swapped = 0;
        let mut result = Vec::with_capacity(sents.len());
        for s in sents {
            let pronouns: Vec<usize> = s
                .tokens
                .iter()
                .filter(|t| english_pronoun_gender(&t.surface).is_some())
                .map(|t| t.index)
                .collect();
            match pronouns[..] {
                [i] => {
                    result.push(swap_english_gender(&s, i)?);
                    swapped += 1;
                }
                _ => result.push(s),
            }
        }
        if !out_swapped.is_null() {
            *out_swapped = swapped;
        }
        put_string(out, serialize_conllu(&result))
    })
}

/// Scores translations of a challenge set and returns the metrics JSON
/// written by the `evaluate` command. The challenge TSV must carry its
/// stereotype column; translations are one per line.
///
/// # Safety
/// Strings are NUL-terminated; `out_json` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn cfgen_evaluate(
    challenge_tsv: *const c_char,
    translations: *const c_char,
    animacy_tsv: *const c_char,
    lang: *const c_char,
    out_json: *mut *mut c_char,
) -> CfgenStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        let lang = arg(lang, "lang")?;
        let items = parse_challenge(arg(challenge_tsv, "challenge_tsv")?, None)?;
        let lines: Vec<&str> = arg(translations, "translations")?.lines().collect();
        if lines.len() != items.len() {
            return Err(Fail(
                CfgenStatus::InvalidInput,
                format!(
                    "{} translations for {} challenge items",
                    lines.len(),
                    items.len()
                ),
            ));
        }
        let lex = AnimacyLexicon::from_tsv(arg(animacy_tsv, "animacy_tsv")?)?;
        let preds = items
            .iter()
            .zip(&lines)
            .map(|(item, tr)| extract_predicted_gender(item, tr, &lex, lang).map(|p| p.predicted))
            .collect::<cfgen::Result<Vec<_>>>()?;
        put_string(out_json, compute_metrics(&items, &preds)?.to_json())
    })
}

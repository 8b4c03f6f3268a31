use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use cfgen_ffi::*;

fn fixture(rel: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(rel);
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    cfgen_string_free(p);
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cfgen_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

fn model() -> *mut CfgenModel {
    let mut m = ptr::null_mut();
    let st = unsafe {
        cfgen_model_train(
            fixture("fr_treebank.conllu").as_ptr(),
            c("fr").as_ptr(),
            0.1,
            &mut m,
        )
    };
    assert_eq!(st, CfgenStatus::Ok, "{}", last_error());
    m
}

fn generator() -> *mut CfgenGenerator {
    let m = model();
    let mut g = ptr::null_mut();
    let st = unsafe {
        cfgen_generator_new(
            m,
            fixture("animacy.tsv").as_ptr(),
            fixture("inflections.tsv").as_ptr(),
            2.0,
            &mut g,
        )
    };
    assert_eq!(st, CfgenStatus::Ok, "{}", last_error());
    unsafe { cfgen_model_free(m) };
    g
}

#[test]
fn generates_worked_example_after_model_is_freed() {
    let g = generator();
    let (mut conllu, mut text) = (ptr::null_mut(), ptr::null_mut());
    let st = unsafe {
        cfgen_generator_generate_target(
            g,
            fixture("worked/soldat.fr.conllu").as_ptr(),
            c("soldier").as_ptr(),
            &mut conllu,
            &mut text,
        )
    };
    assert_eq!(st, CfgenStatus::Ok, "{}", last_error());
    assert_eq!(
        unsafe { take(text) },
        "La soldate allemande est très contente."
    );
    assert!(unsafe { take(conllu) }.contains("# text = La soldate allemande est très contente."));
    assert_eq!(last_error(), "");
    unsafe { cfgen_generator_free(g) };
}

#[test]
fn ineligible_sentence_is_skipped() {
    let g = generator();
    let mut out = ptr::null_mut();
    let st = unsafe {
        cfgen_generator_generate_target(
            g,
            fixture("worked/soldat.fr.conllu").as_ptr(),
            c("baker").as_ptr(),
            &mut out,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, CfgenStatus::Skipped);
    assert!(out.is_null());
    assert!(last_error().contains("NounNotFound"), "{}", last_error());
    unsafe { cfgen_generator_free(g) };
}

#[test]
fn model_text_round_trips() {
    let m = model();
    let mut text = ptr::null_mut();
    assert_eq!(
        unsafe { cfgen_model_to_text(m, &mut text) },
        CfgenStatus::Ok
    );
    let text = unsafe { take(text) };
    let mut m2 = ptr::null_mut();
    assert_eq!(
        unsafe { cfgen_model_parse(c(&text).as_ptr(), &mut m2) },
        CfgenStatus::Ok
    );
    let mut again = ptr::null_mut();
    assert_eq!(
        unsafe { cfgen_model_to_text(m2, &mut again) },
        CfgenStatus::Ok
    );
    assert_eq!(unsafe { take(again) }, text);
    unsafe {
        cfgen_model_free(m);
        cfgen_model_free(m2);
    }
}

#[test]
fn bad_model_text_is_invalid_input() {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { cfgen_model_parse(c("not a model").as_ptr(), &mut m) },
        CfgenStatus::InvalidInput
    );
    assert!(m.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn swaps_every_single_pronoun_sentence() {
    let mut out = ptr::null_mut();
    let mut n = 0usize;
    let st = unsafe { cfgen_swap_english(fixture("her30/en.conllu").as_ptr(), &mut out, &mut n) };
    assert_eq!(st, CfgenStatus::Ok, "{}", last_error());
    assert_eq!(n, 30);
    let out = unsafe { take(out) };
    let expected = fixture("her30/expected.tsv");
    for line in expected.to_str().unwrap().lines().skip(1) {
        let want = line.split_once('\t').unwrap().1;
        assert!(out.contains(&format!("# text = {want}\n")), "{want}");
    }
}

#[test]
fn evaluates_challenge_set() {
    let mut json = ptr::null_mut();
    let st = unsafe {
        cfgen_evaluate(
            fixture("challenge/items.tsv").as_ptr(),
            fixture("challenge/translations.fr.txt").as_ptr(),
            fixture("animacy.tsv").as_ptr(),
            c("fr").as_ptr(),
            &mut json,
        )
    };
    assert_eq!(st, CfgenStatus::Ok, "{}", last_error());
    let json = unsafe { take(json) };
    assert!(json.contains("\"acc\": 50.0"), "{json}");
    assert!(json.contains("\"delta_s\": 50.0"), "{json}");
}

#[test]
fn evaluate_rejects_misaligned_translations() {
    let mut json = ptr::null_mut();
    let st = unsafe {
        cfgen_evaluate(
            fixture("challenge/items.tsv").as_ptr(),
            c("Une ligne.").as_ptr(),
            fixture("animacy.tsv").as_ptr(),
            c("fr").as_ptr(),
            &mut json,
        )
    };
    assert_eq!(st, CfgenStatus::InvalidInput);
    assert!(json.is_null());
}

#[test]
fn negative_beta_is_rejected() {
    let m = model();
    let mut g = ptr::null_mut();
    let st = unsafe {
        cfgen_generator_new(
            m,
            fixture("animacy.tsv").as_ptr(),
            ptr::null(),
            -1.0,
            &mut g,
        )
    };
    assert_eq!(st, CfgenStatus::InvalidInput);
    assert!(g.is_null());
    unsafe { cfgen_model_free(m) };
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        cfgen_string_free(ptr::null_mut());
        cfgen_model_free(ptr::null_mut());
        cfgen_generator_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(cfgen_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

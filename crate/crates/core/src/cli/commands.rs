use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::assembly::{
    build_balanced_dataset, lint_counterfactual_pair, mix_corpora, write_lint_tsv, ComponentKind,
    ComponentSpec, DatasetRecipe, LintFlag,
};
use crate::cli::args::*;
use crate::cli::io::{
    aligned_ids, create_dir, pair_id, sidecar, with_pair_id, write, write_json, Ctx,
};
use crate::cli::log;
use crate::corpus::parallel::write_tsv;
use crate::corpus::{
    english_pronoun_gender, serialize_conllu, AnimacyLexicon, AnnotatedSentence, ContractionTable,
    Gender, InflectionLexicon, Origin, PairLines, ParallelPair,
};
use crate::error::{Error, Result};
use crate::eval::{audit_tsv, compute_metrics, extract_predicted_gender, load_challenge};
use crate::mrf::{AgreementModel, InferOptions};
use crate::reinflect::{Counterfactual, CounterfactualGenerator, FormSource, RuleSet, Skip};
use crate::selection::{
    filter_gendered, filter_neutral, sample_per_profession, FilterVerdict, Reservoir,
};
use crate::swap::swap_english_gender;

const VERSION: &str = env!("CARGO_PKG_VERSION");

pub(crate) fn dispatch(cli: &Cli) -> Result<()> {
    let ctx = Ctx {
        seed: cli.seed,
        base: PathBuf::new(),
    };
    match &cli.command {
        Command::Select(a) => select(&ctx, a),
        Command::SwapSrc(a) => swap_src(&ctx, a),
        Command::TrainMrf(a) => train_mrf(&ctx, a),
        Command::CfGen(a) => cf_gen(&ctx, a),
        Command::Assemble(a) => assemble(&ctx, a),
        Command::Evaluate(a) => evaluate(&ctx, a),
        Command::Pipeline(a) => pipeline(&ctx, a),
    }
}

fn manifest(
    cmd: &str,
    ctx: &Ctx,
    config: &impl Serialize,
    counts: Value,
    outputs: &[String],
) -> Value {
    json!({
        "command": cmd,
        "version": VERSION,
        "seed": ctx.seed,
        "config": config,
        "counts": counts,
        "outputs": outputs,
    })
}

fn annotated_pairs(ctx: &Ctx, src: &Path, tgt: &Path, lang: &str) -> Result<Vec<ParallelPair>> {
    let src = ctx.conllu(src, "en")?;
    let tgt = ctx.conllu(tgt, lang)?;
    let ids = aligned_ids(&src, &tgt)?;
    Ok(ids
        .into_iter()
        .zip(src.into_iter().zip(tgt))
        .map(|(id, (s, t))| ParallelPair::new(id, s, t, Origin::Original))
        .collect())
}

#[derive(Default)]
struct Rejections {
    tsv: String,
    by_reason: BTreeMap<String, usize>,
    count: usize,
}

impl Rejections {
    fn new() -> Self {
        Rejections {
            tsv: "line_no\treasons\n".to_owned(),
            ..Default::default()
        }
    }

    fn add(&mut self, cmd: &str, line: usize, id: &str, v: &FilterVerdict) {
        let label = v.reasons_label();
        self.tsv.push_str(&format!("{line}\t{label}\n"));
        for r in &v.reasons {
            *self.by_reason.entry(r.to_string()).or_default() += 1;
        }
        self.count += 1;
        log::warn(
            cmd,
            "rejected",
            json!({ "line": line, "id": id, "reasons": label }),
        );
    }
}

fn select(ctx: &Ctx, a: &SelectArgs) -> Result<()> {
    let mut config = a.clone();
    match a.mode {
        Mode::Gendered => {
            config.sample = None;
            select_gendered(ctx, &config)
        }
        Mode::Neutral => {
            config.sample = Some(a.sample.unwrap_or_else(|| default_sample(&a.lang)));
            select_neutral(ctx, &config)
        }
    }
}

fn select_gendered(ctx: &Ctx, a: &SelectArgs) -> Result<()> {
    const CMD: &str = "select";
    let (Some(src), Some(tgt)) = (&a.src, &a.tgt) else {
        return Err(Error::Config(
            "gendered selection needs annotated --src and --tgt".into(),
        ));
    };
    let animacy = a
        .animacy
        .as_ref()
        .ok_or_else(|| Error::Config("gendered selection needs --animacy".into()))?;
    let lex = AnimacyLexicon::load(&ctx.path(animacy))?;
    let limits = a.limits.limits();
    let pairs = annotated_pairs(ctx, src, tgt, &a.lang)?;
    let verdicts: Vec<_> = pairs
        .par_iter()
        .map(|p| filter_gendered(p, &lex, &limits))
        .collect();

    let mut rejections = Rejections::new();
    let mut accepted = Vec::new();
    for (i, (v, sel)) in verdicts.into_iter().enumerate() {
        match sel {
            Some(sel) => accepted.push(sel),
            None => rejections.add(CMD, i + 1, &pairs[i].id, &v),
        }
    }
    let n_accepted = accepted.len();
    let selected = sample_per_profession(accepted, a.cap as usize, ctx.seed);

    let mut per_profession: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &selected {
        *per_profession.entry(&s.profession_lemma).or_default() += 1;
    }
    let src_out: Vec<_> = selected
        .iter()
        .map(|s| with_pair_id(s.pair.src.clone(), &s.pair.id))
        .collect();
    let tgt_out: Vec<_> = selected
        .iter()
        .map(|s| with_pair_id(s.pair.tgt.clone(), &s.pair.id))
        .collect();
    let pairs_out: Vec<_> = selected.iter().map(|s| s.pair.clone()).collect();

    create_dir(&a.out)?;
    let tgt_name = format!("selected.{}.conllu", a.lang);
    write(
        &a.out.join("selected.en.conllu"),
        &serialize_conllu(&src_out),
    )?;
    write(&a.out.join(&tgt_name), &serialize_conllu(&tgt_out))?;
    write(&a.out.join("selected.tsv"), &write_tsv(&pairs_out))?;
    write(&a.out.join("rejections.tsv"), &rejections.tsv)?;
    let counts = json!({
        "input": pairs.len(),
        "accepted": n_accepted,
        "rejected": rejections.count,
        "rejected_by_reason": rejections.by_reason,
        "selected": selected.len(),
        "per_profession": per_profession,
    });
    let outputs = [
        "selected.en.conllu".to_owned(),
        tgt_name,
        "selected.tsv".into(),
        "rejections.tsv".into(),
    ];
    write_json(
        &a.out.join("manifest.json"),
        &manifest(CMD, ctx, a, counts, &outputs),
    )?;
    log::info(
        CMD,
        "done",
        json!({ "input": pairs.len(), "selected": selected.len() }),
    );
    Ok(())
}

fn select_neutral(ctx: &Ctx, a: &SelectArgs) -> Result<()> {
    const CMD: &str = "select";
    let limits = a.limits.limits();
    let sample = a.sample.expect("resolved by select");
    let mut reservoir = Reservoir::new(sample, ctx.seed);
    let mut rejections = Rejections::new();
    let mut input = 0;
    let mut accepted = 0;
    let mut offer = |line: usize, pair: ParallelPair| {
        input += 1;
        let v = filter_neutral(&pair, &limits);
        if v.accepted() {
            accepted += 1;
            reservoir.offer(pair);
        } else {
            rejections.add(CMD, line, &pair.id, &v);
        }
    };
    match (&a.src, &a.tgt, &a.corpus) {
        (Some(src), Some(tgt), None) => {
            for (i, p) in annotated_pairs(ctx, src, tgt, &a.lang)?
                .into_iter()
                .enumerate()
            {
                offer(i + 1, p);
            }
        }
        (None, None, Some(corpus)) => {
            let path = ctx.path(corpus);
            let file = std::fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
            for p in PairLines::tsv(std::io::BufReader::new(file), &a.lang) {
                let p = crate::error::in_file(&path, p)?;
                let line = p.id.trim_start_matches('L').parse().unwrap_or(0);
                offer(line, p);
            }
        }
        _ => {
            return Err(Error::Config(
                "neutral selection needs --corpus or --src and --tgt".into(),
            ))
        }
    }
    let sampled = reservoir.into_sorted();

    create_dir(&a.out)?;
    write(&a.out.join("random.tsv"), &write_tsv(&sampled))?;
    write(&a.out.join("rejections.tsv"), &rejections.tsv)?;
    let counts = json!({
        "input": input,
        "accepted": accepted,
        "rejected": rejections.count,
        "rejected_by_reason": rejections.by_reason,
        "sampled": sampled.len(),
    });
    let outputs = ["random.tsv".to_owned(), "rejections.tsv".into()];
    write_json(
        &a.out.join("manifest.json"),
        &manifest(CMD, ctx, a, counts, &outputs),
    )?;
    log::info(
        CMD,
        "done",
        json!({ "input": input, "sampled": sampled.len() }),
    );
    Ok(())
}

fn swap_src(ctx: &Ctx, a: &SwapArgs) -> Result<()> {
    const CMD: &str = "swap-src";
    let sents = ctx.conllu(&a.input, "en")?;
    let swapped: Vec<std::result::Result<AnnotatedSentence, String>> = sents
        .par_iter()
        .map(|s| {
            let pronouns: Vec<usize> = s
                .tokens
                .iter()
                .filter(|t| english_pronoun_gender(&t.surface).is_some())
                .map(|t| t.index)
                .collect();
            match pronouns[..] {
                [i] => swap_english_gender(s, i).map_err(|e| e.to_string()),
                _ => Err(format!("{} gendered pronouns", pronouns.len())),
            }
        })
        .collect();
    let mut out = Vec::with_capacity(sents.len());
    let mut unchanged = 0;
    for (i, (orig, res)) in sents.iter().zip(swapped).enumerate() {
        match res {
            Ok(s) => out.push(s),
            Err(msg) => {
                unchanged += 1;
                let id = pair_id(orig)
                    .map(str::to_owned)
                    .unwrap_or_else(|| format!("L{}", i + 1));
                log::warn(CMD, "unswapped", json!({ "id": id, "detail": msg }));
                out.push(orig.clone());
            }
        }
    }
    write(&a.out, &serialize_conllu(&out))?;
    let counts =
        json!({ "input": sents.len(), "swapped": sents.len() - unchanged, "unchanged": unchanged });
    let name = a
        .out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    write_json(&sidecar(&a.out), &manifest(CMD, ctx, a, counts, &[name]))?;
    log::info(CMD, "done", json!({ "swapped": sents.len() - unchanged }));
    Ok(())
}

fn train_mrf(ctx: &Ctx, a: &TrainArgs) -> Result<()> {
    const CMD: &str = "train-mrf";
    let mut treebank = Vec::new();
    for p in &a.treebank {
        treebank.extend(ctx.conllu(p, &a.lang)?);
    }
    let model = AgreementModel::train(&treebank, &a.lang, a.smoothing)?;
    write(&a.out, &model.to_text())?;
    let tokens: usize = treebank.iter().map(|s| s.tokens.len()).sum();
    let counts = json!({ "sentences": treebank.len(), "tokens": tokens });
    let name = a
        .out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    write_json(&sidecar(&a.out), &manifest(CMD, ctx, a, counts, &[name]))?;
    log::info(CMD, "done", json!({ "sentences": treebank.len() }));
    Ok(())
}

struct GenKit {
    animacy: AnimacyLexicon,
    inflections: InflectionLexicon,
    rules: RuleSet,
    options: InferOptions,
}

impl GenKit {
    fn load(ctx: &Ctx, g: &GenArgs) -> Result<Self> {
        if !g.beta.is_finite() || g.beta < 0.0 {
            return Err(Error::Config(format!(
                "--beta must be a non-negative number, got {}",
                g.beta
            )));
        }
        let animacy = AnimacyLexicon::load(&ctx.path(&g.animacy))?;
        let mut inflections = InflectionLexicon::builtin();
        if let Some(p) = &g.inflections {
            inflections.merge(InflectionLexicon::load(&ctx.path(p))?);
        }
        if let Some(p) = &g.contractions {
            inflections = inflections.with_contractions(ContractionTable::load(&ctx.path(p))?);
        }
        let rules = match &g.rules {
            Some(p) => RuleSet::load(&ctx.path(p))?,
            None => RuleSet::builtin(),
        };
        Ok(GenKit {
            animacy,
            inflections,
            rules,
            options: InferOptions { beta: g.beta },
        })
    }

    fn generator<'a>(&'a self, model: &'a AgreementModel) -> CounterfactualGenerator<'a> {
        CounterfactualGenerator {
            model,
            animacy: &self.animacy,
            inflections: &self.inflections,
            rules: &self.rules,
            options: self.options,
        }
    }
}

#[derive(Default, Serialize)]
struct GenderCounts {
    masc: usize,
    fem: usize,
}

fn cf_gen(ctx: &Ctx, a: &CfGenArgs) -> Result<()> {
    const CMD: &str = "cf-gen";
    let pairs = annotated_pairs(ctx, &a.src, &a.tgt, &a.lang)?;
    let swapped = match &a.swapped {
        Some(p) => {
            let s = ctx.conllu(p, "en")?;
            if s.len() != pairs.len() {
                return Err(Error::Config(format!(
                    "{} swapped sentences for {} pairs",
                    s.len(),
                    pairs.len()
                )));
            }
            Some(s)
        }
        None => None,
    };
    let model = AgreementModel::load(&ctx.path(&a.mrf))?;
    if model.lang() != a.lang {
        return Err(Error::Config(format!(
            "model is for `{}`, not `{}`",
            model.lang(),
            a.lang
        )));
    }
    let kit = GenKit::load(ctx, &a.gen)?;
    let generator = kit.generator(&model);

    // an unchanged line in the swapped file means swap-src skipped it
    let outcomes: Vec<std::result::Result<Counterfactual, Skip>> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let src = swapped
                .as_ref()
                .map(|s| s[i].clone())
                .filter(|s| s.raw != p.src.raw);
            generator.generate_pair(p, src)
        })
        .collect();

    let mut cfs = Vec::new();
    let mut generated = Vec::new();
    let mut flags: Vec<LintFlag> = Vec::new();
    let mut skipped: BTreeMap<String, usize> = BTreeMap::new();
    let mut strict_excluded = 0;
    let mut sources: BTreeMap<FormSource, usize> = BTreeMap::new();
    let mut reports = String::new();
    let mut gender_of: HashMap<String, (String, Gender)> = HashMap::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let id = &pairs[i].id;
        let cf = match outcome {
            Ok(cf) => cf,
            Err(skip) => {
                *skipped.entry(format!("{:?}", skip.reason)).or_default() += 1;
                log::warn(
                    CMD,
                    "skipped",
                    json!({ "id": id, "reason": skip.reason, "detail": skip.detail }),
                );
                continue;
            }
        };
        for t in &cf.report.tokens {
            *sources.entry(t.source).or_default() += 1;
        }
        let record = json!({
            "pair_id": cf.pair.id,
            "parent": id,
            "profession": cf.profession,
            "tokens": cf.report.tokens,
            "warnings": cf.report.warnings,
        });
        reports.push_str(&record.to_string());
        reports.push('\n');
        gender_of.insert(
            id.clone(),
            (
                cf.profession.clone(),
                cf.source_gender.unwrap_or(cf.target_gender),
            ),
        );
        let hazards = lint_counterfactual_pair(&cf.pair);
        for f in &hazards {
            log::warn(
                CMD,
                "flagged",
                json!({ "id": f.pair_id, "kind": f.kind.to_string(), "detail": f.detail }),
            );
        }
        let excluded = a.gen.strict_lint && !hazards.is_empty();
        flags.extend(hazards);
        if excluded {
            strict_excluded += 1;
        } else {
            cfs.push(cf.pair.clone());
        }
        generated.push(cf.pair);
    }
    let balanced = build_balanced_dataset(&pairs, &cfs)?;
    for f in &balanced.identical {
        log::warn(
            CMD,
            "flagged",
            json!({ "id": f.pair_id, "kind": f.kind.to_string(), "detail": f.detail }),
        );
    }
    flags.extend(balanced.identical.iter().cloned());

    let mut per_profession: BTreeMap<&str, GenderCounts> = BTreeMap::new();
    for p in &balanced.pairs {
        let (lemma, g) = match &p.parent {
            Some(parent) => {
                let (l, g) = &gender_of[parent];
                (l, g.opposite())
            }
            None => {
                let (l, g) = &gender_of[&p.id];
                (l, *g)
            }
        };
        let c = per_profession.entry(lemma.as_str()).or_default();
        match g {
            Gender::Masc => c.masc += 1,
            Gender::Fem => c.fem += 1,
        }
    }

    let total_tokens: usize = sources.values().sum();
    let fractions: BTreeMap<String, f64> = [
        FormSource::Lexicon,
        FormSource::SuffixRule,
        FormSource::Unchanged,
    ]
    .into_iter()
    .map(|s| {
        let n = sources.get(&s).copied().unwrap_or(0);
        let f = if total_tokens == 0 {
            0.0
        } else {
            n as f64 / total_tokens as f64
        };
        (format!("{s:?}"), f)
    })
    .collect();
    let mut lint_counts: BTreeMap<String, usize> = BTreeMap::new();
    for f in &flags {
        *lint_counts.entry(f.kind.to_string()).or_default() += 1;
    }

    create_dir(&a.out)?;
    let tgt_name = format!("cf.{}.conllu", a.lang);
    let cf_src: Vec<_> = generated
        .iter()
        .map(|p| with_pair_id(p.src.clone(), &p.id))
        .collect();
    let cf_tgt: Vec<_> = generated
        .iter()
        .map(|p| with_pair_id(p.tgt.clone(), &p.id))
        .collect();
    write(&a.out.join("cf.en.conllu"), &serialize_conllu(&cf_src))?;
    write(&a.out.join(&tgt_name), &serialize_conllu(&cf_tgt))?;
    write(&a.out.join("gb.tsv"), &write_tsv(&balanced.pairs))?;
    write(&a.out.join("lint.tsv"), &write_lint_tsv(&flags))?;
    write(&a.out.join("reinflection.jsonl"), &reports)?;
    let counts = json!({
        "input": pairs.len(),
        "generated": generated.len(),
        "skipped": skipped,
        "strict_lint_excluded": strict_excluded,
        "without_counterfactual": balanced.without_counterfactual.len(),
        "lint": lint_counts,
        "gb_pairs": balanced.pairs.len(),
        "per_profession": per_profession,
        "form_sources": sources.iter().map(|(k, v)| (format!("{k:?}"), *v)).collect::<BTreeMap<_, _>>(),
        "form_source_fractions": fractions,
    });
    let outputs = [
        "cf.en.conllu".to_owned(),
        tgt_name,
        "gb.tsv".into(),
        "lint.tsv".into(),
        "reinflection.jsonl".into(),
    ];
    write_json(
        &a.out.join("manifest.json"),
        &manifest(CMD, ctx, a, counts, &outputs),
    )?;
    log::info(
        CMD,
        "done",
        json!({ "generated": generated.len(), "gb_pairs": balanced.pairs.len() }),
    );
    Ok(())
}

fn assemble(ctx: &Ctx, a: &AssembleArgs) -> Result<()> {
    const CMD: &str = "assemble";
    let path = ctx.path(&a.recipe);
    let recipe = DatasetRecipe::load(&path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mixed = mix_corpora(&recipe, base)?;
    mixed.write(&a.out)?;
    log::info(CMD, "done", json!({ "total": mixed.manifest.total }));
    Ok(())
}

fn evaluate(ctx: &Ctx, a: &EvaluateArgs) -> Result<()> {
    const CMD: &str = "evaluate";
    let stereo = a.stereotypes.as_ref().map(|p| ctx.path(p));
    let items = load_challenge(&ctx.path(&a.challenge), stereo.as_deref())?;
    let text = ctx.read(&a.translations)?;
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() != items.len() {
        return Err(Error::Config(format!(
            "{} translations for {} challenge items",
            lines.len(),
            items.len()
        )));
    }
    let lex = AnimacyLexicon::load(&ctx.path(&a.animacy))?;
    let preds = items
        .par_iter()
        .zip(lines.par_iter())
        .map(|(item, tr)| extract_predicted_gender(item, tr, &lex, &a.lang))
        .collect::<Result<Vec<_>>>()?;
    for (i, p) in preds.iter().enumerate() {
        if p.predicted.is_none() {
            log::warn(
                CMD,
                "unknown_gender",
                json!({ "item": i + 1, "entity": items[i].entity_word, "matched_form": p.matched_form }),
            );
        }
    }
    let report = compute_metrics(
        &items,
        &preds.iter().map(|p| p.predicted).collect::<Vec<_>>(),
    )?;
    create_dir(&a.out)?;
    write(&a.out.join("metrics.json"), &report.to_json())?;
    write(&a.out.join("audit.tsv"), &audit_tsv(&items, &preds))?;
    let counts = json!({
        "items": items.len(),
        "unknown": preds.iter().filter(|p| p.predicted.is_none()).count(),
    });
    let outputs = ["metrics.json".to_owned(), "audit.tsv".into()];
    write_json(
        &a.out.join("manifest.json"),
        &manifest(CMD, ctx, a, counts, &outputs),
    )?;
    log::info(
        CMD,
        "done",
        json!({ "items": items.len(), "acc": report.acc }),
    );
    Ok(())
}

fn pipeline(ctx: &Ctx, a: &PipelineArgs) -> Result<()> {
    const CMD: &str = "pipeline";
    let abs = |p: &Path| -> Result<PathBuf> {
        let p = ctx.path(p);
        std::path::absolute(&p).map_err(|e| Error::io(p, e))
    };
    let out = &a.out;
    create_dir(out)?;
    let stage = Ctx {
        seed: ctx.seed,
        base: out.clone(),
    };
    let gen = GenArgs {
        animacy: abs(&a.gen.animacy)?,
        inflections: a.gen.inflections.as_deref().map(abs).transpose()?,
        rules: a.gen.rules.as_deref().map(abs).transpose()?,
        contractions: a.gen.contractions.as_deref().map(abs).transpose()?,
        ..a.gen.clone()
    };

    let selected_src = PathBuf::from("select/selected.en.conllu");
    let selected_tgt = PathBuf::from(format!("select/selected.{}.conllu", a.lang));
    select(
        &stage,
        &SelectArgs {
            mode: Mode::Gendered,
            lang: a.lang.clone(),
            src: Some(abs(&a.src)?),
            tgt: Some(abs(&a.tgt)?),
            corpus: None,
            animacy: Some(gen.animacy.clone()),
            cap: a.cap,
            sample: None,
            limits: a.limits.clone(),
            out: out.join("select"),
        },
    )?;

    let mut components = vec![ComponentSpec {
        name: ComponentKind::GB,
        path: "cf/gb.tsv".into(),
        lint: Some("cf/lint.tsv".into()),
    }];
    if let Some(corpus) = &a.corpus {
        select(
            &stage,
            &SelectArgs {
                mode: Mode::Neutral,
                lang: a.lang.clone(),
                src: None,
                tgt: None,
                corpus: Some(abs(corpus)?),
                animacy: None,
                cap: a.cap,
                sample: Some(a.sample.unwrap_or_else(|| default_sample(&a.lang))),
                limits: a.limits.clone(),
                out: out.join("random"),
            },
        )?;
        components.push(ComponentSpec {
            name: ComponentKind::Random,
            path: "random/random.tsv".into(),
            lint: None,
        });
    }

    let swapped = PathBuf::from("swap/swapped.en.conllu");
    swap_src(
        &stage,
        &SwapArgs {
            input: selected_src.clone(),
            out: out.join(&swapped),
        },
    )?;

    let mrf = match &a.mrf {
        Some(m) => abs(m)?,
        None => {
            let model = PathBuf::from("mrf/model.mrf");
            train_mrf(
                &stage,
                &TrainArgs {
                    treebank: a.treebank.iter().map(|p| abs(p)).collect::<Result<_>>()?,
                    lang: a.lang.clone(),
                    smoothing: a.smoothing,
                    out: out.join(&model),
                },
            )?;
            model
        }
    };

    cf_gen(
        &stage,
        &CfGenArgs {
            src: selected_src,
            tgt: selected_tgt,
            swapped: Some(swapped),
            mrf,
            lang: a.lang.clone(),
            gen,
            out: out.join("cf"),
        },
    )?;

    if let Some(h) = &a.handcrafted {
        write(&out.join("sb/handcrafted.tsv"), &ctx.read(h)?)?;
        components.push(ComponentSpec {
            name: ComponentKind::SB,
            path: "sb/handcrafted.tsv".into(),
            lint: None,
        });
    }
    let recipe = DatasetRecipe::new(ctx.seed, &a.lang, components);
    write(&out.join("recipe.toml"), &recipe.to_toml())?;
    assemble(
        &stage,
        &AssembleArgs {
            recipe: "recipe.toml".into(),
            out: out.join("finetune"),
        },
    )?;

    let stages = json!({
        "select": "select/manifest.json",
        "random": a.corpus.as_ref().map(|_| "random/manifest.json"),
        "swap-src": "swap/swapped.en.conllu.manifest.json",
        "train-mrf": a.mrf.is_none().then_some("mrf/model.mrf.manifest.json"),
        "cf-gen": "cf/manifest.json",
        "assemble": "finetune/manifest.json",
    });
    let outputs = ["recipe.toml".to_owned(), "finetune/".into()];
    write_json(
        &out.join("manifest.json"),
        &manifest(CMD, ctx, a, json!({ "stages": stages }), &outputs),
    )?;
    Ok(())
}

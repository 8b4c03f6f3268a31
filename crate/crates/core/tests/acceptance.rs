//! Acceptance suite: one line per criterion, nonzero exit if any fails.


use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use cfgen::assembly::build_balanced_dataset;
use cfgen::corpus::parallel::zip_annotated;
use cfgen::corpus::{
    english_pronoun_gender, parse_conllu, AnimacyLexicon, AnnotatedSentence, Gender,
    InflectionLexicon, Origin,
};
use cfgen::mrf::{AgreementModel, InferOptions};
use cfgen::reinflect::{CounterfactualGenerator, RuleSet};
use cfgen::selection::{filter_gendered, filter_neutral, sample_per_profession, Limits};
use cfgen::swap::swap_english_gender;

type Check = Result<(), String>;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn cfgen(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cfgen"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "cfgen {} exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Runs cf-gen on a worked example; returns the counterfactual target text
/// and the lint file.
fn worked_cf(tmp: &Path, name: &str) -> Result<(String, String), String> {
    let model = tmp.join("model.mrf");
    if !model.exists() {
        cfgen(&[
            "--quiet",
            "train-mrf",
            "--treebank",
            s(&fixture("fr_treebank.conllu")),
            "--lang",
            "fr",
            "--out",
            s(&model),
        ])?;
    }
    let out = tmp.join(name);
    cfgen(&[
        "--quiet",
        "cf-gen",
        "--src",
        s(&fixture(&format!("worked/{name}.en.conllu"))),
        "--tgt",
        s(&fixture(&format!("worked/{name}.fr.conllu"))),
        "--mrf",
        s(&model),
        "--animacy",
        s(&fixture("animacy.tsv")),
        "--inflections",
        s(&fixture("inflections.tsv")),
        "--lang",
        "fr",
        "--out",
        s(&out),
    ])?;
    let cf = std::fs::read_to_string(out.join("cf.fr.conllu")).map_err(|e| e.to_string())?;
    let sents = parse_conllu(&cf, "fr").map_err(|e| e.to_string())?;
    let [sent] = &sents[..] else {
        return Err(format!(
            "{name}: expected one counterfactual, got {}",
            sents.len()
        ));
    };
    let lint = std::fs::read_to_string(out.join("lint.tsv")).map_err(|e| e.to_string())?;
    Ok((sent.raw.clone(), lint))
}

fn flagged_hazard(lint: &str) -> bool {
    lint.lines()
        .skip(1)
        .any(|l| l.split('\t').nth(1) == Some("PronounMappingHazard"))
}

fn c1(tmp: &Path) -> Check {
    let (cf, lint) = worked_cf(tmp, "soldat")?;
    ensure(cf == "La soldate allemande est très contente.", || {
        format!("got `{cf}`")
    })?;
    ensure(lint.lines().count() == 1, || {
        format!("unexpected flags: {lint}")
    })
}

fn c2(tmp: &Path) -> Check {
    let (cf, lint) = worked_cf(tmp, "journaliste")?;
    ensure(
        cf == "Il n'a pas attendu que la journaliste l'appelle.",
        || format!("got `{cf}`"),
    )?;
    ensure(flagged_hazard(&lint), || {
        format!("no PronounMappingHazard in {lint}")
    })
}

fn c3(tmp: &Path) -> Check {
    let (cf, lint) = worked_cf(tmp, "cliente")?;
    ensure(
        cf == "Si la cliente n'aime pas la photographie, il ne paie rien.",
        || format!("got `{cf}`"),
    )?;
    ensure(flagged_hazard(&lint), || {
        format!("no PronounMappingHazard in {lint}")
    })
}

fn c4() -> Check {
    let start = Instant::now();
    let n = 500;
    for seed in 0..n {
        mrf_oracle::check(seed).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || {
        format!("{n} trees took {took:?}")
    })
}

fn c5() -> Check {
    let mut rows = 0;
    for line in read("reference_scores.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let cols: Vec<&str> = line.split('\t').collect();
        let num = |i: usize| cols[i].parse::<f64>().map_err(|e| format!("{line}: {e}"));
        let (pro, anti, printed) = (num(3)?, num(4)?, num(5)?);
        let delta = pro - anti;
        ensure((delta - printed).abs() <= 0.5 + 1e-9, || {
            format!(
                "{} {}: {pro} - {anti} = {delta:.1}, printed {printed}",
                cols[0], cols[1]
            )
        })?;
        rows += 1;
    }
    ensure(rows == 18, || format!("{rows} rows, expected 18"))
}

fn c6(tmp: &Path) -> Check {
    let out = tmp.join("eval");
    cfgen(&[
        "--quiet",
        "evaluate",
        "--challenge",
        s(&fixture("challenge/items.tsv")),
        "--translations",
        s(&fixture("challenge/translations.fr.txt")),
        "--animacy",
        s(&fixture("animacy.tsv")),
        "--lang",
        "fr",
        "--out",
        s(&out),
    ])?;
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out.join("metrics.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    // by hand: gold M -> M3 F2 U1, gold F -> M1 F3 U2; pro 3/4, anti 1/4
    let f1 = |p: f64, r: f64| 2.0 * p * r / (p + r) * 100.0;
    let (f1_m, f1_f) = (f1(3.0 / 4.0, 3.0 / 6.0), f1(3.0 / 5.0, 3.0 / 6.0));
    let expected = [
        ("acc", 50.0),
        ("pro", 75.0),
        ("anti", 25.0),
        ("delta_s", 50.0),
        ("delta_g", f1_m - f1_f),
    ];
    for (key, want) in expected {
        let got = json["raw"][key]
            .as_f64()
            .ok_or_else(|| format!("raw.{key} missing"))?;
        ensure((got - want).abs() < 1e-9, || {
            format!("{key}: got {got}, expected {want}")
        })?;
    }
    Ok(())
}

fn c7() -> Check {
    let src = parse_conllu(&read("filter/en.conllu"), "en").map_err(|e| e.to_string())?;
    let tgt = parse_conllu(&read("filter/fr.conllu"), "fr").map_err(|e| e.to_string())?;
    let ids: Vec<String> = src
        .iter()
        .map(|s| {
            s.comments
                .iter()
                .find_map(|c| c.trim().strip_prefix("sent_id = "))
                .unwrap_or("?")
                .to_owned()
        })
        .collect();
    let pairs = zip_annotated(src, tgt, Origin::Original).map_err(|e| e.to_string())?;
    let lex = AnimacyLexicon::load(&fixture("animacy.tsv")).map_err(|e| e.to_string())?;
    let limits = Limits::default();
    let mut exercised: BTreeMap<String, usize> = BTreeMap::new();
    let mut checked = 0;
    for line in read("filter/expected.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let [id, mode, reasons] = line.split('\t').collect::<Vec<_>>()[..] else {
            return Err(format!("bad expected row `{line}`"));
        };
        let i = ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| format!("{id} not in corpus"))?;
        let verdict = match mode {
            "gendered" => filter_gendered(&pairs[i], &lex, &limits).0,
            "neutral" => filter_neutral(&pairs[i], &limits),
            _ => return Err(format!("bad mode `{mode}`")),
        };
        let got = if verdict.accepted() {
            "_".to_owned()
        } else {
            verdict.reasons_label()
        };
        ensure(got == reasons, || {
            format!("{id} ({mode}): got {got}, expected {reasons}")
        })?;
        for r in reasons.split(',').filter(|r| *r != "_") {
            *exercised.entry(format!("{mode}:{r}")).or_default() += 1;
        }
        checked += 1;
    }
    ensure(checked == 20, || format!("{checked} rows, expected 20"))?;
    let criteria = [
        "gendered:Length",
        "gendered:LengthRatio",
        "gendered:Animacy",
        "gendered:Wellformedness",
        "gendered:ProperNoun",
        "neutral:Length",
        "neutral:LengthRatio",
        "neutral:Wellformedness",
    ];
    for c in criteria {
        let n = exercised.get(c).copied().unwrap_or(0);
        ensure(n >= 2, || format!("{c} exercised by {n} pairs"))?;
    }
    Ok(())
}

fn profession_name(i: usize) -> String {
    let a = (b'a' + (i / 26) as u8) as char;
    let b = (b'a' + (i % 26) as u8) as char;
    format!("agent{a}{b}")
}

/// One annotated pair: "The <p> finished his|her work." / "Le|La <p>[e] a fini son travail."
fn synthetic_pair(prof: &str, fem: bool) -> String {
    let (pron, det, noun, g) = if fem {
        ("her", "La", format!("{prof}e"), "Fem")
    } else {
        ("his", "Le", prof.to_owned(), "Masc")
    };
    let mut en = String::new();
    let _ = writeln!(en, "# text = The {prof} finished {pron} work.");
    let _ = writeln!(
        en,
        "1\tThe\tthe\tDET\t_\tDefinite=Def|PronType=Art\t2\tdet\t_\t_"
    );
    let _ = writeln!(
        en,
        "2\t{prof}\t{prof}\tNOUN\t_\tNumber=Sing\t3\tnsubj\t_\t_"
    );
    let _ = writeln!(
        en,
        "3\tfinished\tfinish\tVERB\t_\tTense=Past\t0\troot\t_\t_"
    );
    let _ = writeln!(
        en,
        "4\t{pron}\t{}\tPRON\t_\tGender={g}|Poss=Yes|PronType=Prs\t5\tnmod:poss\t_\t_",
        if fem { "she" } else { "he" }
    );
    let _ = writeln!(
        en,
        "5\twork\twork\tNOUN\t_\tNumber=Sing\t3\tobj\t_\tSpaceAfter=No"
    );
    let _ = writeln!(en, "6\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_");
    let mut fr = String::new();
    let _ = writeln!(fr, "# text = {det} {noun} a fini son travail.");
    let _ = writeln!(
        fr,
        "1\t{det}\tle\tDET\t_\tDefinite=Def|Gender={g}|Number=Sing|PronType=Art\t2\tdet\t_\t_"
    );
    let _ = writeln!(
        fr,
        "2\t{noun}\t{prof}\tNOUN\t_\tGender={g}|Number=Sing\t4\tnsubj\t_\t_"
    );
    let _ = writeln!(
        fr,
        "3\ta\tavoir\tAUX\t_\tMood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin\t4\taux\t_\t_"
    );
    let _ = writeln!(
        fr,
        "4\tfini\tfinir\tVERB\t_\tGender=Masc|Number=Sing|Tense=Past|VerbForm=Part\t0\troot\t_\t_"
    );
    let _ = writeln!(
        fr,
        "5\tson\tson\tDET\t_\tNumber=Sing|Poss=Yes|PronType=Prs\t6\tdet\t_\t_"
    );
    let _ = writeln!(
        fr,
        "6\ttravail\ttravail\tNOUN\t_\tGender=Masc|Number=Sing\t4\tobj\t_\tSpaceAfter=No"
    );
    let _ = writeln!(fr, "7\t.\t.\tPUNCT\t_\t_\t4\tpunct\t_\t_");
    format!("{en}\n\u{0}{fr}\n")
}

fn c8() -> Check {
    let mut lex_tsv = String::new();
    let (mut en, mut fr) = (String::new(), String::new());
    let mut available = BTreeMap::new();
    for i in 0..50 {
        let prof = profession_name(i);
        let _ = writeln!(lex_tsv, "{prof}\tfr\t{prof}\t{prof}e");
        // 1..=25 sentences per profession with a skewed gender mix
        let n = 1 + (i * 7) % 25;
        for j in 0..n {
            let pair = synthetic_pair(&prof, j % 3 == 0);
            let (e, f) = pair.split_once('\u{0}').expect("separator");
            en.push_str(e);
            fr.push_str(f);
        }
        available.insert(prof.clone(), n);
    }
    let lex = AnimacyLexicon::from_tsv(&lex_tsv).map_err(|e| e.to_string())?;
    let src = parse_conllu(&en, "en").map_err(|e| e.to_string())?;
    let tgt = parse_conllu(&fr, "fr").map_err(|e| e.to_string())?;
    let pairs = zip_annotated(src, tgt, Origin::Original).map_err(|e| e.to_string())?;
    let sels: Vec<_> = pairs
        .iter()
        .filter_map(|p| filter_gendered(p, &lex, &Limits::default()).1)
        .collect();
    ensure(sels.len() == pairs.len(), || {
        format!("only {} of {} pairs selected", sels.len(), pairs.len())
    })?;
    let sampled = sample_per_profession(sels, 10, 11);

    let treebank = parse_conllu(&read("fr_treebank.conllu"), "fr").map_err(|e| e.to_string())?;
    let model = AgreementModel::train(&treebank, "fr", 0.1).map_err(|e| e.to_string())?;
    let inflections = InflectionLexicon::builtin();
    let rules = RuleSet::builtin();
    let generator = CounterfactualGenerator {
        model: &model,
        animacy: &lex,
        inflections: &inflections,
        rules: &rules,
        options: InferOptions::default(),
    };
    let mut cfs = Vec::new();
    for sel in &sampled {
        cfs.push(
            generator
                .generate(sel)
                .map_err(|e| format!("{}: {e}", sel.pair.id))?
                .pair,
        );
    }
    let gb = build_balanced_dataset(&sampled, &cfs).map_err(|e| e.to_string())?;

    let mut originals: BTreeMap<String, usize> = BTreeMap::new();
    let mut by_gender: BTreeMap<String, [usize; 2]> = BTreeMap::new();
    for p in &gb.pairs {
        let prof = p.src.tokens[1].lemma.clone();
        let g = p
            .src
            .tokens
            .iter()
            .find_map(|t| english_pronoun_gender(&t.surface))
            .ok_or_else(|| format!("{}: no pronoun", p.id))?;
        by_gender.entry(prof.clone()).or_default()[(g == Gender::Fem) as usize] += 1;
        if p.parent.is_none() {
            *originals.entry(prof).or_default() += 1;
        }
    }
    ensure(by_gender.len() == 50, || {
        format!("{} professions in GB", by_gender.len())
    })?;
    for (prof, [m, f]) in &by_gender {
        ensure(m == f, || format!("{prof}: {m} masculine vs {f} feminine"))?;
        let o = originals[prof];
        ensure(o == available[prof].min(10), || {
            format!("{prof}: {o} originals of {}", available[prof])
        })?;
    }
    Ok(())
}

fn tree_snapshot(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).map_err(|e| e.to_string())? {
            let p = entry.map_err(|e| e.to_string())?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p
                    .strip_prefix(dir)
                    .expect("under dir")
                    .to_string_lossy()
                    .into_owned();
                out.insert(rel, std::fs::read(&p).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok(out)
}

fn c9(tmp: &Path) -> Check {
    let run = |name: &str, jobs: &str| -> Result<BTreeMap<String, Vec<u8>>, String> {
        let out = tmp.join(name);
        cfgen(&[
            "--quiet",
            "--seed",
            "7",
            "--jobs",
            jobs,
            "pipeline",
            "--lang",
            "fr",
            "--src",
            s(&fixture("pipeline/en.conllu")),
            "--tgt",
            s(&fixture("pipeline/fr.conllu")),
            "--corpus",
            s(&fixture("pipeline/random.tsv")),
            "--handcrafted",
            s(&fixture("pipeline/handcrafted.tsv")),
            "--treebank",
            s(&fixture("fr_treebank.conllu")),
            "--animacy",
            s(&fixture("animacy.tsv")),
            "--inflections",
            s(&fixture("inflections.tsv")),
            "--out",
            s(&out),
        ])?;
        tree_snapshot(&out)
    };
    let a = run("run-a", "1")?;
    let b = run("run-b", "8")?;
    let c = run("run-c", "8")?;
    ensure(
        a.contains_key("finetune/finetune.tsv") && a.contains_key("manifest.json"),
        || format!("missing outputs: {:?}", a.keys().collect::<Vec<_>>()),
    )?;
    for (other, label) in [(&b, "--jobs 8"), (&c, "second --jobs 8 run")] {
        ensure(a.keys().eq(other.keys()), || {
            format!("{label}: different file set")
        })?;
        for (k, v) in &a {
            ensure(other[k] == *v, || format!("{label}: {k} differs"))?;
        }
    }
    Ok(())
}

fn involution(sent: &AnnotatedSentence, label: &str) -> Result<Option<String>, String> {
    let pronouns: Vec<usize> = sent
        .tokens
        .iter()
        .filter(|t| english_pronoun_gender(&t.surface).is_some())
        .map(|t| t.index)
        .collect();
    let [i] = pronouns[..] else {
        return Ok(None);
    };
    let once = swap_english_gender(sent, i).map_err(|e| format!("{label}: {e}"))?;
    let twice = swap_english_gender(&once, i).map_err(|e| format!("{label}: {e}"))?;
    ensure(twice == *sent, || {
        format!(
            "{label}: `{}` -> `{}` -> `{}`",
            sent.raw, once.raw, twice.raw
        )
    })?;
    Ok(Some(once.raw))
}

fn c10() -> Check {
    let her30 = parse_conllu(&read("her30/en.conllu"), "en").map_err(|e| e.to_string())?;
    let expected: Vec<(String, String)> = read("her30/expected.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (a, b) = l.split_once('\t').expect("two columns");
            (a.to_owned(), b.to_owned())
        })
        .collect();
    ensure(her30.len() == 30 && expected.len() == 30, || {
        "her30 fixture must hold 30 sentences".into()
    })?;
    for (sent, (id, want)) in her30.iter().zip(&expected) {
        let once =
            involution(sent, id)?.ok_or_else(|| format!("{id}: no single gendered pronoun"))?;
        ensure(once == *want, || {
            format!("{id}: swapped to `{once}`, expected `{want}`")
        })?;
    }

    let lex = AnimacyLexicon::load(&fixture("animacy.tsv")).map_err(|e| e.to_string())?;
    let mut accepted = 0;
    for name in ["pipeline", "filter"] {
        let src =
            parse_conllu(&read(&format!("{name}/en.conllu")), "en").map_err(|e| e.to_string())?;
        let tgt =
            parse_conllu(&read(&format!("{name}/fr.conllu")), "fr").map_err(|e| e.to_string())?;
        for p in zip_annotated(src, tgt, Origin::Original).map_err(|e| e.to_string())? {
            if let (_, Some(sel)) = filter_gendered(&p, &lex, &Limits::default()) {
                involution(&sel.pair.src, &format!("{name} {}", p.id))?
                    .ok_or_else(|| format!("{name} {}: accepted without a pronoun", p.id))?;
                accepted += 1;
            }
        }
    }
    for name in ["journaliste", "cliente"] {
        for sent in parse_conllu(&read(&format!("worked/{name}.en.conllu")), "en")
            .map_err(|e| e.to_string())?
        {
            involution(&sent, name)?.ok_or_else(|| format!("{name}: no pronoun"))?;
        }
    }
    ensure(accepted >= 17, || {
        format!("only {accepted} accepted sentences checked")
    })
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let t = tmp.path();
    let criteria: Vec<Criterion<'_>> = vec![
        ("soldat worked example through cf-gen", Box::new(|| c1(t))),
        (
            "journaliste counterfactual and hazard flag",
            Box::new(|| c2(t)),
        ),
        ("cliente counterfactual and hazard flag", Box::new(|| c3(t))),
        (
            "belief propagation equals brute-force MAP on 500 random trees",
            Box::new(c4),
        ),
        (
            "delta_s arithmetic over the 18 reference score rows",
            Box::new(c5),
        ),
        (
            "metrics of the 12-item challenge fixture",
            Box::new(|| c6(t)),
        ),
        (
            "filter verdicts of the 20-pair labeled fixture",
            Box::new(c7),
        ),
        (
            "per-profession balance and cap on 50 synthetic professions",
            Box::new(c8),
        ),
        (
            "pipeline byte-identical across runs and --jobs 1/8",
            Box::new(|| c9(t)),
        ),
        (
            "English swap is an involution on the fixture sentences",
            Box::new(c10),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

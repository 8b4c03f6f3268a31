//! Exhaustive MAP over every tag assignment, for checking belief propagation.

use cfgen::corpus::{AnnotatedSentence, Gender, Number, Token};
use cfgen::mrf::{AgreementModel, InferOptions, Intervention, Tag, TagSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub struct Case {
    pub sent: AnnotatedSentence,
    pub model: AgreementModel,
    pub iv: Intervention,
    pub opts: InferOptions,
}

fn feats_for(tag: Tag) -> String {
    match tag {
        Tag::NoAgr => "_".into(),
        Tag::Agr {
            gender,
            number: None,
        } => format!("Gender={gender}"),
        Tag::Agr {
            gender,
            number: Some(n),
        } => format!("Gender={gender}|Number={n}"),
    }
}

/// Random tree of 1..=6 tokens, random tag space and potentials.
pub fn random_case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = [
        Tag::new(Gender::Masc, Some(Number::Sing)),
        Tag::new(Gender::Masc, Some(Number::Plur)),
        Tag::new(Gender::Fem, Some(Number::Sing)),
        Tag::new(Gender::Fem, Some(Number::Plur)),
        Tag::new(Gender::Masc, None),
        Tag::new(Gender::Fem, None),
    ];
    let mut chosen: Vec<Tag> = all
        .iter()
        .copied()
        .filter(|_| rng.random_bool(0.5))
        .collect();
    if chosen.is_empty() {
        chosen.push(all[rng.random_range(0..all.len())]);
    }
    let space = TagSpace::new(chosen);
    let k = space.len();

    let n = rng.random_range(1..=6usize);
    // random tree: attach each node of a shuffled order to an earlier one
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let mut heads = vec![0usize; n + 1];
    for pos in 1..n {
        heads[perm[pos]] = perm[rng.random_range(0..pos)];
    }
    let uposes = ["A", "B", "C"];
    let deprels = ["x", "y", "z"];
    let tokens = (1..=n)
        .map(|i| {
            let tag = space.get(rng.random_range(0..k));
            let deprel = if heads[i] == 0 {
                "root"
            } else {
                deprels[rng.random_range(0..3)]
            };
            let upos = uposes[rng.random_range(0..3)];
            Token::new(
                i,
                &format!("w{i}"),
                &format!("w{i}"),
                upos,
                heads[i],
                deprel,
            )
            .with_feats(&feats_for(tag))
        })
        .collect();
    let sent = AnnotatedSentence::from_tokens(tokens, "xx");

    let mut unary = BTreeMap::new();
    for u in &uposes[..2] {
        unary.insert(
            u.to_string(),
            (0..k).map(|_| rng.random_range(-5.0..0.0)).collect(),
        );
    }
    let mut pairwise = BTreeMap::new();
    for d in &deprels[..2] {
        pairwise.insert(
            d.to_string(),
            (0..k * k).map(|_| rng.random_range(-5.0..0.0)).collect(),
        );
    }
    let model = AgreementModel::from_parts("xx", 0.1, space.clone(), unary, pairwise).unwrap();

    let agr: Vec<Tag> = space
        .tags()
        .iter()
        .copied()
        .filter(|t| *t != Tag::NoAgr)
        .collect();
    let iv = Intervention {
        token_index: rng.random_range(1..=n),
        forced_tag: agr[rng.random_range(0..agr.len())],
    };
    let opts = InferOptions {
        beta: rng.random_range(0.0..3.0),
    };
    Case {
        sent,
        model,
        iv,
        opts,
    }
}

/// Score of a full assignment (tag indices), or -inf if it violates the clamp.
pub fn score(case: &Case, tags: &[usize]) -> f64 {
    let space = case.model.space();
    let mut total = 0.0;
    for (i, tok) in case.sent.tokens.iter().enumerate() {
        if tok.index == case.iv.token_index {
            if space.get(tags[i]) != case.iv.forced_tag {
                return f64::NEG_INFINITY;
            }
        } else {
            let u = case.model.unary(&tok.upos).map_or(0.0, |v| v[tags[i]]);
            let orig = Tag::of(&tok.feats);
            let bonus = if space.get(tags[i]) == orig {
                case.opts.beta
            } else {
                0.0
            };
            total += u + bonus;
        }
        if tok.head != 0 {
            let m = case.model.pairwise(&tok.deprel);
            total += m.map_or(0.0, |m| m[tags[tok.head - 1] * space.len() + tags[i]]);
        }
    }
    total
}

/// Best and second-best scores with the best assignment.
pub fn brute_force(case: &Case) -> (Vec<usize>, f64, f64) {
    let n = case.sent.len();
    let k = case.model.space().len();
    let mut cur = vec![0usize; n];
    let mut best = (Vec::new(), f64::NEG_INFINITY, f64::NEG_INFINITY);
    loop {
        let s = score(case, &cur);
        if s > best.1 {
            best = (cur.clone(), s, best.1);
        } else if s > best.2 {
            best.2 = s;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return best;
            }
            cur[pos] += 1;
            if cur[pos] < k {
                break;
            }
            cur[pos] = 0;
            pos += 1;
        }
    }
}

/// Checks BP against enumeration. Err carries a description of the mismatch.
pub fn check(seed: u64) -> Result<(), String> {
    let case = random_case(seed);
    let bp = cfgen::mrf::infer_tags(&case.sent, &case.model, case.iv, case.opts);
    let space = case.model.space();
    let bp_idx: Vec<usize> = bp
        .iter()
        .map(|t| space.index_of(*t).expect("in-space case"))
        .collect();
    let (best, best_score, second) = brute_force(&case);
    let bp_score = score(&case, &bp_idx);
    if (bp_score - best_score).abs() > 1e-9 {
        return Err(format!(
            "seed {seed}: bp score {bp_score} vs optimum {best_score}"
        ));
    }
    if best_score - second > 1e-9 && bp_idx != best {
        return Err(format!(
            "seed {seed}: bp {bp_idx:?} vs unique optimum {best:?}"
        ));
    }
    Ok(())
}

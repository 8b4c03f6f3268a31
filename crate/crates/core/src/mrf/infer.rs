use std::collections::BTreeSet;

use crate::corpus::{AnnotatedSentence, Gender, Number};
use crate::mrf::model::AgreementModel;
use crate::mrf::tags::Tag;

/// Gender change imposed on one token (the animate noun).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Intervention {
    pub token_index: usize,
    pub forced_tag: Tag,
}

impl Intervention {
    pub fn new(token_index: usize, gender: Gender, number: Option<Number>) -> Self {
        Intervention {
            token_index,
            forced_tag: Tag::new(gender, number),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InferOptions {
    /// Log bonus added to each free token's original tag.
    pub beta: f64,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions { beta: 2.0 }
    }
}

fn pick(scores: impl Iterator<Item = f64>, prefer: usize) -> (usize, f64) {
    let mut best = (usize::MAX, f64::NEG_INFINITY);
    for (t, v) in scores.enumerate() {
        let better =
            best.0 == usize::MAX || v > best.1 || (v == best.1 && t == prefer && best.0 != prefer);
        if better {
            best = (t, v);
        }
    }
    best
}

/// MAP tags under the agreement model with the intervention clamped, by
/// max-product belief propagation over the dependency tree (log space).
///
/// Each free token gets `opts.beta` added to its original tag. Ties go to
/// the original tag, then to the lower tag in the space order. Tags outside
/// the model's space are represented by their same-gender proxy and
/// restored on output. Returns one tag per token, in token order.
pub fn infer_tags(
    sent: &AnnotatedSentence,
    model: &AgreementModel,
    iv: Intervention,
    opts: InferOptions,
) -> Vec<Tag> {
    let n = sent.tokens.len();
    let space = model.space();
    let k = space.len();
    let original: Vec<Tag> = sent.tokens.iter().map(|t| Tag::of(&t.feats)).collect();
    let mut prefer: Vec<usize> = original.iter().map(|&t| space.proxy(t)).collect();
    let clamped = iv.token_index.checked_sub(1).filter(|&i| i < n);
    if let Some(i) = clamped {
        prefer[i] = space.proxy(iv.forced_tag);
    }

    // node potentials
    let mut up: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let tok = &sent.tokens[i];
            (0..k)
                .map(|t| {
                    if Some(i) == clamped {
                        if t == prefer[i] {
                            0.0
                        } else {
                            f64::NEG_INFINITY
                        }
                    } else {
                        model.unary_at(&tok.upos, t) + if t == prefer[i] { opts.beta } else { 0.0 }
                    }
                })
                .collect()
        })
        .collect();

    // breadth-first order from the roots; nodes on cycles are never reached
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, t) in sent.tokens.iter().enumerate() {
        if t.head <= n && t.head != i + 1 {
            children[t.head].push(i + 1);
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut queue: std::collections::VecDeque<usize> = children[0].iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        order.push(v);
        queue.extend(children[v].iter().copied());
    }

    // upward pass: best child tag for every parent tag
    let mut best_child: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &v in order.iter().rev() {
        let tok = &sent.tokens[v - 1];
        if tok.head == 0 {
            continue;
        }
        let mut msg = vec![0.0; k];
        let mut arg = vec![0; k];
        for (s, (m, a)) in msg.iter_mut().zip(arg.iter_mut()).enumerate() {
            let (t, val) = pick(
                (0..k).map(|t| model.pair_at(&tok.deprel, s, t) + up[v - 1][t]),
                prefer[v - 1],
            );
            *m = val;
            *a = t;
        }
        best_child[v] = arg;
        let parent = &mut up[tok.head - 1];
        for (p, m) in parent.iter_mut().zip(&msg) {
            *p += m;
        }
    }

    // downward decoding
    let mut chosen: Vec<Option<usize>> = vec![None; n];
    for &v in &order {
        let tok = &sent.tokens[v - 1];
        let t = if tok.head == 0 {
            pick(up[v - 1].iter().copied(), prefer[v - 1]).0
        } else {
            let s = chosen[tok.head - 1].expect("parents decoded first");
            best_child[v][s]
        };
        chosen[v - 1] = Some(t);
    }

    (0..n)
        .map(|i| match chosen[i] {
            _ if Some(i) == clamped => iv.forced_tag,
            Some(t) if t == prefer[i] && space.index_of(original[i]).is_none() => original[i],
            Some(t) => space.get(t),
            None => original[i],
        })
        .collect()
}

/// Tokens to reinflect: those whose tag changed, the intervened token, and
/// for French and Italian every DET attached to the intervened token.
pub fn mark_reinflection_targets(
    sent: &AnnotatedSentence,
    new_tags: &[Tag],
    iv: Intervention,
    lang: &str,
) -> BTreeSet<usize> {
    let mut marks: BTreeSet<usize> = sent
        .tokens
        .iter()
        .zip(new_tags)
        .filter(|(t, &new)| Tag::of(&t.feats) != new)
        .map(|(t, _)| t.index)
        .collect();
    marks.insert(iv.token_index);
    if matches!(lang, "fr" | "it") {
        marks.extend(
            sent.children(iv.token_index)
                .filter(|t| t.upos == "DET")
                .map(|t| t.index),
        );
    }
    marks
}

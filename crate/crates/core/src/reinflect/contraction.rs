use std::collections::BTreeSet;

use crate::corpus::{AnnotatedSentence, ContractionTable, Multiword, Token};
use crate::swap::match_case;

fn untagged(upos: &str) -> bool {
    upos.is_empty() || upos == "_"
}

/// Only a preposition followed by an article fuses; *de le faire* (clitic
/// pronoun) does not.
fn can_merge(first: &Token, second: &Token) -> bool {
    (first.upos == "ADP" || untagged(&first.upos))
        && (second.upos == "DET" || untagged(&second.upos))
}

fn contracted<'a>(
    table: &'a ContractionTable,
    lang: &str,
    first: &Token,
    second: &Token,
) -> Option<&'a str> {
    if !can_merge(first, second) {
        return None;
    }
    table.get(lang, &first.surface, &second.surface)
}

/// Merges every adjacent (preposition, article) pair listed in the table
/// into one token, left to right until nothing changes. The merged token
/// keeps the preposition's annotation.
pub fn apply_contractions(tokens: &[Token], table: &ContractionTable, lang: &str) -> Vec<Token> {
    let mut cur = tokens.to_vec();
    loop {
        let mut out = Vec::with_capacity(cur.len());
        let mut changed = false;
        let mut i = 0;
        while i < cur.len() {
            if let Some(form) = cur
                .get(i + 1)
                .and_then(|next| contracted(table, lang, &cur[i], next))
            {
                let mut merged = cur[i].clone();
                merged.surface = match_case(&cur[i].surface, form);
                merged.space_after = cur[i + 1].space_after;
                out.push(merged);
                changed = true;
                i += 2;
            } else {
                out.push(cur[i].clone());
                i += 1;
            }
        }
        cur = out;
        if !changed {
            return cur;
        }
    }
}

/// Sentence-level contraction after reinflection. Multiword ranges that
/// cover a modified token are dissolved; then every adjacent pair touching
/// a modified token that the table contracts becomes a new multiword range,
/// so the syntactic words stay in the tree.
pub fn contract_sentence(
    sent: &mut AnnotatedSentence,
    table: &ContractionTable,
    modified: &BTreeSet<usize>,
) {
    let (dissolved, kept): (Vec<Multiword>, Vec<Multiword>) = std::mem::take(&mut sent.multiwords)
        .into_iter()
        .partition(|mw| modified.iter().any(|&i| mw.covers(i)));
    sent.multiwords = kept;
    for mw in dissolved {
        for i in mw.start..=mw.end {
            if let Some(t) = sent.token_mut(i) {
                t.space_after = if i == mw.end { mw.space_after } else { true };
            }
        }
    }

    let n = sent.tokens.len();
    let mut i = 1;
    while i < n {
        let free = |j: usize| !sent.multiwords.iter().any(|m| m.covers(j));
        let touches = modified.contains(&i) || modified.contains(&(i + 1));
        if touches && free(i) && free(i + 1) {
            let (a, b) = (&sent.tokens[i - 1], &sent.tokens[i]);
            if let Some(form) = contracted(table, &sent.lang, a, b) {
                let mw = Multiword::new(i, i + 1, &match_case(&a.surface, form), b.space_after);
                sent.multiwords.push(mw);
                i += 2;
                continue;
            }
        }
        i += 1;
    }
    sent.multiwords.sort_by_key(|m| m.start);
}

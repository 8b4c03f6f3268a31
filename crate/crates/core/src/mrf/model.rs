use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::corpus::AnnotatedSentence;
use crate::error::{in_file, read_to_string, Error, Result};
use crate::mrf::tags::{Tag, TagSpace};

const FORMAT_VERSION: u32 = 1;

/// Count-based potentials of the agreement MRF, in log space.
///
/// `unary[upos][t]` is the log relative frequency of tag `t` among tokens
/// with that upos; `pairwise[deprel][h * T + c]` is the log relative
/// frequency of the (head tag, child tag) pair among edges with that label.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementModel {
    lang: String,
    smoothing: f64,
    space: TagSpace,
    unary: BTreeMap<String, Vec<f64>>,
    pairwise: BTreeMap<String, Vec<f64>>,
}

fn log_normalize(counts: &[u64], k: f64) -> Vec<f64> {
    let total: f64 = counts.iter().map(|&c| c as f64 + k).sum();
    counts
        .iter()
        .map(|&c| ((c as f64 + k) / total).ln())
        .collect()
}

impl AgreementModel {
    /// Estimates potentials from a treebank with add-`smoothing` counts.
    /// The tag space is NoAgr plus every observed (gender, number) pair.
    pub fn train(treebank: &[AnnotatedSentence], lang: &str, smoothing: f64) -> Result<Self> {
        if !(smoothing >= 0.0 && smoothing.is_finite()) {
            return Err(Error::Config(format!(
                "smoothing must be a finite value >= 0, got {smoothing}"
            )));
        }
        if treebank.iter().all(|s| s.tokens.is_empty()) {
            return Err(Error::Model("cannot train on an empty treebank".into()));
        }
        for (i, s) in treebank.iter().enumerate() {
            s.validate_tree()
                .map_err(|e| Error::Model(format!("treebank sentence {}: {e}", i + 1)))?;
        }
        let space = TagSpace::new(
            treebank
                .iter()
                .flat_map(|s| s.tokens.iter().map(|t| Tag::of(&t.feats))),
        );
        let n = space.len();
        let idx = |t: &crate::corpus::Token| {
            space
                .index_of(Tag::of(&t.feats))
                .expect("space covers treebank")
        };

        let mut unary: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        let mut pairwise: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for s in treebank {
            for t in &s.tokens {
                unary.entry(t.upos.clone()).or_insert_with(|| vec![0; n])[idx(t)] += 1;
                if t.head != 0 {
                    let h = s.token(t.head).expect("validated tree");
                    pairwise
                        .entry(t.deprel.clone())
                        .or_insert_with(|| vec![0; n * n])[idx(h) * n + idx(t)] += 1;
                }
            }
        }
        Ok(AgreementModel {
            lang: lang.to_owned(),
            smoothing,
            space,
            unary: unary
                .into_iter()
                .map(|(k, c)| (k, log_normalize(&c, smoothing)))
                .collect(),
            pairwise: pairwise
                .into_iter()
                .map(|(k, c)| (k, log_normalize(&c, smoothing)))
                .collect(),
        })
    }

    /// Builds a model from explicit potentials, checking their shapes.
    pub fn from_parts(
        lang: &str,
        smoothing: f64,
        space: TagSpace,
        unary: BTreeMap<String, Vec<f64>>,
        pairwise: BTreeMap<String, Vec<f64>>,
    ) -> Result<Self> {
        let n = space.len();
        if let Some((k, _)) = unary.iter().find(|(_, v)| v.len() != n) {
            return Err(Error::Model(format!(
                "unary potential for `{k}` does not cover the tag space"
            )));
        }
        if let Some((k, _)) = pairwise.iter().find(|(_, v)| v.len() != n * n) {
            return Err(Error::Model(format!(
                "pairwise potential for `{k}` does not cover the tag space"
            )));
        }
        let nan = unary
            .values()
            .chain(pairwise.values())
            .flatten()
            .any(|x| x.is_nan());
        if nan {
            return Err(Error::Model("potential is NaN".into()));
        }
        Ok(AgreementModel {
            lang: lang.to_owned(),
            smoothing,
            space,
            unary,
            pairwise,
        })
    }

    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn space(&self) -> &TagSpace {
        &self.space
    }

    pub fn unary(&self, upos: &str) -> Option<&[f64]> {
        self.unary.get(upos).map(Vec::as_slice)
    }

    /// Pairwise table for a relation; a subtyped label (`nsubj:pass`)
    /// falls back to its base relation.
    pub fn pairwise(&self, deprel: &str) -> Option<&[f64]> {
        self.pairwise
            .get(deprel)
            .or_else(|| {
                self.pairwise
                    .get(deprel.split(':').next().unwrap_or(deprel))
            })
            .map(Vec::as_slice)
    }

    /// Log potential of tag index `t` for a token with this upos; 0 for
    /// unseen upos values.
    pub fn unary_at(&self, upos: &str, t: usize) -> f64 {
        self.unary(upos).map_or(0.0, |v| v[t])
    }

    /// Log potential of a (head, child) tag pair on a `deprel` edge; 0 for
    /// unseen relations.
    pub fn pair_at(&self, deprel: &str, head: usize, child: usize) -> f64 {
        self.pairwise(deprel)
            .map_or(0.0, |v| v[head * self.space.len() + child])
    }

    /// Versioned line format with sorted keys. Identical training input
    /// yields identical bytes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let tags = self.space.tags();
        writeln!(out, "VERSION {FORMAT_VERSION}").unwrap();
        writeln!(out, "LANG {}", self.lang).unwrap();
        writeln!(out, "SMOOTHING {}", self.smoothing).unwrap();
        let names: Vec<String> = tags.iter().map(ToString::to_string).collect();
        writeln!(out, "TAGS {}", names.join(" ")).unwrap();
        for (upos, v) in &self.unary {
            for (t, p) in names.iter().zip(v) {
                writeln!(out, "UNARY {upos} {t} {p}").unwrap();
            }
        }
        let n = tags.len();
        for (deprel, m) in &self.pairwise {
            for (h, hn) in names.iter().enumerate() {
                for (c, cn) in names.iter().enumerate() {
                    writeln!(out, "PAIR {deprel} {hn} {cn} {}", m[h * n + c]).unwrap();
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut header = |key: &str| -> Result<String> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::Model(format!("missing {key} header")))?;
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_owned)
                .ok_or_else(|| Error::format(no, format!("expected {key} header")))
        };
        let version = header("VERSION")?;
        if version != FORMAT_VERSION.to_string() {
            return Err(Error::Model(format!("unsupported model version {version}")));
        }
        let lang = header("LANG")?;
        let smoothing: f64 = header("SMOOTHING")?
            .parse()
            .map_err(|_| Error::format(3, "bad SMOOTHING value"))?;
        let tag_list: Vec<Tag> = header("TAGS")?
            .split(' ')
            .map(|t| t.parse().map_err(|e: String| Error::format(4, e)))
            .collect::<Result<_>>()?;
        let space = TagSpace::new(tag_list.iter().copied());
        if space.len() != tag_list.len() {
            return Err(Error::format(4, "duplicate tags or missing NoAgr"));
        }
        let n = space.len();
        let tag_idx = |s: &str, no: usize| -> Result<usize> {
            let tag: Tag = s.parse().map_err(|e: String| Error::format(no, e))?;
            space
                .index_of(tag)
                .ok_or_else(|| Error::format(no, format!("tag {s} not in TAGS")))
        };
        let mut unary: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        let mut pairwise: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        let mut seen_u: BTreeSet<(String, usize)> = BTreeSet::new();
        let mut seen_p: BTreeSet<(String, usize)> = BTreeSet::new();
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(' ').collect();
            let value = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::format(no, format!("bad potential `{s}`")))
            };
            match cols.as_slice() {
                ["UNARY", upos, tag, p] => {
                    let t = tag_idx(tag, no)?;
                    if !seen_u.insert((upos.to_string(), t)) {
                        return Err(Error::format(no, "duplicate UNARY entry"));
                    }
                    unary
                        .entry(upos.to_string())
                        .or_insert_with(|| vec![f64::NAN; n])[t] = value(p)?;
                }
                ["PAIR", deprel, head, child, p] => {
                    let k = tag_idx(head, no)? * n + tag_idx(child, no)?;
                    if !seen_p.insert((deprel.to_string(), k)) {
                        return Err(Error::format(no, "duplicate PAIR entry"));
                    }
                    pairwise
                        .entry(deprel.to_string())
                        .or_insert_with(|| vec![f64::NAN; n * n])[k] = value(p)?;
                }
                _ => return Err(Error::format(no, "expected UNARY or PAIR line")),
            }
        }
        let incomplete = |m: &BTreeMap<String, Vec<f64>>| {
            m.iter()
                .find(|(_, v)| v.iter().any(|x| x.is_nan()))
                .map(|(k, _)| k.clone())
        };
        if let Some(k) = incomplete(&unary).or_else(|| incomplete(&pairwise)) {
            return Err(Error::Model(format!(
                "potentials for `{k}` do not cover the tag space"
            )));
        }
        Self::from_parts(&lang, smoothing, space, unary, pairwise)
    }

    pub fn load(path: &Path) -> Result<Self> {
        in_file(path, Self::parse(&read_to_string(path)?))
    }
}

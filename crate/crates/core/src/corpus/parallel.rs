//! Sentence-aligned English/target pairs and their file formats.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::corpus::conllu::AnnotatedSentence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Origin {
    Original,
    Counterfactual,
    Random,
    Handcrafted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelPair {
    /// Stable identifier, normally derived from the input line number.
    pub id: String,
    /// English side.
    pub src: AnnotatedSentence,
    pub tgt: AnnotatedSentence,
    pub origin: Origin,
    /// For counterfactuals, the id of the pair they were generated from.
    pub parent: Option<String>,
}

impl ParallelPair {
    pub fn new(
        id: impl Into<String>,
        src: AnnotatedSentence,
        tgt: AnnotatedSentence,
        origin: Origin,
    ) -> Self {
        ParallelPair {
            id: id.into(),
            src,
            tgt,
            origin,
            parent: None,
        }
    }

    /// A pair of plain strings without annotation.
    pub fn from_raw(
        id: impl Into<String>,
        src: &str,
        tgt: &str,
        tgt_lang: &str,
        origin: Origin,
    ) -> Self {
        Self::new(
            id,
            AnnotatedSentence::unannotated(src, "en"),
            AnnotatedSentence::unannotated(tgt, tgt_lang),
            origin,
        )
    }

    pub fn src_raw(&self) -> &str {
        &self.src.raw
    }

    pub fn tgt_raw(&self) -> &str {
        &self.tgt.raw
    }

    pub fn tgt_lang(&self) -> &str {
        &self.tgt.lang
    }
}

impl AsRef<ParallelPair> for ParallelPair {
    fn as_ref(&self) -> &ParallelPair {
        self
    }
}

/// Zips two annotated sides. Sentence counts must match.
pub fn zip_annotated(
    src: Vec<AnnotatedSentence>,
    tgt: Vec<AnnotatedSentence>,
    origin: Origin,
) -> Result<Vec<ParallelPair>> {
    if src.len() != tgt.len() {
        return Err(Error::Config(format!(
            "source has {} sentences but target has {}",
            src.len(),
            tgt.len()
        )));
    }
    Ok(src
        .into_iter()
        .zip(tgt)
        .enumerate()
        .map(|(i, (s, t))| ParallelPair::new(format!("L{}", i + 1), s, t, origin))
        .collect())
}

fn tsv_line(line: &str, lineno: usize) -> Result<(&str, &str)> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    let mut cols = line.split('\t');
    match (cols.next(), cols.next(), cols.next()) {
        (Some(s), Some(t), None) => Ok((s, t)),
        _ => Err(Error::format(
            lineno,
            "expected 2 tab-separated columns (source, target)",
        )),
    }
}

/// Reads a two-column TSV corpus. Blank lines are skipped; ids are `L<line>`.
pub fn read_tsv_pairs(text: &str, tgt_lang: &str, origin: Origin) -> Result<Vec<ParallelPair>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (s, t) = tsv_line(line, i + 1)?;
        pairs.push(ParallelPair::from_raw(
            format!("L{}", i + 1),
            s,
            t,
            tgt_lang,
            origin,
        ));
    }
    Ok(pairs)
}

/// Streams pairs from two line-aligned readers or from one TSV reader, so
/// that corpora larger than memory can be sampled.
pub enum PairLines<R: BufRead> {
    TwoFile {
        src: std::io::Lines<R>,
        tgt: std::io::Lines<R>,
        lang: String,
        line: usize,
    },
    Tsv {
        lines: std::io::Lines<R>,
        lang: String,
        line: usize,
    },
}

impl<R: BufRead> PairLines<R> {
    pub fn two_file(src: R, tgt: R, tgt_lang: &str) -> Self {
        PairLines::TwoFile {
            src: src.lines(),
            tgt: tgt.lines(),
            lang: tgt_lang.to_owned(),
            line: 0,
        }
    }

    pub fn tsv(reader: R, tgt_lang: &str) -> Self {
        PairLines::Tsv {
            lines: reader.lines(),
            lang: tgt_lang.to_owned(),
            line: 0,
        }
    }
}

impl<R: BufRead> Iterator for PairLines<R> {
    type Item = Result<ParallelPair>;

    fn next(&mut self) -> Option<Self::Item> {
        let io_err = |e: std::io::Error| Error::io("<corpus>", e);
        match self {
            PairLines::TwoFile {
                src,
                tgt,
                lang,
                line,
            } => {
                *line += 1;
                match (src.next(), tgt.next()) {
                    (None, None) => None,
                    (Some(s), Some(t)) => Some((|| {
                        let s = s.map_err(io_err)?;
                        let t = t.map_err(io_err)?;
                        Ok(ParallelPair::from_raw(
                            format!("L{line}"),
                            &s,
                            &t,
                            lang,
                            Origin::Original,
                        ))
                    })()),
                    _ => Some(Err(Error::format(
                        *line,
                        "source and target files have different line counts",
                    ))),
                }
            }
            PairLines::Tsv { lines, lang, line } => loop {
                *line += 1;
                let l = match lines.next()? {
                    Ok(l) => l,
                    Err(e) => return Some(Err(io_err(e))),
                };
                if l.trim().is_empty() {
                    continue;
                }
                return Some(tsv_line(&l, *line).map(|(s, t)| {
                    ParallelPair::from_raw(format!("L{line}"), s, t, lang, Origin::Original)
                }));
            },
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

/// Two-column TSV, LF line endings.
pub fn write_tsv(pairs: &[ParallelPair]) -> String {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&one_line(p.src_raw()));
        out.push('\t');
        out.push_str(&one_line(p.tgt_raw()));
        out.push('\n');
    }
    out
}

/// Line-aligned source and target files.
pub fn write_two_file(pairs: &[ParallelPair]) -> (String, String) {
    let mut src = String::new();
    let mut tgt = String::new();
    for p in pairs {
        src.push_str(&one_line(p.src_raw()));
        src.push('\n');
        tgt.push_str(&one_line(p.tgt_raw()));
        tgt.push('\n');
    }
    (src, tgt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_roundtrip() {
        let pairs =
            read_tsv_pairs("Hello.\tBonjour.\n\nYes.\tOui.\n", "fr", Origin::Random).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[1].id, "L3");
        assert_eq!(pairs[1].tgt_raw(), "Oui.");
        assert_eq!(write_tsv(&pairs), "Hello.\tBonjour.\nYes.\tOui.\n");
    }

    #[test]
    fn tsv_wrong_columns() {
        assert!(matches!(
            read_tsv_pairs("a\tb\tc\n", "fr", Origin::Original),
            Err(Error::Format { line: 1, .. })
        ));
    }

    #[test]
    fn two_file_stream() {
        let src = std::io::Cursor::new("a\nb\n");
        let tgt = std::io::Cursor::new("x\ny\n");
        let pairs: Vec<_> = PairLines::two_file(src, tgt, "es")
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].tgt.lang, "es");

        let src = std::io::Cursor::new("a\nb\n");
        let tgt = std::io::Cursor::new("x\n");
        let res: Result<Vec<_>> = PairLines::two_file(src, tgt, "es").collect();
        assert!(res.is_err());
    }
}

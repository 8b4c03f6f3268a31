//! CoNLL-U reading and writing.
//!
//! Comment lines, multiword-token ranges and empty nodes are kept so that a
//! conformant file serializes back byte-for-byte. Only the basic tree
//! (HEAD/DEPREL) is interpreted; DEPS is carried verbatim.

use std::fmt::Write as _;

use crate::corpus::features::MorphFeatures;
use crate::error::{Error, Result};
use crate::reinflect::detok::{detokenize, SurfaceToken};

const SPACE_AFTER_NO: &str = "SpaceAfter=No";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: MorphFeatures,
    /// Index of the governor, 0 for the root.
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    /// MISC entries in input order, including `SpaceAfter=No` when present.
    pub misc: Vec<String>,
    pub space_after: bool,
}

impl Token {
    pub fn new(
        index: usize,
        surface: &str,
        lemma: &str,
        upos: &str,
        head: usize,
        deprel: &str,
    ) -> Self {
        Token {
            index,
            surface: surface.to_owned(),
            lemma: lemma.to_owned(),
            upos: upos.to_owned(),
            xpos: "_".to_owned(),
            feats: MorphFeatures::new(),
            head,
            deprel: deprel.to_owned(),
            deps: "_".to_owned(),
            misc: Vec::new(),
            space_after: true,
        }
    }

    pub fn with_feats(mut self, feats: &str) -> Self {
        self.feats = MorphFeatures::parse(feats).expect("valid FEATS literal");
        self
    }

    pub fn no_space_after(mut self) -> Self {
        self.space_after = false;
        self
    }

    fn misc_column(&self) -> String {
        render_misc(&self.misc, self.space_after)
    }
}

/// A multiword token range line such as `3-4  du`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiword {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    /// Columns 3 to 9, normally all `_`.
    pub middle: Vec<String>,
    pub misc: Vec<String>,
    pub space_after: bool,
}

impl Multiword {
    pub fn new(start: usize, end: usize, surface: &str, space_after: bool) -> Self {
        Multiword {
            start,
            end,
            surface: surface.to_owned(),
            middle: vec!["_".to_owned(); 7],
            misc: Vec::new(),
            space_after,
        }
    }

    pub fn covers(&self, index: usize) -> bool {
        (self.start..=self.end).contains(&index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub tokens: Vec<Token>,
    pub raw: String,
    pub lang: String,
    /// Comment lines without the leading `#`, in input order.
    pub comments: Vec<String>,
    pub multiwords: Vec<Multiword>,
    /// Enhanced-graph empty nodes, kept verbatim: (preceding token index, line).
    pub empty_nodes: Vec<(usize, String)>,
}

impl AnnotatedSentence {
    /// Builds a sentence from tokens, deriving `raw` from SpaceAfter flags.
    pub fn from_tokens(tokens: Vec<Token>, lang: &str) -> Self {
        let mut sent = AnnotatedSentence {
            tokens,
            raw: String::new(),
            lang: lang.to_owned(),
            comments: Vec::new(),
            multiwords: Vec::new(),
            empty_nodes: Vec::new(),
        };
        sent.raw = sent.text_from_tokens();
        sent
    }

    /// A sentence known only by its surface string (no annotation).
    pub fn unannotated(raw: &str, lang: &str) -> Self {
        AnnotatedSentence {
            tokens: Vec::new(),
            raw: raw.to_owned(),
            lang: lang.to_owned(),
            comments: Vec::new(),
            multiwords: Vec::new(),
            empty_nodes: Vec::new(),
        }
    }

    pub fn is_annotated(&self) -> bool {
        !self.tokens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn token_mut(&mut self, index: usize) -> Option<&mut Token> {
        index
            .checked_sub(1)
            .and_then(move |i| self.tokens.get_mut(i))
    }

    pub fn children(&self, index: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == index)
    }

    /// Word-level surface tokens with multiword ranges collapsed, i.e. the
    /// units that appear in running text.
    pub fn surface_tokens(&self) -> Vec<SurfaceToken> {
        let mut out = Vec::with_capacity(self.tokens.len());
        let mut i = 1;
        while i <= self.tokens.len() {
            if let Some(mw) = self.multiwords.iter().find(|m| m.start == i) {
                out.push(SurfaceToken {
                    surface: mw.surface.clone(),
                    space_after: mw.space_after,
                });
                i = mw.end + 1;
            } else {
                let t = &self.tokens[i - 1];
                out.push(SurfaceToken {
                    surface: t.surface.clone(),
                    space_after: t.space_after,
                });
                i += 1;
            }
        }
        out
    }

    /// Surface string reconstructed from tokens and SpaceAfter flags.
    pub fn text_from_tokens(&self) -> String {
        detokenize(&self.surface_tokens(), &self.lang)
    }

    /// Sets `raw` and keeps the `# text = ` comment in sync with it.
    pub fn set_raw(&mut self, raw: String) {
        let comment = format!(" text = {raw}");
        match self.comments.iter_mut().find(|c| is_text_comment(c)) {
            Some(c) => *c = comment,
            None => self.comments.push(comment),
        }
        self.raw = raw;
    }

    /// Checks the token-level invariants: contiguous indices, heads in
    /// range, no self-loops, exactly one root and no cycles.
    pub fn validate_tree(&self) -> std::result::Result<(), String> {
        let n = self.tokens.len();
        for (pos, t) in self.tokens.iter().enumerate() {
            if t.index != pos + 1 {
                return Err(format!(
                    "token indices not contiguous at position {}",
                    pos + 1
                ));
            }
            if t.surface.is_empty() {
                return Err(format!("token {} has an empty surface", t.index));
            }
            if t.head > n {
                return Err(format!(
                    "token {} has head {} beyond sentence length {}",
                    t.index, t.head, n
                ));
            }
            if t.head == t.index {
                return Err(format!("token {} is its own head", t.index));
            }
        }
        if n == 0 {
            return Ok(());
        }
        let roots = self.tokens.iter().filter(|t| t.head == 0).count();
        if roots != 1 {
            return Err(format!("{roots} root tokens"));
        }
        for t in &self.tokens {
            let mut cur = t.head;
            let mut steps = 0;
            while cur != 0 {
                steps += 1;
                if steps > n {
                    return Err(format!("cycle through token {}", t.index));
                }
                cur = self.tokens[cur - 1].head;
            }
        }
        Ok(())
    }
}

fn is_text_comment(comment: &str) -> bool {
    comment.trim_start().starts_with("text =") || comment.trim_start().starts_with("text=")
}

fn text_comment_value(comment: &str) -> Option<&str> {
    let rest = comment.trim_start().strip_prefix("text")?;
    let rest = rest.trim_start().strip_prefix('=')?;
    Some(rest.strip_prefix(' ').unwrap_or(rest))
}

/// Configurable CoNLL-U reader.
#[derive(Debug, Clone)]
pub struct ConlluReader {
    lang: String,
    repair_multiroot: bool,
}

impl Default for ConlluReader {
    fn default() -> Self {
        ConlluReader {
            lang: "und".to_owned(),
            repair_multiroot: true,
        }
    }
}

impl ConlluReader {
    pub fn new(lang: &str) -> Self {
        ConlluReader {
            lang: lang.to_owned(),
            ..Default::default()
        }
    }

    /// When on (the default), extra roots are attached to the first root
    /// with deprel `parataxis`. When off, multi-root sentences are errors.
    pub fn repair_multiroot(mut self, repair: bool) -> Self {
        self.repair_multiroot = repair;
        self
    }

    pub fn parse(&self, text: &str) -> Result<Vec<AnnotatedSentence>> {
        let mut sentences = Vec::new();
        let mut block: Vec<(usize, &str)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() {
                if !block.is_empty() {
                    sentences.push(self.parse_block(&block)?);
                    block.clear();
                }
            } else {
                block.push((i + 1, line));
            }
        }
        if !block.is_empty() {
            sentences.push(self.parse_block(&block)?);
        }
        Ok(sentences)
    }

    fn parse_block(&self, lines: &[(usize, &str)]) -> Result<AnnotatedSentence> {
        let first_line = lines[0].0;
        let mut comments = Vec::new();
        let mut tokens: Vec<Token> = Vec::new();
        let mut multiwords = Vec::new();
        let mut empty_nodes = Vec::new();

        for &(lineno, line) in lines {
            if let Some(comment) = line.strip_prefix('#') {
                comments.push(comment.to_owned());
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 10 {
                return Err(Error::format(
                    lineno,
                    format!("expected 10 tab-separated columns, found {}", cols.len()),
                ));
            }
            let id = cols[0];
            if id.contains('.') {
                empty_nodes.push((tokens.len(), line.to_owned()));
                continue;
            }
            let (misc, space_after) = parse_misc(cols[9]);
            if let Some((a, b)) = id.split_once('-') {
                let start = parse_index(a, lineno, "multiword start")?;
                let end = parse_index(b, lineno, "multiword end")?;
                if start == 0 || end < start {
                    return Err(Error::format(lineno, format!("bad multiword range `{id}`")));
                }
                multiwords.push(Multiword {
                    start,
                    end,
                    surface: cols[1].to_owned(),
                    middle: cols[2..9].iter().map(|s| (*s).to_owned()).collect(),
                    misc,
                    space_after,
                });
                continue;
            }
            let index = parse_index(id, lineno, "ID")?;
            if index != tokens.len() + 1 {
                return Err(Error::format(
                    lineno,
                    format!(
                        "token ID {index} out of sequence (expected {})",
                        tokens.len() + 1
                    ),
                ));
            }
            if cols[1].is_empty() {
                return Err(Error::format(lineno, "empty FORM"));
            }
            let head = parse_index(cols[6], lineno, "HEAD")?;
            let feats =
                MorphFeatures::parse(cols[5]).map_err(|e| Error::format(lineno, e.to_string()))?;
            tokens.push(Token {
                index,
                surface: cols[1].to_owned(),
                lemma: cols[2].to_owned(),
                upos: cols[3].to_owned(),
                xpos: cols[4].to_owned(),
                feats,
                head,
                deprel: cols[7].to_owned(),
                deps: cols[8].to_owned(),
                misc,
                space_after,
            });
        }

        if tokens.is_empty() {
            return Err(Error::Structure {
                line: first_line,
                msg: "sentence has no tokens".to_owned(),
            });
        }
        for mw in &multiwords {
            if mw.end > tokens.len() {
                return Err(Error::Structure {
                    line: first_line,
                    msg: format!(
                        "multiword range {}-{} beyond sentence end",
                        mw.start, mw.end
                    ),
                });
            }
        }

        let roots: Vec<usize> = tokens
            .iter()
            .filter(|t| t.head == 0)
            .map(|t| t.index)
            .collect();
        if roots.len() > 1 {
            if !self.repair_multiroot {
                return Err(Error::Structure {
                    line: first_line,
                    msg: format!(
                        "{} root tokens and multi-root repair is disabled",
                        roots.len()
                    ),
                });
            }
            let first = roots[0];
            for &r in &roots[1..] {
                let t = &mut tokens[r - 1];
                t.head = first;
                t.deprel = "parataxis".to_owned();
            }
        }

        let raw_comment = comments
            .iter()
            .find_map(|c| text_comment_value(c))
            .map(str::to_owned);
        let mut sent = AnnotatedSentence {
            tokens,
            raw: String::new(),
            lang: self.lang.clone(),
            comments,
            multiwords,
            empty_nodes,
        };
        sent.validate_tree().map_err(|msg| Error::Structure {
            line: first_line,
            msg,
        })?;
        sent.raw = raw_comment.unwrap_or_else(|| sent.text_from_tokens());
        Ok(sent)
    }
}

fn parse_index(s: &str, line: usize, what: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::format(line, format!("{what} `{s}` is not a non-negative integer")))
}

/// MISC column with the SpaceAfter flag reconciled into the verbatim entries.
fn render_misc(misc: &[String], space_after: bool) -> String {
    let mut entries: Vec<&str> = misc
        .iter()
        .map(String::as_str)
        .filter(|e| !(space_after && *e == SPACE_AFTER_NO))
        .collect();
    if !space_after && !entries.contains(&SPACE_AFTER_NO) {
        entries.push(SPACE_AFTER_NO);
    }
    if entries.is_empty() {
        "_".to_owned()
    } else {
        entries.join("|")
    }
}

fn parse_misc(column: &str) -> (Vec<String>, bool) {
    if column == "_" || column.is_empty() {
        return (Vec::new(), true);
    }
    let misc: Vec<String> = column.split('|').map(str::to_owned).collect();
    let space_after = !misc.iter().any(|e| e == SPACE_AFTER_NO);
    (misc, space_after)
}

/// Parses CoNLL-U text with default options (multi-root repair on).
pub fn parse_conllu(text: &str, lang: &str) -> Result<Vec<AnnotatedSentence>> {
    ConlluReader::new(lang).parse(text)
}

fn or_underscore(s: &str) -> &str {
    if s.is_empty() {
        "_"
    } else {
        s
    }
}

/// Serializes sentences, each block followed by a blank line.
pub fn serialize_conllu(sents: &[AnnotatedSentence]) -> String {
    let mut out = String::new();
    for sent in sents {
        for c in &sent.comments {
            out.push('#');
            out.push_str(c);
            out.push('\n');
        }
        let mut empty = sent.empty_nodes.iter().peekable();
        while let Some((_, line)) = empty.next_if(|(after, _)| *after == 0) {
            out.push_str(line);
            out.push('\n');
        }
        for t in &sent.tokens {
            for mw in sent.multiwords.iter().filter(|m| m.start == t.index) {
                let _ = writeln!(
                    out,
                    "{}-{}\t{}\t{}\t{}",
                    mw.start,
                    mw.end,
                    mw.surface,
                    mw.middle.join("\t"),
                    render_misc(&mw.misc, mw.space_after)
                );
            }
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index,
                t.surface,
                or_underscore(&t.lemma),
                or_underscore(&t.upos),
                or_underscore(&t.xpos),
                t.feats,
                t.head,
                or_underscore(&t.deprel),
                or_underscore(&t.deps),
                t.misc_column()
            );
            while let Some((_, line)) = empty.next_if(|(after, _)| *after == t.index) {
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push('\n');
    }
    out
}

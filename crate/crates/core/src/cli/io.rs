use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::corpus::{parse_conllu, AnnotatedSentence};
use crate::error::{in_file, read_to_string, Error, Result};

const PAIR_ID: &str = "pair_id = ";

/// Input paths are relative to `base`; the pipeline points it at its output
/// directory so manifests can record short relative paths.
#[derive(Debug, Clone, Default)]
pub(crate) struct Ctx {
    pub seed: u64,
    pub base: PathBuf,
}

impl Ctx {
    pub fn path(&self, p: &Path) -> PathBuf {
        self.base.join(p)
    }

    pub fn read(&self, p: &Path) -> Result<String> {
        read_to_string(&self.path(p))
    }

    pub fn conllu(&self, p: &Path, lang: &str) -> Result<Vec<AnnotatedSentence>> {
        let path = self.path(p);
        in_file(&path, parse_conllu(&read_to_string(&path)?, lang))
    }
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub(crate) fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Contract(e.to_string()))?;
    s.push('\n');
    write(path, &s)
}

/// `<file>.manifest.json` for commands whose output is a single file.
pub(crate) fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

pub(crate) fn pair_id(sent: &AnnotatedSentence) -> Option<&str> {
    sent.comments
        .iter()
        .find_map(|c| c.trim_start().strip_prefix(PAIR_ID))
        .map(str::trim)
}

/// Records `id` in a `# pair_id = ...` comment, replacing an old one.
pub(crate) fn with_pair_id(mut sent: AnnotatedSentence, id: &str) -> AnnotatedSentence {
    sent.comments
        .retain(|c| !c.trim_start().starts_with(PAIR_ID));
    sent.comments.insert(0, format!(" {PAIR_ID}{id}"));
    sent
}

/// Pair ids from the comments, or `L<n>` by position when absent. Both
/// sides must agree where both carry one.
pub(crate) fn aligned_ids(
    src: &[AnnotatedSentence],
    tgt: &[AnnotatedSentence],
) -> Result<Vec<String>> {
    if src.len() != tgt.len() {
        return Err(Error::Config(format!(
            "source has {} sentences but target has {}",
            src.len(),
            tgt.len()
        )));
    }
    src.iter()
        .zip(tgt)
        .enumerate()
        .map(|(i, (s, t))| match (pair_id(s), pair_id(t)) {
            (Some(a), Some(b)) if a != b => Err(Error::Config(format!(
                "sentence {}: pair ids `{a}` and `{b}` differ",
                i + 1
            ))),
            (Some(a), _) | (None, Some(a)) => Ok(a.to_owned()),
            (None, None) => Ok(format!("L{}", i + 1)),
        })
        .collect()
}

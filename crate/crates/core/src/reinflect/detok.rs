//! Joining word tokens back into running text.

use crate::corpus::conllu::Token;

/// A word as it appears in running text, with its trailing-space flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceToken {
    pub surface: String,
    pub space_after: bool,
}

impl SurfaceToken {
    pub fn new(surface: &str, space_after: bool) -> Self {
        SurfaceToken {
            surface: surface.to_owned(),
            space_after,
        }
    }
}

impl From<&Token> for SurfaceToken {
    fn from(t: &Token) -> Self {
        SurfaceToken {
            surface: t.surface.clone(),
            space_after: t.space_after,
        }
    }
}

fn elides(lang: &str) -> bool {
    matches!(lang, "fr" | "it")
}

pub(crate) fn ends_with_apostrophe(s: &str) -> bool {
    s.ends_with('\'') || s.ends_with('’')
}

fn closes(s: &str) -> bool {
    matches!(s, "," | "." | ")" | "]" | "}" | "…" | "...")
}

fn opens(s: &str) -> bool {
    matches!(s, "(" | "[" | "{")
}

/// Joins surfaces, honoring `SpaceAfter=No` and a few punctuation
/// conventions: no space before closing punctuation or after opening
/// brackets, and for French and Italian no space after an elided word
/// (`l'`, `qu'`, `un'`).
pub fn detokenize(tokens: &[SurfaceToken], lang: &str) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        out.push_str(&t.surface);
        let Some(next) = tokens.get(i + 1) else {
            break;
        };
        let space = t.space_after
            && !(elides(lang) && ends_with_apostrophe(&t.surface))
            && !closes(&next.surface)
            && !opens(&t.surface);
        if space {
            out.push(' ');
        }
    }
    out
}

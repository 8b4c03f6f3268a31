use std::fmt;
use std::str::FromStr;

use crate::corpus::{Gender, MorphFeatures, Number};

/// Agreement tag of one token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// The token carries no gender agreement.
    NoAgr,
    Agr {
        gender: Gender,
        number: Option<Number>,
    },
}

impl Tag {
    pub fn new(gender: Gender, number: Option<Number>) -> Tag {
        Tag::Agr { gender, number }
    }

    /// Tokens without a Gender feature are NoAgr, whatever their number.
    pub fn of(feats: &MorphFeatures) -> Tag {
        match feats.gender() {
            Some(gender) => Tag::Agr {
                gender,
                number: feats.number(),
            },
            None => Tag::NoAgr,
        }
    }

    pub fn gender(self) -> Option<Gender> {
        match self {
            Tag::NoAgr => None,
            Tag::Agr { gender, .. } => Some(gender),
        }
    }

    pub fn number(self) -> Option<Number> {
        match self {
            Tag::NoAgr => None,
            Tag::Agr { number, .. } => number,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::NoAgr => f.write_str("NoAgr"),
            Tag::Agr { gender, number } => {
                write!(f, "{gender},{}", number.map_or("_", Number::as_str))
            }
        }
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "NoAgr" {
            return Ok(Tag::NoAgr);
        }
        let (g, n) = s.split_once(',').ok_or_else(|| format!("bad tag `{s}`"))?;
        let gender = Gender::parse(g).ok_or_else(|| format!("bad gender in tag `{s}`"))?;
        let number = match n {
            "_" => None,
            other => Some(Number::parse(other).ok_or_else(|| format!("bad number in tag `{s}`"))?),
        };
        Ok(Tag::Agr { gender, number })
    }
}

/// Ordered set of tags; NoAgr always comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSpace {
    tags: Vec<Tag>,
}

impl TagSpace {
    pub fn new(tags: impl IntoIterator<Item = Tag>) -> TagSpace {
        let mut tags: Vec<Tag> = tags.into_iter().chain([Tag::NoAgr]).collect();
        tags.sort();
        tags.dedup();
        TagSpace { tags }
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn get(&self, i: usize) -> Tag {
        self.tags[i]
    }

    pub fn index_of(&self, tag: Tag) -> Option<usize> {
        self.tags.binary_search(&tag).ok()
    }

    /// In-space stand-in for a tag: the tag itself if present, else the
    /// closest tag of the same gender (same number, then unspecified
    /// number, then any), else NoAgr.
    pub fn proxy(&self, tag: Tag) -> usize {
        if let Some(i) = self.index_of(tag) {
            return i;
        }
        let Tag::Agr { gender, number } = tag else {
            return 0;
        };
        let same_gender = |n: Option<Number>| self.index_of(Tag::Agr { gender, number: n });
        let candidates = [number, None, Some(Number::Sing), Some(Number::Plur)];
        candidates.into_iter().find_map(same_gender).unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_text_roundtrip() {
        for t in [
            Tag::NoAgr,
            Tag::new(Gender::Fem, Some(Number::Plur)),
            Tag::new(Gender::Masc, None),
        ] {
            assert_eq!(t.to_string().parse::<Tag>().unwrap(), t);
        }
        assert_eq!(
            Tag::new(Gender::Masc, Some(Number::Sing)).to_string(),
            "Masc,Sing"
        );
        assert!("Neut,Sing".parse::<Tag>().is_err());
    }

    #[test]
    fn no_gender_means_noagr() {
        assert_eq!(
            Tag::of(&MorphFeatures::parse("Number=Sing|Person=3").unwrap()),
            Tag::NoAgr
        );
        assert_eq!(
            Tag::of(&MorphFeatures::parse("Gender=Fem").unwrap()),
            Tag::new(Gender::Fem, None)
        );
    }

    #[test]
    fn space_order_and_proxy() {
        let space = TagSpace::new([
            Tag::new(Gender::Fem, Some(Number::Sing)),
            Tag::new(Gender::Masc, Some(Number::Sing)),
            Tag::new(Gender::Masc, Some(Number::Sing)),
        ]);
        assert_eq!(space.len(), 3);
        assert_eq!(space.get(0), Tag::NoAgr);
        assert_eq!(space.get(1), Tag::new(Gender::Masc, Some(Number::Sing)));
        assert_eq!(space.proxy(Tag::new(Gender::Fem, Some(Number::Plur))), 2);
        assert_eq!(space.proxy(Tag::new(Gender::Masc, None)), 1);
        let masc_only = TagSpace::new([Tag::new(Gender::Masc, Some(Number::Sing))]);
        assert_eq!(
            masc_only.proxy(Tag::new(Gender::Fem, Some(Number::Sing))),
            0
        );
    }
}

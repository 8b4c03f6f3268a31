//! Morphological feature bundles (the CoNLL-U FEATS column).

use std::fmt;

use serde::{Deserialize, Serialize};

/// Binary grammatical gender. Absence of a gender is `Option::None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gender {
    Masc,
    Fem,
}

impl Gender {
    pub fn opposite(self) -> Gender {
        match self {
            Gender::Masc => Gender::Fem,
            Gender::Fem => Gender::Masc,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Masc => "Masc",
            Gender::Fem => "Fem",
        }
    }

    pub fn parse(value: &str) -> Option<Gender> {
        match value {
            "Masc" => Some(Gender::Masc),
            "Fem" => Some(Gender::Fem),
            _ => None,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Number {
    Sing,
    Plur,
}

impl Number {
    pub fn as_str(self) -> &'static str {
        match self {
            Number::Sing => "Sing",
            Number::Plur => "Plur",
        }
    }

    pub fn parse(value: &str) -> Option<Number> {
        match value {
            "Sing" => Some(Number::Sing),
            "Plur" => Some(Number::Plur),
            _ => None,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error for a FEATS column that is not `_` or a `|`-separated list of
/// `Key=Value` pairs with unique keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatsError(pub String);

impl fmt::Display for FeatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed FEATS: {}", self.0)
    }
}

impl std::error::Error for FeatsError {}

/// Feature bundle kept in input order so that serialization is verbatim.
///
/// Gender and number are not stored separately: [`MorphFeatures::gender`]
/// and [`MorphFeatures::number`] read them out of the entries, so the two
/// views can never disagree. Values other than `Masc`/`Fem` and
/// `Sing`/`Plur` (e.g. `Neut`, `Fem,Masc`) project to `None`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MorphFeatures {
    entries: Vec<(String, String)>,
}

impl MorphFeatures {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(column: &str) -> Result<Self, FeatsError> {
        let mut feats = MorphFeatures::new();
        if column == "_" || column.is_empty() {
            return Ok(feats);
        }
        for part in column.split('|') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| FeatsError(format!("`{part}` has no `=`")))?;
            if key.is_empty() || value.is_empty() {
                return Err(FeatsError(format!("empty key or value in `{part}`")));
            }
            if feats.get(key).is_some() {
                return Err(FeatsError(format!("duplicate key `{key}`")));
            }
            feats.entries.push((key.to_owned(), value.to_owned()));
        }
        Ok(feats)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Replaces the value in place, or inserts the key at its
    /// case-insensitive sorted position (the UD ordering convention).
    pub fn set(&mut self, key: &str, value: &str) {
        if let Some(entry) = self.entries.iter_mut().find(|(k, _)| k == key) {
            entry.1 = value.to_owned();
            return;
        }
        let lower = key.to_lowercase();
        let pos = self
            .entries
            .iter()
            .position(|(k, _)| k.to_lowercase() > lower)
            .unwrap_or(self.entries.len());
        self.entries.insert(pos, (key.to_owned(), value.to_owned()));
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        let pos = self.entries.iter().position(|(k, _)| k == key)?;
        Some(self.entries.remove(pos).1)
    }

    pub fn gender(&self) -> Option<Gender> {
        self.get("Gender").and_then(Gender::parse)
    }

    pub fn number(&self) -> Option<Number> {
        self.get("Number").and_then(Number::parse)
    }

    pub fn set_gender(&mut self, gender: Option<Gender>) {
        match gender {
            Some(g) => self.set("Gender", g.as_str()),
            None => {
                self.remove("Gender");
            }
        }
    }

    pub fn set_number(&mut self, number: Option<Number>) {
        match number {
            Some(n) => self.set("Number", n.as_str()),
            None => {
                self.remove("Number");
            }
        }
    }
}

impl fmt::Display for MorphFeatures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("_");
        }
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gender_and_number_are_projections() {
        let feats = MorphFeatures::parse("Gender=Masc|Number=Sing").unwrap();
        assert_eq!(feats.gender(), Some(Gender::Masc));
        assert_eq!(feats.number(), Some(Number::Sing));

        let feats = MorphFeatures::parse("Gender=Fem,Masc|Number=Plur").unwrap();
        assert_eq!(feats.gender(), None);
        assert_eq!(feats.number(), Some(Number::Plur));
    }

    #[test]
    fn underscore_is_empty() {
        let feats = MorphFeatures::parse("_").unwrap();
        assert!(feats.is_empty());
        assert_eq!(feats.to_string(), "_");
    }

    #[test]
    fn rejects_malformed() {
        assert!(MorphFeatures::parse("Gender").is_err());
        assert!(MorphFeatures::parse("Gender=Masc|Gender=Fem").is_err());
        assert!(MorphFeatures::parse("=Masc").is_err());
    }

    #[test]
    fn set_inserts_in_sorted_position() {
        let mut feats = MorphFeatures::parse("Definite=Def|Number=Sing|PronType=Art").unwrap();
        feats.set_gender(Some(Gender::Fem));
        assert_eq!(
            feats.to_string(),
            "Definite=Def|Gender=Fem|Number=Sing|PronType=Art"
        );
        feats.set_gender(Some(Gender::Masc));
        assert_eq!(
            feats.to_string(),
            "Definite=Def|Gender=Masc|Number=Sing|PronType=Art"
        );
        feats.set_gender(None);
        assert_eq!(feats.gender(), None);
    }

    fn feats_strategy() -> impl Strategy<Value = Vec<(String, String)>> {
        proptest::collection::btree_map("[A-Z][a-z]{1,6}", "[A-Za-z0-9,]{1,5}", 0..6)
            .prop_map(|m| m.into_iter().collect())
    }

    proptest! {
        #[test]
        fn serialize_parse_roundtrip(entries in feats_strategy()) {
            let column = if entries.is_empty() {
                "_".to_owned()
            } else {
                entries.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join("|")
            };
            let feats = MorphFeatures::parse(&column).unwrap();
            prop_assert_eq!(feats.to_string(), column.clone());
            prop_assert_eq!(MorphFeatures::parse(&feats.to_string()).unwrap(), feats);
        }
    }
}

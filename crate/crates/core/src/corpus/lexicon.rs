//! Word lists: profession nouns with gendered target forms, inflected
//! forms keyed by lemma and features, and preposition+article contractions.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use crate::corpus::features::{Gender, MorphFeatures, Number};
use crate::corpus::tsv::records;
use crate::error::{in_file, read_to_string, Error, Result};

/// Masculine and feminine target-language forms of one profession noun.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenderedForms {
    pub masc: String,
    pub fem: String,
}

impl GenderedForms {
    pub fn get(&self, gender: Gender) -> &str {
        match gender {
            Gender::Masc => &self.masc,
            Gender::Fem => &self.fem,
        }
    }

    /// Masculine and feminine forms are the same word (fr *journaliste*).
    pub fn is_epicene(&self) -> bool {
        self.masc.to_lowercase() == self.fem.to_lowercase()
    }
}

const MASC_PRONOUNS: [&str; 3] = ["he", "him", "his"];
const FEM_PRONOUNS: [&str; 2] = ["she", "her"];

/// Gender of an English third-person pronoun from the swap set
/// (he, him, his, she, her), case-insensitively. *hers* is not in the set.
pub fn english_pronoun_gender(word: &str) -> Option<Gender> {
    let w = word.to_lowercase();
    if MASC_PRONOUNS.contains(&w.as_str()) {
        Some(Gender::Masc)
    } else if FEM_PRONOUNS.contains(&w.as_str()) {
        Some(Gender::Fem)
    } else {
        None
    }
}

/// English profession nouns mapped to their gendered forms per target language.
#[derive(Debug, Clone, Default)]
pub struct AnimacyLexicon {
    entries: BTreeMap<String, BTreeMap<String, GenderedForms>>,
}

impl AnimacyLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        in_file(path, Self::from_tsv(&read_to_string(path)?))
    }

    /// Parses `en_lemma \t lang \t masc_form \t fem_form` rows.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut lex = AnimacyLexicon::default();
        for (line, cols) in records(text) {
            let lemma = cols[0].to_lowercase();
            if lemma.is_empty() {
                return Err(Error::Lexicon(format!("line {line}: empty lemma")));
            }
            let form = |i: usize| cols.get(i).copied().filter(|f| !f.is_empty() && *f != "_");
            let Some(lang) = form(1) else {
                return Err(Error::Lexicon(format!(
                    "line {line}: `{lemma}` has no language column"
                )));
            };
            let (Some(masc), Some(fem)) = (form(2), form(3)) else {
                return Err(Error::Lexicon(format!(
                    "line {line}: `{lemma}` ({lang}) is missing a masculine or feminine form"
                )));
            };
            if cols.len() > 4 {
                return Err(Error::Lexicon(format!(
                    "line {line}: expected 4 columns, found {}",
                    cols.len()
                )));
            }
            lex.insert(&lemma, lang, masc, fem)
                .map_err(|e| Error::Lexicon(format!("line {line}: {e}")))?;
        }
        Ok(lex)
    }

    pub fn insert(
        &mut self,
        lemma: &str,
        lang: &str,
        masc: &str,
        fem: &str,
    ) -> std::result::Result<(), String> {
        let lemma = lemma.to_lowercase();
        let per_lang = self.entries.entry(lemma.clone()).or_default();
        if per_lang.contains_key(lang) {
            return Err(format!("duplicate entry for `{lemma}` ({lang})"));
        }
        per_lang.insert(
            lang.to_owned(),
            GenderedForms {
                masc: masc.to_owned(),
                fem: fem.to_owned(),
            },
        );
        Ok(())
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.contains_key(&lemma.to_lowercase())
    }

    pub fn forms(&self, lemma: &str, lang: &str) -> Option<&GenderedForms> {
        self.entries.get(&lemma.to_lowercase())?.get(lang)
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

type FormKey = (String, String, Option<Gender>, Option<Number>);

/// Inflected surface forms keyed by (language, lemma, gender, number).
#[derive(Debug, Clone, Default)]
pub struct InflectionLexicon {
    rows: HashMap<FormKey, String>,
    pub contractions: ContractionTable,
}

impl InflectionLexicon {
    pub fn load(path: &Path) -> Result<Self> {
        in_file(path, Self::from_tsv(&read_to_string(path)?))
    }

    /// Parses `lang \t lemma \t FEATS \t form` rows. Only Gender and Number
    /// of the FEATS column form the key; two rows with the same key are an
    /// error so that lookups are deterministic.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut lex = InflectionLexicon::default();
        for (line, cols) in records(text) {
            if cols.len() != 4 {
                return Err(Error::Lexicon(format!(
                    "line {line}: expected 4 columns, found {}",
                    cols.len()
                )));
            }
            let feats = MorphFeatures::parse(cols[2])
                .map_err(|e| Error::Lexicon(format!("line {line}: {e}")))?;
            if cols[3].is_empty() {
                return Err(Error::Lexicon(format!(
                    "line {line}: empty form for `{}`",
                    cols[1]
                )));
            }
            let key = (
                cols[0].to_owned(),
                cols[1].to_lowercase(),
                feats.gender(),
                feats.number(),
            );
            if lex.rows.contains_key(&key) {
                return Err(Error::Lexicon(format!(
                    "line {line}: duplicate row for `{}` {}",
                    cols[1], feats
                )));
            }
            lex.rows.insert(key, cols[3].to_owned());
        }
        Ok(lex)
    }

    /// Determiner forms and contractions shipped with the crate.
    pub fn builtin() -> Self {
        Self::from_tsv(crate::data::DETERMINER_FORMS)
            .expect("builtin determiner table is valid")
            .with_contractions(ContractionTable::builtin())
    }

    /// Adds every row of `other`, replacing rows with the same key.
    pub fn merge(&mut self, other: InflectionLexicon) {
        self.rows.extend(other.rows);
        self.contractions.map.extend(other.contractions.map);
    }

    pub fn with_contractions(mut self, table: ContractionTable) -> Self {
        self.contractions = table;
        self
    }

    pub fn insert(
        &mut self,
        lang: &str,
        lemma: &str,
        gender: Option<Gender>,
        number: Option<Number>,
        form: &str,
    ) {
        self.rows.insert(
            (lang.to_owned(), lemma.to_lowercase(), gender, number),
            form.to_owned(),
        );
    }

    pub fn lookup(
        &self,
        lang: &str,
        lemma: &str,
        gender: Option<Gender>,
        number: Option<Number>,
    ) -> Option<&str> {
        self.rows
            .get(&(lang.to_owned(), lemma.to_lowercase(), gender, number))
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Obligatory preposition+article fusions, e.g. es *de el* → *del*.
#[derive(Debug, Clone, Default)]
pub struct ContractionTable {
    map: HashMap<(String, String, String), String>,
}

impl ContractionTable {
    pub fn load(path: &Path) -> Result<Self> {
        in_file(path, Self::from_tsv(&read_to_string(path)?))
    }

    /// Parses `lang \t preposition \t article \t contracted` rows.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut table = ContractionTable::default();
        for (line, cols) in records(text) {
            if cols.len() != 4 || cols.iter().any(|c| c.is_empty()) {
                return Err(Error::Lexicon(format!(
                    "line {line}: expected 4 non-empty columns"
                )));
            }
            let key = (
                cols[0].to_owned(),
                cols[1].to_lowercase(),
                cols[2].to_lowercase(),
            );
            if table.map.contains_key(&key) {
                return Err(Error::Lexicon(format!(
                    "line {line}: duplicate contraction {} {}",
                    cols[1], cols[2]
                )));
            }
            table.map.insert(key, cols[3].to_owned());
        }
        Ok(table)
    }

    /// Contractions shipped with the crate for fr, es and it.
    pub fn builtin() -> Self {
        Self::from_tsv(crate::data::CONTRACTIONS).expect("builtin contraction table is valid")
    }

    pub fn get(&self, lang: &str, prep: &str, article: &str) -> Option<&str> {
        self.map
            .get(&(lang.to_owned(), prep.to_lowercase(), article.to_lowercase()))
            .map(String::as_str)
    }

    /// All (preposition, article) → contraction rows for a language.
    pub fn entries<'a>(
        &'a self,
        lang: &'a str,
    ) -> impl Iterator<Item = (&'a str, &'a str, &'a str)> + 'a {
        self.map
            .iter()
            .filter(move |((l, _, _), _)| l == lang)
            .map(|((_, p, a), c)| (p.as_str(), a.as_str(), c.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

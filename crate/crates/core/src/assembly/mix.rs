use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assembly::lint::count_lint_tsv;
use crate::corpus::parallel::{read_tsv_pairs, write_tsv, write_two_file};
use crate::corpus::{Origin, ParallelPair};
use crate::error::{read_to_string, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentKind {
    /// Gender-balanced originals and counterfactuals.
    GB,
    /// Neutral sample of the training corpus.
    Random,
    /// Handcrafted template sentences.
    SB,
}

impl ComponentKind {
    fn origin(self) -> Origin {
        match self {
            ComponentKind::GB => Origin::Original,
            ComponentKind::Random => Origin::Random,
            ComponentKind::SB => Origin::Handcrafted,
        }
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub name: ComponentKind,
    /// Two-column TSV (English, target).
    pub path: PathBuf,
    /// Optional lint file for this component; its flag counts go to the
    /// manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lint: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    #[serde(default = "yes")]
    pub tsv: bool,
    #[serde(default = "yes")]
    pub two_file: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputOptions {
    fn default() -> Self {
        OutputOptions {
            tsv: true,
            two_file: true,
        }
    }
}

/// Which corpora to mix and how. Written as TOML:
///
/// ```toml
/// seed = 7
/// lang = "fr"
///
/// [[component]]
/// name = "GB"
/// path = "gb.tsv"
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRecipe {
    pub seed: u64,
    pub lang: String,
    #[serde(rename = "component")]
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub output: OutputOptions,
}

impl DatasetRecipe {
    pub fn new(seed: u64, lang: &str, components: Vec<ComponentSpec>) -> Self {
        DatasetRecipe {
            seed,
            lang: lang.to_owned(),
            components,
            output: OutputOptions::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let recipe: DatasetRecipe =
            toml::from_str(text).map_err(|e| Error::Config(format!("recipe: {e}")))?;
        recipe.validate()?;
        Ok(recipe)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("recipe serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::Config("recipe has no components".into()));
        }
        let mut seen = BTreeSet::new();
        for c in &self.components {
            if !seen.insert(c.name) {
                return Err(Error::Config(format!("component {} listed twice", c.name)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    pub name: ComponentKind,
    pub path: String,
    pub count: usize,
}

/// Written next to the mixed corpus as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixManifest {
    pub lang: String,
    pub seed: u64,
    pub components: Vec<ComponentCount>,
    pub total: usize,
    /// Flag counts by kind over all component lint files.
    pub lint: BTreeMap<String, usize>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct MixedCorpus {
    pub pairs: Vec<ParallelPair>,
    pub manifest: MixManifest,
}

impl MixedCorpus {
    /// Writes `finetune.src`/`finetune.tgt`, `finetune.tsv` and
    /// `manifest.json` into `dir`, which is created if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let put = |name: &str, text: &str| {
            let p = dir.join(name);
            std::fs::write(&p, text).map_err(|e| Error::io(p, e))
        };
        for name in &self.manifest.outputs {
            match name.as_str() {
                "finetune.src" => {
                    let (src, tgt) = write_two_file(&self.pairs);
                    put("finetune.src", &src)?;
                    put("finetune.tgt", &tgt)?;
                }
                "finetune.tsv" => put("finetune.tsv", &write_tsv(&self.pairs))?,
                _ => {}
            }
        }
        let mut json = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        json.push('\n');
        put("manifest.json", &json)
    }
}

fn read_component(path: &Path, lang: &str, kind: ComponentKind) -> Result<Vec<ParallelPair>> {
    let text = read_to_string(path)?;
    let mut pairs = crate::error::in_file(path, read_tsv_pairs(&text, lang, kind.origin()))?;
    for p in &mut pairs {
        p.id = format!("{kind}:{}", p.id);
    }
    Ok(pairs)
}

/// Loads a handcrafted two-column TSV verbatim, duplicates included.
pub fn load_handcrafted(path: &Path, lang: &str) -> Result<Vec<ParallelPair>> {
    let pairs = read_component(path, lang, ComponentKind::SB)?;
    if pairs.is_empty() {
        return Err(Error::Config(format!(
            "{}: handcrafted file is empty",
            path.display()
        )));
    }
    Ok(pairs)
}

/// Concatenates the components in recipe order and shuffles the result
/// with the recipe seed. Relative component paths are resolved against
/// `base` (normally the recipe's directory) and recorded as written.
pub fn mix_corpora(recipe: &DatasetRecipe, base: &Path) -> Result<MixedCorpus> {
    recipe.validate()?;
    let mut pairs = Vec::new();
    let mut components = Vec::new();
    let mut lint = BTreeMap::new();
    for c in &recipe.components {
        let path = base.join(&c.path);
        if !path.is_file() {
            return Err(Error::Config(format!(
                "component {}: file {} not found",
                c.name,
                path.display()
            )));
        }
        let part = match c.name {
            ComponentKind::SB => load_handcrafted(&path, &recipe.lang)?,
            kind => read_component(&path, &recipe.lang, kind)?,
        };
        components.push(ComponentCount {
            name: c.name,
            path: c.path.display().to_string(),
            count: part.len(),
        });
        pairs.extend(part);
        if let Some(l) = &c.lint {
            let l = &base.join(l);
            for (kind, n) in crate::error::in_file(l, count_lint_tsv(&read_to_string(l)?))? {
                *lint.entry(kind).or_insert(0) += n;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    pairs.shuffle(&mut rng);

    let mut outputs = Vec::new();
    if recipe.output.two_file {
        outputs.extend(["finetune.src".to_owned(), "finetune.tgt".to_owned()]);
    }
    if recipe.output.tsv {
        outputs.push("finetune.tsv".to_owned());
    }
    let manifest = MixManifest {
        lang: recipe.lang.clone(),
        seed: recipe.seed,
        total: pairs.len(),
        components,
        lint,
        outputs,
    };
    Ok(MixedCorpus { pairs, manifest })
}

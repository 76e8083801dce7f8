use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Result;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use pluscx::groups::{FiniteGroup, FinitePresentation, GroupHom, GroupSpec, PresentationSpec, Word};
use pluscx::Config;

/// An input that could not be read or parsed; maps to exit code 2.
#[derive(Debug)]
pub struct BadInput(pub String);

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

pub fn bad(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(BadInput(msg.into()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
}

pub fn load_config(path: Option<&Path>, budgets: &[String]) -> Result<Config> {
    let mut value = match path {
        None => serde_json::to_value(Config::default())?,
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| bad(format!("cannot read {}: {e}", p.display())))?;
            let cfg: Config = if p.extension().is_some_and(|e| e == "toml") {
                toml::from_str(&text).map_err(|e| bad(format!("{}: {e}", p.display())))?
            } else {
                serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", p.display())))?
            };
            serde_json::to_value(cfg)?
        }
    };
    let obj = value.as_object_mut().expect("config serializes to an object");
    for b in budgets {
        let (k, v) = b.split_once('=').ok_or_else(|| bad(format!("budget override '{b}' is not key=value")))?;
        if !obj.contains_key(k) {
            return Err(bad(format!("unknown config key '{k}'")));
        }
        let v: serde_json::Value = serde_json::from_str(v).map_err(|_| bad(format!("budget value '{v}' is not a number")))?;
        obj.insert(k.to_string(), v);
    }
    serde_json::from_value(value).map_err(|e| bad(format!("config: {e}")))
}

/// Resolves a group given by builtin name, by path to a JSON group file,
/// or inline. Relative paths are taken from `base`.
pub fn load_group(spec: &GroupSpec, base: &Path, cfg: &Config) -> Result<Arc<FiniteGroup>> {
    if let GroupSpec::Named(name) = spec {
        let path = base.join(name);
        if path.is_file() {
            let inner: GroupSpec = read_json(&path)?;
            if matches!(inner, GroupSpec::Named(_)) {
                return Err(bad(format!("{}: group file must hold a table or permutations", path.display())));
            }
            return load_group(&inner, path.parent().unwrap_or(base), cfg);
        }
    }
    Ok(spec.build(cfg.exhaustive_check_bound)?.into_arc())
}

pub fn group_arg(arg: &str, cfg: &Config) -> Result<Arc<FiniteGroup>> {
    load_group(&GroupSpec::Named(arg.to_string()), Path::new("."), cfg)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ImageRef {
    Index(usize),
    Symbol(String),
}

#[derive(Debug, Clone, Deserialize)]
pub struct HomJob {
    pub target: GroupSpec,
    pub images: Vec<ImageRef>,
}

impl HomJob {
    pub fn build(&self, p: &FinitePresentation, base: &Path, cfg: &Config) -> Result<GroupHom> {
        let g = load_group(&self.target, base, cfg)?;
        let images = self
            .images
            .iter()
            .map(|i| match i {
                ImageRef::Index(k) => Ok(*k),
                ImageRef::Symbol(s) => g.symbol(s).ok_or_else(|| bad(format!("target group has no element named '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupHom::new(p.clone(), g, images)?)
    }
}

/// A presentation given either nested under `presentation` or by top-level
/// `generators` and `relators`, with an optional map to a finite group.
#[derive(Debug, Clone, Deserialize)]
pub struct PresentationJob {
    #[serde(default)]
    pub presentation: Option<PresentationSpec>,
    #[serde(default)]
    pub generators: Option<Vec<String>>,
    #[serde(default)]
    pub relators: Vec<String>,
    #[serde(default)]
    pub hom: Option<HomJob>,
}

impl PresentationJob {
    pub fn presentation(&self) -> Result<FinitePresentation> {
        let spec = match (&self.presentation, &self.generators) {
            (Some(p), None) => p.clone(),
            (None, Some(g)) => PresentationSpec { generators: g.clone(), relators: self.relators.clone() },
            (Some(_), Some(_)) => return Err(bad("give either `presentation` or `generators`, not both")),
            (None, None) => return Err(bad("missing presentation")),
        };
        Ok(FinitePresentation::from_spec(&spec)?)
    }

    /// The map to `G`; without a `hom` entry, the trivial group.
    pub fn hom(&self, base: &Path, cfg: &Config) -> Result<GroupHom> {
        let p = self.presentation()?;
        match &self.hom {
            Some(h) => h.build(&p, base, cfg),
            None => Ok(GroupHom::trivial(p, FiniteGroup::trivial().into_arc())),
        }
    }
}

pub fn words(strings: &[String], p: &FinitePresentation) -> Result<Vec<Word>> {
    strings.iter().map(|s| Word::parse(s, p.generator_names()).map_err(anyhow::Error::new)).collect()
}

pub fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."))
}

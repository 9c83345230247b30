use std::collections::BTreeMap;
use std::fs;
use std::path::{Component, Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::enrich::ResolverConfig;
use crate::error::{Error, Result};
use crate::model::{MatchPolicy, SourceDatabase};

/// An export file, optionally tied to a single cited document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputFile {
    Path(PathBuf),
    Spec {
        path: PathBuf,
        #[serde(default)]
        cited_doc_id: Option<String>,
    },
}

impl InputFile {
    pub fn path(&self) -> &Path {
        match self {
            InputFile::Path(p) | InputFile::Spec { path: p, .. } => p,
        }
    }

    pub fn cited_doc_id(&self) -> Option<&str> {
        match self {
            InputFile::Path(_) => None,
            InputFile::Spec { cited_doc_id, .. } => cited_doc_id.as_deref(),
        }
    }

    fn path_mut(&mut self) -> &mut PathBuf {
        match self {
            InputFile::Path(p) | InputFile::Spec { path: p, .. } => p,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Inputs {
    pub gs: Vec<InputFile>,
    pub wos: Vec<InputFile>,
    pub scopus: Vec<InputFile>,
}

impl Inputs {
    pub fn for_source(&self, s: SourceDatabase) -> &[InputFile] {
        match s {
            SourceDatabase::Gs => &self.gs,
            SourceDatabase::Wos => &self.wos,
            SourceDatabase::Scopus => &self.scopus,
        }
    }

    fn all_mut(&mut self) -> impl Iterator<Item = &mut InputFile> {
        self.gs.iter_mut().chain(self.wos.iter_mut()).chain(self.scopus.iter_mut())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolverSettings {
    pub base_url: Option<String>,
    pub offline: bool,
    pub rate_limit_per_sec: f64,
    pub max_retries: u32,
    pub backoff_ms: u64,
    pub cache_dir: Option<PathBuf>,
}

impl Default for ResolverSettings {
    fn default() -> Self {
        ResolverSettings {
            base_url: None,
            offline: true,
            rate_limit_per_sec: 1.0,
            max_retries: 3,
            backoff_ms: 500,
            cache_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSettings {
    /// Records per broad area.
    pub size: usize,
}

impl Default for SampleSettings {
    fn default() -> Self {
        SampleSettings { size: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub inputs: Inputs,
    /// `venue,category,broad_area,quartile` file for citing venues.
    pub category_map: Option<PathBuf>,
    /// Same format, keyed by cited document id instead of venue.
    pub cited_doc_categories: Option<PathBuf>,
    /// Broad area to labeled sample sheet.
    pub corrections: BTreeMap<String, PathBuf>,
    pub output_dir: PathBuf,
    pub policy: MatchPolicy,
    pub resolver: ResolverSettings,
    pub workers: usize,
    pub seed: Option<u64>,
    pub sample: Option<SampleSettings>,
    pub top_languages: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            inputs: Inputs::default(),
            category_map: None,
            cited_doc_categories: None,
            corrections: BTreeMap::new(),
            output_dir: PathBuf::from("out"),
            policy: MatchPolicy::default(),
            resolver: ResolverSettings::default(),
            workers: 1,
            seed: None,
            sample: None,
            top_languages: crate::analytics::DEFAULT_TOP_LANGUAGES,
        }
    }
}

fn rebase(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

/// Lexical normalization, enough to compare paths that name the same file.
fn lexical(p: &Path) -> PathBuf {
    let abs = if p.is_relative() {
        std::env::current_dir().unwrap_or_default().join(p)
    } else {
        p.to_path_buf()
    };
    let mut out = PathBuf::new();
    for c in abs.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                out.pop();
            }
            other => out.push(other),
        }
    }
    out
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::validation(format!("config: {e}")))
    }

    /// Reads a config file. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.rebase(base);
        Ok(cfg)
    }

    pub fn rebase(&mut self, base: &Path) {
        for f in self.inputs.all_mut() {
            rebase(base, f.path_mut());
        }
        for p in self
            .category_map
            .iter_mut()
            .chain(self.cited_doc_categories.iter_mut())
            .chain(self.corrections.values_mut())
            .chain(self.resolver.cache_dir.iter_mut())
        {
            rebase(base, p);
        }
        rebase(base, &mut self.output_dir);
    }

    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        if self.workers == 0 {
            return Err(Error::validation("workers must be at least 1"));
        }
        if self.sample.is_some() && self.seed.is_none() {
            return Err(Error::validation("sampling requires a seed"));
        }
        if !(self.resolver.rate_limit_per_sec > 0.0) {
            return Err(Error::validation("resolver rate limit must be positive"));
        }
        let out = lexical(&self.output_dir);
        let inputs = SourceDatabase::ALL
            .iter()
            .flat_map(|s| self.inputs.for_source(*s))
            .map(InputFile::path)
            .chain(self.category_map.as_deref())
            .chain(self.cited_doc_categories.as_deref())
            .chain(self.corrections.values().map(PathBuf::as_path));
        for p in inputs {
            if lexical(p) == out {
                return Err(Error::validation(format!(
                    "output directory {} is also an input",
                    self.output_dir.display()
                )));
            }
        }
        Ok(())
    }

    pub fn resolver_config(&self) -> ResolverConfig {
        let defaults = ResolverConfig::default();
        ResolverConfig {
            base_url: self.resolver.base_url.clone(),
            offline: self.resolver.offline,
            cache_dir: self.resolver.cache_dir.clone().unwrap_or(defaults.cache_dir),
            max_retries: self.resolver.max_retries,
            backoff: std::time::Duration::from_millis(self.resolver.backoff_ms),
            rate_limit_per_sec: self.resolver.rate_limit_per_sec,
        }
    }

    /// Digest of every setting that can affect output. `workers` and
    /// `output_dir` are left out so that runs differing only in those
    /// produce identical bytes.
    pub fn digest(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("workers");
            obj.remove("output_dir");
        }
        Ok(hex::encode(Sha256::digest(serde_json::to_vec(&v)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_input_forms() {
        let cfg = PipelineConfig::from_json(
            r#"{"inputs": {"gs": ["a.jsonl", {"path": "b.jsonl", "cited_doc_id": "X"}]},
                "output_dir": "out", "seed": 7}"#,
        )
        .unwrap();
        assert_eq!(cfg.inputs.gs[0].path(), Path::new("a.jsonl"));
        assert_eq!(cfg.inputs.gs[1].cited_doc_id(), Some("X"));
        assert_eq!(cfg.workers, 1);
        assert!(cfg.resolver.offline);
    }

    #[test]
    fn rejects_bad_settings() {
        let mut cfg = PipelineConfig::default();
        cfg.policy.high_sim_threshold = 1.01;
        assert!(cfg.validate().is_err());

        let mut cfg = PipelineConfig::default();
        cfg.sample = Some(SampleSettings::default());
        assert!(cfg.validate().is_err());

        let mut cfg = PipelineConfig::default();
        cfg.inputs.wos.push(InputFile::Path("./out".into()));
        assert!(cfg.validate().is_err());

        assert!(PipelineConfig::from_json(r#"{"unknown": 1}"#).is_err());
    }

    #[test]
    fn digest_ignores_workers_only() {
        let a = PipelineConfig::default();
        let mut b = a.clone();
        b.workers = 8;
        b.output_dir = "elsewhere".into();
        assert_eq!(a.digest().unwrap(), b.digest().unwrap());
        b.seed = Some(1);
        assert_ne!(a.digest().unwrap(), b.digest().unwrap());
    }
}

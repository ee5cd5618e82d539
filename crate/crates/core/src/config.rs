//! Run configuration shared by the library pipeline and the CLI.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cooccur::{ScoringOptions, DEFAULT_ALPHA_ARS, DEFAULT_ALPHA_SRS, DEFAULT_ALPHA_USR};
use crate::corpus::DEFAULT_SNIPPET_CAP;
use crate::keywords::{DeltaOrder, KeywordOptions, LogBase, QueryMode, DEFAULT_CUTOFF_RATIO, DEFAULT_KEYWORD_CAP};
use crate::network::{GraphFormat, Method};
use crate::par::Execution;
use crate::url::CanonicalRules;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

/// Relation thresholds per method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Alphas {
    pub srs: f64,
    pub usr: f64,
    pub ars: f64,
}

impl Default for Alphas {
    fn default() -> Self {
        Alphas { srs: DEFAULT_ALPHA_SRS, usr: DEFAULT_ALPHA_USR, ars: DEFAULT_ALPHA_ARS }
    }
}

impl Alphas {
    pub fn get(&self, method: Method) -> f64 {
        match method {
            Method::Srs => self.srs,
            Method::Usr => self.usr,
            Method::Ars => self.ars,
            Method::External => 0.0,
        }
    }

    pub fn set(&mut self, method: Method, alpha: f64) {
        match method {
            Method::Srs => self.srs = alpha,
            Method::Usr => self.usr = alpha,
            Method::Ars => self.ars = alpha,
            Method::External => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Graph file; standard output when absent.
    pub graph: Option<PathBuf>,
    pub format: GraphFormat,
    /// Pair-score audit CSV.
    pub scores: Option<PathBuf>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { graph: None, format: GraphFormat::Json, scores: None }
    }
}

/// Every tunable of a run. Deserializes from TOML with all keys optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub seeds: Option<PathBuf>,
    /// Bibliographic records for ARS (JSON lines or `.bib`).
    pub records: Option<PathBuf>,
    pub method: Method,
    pub alpha: Alphas,
    /// `>` when true, `>=` otherwise.
    pub strict_threshold: bool,
    pub cutoff_ratio: f64,
    pub keyword_cap: usize,
    pub snippet_cap: usize,
    pub mode: QueryMode,
    pub log_base: LogBase,
    pub delta_order: DeltaOrder,
    /// Attach selected keywords to actors as attributes.
    pub keyword_attributes: bool,
    /// ARS query keyword; empty means name only.
    pub ars_keyword: String,
    pub url: CanonicalRules,
    pub execution: Execution,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            seeds: None,
            records: None,
            method: Method::Srs,
            alpha: Alphas::default(),
            strict_threshold: true,
            cutoff_ratio: DEFAULT_CUTOFF_RATIO,
            keyword_cap: DEFAULT_KEYWORD_CAP,
            snippet_cap: DEFAULT_SNIPPET_CAP,
            mode: QueryMode::NoK,
            log_base: LogBase::Natural,
            delta_order: DeltaOrder::Ascending,
            keyword_attributes: true,
            ars_keyword: String::new(),
            url: CanonicalRules::default(),
            execution: Execution::default(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, a) in [("srs", self.alpha.srs), ("usr", self.alpha.usr), ("ars", self.alpha.ars)] {
            if !(a.is_finite() && a >= 0.0) {
                return Err(ConfigError(format!("alpha.{name} must be a finite value >= 0, got {a}")));
            }
        }
        if !(self.cutoff_ratio > 0.0 && self.cutoff_ratio <= 1.0) {
            return Err(ConfigError(format!("cutoff_ratio must lie in (0, 1], got {}", self.cutoff_ratio)));
        }
        if self.keyword_cap < 1 {
            return Err(ConfigError("keyword_cap must be at least 1".into()));
        }
        if self.snippet_cap < 1 {
            return Err(ConfigError("snippet_cap must be at least 1".into()));
        }
        if self.method == Method::External {
            return Err(ConfigError("method must be one of srs, usr, ars".into()));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.get(self.method)
    }

    pub fn keyword_options(&self) -> KeywordOptions {
        KeywordOptions {
            snippet_cap: self.snippet_cap,
            cutoff_ratio: self.cutoff_ratio,
            cap: self.keyword_cap,
            log_base: self.log_base,
            delta_order: self.delta_order,
            execution: self.execution,
        }
    }

    /// Scoring options without keywords; the pipeline fills those in.
    pub fn scoring_options(&self) -> ScoringOptions {
        ScoringOptions {
            execution: self.execution,
            snippet_cap: self.snippet_cap,
            url_rules: self.url,
            mode: self.mode,
            keywords: Default::default(),
        }
    }
}

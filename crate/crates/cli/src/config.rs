//! Experiment configuration: a TOML document with one table per concern.
//!
//! Every table rejects unknown keys. Command-line overrides are applied to the
//! parsed document before it is deserialised again, so they go through the
//! same validation as the file itself.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use holderlab::geometry::{DomainKind, QuasiGeometricSequence};
use holderlab::kernels::{BudgetInputs, MuSource};
use holderlab::perron::SequenceFamily;
use holderlab::regularity::SolverSpec;
use holderlab::solvers::{DataKind, SourceKind};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::presets;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub dimension: Option<usize>,
    pub domain: Option<DomainKind>,
    /// Boundary (or exterior) data `g`.
    pub boundary: Option<DataKind>,
    pub source: Option<SourceKind>,
    pub sequence: Option<SequenceSpec>,
    pub solver: Option<SolverSpec>,
    pub solve: Option<SolveSection>,
    pub profile: Option<ProfileSection>,
    pub budget: Option<BudgetSection>,
    pub certify: Option<CertifySection>,
    pub geometry: Option<GeometrySection>,
    pub perron: Option<PerronSection>,
}

/// Either `tau` and `count` for the ladder `τ^k`, or explicit `tau1`, `tau2`
/// and `radii`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub tau: Option<f64>,
    pub count: Option<usize>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub radii: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSection {
    pub points: Vec<Vec<f64>>,
    pub paths: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub points_per_scale: usize,
    pub paths_per_point: u64,
    #[serde(default = "default_sampling_attempts")]
    pub sampling_attempts: usize,
}

fn default_sampling_attempts() -> usize {
    10_000
}

/// Inputs of the exponent budget; `n` is the config dimension and missing
/// ratios default to those of the sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub nu: f64,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    #[serde(default = "default_mu_source")]
    pub source: MuSource,
    #[serde(default = "one")]
    pub alpha: f64,
    pub p: Option<f64>,
    pub s: Option<f64>,
    #[serde(default)]
    pub c_aux: f64,
    #[serde(default = "one")]
    pub m: f64,
}

fn default_mu_source() -> MuSource {
    MuSource::Cap
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySection {
    #[serde(default = "default_slack")]
    pub slack_sigmas: f64,
}

fn default_slack() -> f64 {
    3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    H1,
    H2,
    H3,
    H4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    #[serde(default = "all_conditions")]
    pub conditions: Vec<Condition>,
    pub samples: u64,
    /// Cap ratio searched for by the (H2) checker.
    pub nu: Option<f64>,
    #[serde(default = "default_angular_grid")]
    pub angular_grid: usize,
}

fn all_conditions() -> Vec<Condition> {
    vec![Condition::H1, Condition::H2, Condition::H3, Condition::H4]
}

fn default_angular_grid() -> usize {
    64
}

/// `ω_g(r_k)` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaFamily {
    /// `(τ^k)^exponent`.
    Power { exponent: f64, tau: f64 },
    Constant { value: f64 },
}

impl OmegaFamily {
    pub fn terms(&self, count: usize) -> Vec<f64> {
        (0..count)
            .map(|k| match *self {
                OmegaFamily::Power { exponent, tau } => tau.powi(k as i32).powf(exponent),
                OmegaFamily::Constant { value } => value,
            })
            .collect()
    }
}

/// The `a_k` come from exactly one of a named family (`a`), a CSV file
/// (`input`, columns `k,a_k,omega_k`) or the (H1) terms of the configured
/// domain along the configured sequence (`a_from_geometry`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerronSection {
    pub c0: f64,
    #[serde(default = "one")]
    pub a0: f64,
    pub k_max: usize,
    pub a: Option<SequenceFamily>,
    pub omega: Option<OmegaFamily>,
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub a_from_geometry: bool,
}

impl ExperimentConfig {
    /// Parses a TOML document; errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("invalid config: {e}"))
    }

    /// Applies `key.path=value` overrides. Values are read as TOML and fall
    /// back to strings.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        let mut doc = toml::Table::try_from(self).context("serialising config")?;
        for item in overrides {
            let (path, raw) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("override `{item}` is not of the form key=value"))?;
            let value = parse_value(raw.trim());
            set_path(&mut doc, path.trim(), value).with_context(|| format!("override `{item}`"))?;
        }
        let text = toml::to_string(&doc)?;
        toml::from_str(&text).map_err(|e| anyhow!("config after overrides is invalid: {}", e.message()))
    }

    /// Canonical TOML text; parsing it gives back an equal config.
    pub fn canonical(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// First 16 hex digits of the SHA-256 of the canonical text.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(self.canonical()?.as_bytes());
        Ok(hex::encode(digest)[..16].to_string())
    }

    pub fn dimension(&self) -> Result<usize> {
        self.dimension.ok_or_else(|| anyhow!("missing key `dimension`"))
    }

    pub fn sequence(&self) -> Result<QuasiGeometricSequence> {
        let spec = require(&self.sequence, "sequence")?;
        match spec {
            SequenceSpec { tau: Some(tau), count: Some(count), tau1: None, tau2: None, radii: None } => {
                Ok(QuasiGeometricSequence::geometric(*tau, *count)?)
            }
            SequenceSpec { tau: None, count: None, tau1: Some(t1), tau2: Some(t2), radii: Some(radii) } => {
                Ok(QuasiGeometricSequence::new(*t1, *t2, radii.clone())?)
            }
            _ => bail!("[sequence] needs either `tau` and `count`, or `tau1`, `tau2` and `radii`"),
        }
    }

    pub fn budget_inputs(&self) -> Result<BudgetInputs> {
        let b = require(&self.budget, "budget")?;
        let seq = self.sequence.as_ref().map(|_| self.sequence()).transpose()?;
        let tau1 = b.tau1.or(seq.as_ref().map(|s| s.tau1()));
        let tau2 = b.tau2.or(seq.as_ref().map(|s| s.tau2()));
        Ok(BudgetInputs {
            n: self.dimension()?,
            nu: b.nu,
            tau1: tau1.ok_or_else(|| anyhow!("[budget] needs `tau1` or a [sequence]"))?,
            tau2: tau2.ok_or_else(|| anyhow!("[budget] needs `tau2` or a [sequence]"))?,
            source: b.source,
            alpha: b.alpha,
            p: b.p,
            s: b.s,
            c_aux: b.c_aux,
            m: b.m,
        })
    }
}

pub fn require<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T> {
    section.as_ref().ok_or_else(|| anyhow!("missing [{name}] table"))
}

fn parse_value(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    match toml::from_str::<toml::Table>(&wrapped) {
        Ok(mut t) => t.remove("v").expect("key was just parsed"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

fn set_path(doc: &mut toml::Table, path: &str, value: toml::Value) -> Result<()> {
    let mut keys: Vec<&str> = path.split('.').collect();
    let last = keys.pop().filter(|k| !k.is_empty()).ok_or_else(|| anyhow!("empty key"))?;
    let mut table = doc;
    for key in keys {
        let entry = table
            .entry(key.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| anyhow!("`{key}` is not a table"))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}

/// Source of the config text.
pub enum ConfigSource<'a> {
    File(&'a Path),
    Preset(&'a str),
}

pub fn load(source: ConfigSource<'_>) -> Result<ExperimentConfig> {
    match source {
        ConfigSource::File(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::parse(&text).with_context(|| format!("in {}", path.display()))
        }
        ConfigSource::Preset(name) => {
            let text = presets::get(name)
                .ok_or_else(|| anyhow!("unknown preset `{name}`; available: {}", presets::names().join(", ")))?;
            ExperimentConfig::parse(text).with_context(|| format!("in preset {name}"))
        }
    }
}

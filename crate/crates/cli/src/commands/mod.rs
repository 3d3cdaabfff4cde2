//! One function per subcommand. Each returns the rendered output and whether
//! the run should count as a success.

mod constants;
mod geometry;
mod perron;
mod profile;
mod solve;

use anyhow::{anyhow, Result};
use holderlab::geometry::{builtin_domain, BuiltinDomain};
use holderlab::solvers::{BuiltinData, SourceKind};

use crate::config::{require, ExperimentConfig};

pub use constants::constants;
pub use geometry::check_geometry;
pub use perron::perron;
pub use profile::{certify, profile};
pub use solve::solve;

pub struct Rendered {
    pub text: String,
    pub success: bool,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self { text, success: true }
    }
}

/// Seed-derivation tags, one per command that draws random numbers.
mod tags {
    pub const H1: u64 = 0x6831;
    pub const H2: u64 = 0x6832;
    pub const H3: u64 = 0x6833;
    pub const H4: u64 = 0x6834;
    pub const SOLVE: u64 = 0x736f_6c76;
}

fn domain(cfg: &ExperimentConfig) -> Result<BuiltinDomain> {
    let kind = require(&cfg.domain, "domain")?.clone();
    Ok(builtin_domain(kind, cfg.dimension()?)?)
}

fn boundary(cfg: &ExperimentConfig) -> Result<BuiltinData> {
    let data = BuiltinData::new(require(&cfg.boundary, "boundary")?.clone())?;
    data.check_dim(cfg.dimension()?)?;
    Ok(data)
}

fn source(cfg: &ExperimentConfig) -> SourceKind {
    cfg.source.unwrap_or(SourceKind::Zero)
}

fn check_point(point: &[f64], n: usize) -> Result<()> {
    if point.len() != n {
        return Err(anyhow!("point {point:?} has {} coordinates, expected {n}", point.len()));
    }
    Ok(())
}

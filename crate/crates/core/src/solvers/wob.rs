use serde::{Deserialize, Serialize};

use super::{BoundaryData, EstimatorResult};
use crate::error::{Error, Result};
use crate::geometry::DomainOracle;
use crate::kernels::FractionalExitSampler;
use crate::rng::stream;
use crate::stats::{reduce_paths, PathOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WobConfig {
    pub paths: u64,
    pub seed: u64,
    pub max_steps: u64,
}

impl WobConfig {
    pub const DEFAULT_MAX_STEPS: u64 = 100_000;

    pub fn new(paths: u64, seed: u64) -> Self {
        Self { paths, seed, max_steps: Self::DEFAULT_MAX_STEPS }
    }
}

/// Walk-on-balls estimate of the solution of `(−Δ)^{s/2} u = 0` in `Ω` with
/// `u = g_ext` on `Ω^c`, at `x`.
///
/// Each step samples the exact exit law of the largest ball about the current
/// point inside `Ω`; the walk ends at its first landing point in `Ω^c`.
pub fn wob_fractional_estimate<D, G>(domain: &D, g_ext: &G, x: &[f64], s: f64, config: &WobConfig) -> Result<EstimatorResult>
where
    D: DomainOracle + ?Sized,
    G: BoundaryData + ?Sized,
{
    let sampler = FractionalExitSampler::new(s)?;
    if config.paths == 0 {
        return Err(Error::invalid("paths", "must be at least 1"));
    }
    if config.max_steps == 0 {
        return Err(Error::invalid("max_steps", "must be at least 1"));
    }
    let n = domain.dim();
    if x.len() != n {
        return Err(Error::invalid("x", format!("has {} coordinates for dimension {n}", x.len())));
    }
    if !domain.contains(x) {
        return Err(Error::PointOutsideDomain(x.to_vec()));
    }
    let origin = vec![0.0; n];
    let summary = reduce_paths(config.paths, |i| {
        let mut rng = stream(config.seed, i);
        let mut z = x.to_vec();
        let mut jump = vec![0.0; n];
        let mut steps = 0u64;
        loop {
            if steps >= config.max_steps {
                return PathOutcome::Discarded { steps };
            }
            let r = domain.dist_to_complement(&z);
            steps += 1;
            if !(r > 0.0) {
                return PathOutcome::Scored { value: g_ext.evaluate(&z), steps };
            }
            sampler
                .sample(&mut rng, &origin, r, &mut jump)
                .expect("centred exits need no rejection");
            for (zv, jv) in z.iter_mut().zip(&jump) {
                *zv += jv;
            }
            if !domain.contains(&z) {
                return PathOutcome::Scored { value: g_ext.evaluate(&z), steps };
            }
        }
    });
    Ok(EstimatorResult::from_summary(&summary, config.seed, None))
}

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{BoundaryData, SourceTerm};
use crate::error::{ensure_positive, Error, Result};
use crate::geometry::DomainOracle;
use crate::rng::stream;
use crate::sphere::{sample_direction, sample_in_ball, unit_ball_volume, unit_sphere_area};
use crate::stats::{reduce_paths, PathOutcome, PathSummary};

/// Monte Carlo estimate of `u(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(paths)`.
    pub stderr: f64,
    /// Paths that were scored.
    pub paths: u64,
    /// Paths dropped at the step cap.
    pub discarded: u64,
    pub seed: u64,
    /// Absent for walk-on-balls.
    pub shell_epsilon: Option<f64>,
    /// Mean step count over all paths, discarded ones included.
    pub mean_steps: f64,
}

impl EstimatorResult {
    pub(crate) fn from_summary(summary: &PathSummary, seed: u64, shell_epsilon: Option<f64>) -> Self {
        Self {
            mean: summary.values.mean(),
            stderr: summary.values.stderr(),
            paths: summary.values.count(),
            discarded: summary.discarded,
            seed,
            shell_epsilon,
            mean_steps: summary.steps.mean(),
        }
    }

    pub fn discarded_fraction(&self) -> f64 {
        let total = self.paths + self.discarded;
        if total == 0 {
            0.0
        } else {
            self.discarded as f64 / total as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WosConfig {
    pub shell_epsilon: f64,
    pub paths: u64,
    pub seed: u64,
    pub max_steps: u64,
}

impl WosConfig {
    pub const DEFAULT_MAX_STEPS: u64 = 100_000;

    pub fn new(shell_epsilon: f64, paths: u64, seed: u64) -> Self {
        Self { shell_epsilon, paths, seed, max_steps: Self::DEFAULT_MAX_STEPS }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        ensure_positive("shell_epsilon", self.shell_epsilon)?;
        if self.paths == 0 {
            return Err(Error::invalid("paths", "must be at least 1"));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("max_steps", "must be at least 1"));
        }
        Ok(())
    }
}

/// Green's function of `−Δ` on `B(0, radius)` with pole at the centre.
pub fn ball_green_at_center(n: usize, radius: f64, rho: f64) -> f64 {
    match n {
        1 => (radius - rho) / 2.0,
        2 => (radius / rho).ln() / (2.0 * PI),
        _ => (rho.powi(2 - n as i32) - radius.powi(2 - n as i32)) / ((n as f64 - 2.0) * unit_sphere_area(n)),
    }
}

/// Walk-on-spheres estimate of the solution of `Δu = f` in `Ω`, `u = g` on
/// `∂Ω`, at `x`.
///
/// Each step jumps to a uniform point of the largest sphere about the current
/// position inside `Ω` and subtracts a one-point estimate of the ball Green
/// potential of `f`. A walk stops once it is within `shell_epsilon` of `Ω^c`
/// and scores `g` at its current position.
pub fn wos_estimate<D, G, F>(domain: &D, g: &G, f: &F, x: &[f64], config: &WosConfig) -> Result<EstimatorResult>
where
    D: DomainOracle + ?Sized,
    G: BoundaryData + ?Sized,
    F: SourceTerm + ?Sized,
{
    config.validate()?;
    let n = domain.dim();
    if x.len() != n {
        return Err(Error::invalid("x", format!("has {} coordinates for dimension {n}", x.len())));
    }
    if !domain.contains(x) {
        return Err(Error::PointOutsideDomain(x.to_vec()));
    }
    let has_source = f.sup_bound() > 0.0;
    let ball_volume = unit_ball_volume(n);
    let eps = config.shell_epsilon;
    let summary = reduce_paths(config.paths, |i| {
        let mut rng = stream(config.seed, i);
        let mut z = x.to_vec();
        let mut dir = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut potential = 0.0;
        let mut steps = 0u64;
        loop {
            let d = domain.dist_to_complement(&z);
            if d < eps {
                return PathOutcome::Scored { value: g.evaluate(&z) + potential, steps };
            }
            if steps >= config.max_steps {
                return PathOutcome::Discarded { steps };
            }
            if has_source {
                sample_in_ball(&mut rng, d, &mut dir);
                let rho = crate::sphere::norm(&dir);
                if rho > 0.0 {
                    for ((yv, zv), dv) in y.iter_mut().zip(&z).zip(&dir) {
                        *yv = zv + dv;
                    }
                    potential -= ball_volume * d.powi(n as i32) * ball_green_at_center(n, d, rho) * f.evaluate(&y);
                }
            }
            sample_direction(&mut rng, &mut dir);
            for (zv, dv) in z.iter_mut().zip(&dir) {
                *zv += d * dv;
            }
            steps += 1;
        }
    });
    Ok(EstimatorResult::from_summary(&summary, config.seed, Some(eps)))
}

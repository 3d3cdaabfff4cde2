//! Oscillation decay at the origin: measurement, power-law fits, and
//! certification against an exponent budget.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_open, ensure_positive, Error, Result};
use crate::geometry::{DomainOracle, QuasiGeometricSequence};
use crate::kernels::ExponentBudget;
use crate::rng::{derive_seed, stream};
use crate::solvers::{wob_fractional_estimate, wos_estimate, BoundaryData, SourceTerm, WobConfig, WosConfig};
use crate::sphere::sample_in_ball;

const TAG_POINTS: u64 = 0x504f_494e;
const TAG_PATHS: u64 = 0x5041_5448;
/// Upper bound on the least-squares weight `(osc/stderr)²` of one scale.
pub const WEIGHT_CAP: f64 = 1e4;
/// Relative rounding allowance in the per-scale comparisons.
const BOUND_RTOL: f64 = 1e-12;

/// Estimator used at each sample point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SolverSpec {
    /// Walk-on-spheres. With `relative_epsilon` the shell width at scale `r_k`
    /// is `shell_epsilon·r_k`.
    Classical {
        shell_epsilon: f64,
        #[serde(default)]
        relative_epsilon: bool,
        #[serde(default = "default_max_steps")]
        max_steps: u64,
    },
    /// Walk-on-balls for the order-`s` fractional Laplacian; sources must vanish.
    Fractional {
        s: f64,
        #[serde(default = "default_max_steps")]
        max_steps: u64,
    },
}

fn default_max_steps() -> u64 {
    WosConfig::DEFAULT_MAX_STEPS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub solver: SolverSpec,
    pub points_per_scale: usize,
    pub paths_per_point: u64,
    /// Rejection draws allowed for each sample point.
    pub sampling_attempts: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub k: usize,
    pub radius: f64,
    /// `max_j |u(x_j) − g(0)|` over the sample points.
    pub osc: f64,
    /// Standard error at the maximising point.
    pub stderr: f64,
    pub points_used: usize,
    pub argmax: Vec<f64>,
    pub mean_steps: f64,
    pub discarded: u64,
}

/// Measured `sup_{Ω∩B_{r_k}} |u − g(0)|` along a scale ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationProfile {
    pub entries: Vec<ProfileEntry>,
    /// Ladder indices where no interior point was found.
    pub skipped: Vec<usize>,
    pub data_value_at_x0: f64,
}

impl OscillationProfile {
    /// Builds a profile from `(r_k, osc_k, stderr_k)` triples with ladder index
    /// equal to position.
    pub fn from_triples(triples: &[(f64, f64, f64)], data_value_at_x0: f64) -> Self {
        let entries = triples
            .iter()
            .enumerate()
            .map(|(k, &(radius, osc, stderr))| ProfileEntry {
                k,
                radius,
                osc,
                stderr,
                points_used: 1,
                argmax: Vec::new(),
                mean_steps: 0.0,
                discarded: 0,
            })
            .collect();
        Self { entries, skipped: Vec::new(), data_value_at_x0 }
    }
}

fn validate(config: &ProfileConfig) -> Result<()> {
    if config.points_per_scale == 0 {
        return Err(Error::invalid("points_per_scale", "must be at least 1"));
    }
    if config.paths_per_point == 0 {
        return Err(Error::invalid("paths_per_point", "must be at least 1"));
    }
    if config.sampling_attempts == 0 {
        return Err(Error::invalid("sampling_attempts", "must be at least 1"));
    }
    match config.solver {
        SolverSpec::Classical { shell_epsilon, .. } => ensure_positive("shell_epsilon", shell_epsilon),
        SolverSpec::Fractional { s, .. } => ensure_open("s", s, 0.0, 2.0),
    }
}

/// Samples points of `Ω ∩ B(0, r_k)` at every scale and records the largest
/// deviation of the estimated solution from `g(0)`.
pub fn oscillation_profile<D, G, F>(
    domain: &D,
    g: &G,
    f: &F,
    seq: &QuasiGeometricSequence,
    config: &ProfileConfig,
) -> Result<OscillationProfile>
where
    D: DomainOracle + ?Sized,
    G: BoundaryData + ?Sized,
    F: SourceTerm + ?Sized,
{
    validate(config)?;
    if matches!(config.solver, SolverSpec::Fractional { .. }) && f.sup_bound() > 0.0 {
        return Err(Error::invalid("f", "the fractional solver supports only f ≡ 0"));
    }
    let n = domain.dim();
    let g0 = g.evaluate(&vec![0.0; n]);
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (k, &r) in seq.radii().iter().enumerate() {
        let point_seed = derive_seed(config.seed, &[TAG_POINTS, k as u64]);
        let mut best: Option<ProfileEntry> = None;
        let mut points_used = 0;
        for j in 0..config.points_per_scale {
            let mut rng = stream(point_seed, j as u64);
            let mut x = vec![0.0; n];
            let found = (0..config.sampling_attempts).any(|_| {
                sample_in_ball(&mut rng, r, &mut x);
                domain.contains(&x)
            });
            if !found {
                continue;
            }
            points_used += 1;
            let seed = derive_seed(config.seed, &[TAG_PATHS, k as u64, j as u64]);
            let est = match config.solver {
                SolverSpec::Classical { shell_epsilon, relative_epsilon, max_steps } => {
                    let eps = if relative_epsilon { shell_epsilon * r } else { shell_epsilon };
                    let cfg = WosConfig { shell_epsilon: eps, paths: config.paths_per_point, seed, max_steps };
                    wos_estimate(domain, g, f, &x, &cfg)?
                }
                SolverSpec::Fractional { s, max_steps } => {
                    let cfg = WobConfig { paths: config.paths_per_point, seed, max_steps };
                    wob_fractional_estimate(domain, g, &x, s, &cfg)?
                }
            };
            let osc = (est.mean - g0).abs();
            let better = best.as_ref().is_none_or(|b| osc > b.osc);
            let discarded = best.as_ref().map_or(0, |b| b.discarded) + est.discarded;
            if better {
                best = Some(ProfileEntry {
                    k,
                    radius: r,
                    osc,
                    stderr: est.stderr,
                    points_used: 0,
                    argmax: x,
                    mean_steps: est.mean_steps,
                    discarded,
                });
            } else if let Some(b) = best.as_mut() {
                b.discarded = discarded;
            }
        }
        match best {
            Some(mut entry) => {
                entry.points_used = points_used;
                entries.push(entry);
            }
            None => skipped.push(k),
        }
    }
    Ok(OscillationProfile { entries, skipped, data_value_at_x0: g0 })
}

/// Weighted log-log fit `osc ≈ c·r^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderFit {
    pub alpha: f64,
    pub c: f64,
    pub r_squared: f64,
    pub scales_used: usize,
}

/// Least squares of `ln osc` on `ln r` over scales with positive oscillation,
/// weighted by `min((osc/stderr)², WEIGHT_CAP)`.
pub fn fit_holder(profile: &OscillationProfile) -> Result<HolderFit> {
    let usable: Vec<&ProfileEntry> = profile.entries.iter().filter(|e| e.osc > 0.0).collect();
    if usable.is_empty() {
        return Err(Error::DegenerateProfile("oscillation is exactly zero at every scale".into()));
    }
    if usable.len() < 3 {
        return Err(Error::DegenerateProfile(format!(
            "{} scales with positive oscillation, need at least 3",
            usable.len()
        )));
    }
    let points: Vec<(f64, f64, f64)> = usable
        .iter()
        .map(|e| {
            let w = if e.stderr > 0.0 { ((e.osc / e.stderr).powi(2)).min(WEIGHT_CAP) } else { WEIGHT_CAP };
            (e.radius.ln(), e.osc.ln(), w)
        })
        .collect();
    let sw: f64 = points.iter().map(|p| p.2).sum();
    let mx = points.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = points.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = points.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateProfile("radii do not vary".into()));
    }
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let ss_res: f64 = points.iter().map(|p| p.2 * (p.1 - intercept - alpha * p.0).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|p| p.2 * (p.1 - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(HolderFit { alpha, c: intercept.exp(), r_squared, scales_used: points.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleCheck {
    pub k: usize,
    pub radius: f64,
    pub osc: f64,
    pub stderr: f64,
    /// `Ĉ·M·r_k^β + slack·stderr`.
    pub power_bound: f64,
    /// `(1−μ)^k·M + slack·stderr`.
    pub geometric_bound: f64,
    pub power_pass: bool,
    pub geometric_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    pub budget: ExponentBudget,
    pub slack_sigmas: f64,
    pub fitted_alpha: Option<f64>,
    #[serde(rename = "fitted_C")]
    pub fitted_c: Option<f64>,
    pub r_squared: Option<f64>,
    pub scales: Vec<ScaleCheck>,
    pub per_scale_pass: Vec<bool>,
    pub skipped: Vec<usize>,
    pub verdict: Verdict,
}

/// Checks every measured scale against both the power bound `Ĉ M r_k^β` and
/// the geometric bound `(1−μ)^k M`; the verdict passes iff every scale does.
pub fn certify_decay(profile: &OscillationProfile, budget: &ExponentBudget, slack_sigmas: f64) -> RegularityCertificate {
    let fit = fit_holder(profile).ok();
    let scales: Vec<ScaleCheck> = profile
        .entries
        .iter()
        .map(|e| {
            let slack = slack_sigmas * e.stderr;
            let power_bound = budget.c_hat * budget.m * e.radius.powf(budget.beta) + slack;
            let geometric_bound = (1.0 - budget.mu).powi(e.k as i32) * budget.m + slack;
            ScaleCheck {
                k: e.k,
                radius: e.radius,
                osc: e.osc,
                stderr: e.stderr,
                power_bound,
                geometric_bound,
                power_pass: e.osc <= power_bound * (1.0 + BOUND_RTOL),
                geometric_pass: e.osc <= geometric_bound * (1.0 + BOUND_RTOL),
            }
        })
        .collect();
    let per_scale_pass: Vec<bool> = scales.iter().map(|s| s.power_pass && s.geometric_pass).collect();
    let verdict = if per_scale_pass.iter().all(|&p| p) { Verdict::Pass } else { Verdict::Fail };
    RegularityCertificate {
        budget: budget.clone(),
        slack_sigmas,
        fitted_alpha: fit.map(|f| f.alpha),
        fitted_c: fit.map(|f| f.c),
        r_squared: fit.map(|f| f.r_squared),
        scales,
        per_scale_pass,
        skipped: profile.skipped.clone(),
        verdict,
    }
}

//! Monte Carlo estimators for the geometric richness of `Ω^c` near the origin.
//!
//! Sphere and annulus samples are drawn from streams keyed by
//! `(seed, sample_index)`, so estimates are reproducible and do not depend on
//! the size of the rayon pool.

use std::f64::consts::PI;

use serde::Serialize;

use super::{DomainOracle, QuasiGeometricSequence};
use crate::error::{ensure_open, ensure_positive, Error, Result};
use crate::rng::{derive_seed, stream};
use crate::sphere::{
    chord_to_angle, sample_direction, sample_in_annulus, sample_orthogonal, unit_ball_volume,
    unit_sphere_area,
};
use crate::stats::{reduce_paths, PathOutcome};

const TAG_H2_GRID: u64 = 0x4832_4752;
const TAG_H2_TEST: u64 = 0x4832_5453;
const TAG_H4: u64 = 0x4834;

/// Sphere-measure estimate `H^{n-1}(∂B_r ∩ Ω^c) / r^{n-1}`, also expressed as
/// a fraction of the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereMeasure {
    pub measure: f64,
    pub measure_stderr: f64,
    pub fraction: f64,
    pub fraction_stderr: f64,
    pub samples: u64,
}

/// Volume estimate `|(B_{r_k} ∖ B_{r_{k+1}}) ∩ Ω^c| / r_k^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusMeasure {
    pub measure: f64,
    pub stderr: f64,
    pub fraction: f64,
    pub samples: u64,
}

/// A spherical cap `∂B(0,r_k) ∩ B(y_k, ν r_k)` found inside `Ω^c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H2Witness {
    pub scale_index: usize,
    pub radius: f64,
    /// Unit direction `y_k / r_k` of the cap center.
    pub center: Vec<f64>,
    /// The `ν` of the contained cap.
    pub angular_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum H2Outcome {
    Witness(H2Witness),
    /// No grid direction passed; `best_coverage` is the largest fraction of
    /// cap test points found in `Ω^c` by any direction.
    Failure {
        scale_index: usize,
        radius: f64,
        best_coverage: f64,
    },
}

impl H2Outcome {
    pub fn witness(&self) -> Option<&H2Witness> {
        match self {
            H2Outcome::Witness(w) => Some(w),
            H2Outcome::Failure { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H4Term {
    pub scale_index: usize,
    pub radius: f64,
    pub term: SphereMeasure,
    pub partial_sum: f64,
    pub partial_sum_stderr: f64,
}

fn validate_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        Err(Error::invalid("samples", "must be at least 1"))
    } else {
        Ok(())
    }
}

/// Estimates the (H1) quantity at radius `r` from uniform sphere samples.
pub fn h1_fraction<D: DomainOracle + ?Sized>(domain: &D, r: f64, samples: u64, seed: u64) -> Result<SphereMeasure> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::invalid("r", format!("{r} is outside (0, 1]")));
    }
    validate_samples(samples)?;
    let n = domain.dim();
    let summary = reduce_paths(samples, |i| {
        let mut rng = stream(seed, i);
        let mut p = vec![0.0; n];
        sample_direction(&mut rng, &mut p);
        p.iter_mut().for_each(|v| *v *= r);
        let outside = !domain.contains(&p);
        PathOutcome::Scored {
            value: if outside { 1.0 } else { 0.0 },
            steps: 0,
        }
    });
    let area = unit_sphere_area(n);
    let fraction = summary.values.mean();
    let fraction_stderr = summary.values.stderr();
    Ok(SphereMeasure {
        measure: fraction * area,
        measure_stderr: fraction_stderr * area,
        fraction,
        fraction_stderr,
        samples,
    })
}

/// Estimates the (H3) quantity for the annulus between `r_k1 < r_k`.
pub fn h3_fraction<D: DomainOracle + ?Sized>(
    domain: &D,
    r_k: f64,
    r_k1: f64,
    samples: u64,
    seed: u64,
) -> Result<AnnulusMeasure> {
    ensure_positive("r_k1", r_k1)?;
    if r_k1 >= r_k {
        return Err(Error::invalid("r_k1", format!("{r_k1} must be smaller than r_k = {r_k}")));
    }
    validate_samples(samples)?;
    let n = domain.dim();
    let summary = reduce_paths(samples, |i| {
        let mut rng = stream(seed, i);
        let mut p = vec![0.0; n];
        sample_in_annulus(&mut rng, r_k1, r_k, &mut p);
        PathOutcome::Scored {
            value: if domain.contains(&p) { 0.0 } else { 1.0 },
            steps: 0,
        }
    });
    let volume = unit_ball_volume(n) * (1.0 - (r_k1 / r_k).powi(n as i32));
    Ok(AnnulusMeasure {
        measure: summary.values.mean() * volume,
        stderr: summary.values.stderr() * volume,
        fraction: summary.values.mean(),
        samples,
    })
}

/// Quasi-uniform directions on `S^{n-1}`: the two points for `n = 1`, equal
/// angles for `n = 2`, a Fibonacci lattice for `n = 3`, seeded isotropic
/// samples above.
fn direction_grid(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    match n {
        1 => vec![vec![-1.0], vec![1.0]],
        2 => (0..count)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![z, rho * t.cos(), rho * t.sin()]
                })
                .collect()
        }
        _ => (0..count)
            .map(|i| {
                let mut rng = stream(derive_seed(seed, &[TAG_H2_GRID]), i as u64);
                let mut d = vec![0.0; n];
                sample_direction(&mut rng, &mut d);
                d
            })
            .collect(),
    }
}

const CAP_RINGS: usize = 6;
const CAP_AZIMUTHS: usize = 12;

/// Fraction of the cap test points around `center` that lie in `Ω^c`. Test
/// points sit on rings of the cap along a few azimuths.
fn cap_coverage<D: DomainOracle + ?Sized>(
    domain: &D,
    r: f64,
    center: &[f64],
    half_angle: f64,
    test_seed: u64,
) -> f64 {
    let n = center.len();
    let mut total = 0usize;
    let mut outside = 0usize;
    let mut p = vec![0.0; n];
    let mut probe = |p: &[f64]| {
        total += 1;
        if !domain.contains(p) {
            outside += 1;
        }
    };
    center.iter().zip(p.iter_mut()).for_each(|(c, v)| *v = r * c);
    probe(&p);
    if n > 1 {
        let mut rng = stream(test_seed, 0);
        let mut w = vec![0.0; n];
        for a in 0..CAP_AZIMUTHS {
            if n == 2 {
                // the only orthogonal directions are ±e⊥
                let s = if a % 2 == 0 { 1.0 } else { -1.0 };
                w[0] = -s * center[1];
                w[1] = s * center[0];
            } else {
                sample_orthogonal(&mut rng, center, &mut w);
            }
            for ring in 1..=CAP_RINGS {
                let b = half_angle * ring as f64 / CAP_RINGS as f64;
                for ((v, c), o) in p.iter_mut().zip(center).zip(&w) {
                    *v = r * (b.cos() * c + b.sin() * o);
                }
                probe(&p);
            }
            if n == 2 && a == 1 {
                break;
            }
        }
    }
    outside as f64 / total as f64
}

/// Grid search for (H2) witnesses at each scale of `seq`.
///
/// A direction is accepted when every test point in its cap of Euclidean
/// radius `nu·r_k` lies in `Ω^c`, so a witness certifies the condition only up
/// to the angular resolution of `angular_grid` directions.
pub fn check_h2<D: DomainOracle + ?Sized>(
    domain: &D,
    seq: &QuasiGeometricSequence,
    nu: f64,
    angular_grid: usize,
    seed: u64,
) -> Result<Vec<H2Outcome>> {
    ensure_open("nu", nu, 0.0, 1.0)?;
    if angular_grid == 0 {
        return Err(Error::invalid("angular_grid", "must be at least 1"));
    }
    let n = domain.dim();
    let half_angle = chord_to_angle(nu);
    let grid = direction_grid(n, angular_grid, seed);
    Ok(seq
        .radii()
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let mut best = 0.0f64;
            for (j, dir) in grid.iter().enumerate() {
                let coverage = cap_coverage(
                    domain,
                    r,
                    dir,
                    half_angle,
                    derive_seed(seed, &[TAG_H2_TEST, k as u64, j as u64]),
                );
                if coverage == 1.0 {
                    return H2Outcome::Witness(H2Witness {
                        scale_index: k,
                        radius: r,
                        center: dir.clone(),
                        angular_radius: nu,
                    });
                }
                best = best.max(coverage);
            }
            H2Outcome::Failure {
                scale_index: k,
                radius: r,
                best_coverage: best,
            }
        })
        .collect())
}

/// Running sums of the (H1) quantity over the scales of `seq`, with the
/// standard errors of independent terms added in quadrature.
pub fn h4_partial_sums<D: DomainOracle + ?Sized>(
    domain: &D,
    seq: &QuasiGeometricSequence,
    samples: u64,
    seed: u64,
) -> Result<Vec<H4Term>> {
    let mut sum = 0.0;
    let mut var = 0.0;
    seq.radii()
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let term = h1_fraction(domain, r, samples, derive_seed(seed, &[TAG_H4, k as u64]))?;
            sum += term.measure;
            var += term.measure_stderr * term.measure_stderr;
            Ok(H4Term {
                scale_index: k,
                radius: r,
                term,
                partial_sum: sum,
                partial_sum_stderr: var.sqrt(),
            })
        })
        .collect()
}

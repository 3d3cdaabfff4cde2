use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::poisson::{cap_harmonic_measure, Cap};
use crate::error::{ensure_open, ensure_positive, Error, Result};
use crate::sphere::{chord_to_angle, unit_sphere_area};

const GRID_POINTS: usize = 33;
const GOLDEN_ITERATIONS: usize = 60;

/// Location and value of the minimal cap harmonic measure on `|x| = τ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapMinimum {
    pub mu: f64,
    /// Angle between the minimising `x` and the cap axis.
    pub angle: f64,
}

/// Minimum over `|x| = tau2` of the harmonic measure in `B₁` of the cap of
/// polar half-angle `half_angle`. The measure depends on `x` only through its
/// angle to the axis, so this is a one-dimensional search: a uniform grid
/// brackets the minimum and golden-section search refines it.
pub fn mu_for_cap_angle(half_angle: f64, tau2: f64, n: usize) -> Result<CapMinimum> {
    ensure_open("tau2", tau2, 0.0, 1.0)?;
    if n == 0 {
        return Err(Error::invalid("n", "dimension must be at least 1"));
    }
    let mut axis = vec![0.0; n];
    axis[0] = 1.0;
    let cap = Cap::new(axis, half_angle)?;
    let at = |psi: f64| -> Result<f64> {
        let mut x = vec![0.0; n];
        if n == 1 {
            x[0] = tau2 * psi.cos().signum();
        } else {
            x[0] = tau2 * psi.cos();
            x[1] = tau2 * psi.sin();
        }
        cap_harmonic_measure(&x, &cap, 1.0)
    };
    if n == 1 {
        let (a, b) = (at(0.0)?, at(PI)?);
        return Ok(if a <= b { CapMinimum { mu: a, angle: 0.0 } } else { CapMinimum { mu: b, angle: PI } });
    }

    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| PI * i as f64 / (GRID_POINTS - 1) as f64).collect();
    let values = grid.iter().map(|&p| at(p)).collect::<Result<Vec<_>>>()?;
    let (best, &best_value) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::OptimizationFailed("empty grid".into()))?;
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(GRID_POINTS - 1)];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (at(c)?, at(d)?);
    for _ in 0..GOLDEN_ITERATIONS {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = at(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = at(d)?;
        }
    }
    let candidates = [(best_value, grid[best]), (fc, c), (fd, d)];
    let (mu, angle) = candidates
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("nonempty");
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(Error::OptimizationFailed(format!("minimum {mu} is not a probability")));
    }
    Ok(CapMinimum { mu, angle })
}

/// `μ` for a cap of Euclidean radius `ν/2` on the unit sphere, evaluated on
/// `|x| = τ₂`.
pub fn mu_cap(nu: f64, tau2: f64, n: usize) -> Result<f64> {
    ensure_open("nu", nu, 0.0, 1.0)?;
    Ok(mu_for_cap_angle(chord_to_angle(nu / 2.0), tau2, n)?.mu)
}

/// Set-independent lower bound on the harmonic measure, over `B_{τ₂}`, of any
/// subset of `∂B₁` with surface measure `nu`: the kernel is at least
/// `(1−τ₂)/(nω_n (1+τ₂)^{n−1})` there.
pub fn mu_h1_lower(nu: f64, tau2: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "dimension must be at least 1"));
    }
    let area = unit_sphere_area(n);
    if !(nu > 0.0 && nu <= area * (1.0 + 1e-12)) {
        return Err(Error::invalid("nu", format!("{nu} is outside (0, nω_n = {area}]")));
    }
    ensure_open("tau2", tau2, 0.0, 1.0)?;
    Ok(nu * (1.0 - tau2) / (area * (1.0 + tau2).powi(n as i32 - 1)))
}

/// The exponent with `1 − μ = τ₁^α`.
pub fn alpha_of(mu: f64, tau1: f64) -> Result<f64> {
    ensure_open("mu", mu, 0.0, 1.0)?;
    ensure_open("tau1", tau1, 0.0, 1.0)?;
    Ok((-mu).ln_1p() / tau1.ln())
}

/// Certified exponent and constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaserResult {
    pub beta: f64,
    pub c_hat: f64,
}

/// Left side of `(1−μ)/τ₁^β + (μ + C_aux)/(Ĉ τ₁^β) ≤ 1`.
pub fn chaser_lhs(mu: f64, tau1: f64, c_aux: f64, beta: f64, c_hat: f64) -> f64 {
    let t = tau1.powf(beta);
    (1.0 - mu) / t + (mu + c_aux) / (c_hat * t)
}

/// Picks `β = min(alpha_cap, α(μ, τ₁))/2` and the smallest `Ĉ ≥ 1` solving the
/// rearranged inequality, then raises `Ĉ` by relative steps of a few ulps
/// until the inequality holds in floating point.
pub fn constant_chaser(mu: f64, tau1: f64, c_aux: f64, alpha_cap: f64) -> Result<ChaserResult> {
    if !(alpha_cap > 0.0) {
        return Err(Error::Infeasible(format!("exponent cap {alpha_cap} is not positive")));
    }
    if !(c_aux >= 0.0 && c_aux.is_finite()) {
        return Err(Error::invalid("c_aux", format!("{c_aux} must be nonnegative and finite")));
    }
    let alpha = alpha_of(mu, tau1)?;
    let beta = alpha_cap.min(alpha) / 2.0;
    let gap = tau1.powf(beta) - (1.0 - mu);
    if !(gap > 0.0) {
        return Err(Error::Infeasible(format!("τ₁^β − (1−μ) = {gap} is not positive")));
    }
    let mut c_hat = ((mu + c_aux) / gap).max(1.0);
    let mut tries = 0;
    while chaser_lhs(mu, tau1, c_aux, beta, c_hat) > 1.0 {
        c_hat *= 1.0 + 4.0 * f64::EPSILON;
        tries += 1;
        if tries > 1000 {
            return Err(Error::Infeasible(format!("no constant found for β = {beta}")));
        }
    }
    Ok(ChaserResult { beta, c_hat })
}

/// Where `μ` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuSource {
    /// Minimal harmonic measure of the `ν/2` cap; `nu` is a chord ratio.
    Cap,
    /// Measure-only lower bound; `nu` is a surface measure.
    Measure,
}

/// Inputs for [`ExponentBudget::derive`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetInputs {
    pub n: usize,
    pub nu: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub source: MuSource,
    /// Hölder exponent of the boundary data.
    pub alpha: f64,
    /// Integrability of the source term; `None` means `p = ∞`.
    pub p: Option<f64>,
    /// Fractional order; `None` selects the classical Laplacian.
    pub s: Option<f64>,
    pub c_aux: f64,
    pub m: f64,
}

/// The full chain `ν → μ → (decay exponent, β, Ĉ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentBudget {
    pub n: usize,
    pub nu: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub source: MuSource,
    pub mu: f64,
    /// `ln(1−μ)/ln τ₁`.
    pub decay_exponent: f64,
    pub alpha: f64,
    /// `min(order − n/p, alpha)`.
    pub alpha_cap: f64,
    pub beta: f64,
    pub c_hat: f64,
    pub c_aux: f64,
    pub m: f64,
    pub p: Option<f64>,
    pub s: Option<f64>,
}

impl ExponentBudget {
    pub fn derive(inputs: &BudgetInputs) -> Result<Self> {
        let n = inputs.n;
        let order = match inputs.s {
            Some(s) => {
                ensure_open("s", s, 0.0, 2.0)?;
                s
            }
            None => 2.0,
        };
        let integrability = match inputs.p {
            Some(p) => {
                ensure_positive("p", p)?;
                n as f64 / p
            }
            None => 0.0,
        };
        ensure_positive("alpha", inputs.alpha)?;
        if !(inputs.m >= 0.0 && inputs.m.is_finite()) {
            return Err(Error::invalid("m", format!("{} must be nonnegative and finite", inputs.m)));
        }
        let alpha_cap = (order - integrability).min(inputs.alpha);
        if !(alpha_cap > 0.0) {
            return Err(Error::Infeasible(format!(
                "order {order} − n/p = {} leaves no positive exponent",
                order - integrability
            )));
        }
        ensure_open("tau1", inputs.tau1, 0.0, 1.0)?;
        let mu = match inputs.source {
            MuSource::Cap => mu_cap(inputs.nu, inputs.tau2, n)?,
            MuSource::Measure => mu_h1_lower(inputs.nu, inputs.tau2, n)?,
        };
        let mu = mu.min(1.0 - f64::EPSILON);
        let decay_exponent = alpha_of(mu, inputs.tau1)?;
        let ChaserResult { beta, c_hat } = constant_chaser(mu, inputs.tau1, inputs.c_aux, alpha_cap)?;
        Ok(Self {
            n,
            nu: inputs.nu,
            tau1: inputs.tau1,
            tau2: inputs.tau2,
            source: inputs.source,
            mu,
            decay_exponent,
            alpha: inputs.alpha,
            alpha_cap,
            beta,
            c_hat,
            c_aux: inputs.c_aux,
            m: inputs.m,
            p: inputs.p,
            s: inputs.s,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Harmonic measure of the arc `{e^{iφ} : a < φ < b}` at `z` in the unit
    /// disc, from the argument of a Möbius-type ratio.
    fn planar_arc_measure(z: (f64, f64), a: f64, b: f64) -> f64 {
        let arg = |phi: f64| {
            let (s, c) = phi.sin_cos();
            (s - z.1).atan2(c - z.0)
        };
        let mut turn = arg(b) - arg(a);
        while turn < 0.0 {
            turn += 2.0 * PI;
        }
        turn / PI - (b - a) / (2.0 * PI)
    }

    #[test]
    fn planar_half_circle_minimum_matches_closed_form() {
        let found = mu_for_cap_angle(PI / 2.0, 0.5, 2).unwrap();
        let oracle = (0..=20000)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 20000.0;
                planar_arc_measure((0.5 * t.cos(), 0.5 * t.sin()), -PI / 2.0, PI / 2.0)
            })
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(found.mu, oracle, epsilon = 1e-8);
        assert_abs_diff_eq!(found.angle, PI, epsilon = 1e-4);
    }

    #[test]
    fn planar_cap_measure_matches_closed_form_pointwise() {
        let cap = Cap::new(vec![1.0, 0.0], 0.7).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.3, 0.2), (-0.6, 0.1), (0.1, -0.85)] {
            let v = cap_harmonic_measure(&[x, y], &cap, 1.0).unwrap();
            assert_abs_diff_eq!(v, planar_arc_measure((x, y), -0.7, 0.7), epsilon = 1e-10);
        }
    }

    #[test]
    fn full_sphere_gives_unit_mu() {
        assert_abs_diff_eq!(mu_for_cap_angle(PI, 0.5, 3).unwrap().mu, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn mu_decreases_with_nu() {
        let mus: Vec<f64> = [0.4, 0.2, 0.1].iter().map(|&nu| mu_cap(nu, 0.5, 3).unwrap()).collect();
        assert!(mus[0] > mus[1] && mus[1] > mus[2] && mus[2] > 0.0, "{mus:?}");
    }

    #[test]
    fn h1_lower_bound_examples() {
        let area = unit_sphere_area(3);
        assert_abs_diff_eq!(mu_h1_lower(area / 2.0, 0.5, 3).unwrap(), 1.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mu_h1_lower(area, 1e-12, 3).unwrap(), 1.0, epsilon = 1e-9);
        assert!(mu_h1_lower(area * 1.1, 0.5, 3).is_err());
    }

    #[test]
    fn h1_lower_bound_is_below_cap_minimum() {
        for n in [2, 3, 4] {
            for &theta in &[0.2, 0.8, 1.6, 2.6] {
                for &tau2 in &[0.2, 0.5, 0.8] {
                    let measure = crate::sphere::cap_area_fraction(n, theta) * unit_sphere_area(n);
                    let lower = mu_h1_lower(measure, tau2, n).unwrap();
                    let exact = mu_for_cap_angle(theta, tau2, n).unwrap().mu;
                    assert!(lower <= exact + 1e-12, "n={n} θ={theta} τ₂={tau2}: {lower} > {exact}");
                }
            }
        }
    }

    #[test]
    fn alpha_examples() {
        assert_abs_diff_eq!(alpha_of(0.5, 0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(alpha_of(0.75, 0.5).unwrap(), 2.0, epsilon = 1e-15);
        assert!(alpha_of(1e-12, 0.5).unwrap() < 1e-11);
    }

    #[test]
    fn chaser_example() {
        let r = constant_chaser(0.5, 0.5, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(r.beta, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.c_hat, 0.5 / (0.5f64.sqrt() - 0.5), epsilon = 1e-12);
        assert!(chaser_lhs(0.5, 0.5, 0.0, r.beta, r.c_hat) <= 1.0);
        assert!(matches!(constant_chaser(0.5, 0.5, 0.0, 0.0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn chaser_near_unit_mu_stays_finite() {
        let r = constant_chaser(1.0 - 1e-9, 0.25, 0.0, 0.8).unwrap();
        assert_abs_diff_eq!(r.beta, 0.4, epsilon = 1e-15);
        assert!(r.c_hat.is_finite() && r.c_hat >= 1.0);
    }

    #[test]
    fn budget_for_fractional_case() {
        let inputs = BudgetInputs {
            n: 2,
            nu: 0.3,
            tau1: 0.25,
            tau2: 0.5,
            source: MuSource::Cap,
            alpha: 1.0,
            p: Some(4.0),
            s: Some(1.0),
            c_aux: 0.0,
            m: 1.0,
        };
        let b = ExponentBudget::derive(&inputs).unwrap();
        assert_abs_diff_eq!(b.alpha_cap, 0.5, epsilon = 1e-15);
        assert!(b.beta > 0.0 && b.beta <= b.alpha_cap.min(b.decay_exponent));
        let infeasible = BudgetInputs { p: Some(2.0), ..inputs };
        assert!(matches!(ExponentBudget::derive(&infeasible), Err(Error::Infeasible(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn alpha_inverts_decay(mu in 1e-6f64..0.999, tau1 in 0.01f64..0.99) {
            let a = alpha_of(mu, tau1).unwrap();
            prop_assert!(a > 0.0);
            prop_assert!((tau1.powf(a) - (1.0 - mu)).abs() <= 8.0 * f64::EPSILON);
        }

        #[test]
        fn chaser_output_satisfies_inequality(
            mu in 1e-6f64..0.999,
            tau1 in 0.01f64..0.99,
            c_aux in 0.0f64..50.0,
            cap in 1e-3f64..3.0,
        ) {
            let r = constant_chaser(mu, tau1, c_aux, cap).unwrap();
            prop_assert!(r.beta > 0.0 && r.beta <= cap.min(alpha_of(mu, tau1).unwrap()));
            prop_assert!(r.c_hat >= 1.0);
            prop_assert!(chaser_lhs(mu, tau1, c_aux, r.beta, r.c_hat) <= 1.0);
        }
    }
}

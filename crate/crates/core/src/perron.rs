//! The modulus-of-continuity recursion
//! `A_k = max(ω_g(r_k), (1 − c₀ a_{k−1}/2) A_{k−1})` and the equivalence
//! `Σ a_k = ∞ ⟺ Π (1 − c₀ a_k) = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_open, Error, Result};
use crate::geometry::H4Term;
use crate::sphere::unit_sphere_area;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusInput {
    /// `a_k`, the normalised sphere measure of `Ω^c` at scale `r_k`.
    pub a: Vec<f64>,
    /// `ω_g(r_k)`, nonincreasing.
    pub omega_vals: Vec<f64>,
    pub c0: f64,
    /// `‖g‖_∞`.
    pub a0: f64,
}

impl ModulusInput {
    fn validate(&self, k_max: usize) -> Result<()> {
        ensure_open("c0", self.c0, 0.0, 1.0)?;
        if !(self.a0 > 0.0 && self.a0.is_finite()) {
            return Err(Error::invalid("a0", format!("{} must be positive and finite", self.a0)));
        }
        if self.a.len() < k_max {
            return Err(Error::invalid("a", format!("has {} terms, need {k_max}", self.a.len())));
        }
        if self.omega_vals.len() < k_max + 1 {
            return Err(Error::invalid("omega_vals", format!("has {} terms, need {}", self.omega_vals.len(), k_max + 1)));
        }
        if let Some(k) = self.a.iter().position(|&v| !(v >= 0.0 && v.is_finite())) {
            return Err(Error::invalid("a", format!("term {k} is not a nonnegative number")));
        }
        if let Some(k) = self.omega_vals.iter().position(|&v| !(v >= 0.0 && v.is_finite())) {
            return Err(Error::invalid("omega_vals", format!("term {k} is not a nonnegative number")));
        }
        if let Some(k) = self.omega_vals.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::invalid("omega_vals", format!("increases at term {}", k + 1)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusOutput {
    /// `A_0, …, A_K`.
    pub values: Vec<f64>,
    /// `k` such that `1 − c₀ a_{k−1}/2` was negative and clamped to 0.
    pub clamped: Vec<usize>,
}

/// Evaluates `A_0 = a0`, `A_k = max(ω_k, max(0, 1 − c₀ a_{k−1}/2)·A_{k−1})`.
pub fn modulus_recursion(input: &ModulusInput, k_max: usize) -> Result<ModulusOutput> {
    input.validate(k_max)?;
    let mut values = Vec::with_capacity(k_max + 1);
    let mut clamped = Vec::new();
    values.push(input.a0);
    for k in 1..=k_max {
        let raw = 1.0 - input.c0 * input.a[k - 1] / 2.0;
        let factor = if raw <= 0.0 {
            clamped.push(k);
            0.0
        } else {
            raw
        };
        values.push(input.omega_vals[k].max(factor * values[k - 1]));
    }
    Ok(ModulusOutput { values, clamped })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumProduct {
    /// `Σ_{i≤k} a_i`.
    pub partial_sums: Vec<f64>,
    /// `Π_{i≤k} (1 − c₀ a_i)`, accumulated as a sum of logarithms.
    pub partial_products: Vec<f64>,
}

impl SumProduct {
    pub fn sum(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    pub fn product(&self) -> f64 {
        self.partial_products.last().copied().unwrap_or(1.0)
    }
}

/// Partial sums and products over `k = 0..=k_max`.
pub fn sum_product_check(a: &[f64], c0: f64, k_max: usize) -> Result<SumProduct> {
    ensure_open("c0", c0, 0.0, 1.0)?;
    if a.len() < k_max + 1 {
        return Err(Error::invalid("a", format!("has {} terms, need {}", a.len(), k_max + 1)));
    }
    let mut sum = 0.0;
    let mut log_product = 0.0;
    let mut partial_sums = Vec::with_capacity(k_max + 1);
    let mut partial_products = Vec::with_capacity(k_max + 1);
    for (k, &v) in a.iter().take(k_max + 1).enumerate() {
        let x = c0 * v;
        if !(v >= 0.0 && x < 1.0) {
            return Err(Error::invalid("a", format!("term {k} gives c0·a_k = {x} outside [0, 1)")));
        }
        sum += v;
        log_product += (-x).ln_1p();
        partial_sums.push(sum);
        partial_products.push(log_product.exp());
    }
    Ok(SumProduct { partial_sums, partial_products })
}

/// The choice `c₀ = (1−τ₂)/(nω_n(1+τ₂)^{n−1})`, the pointwise lower bound of
/// the Poisson kernel on `B_{τ₂}`.
pub fn c0_from_kernel_bound(tau2: f64, n: usize) -> Result<f64> {
    ensure_open("tau2", tau2, 0.0, 1.0)?;
    if n == 0 {
        return Err(Error::invalid("n", "dimension must be at least 1"));
    }
    Ok((1.0 - tau2) / (unit_sphere_area(n) * (1.0 + tau2).powi(n as i32 - 1)))
}

/// `a_k` read off the terms of the divergent-sum estimator.
pub fn a_from_h4(terms: &[H4Term]) -> Vec<f64> {
    terms.iter().map(|t| t.term.measure).collect()
}

/// Named `a_k` sequences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceFamily {
    /// `scale/(k+1)`.
    Harmonic { scale: f64 },
    /// `scale·ratio^k`.
    Geometric { scale: f64, ratio: f64 },
    Constant { value: f64 },
}

impl SequenceFamily {
    pub fn terms(&self, count: usize) -> Vec<f64> {
        (0..count)
            .map(|k| match *self {
                SequenceFamily::Harmonic { scale } => scale / (k as f64 + 1.0),
                SequenceFamily::Geometric { scale, ratio } => scale * ratio.powi(k as i32),
                SequenceFamily::Constant { value } => value,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// `A_k = max(A₀ Π_{i<k} f_i, max_{1≤j≤k} ω_j Π_{j≤i<k} f_i)`,
    /// evaluated term by term.
    fn closed_form(input: &ModulusInput, k_max: usize) -> Vec<f64> {
        let f = |i: usize| (1.0 - input.c0 * input.a[i] / 2.0).max(0.0);
        (0..=k_max)
            .map(|k| {
                let mut best = input.a0 * (0..k).map(f).product::<f64>();
                for j in 1..=k {
                    best = best.max(input.omega_vals[j] * (j..k).map(f).product::<f64>());
                }
                best
            })
            .collect()
    }

    fn harmonic_input(k_max: usize) -> ModulusInput {
        ModulusInput {
            a: SequenceFamily::Harmonic { scale: 1.0 }.terms(k_max + 1),
            omega_vals: (0..=k_max).map(|k| 0.5f64.powi(k as i32).sqrt()).collect(),
            c0: 0.5,
            a0: 1.0,
        }
    }

    #[test]
    fn pure_product_and_no_decay() {
        let input = ModulusInput { a: vec![0.4; 10], omega_vals: vec![0.0; 11], c0: 0.5, a0: 1.0 };
        let out = modulus_recursion(&input, 10).unwrap();
        for (k, v) in out.values.iter().enumerate() {
            assert_abs_diff_eq!(*v, 0.9f64.powi(k as i32), epsilon = 1e-15);
        }
        let input = ModulusInput { a: vec![0.0; 10], omega_vals: vec![0.0; 11], c0: 0.5, a0: 2.0 };
        assert!(modulus_recursion(&input, 10).unwrap().values.iter().all(|&v| v == 2.0));
    }

    #[test]
    fn harmonic_sequence_decays() {
        let input = harmonic_input(200);
        let out = modulus_recursion(&input, 200).unwrap();
        let oracle = closed_form(&input, 200);
        for (a, b) in out.values.iter().zip(&oracle) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
        assert!(out.values.windows(2).all(|w| w[1] <= w[0]));
        // independent evaluation: Π_{i<200}(1 − 1/(4(i+1))) dominates ω_200 = 2^{−100}
        assert_abs_diff_eq!(out.values[200], 0.216_897_833_995_131_54, epsilon = 1e-12);
        assert!(out.clamped.is_empty());
    }

    #[test]
    fn harmonic_sequence_reaches_zero_slowly() {
        // A_k ~ k^{−1/4}: the level 0.05 is first reached at k = 70955
        let k_max = 71_000;
        let out = modulus_recursion(&harmonic_input(k_max), k_max).unwrap();
        let first = out.values.iter().position(|&v| v <= 0.05).unwrap();
        assert_eq!(first, 70_955);
    }

    #[test]
    fn clamping_is_flagged() {
        let input = ModulusInput { a: vec![0.1, 5.0, 0.1], omega_vals: vec![0.3, 0.2, 0.1, 0.0], c0: 0.9, a0: 1.0 };
        let out = modulus_recursion(&input, 3).unwrap();
        assert_eq!(out.clamped, vec![2]);
        assert_eq!(out.values[2], 0.1);
    }

    #[test]
    fn rejects_bad_input() {
        let mut input = harmonic_input(5);
        input.omega_vals[3] = 1.0;
        assert!(modulus_recursion(&input, 5).is_err());
        assert!(modulus_recursion(&harmonic_input(5), 7).is_err());
        assert!(sum_product_check(&[0.5, 2.5], 0.5, 1).is_err());
    }

    #[test]
    fn divergent_and_convergent_sums() {
        let k = 10_000;
        let harmonic = sum_product_check(&SequenceFamily::Harmonic { scale: 1.0 }.terms(k + 1), 0.5, k).unwrap();
        assert!((harmonic.sum() - ((k + 1) as f64).ln()).abs() < 1.0);
        assert!(harmonic.product() < 0.02);
        let geometric = sum_product_check(&SequenceFamily::Geometric { scale: 1.0, ratio: 0.5 }.terms(k + 1), 0.5, k).unwrap();
        assert_abs_diff_eq!(geometric.sum(), 2.0, epsilon = 1e-12);
        assert!(geometric.product() > 0.1);
    }

    #[test]
    fn log_product_matches_direct_product() {
        let a: Vec<f64> = (0..=100).map(|k| ((k * 37 % 101) as f64) / 120.0).collect();
        let sp = sum_product_check(&a, 0.7, 100).unwrap();
        let mut direct = 1.0;
        for (k, &v) in a.iter().enumerate() {
            direct *= 1.0 - 0.7 * v;
            assert_abs_diff_eq!(sp.partial_products[k], direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn kernel_bound_c0() {
        assert_abs_diff_eq!(c0_from_kernel_bound(0.5, 3).unwrap(), 0.5 / (4.0 * std::f64::consts::PI * 2.25), epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn recursion_matches_oracle_and_is_monotone(
            a in proptest::collection::vec(0.0f64..1.5, 30),
            bump in proptest::collection::vec(0.0f64..0.5, 30),
            omega_steps in proptest::collection::vec(0.0f64..0.2, 31),
            c0 in 0.05f64..0.95,
            a0 in 0.5f64..3.0,
        ) {
            let mut omega = Vec::with_capacity(31);
            let mut level = a0;
            for s in &omega_steps {
                level = (level - s).max(0.0);
                omega.push(level);
            }
            let input = ModulusInput { a: a.clone(), omega_vals: omega.clone(), c0, a0 };
            let out = modulus_recursion(&input, 30).unwrap();
            let oracle = closed_form(&input, 30);
            for (k, (x, y)) in out.values.iter().zip(&oracle).enumerate() {
                prop_assert!((x - y).abs() <= 1e-12);
                prop_assert!(*x >= omega[k] || k == 0);
            }
            prop_assert!(out.values.windows(2).all(|w| w[1] <= w[0]));

            let bigger: Vec<f64> = a.iter().zip(&bump).map(|(x, b)| x + b).collect();
            let out2 = modulus_recursion(&ModulusInput { a: bigger, omega_vals: omega, c0, a0 }, 30).unwrap();
            for (x, y) in out2.values.iter().zip(&out.values) {
                prop_assert!(x <= y);
            }
        }

        #[test]
        fn small_terms_follow_the_log_identity(a in proptest::collection::vec(0.0f64..0.01, 50), c0 in 0.05f64..0.95) {
            let sp = sum_product_check(&a, c0, 49).unwrap();
            let predicted = (-c0 * sp.sum()).exp();
            // ln(1−x) = −x + O(x²), summed over 50 terms with x ≤ 0.01
            prop_assert!((sp.product().ln() - predicted.ln()).abs() <= 50.0 * 1e-4);
        }
    }
}

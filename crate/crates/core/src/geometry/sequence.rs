use serde::{Deserialize, Serialize};

use crate::error::{ensure_open, Error, Result};

/// Radii `1 = r_0 > r_1 > …` with `τ₁ r_{k-1} ≤ r_k ≤ τ₂ r_{k-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiGeometricSequence {
    tau1: f64,
    tau2: f64,
    radii: Vec<f64>,
}

impl QuasiGeometricSequence {
    pub fn new(tau1: f64, tau2: f64, radii: Vec<f64>) -> Result<Self> {
        ensure_open("tau1", tau1, 0.0, 1.0)?;
        ensure_open("tau2", tau2, 0.0, 1.0)?;
        if tau1 >= tau2 {
            return Err(Error::invalid("tau1", format!("{tau1} must be smaller than tau2 = {tau2}")));
        }
        match radii.first() {
            Some(&r0) if r0 == 1.0 => {}
            _ => return Err(Error::invalid("radii", "the ladder must start at r_0 = 1")),
        }
        for (k, w) in radii.windows(2).enumerate() {
            let ratio = w[1] / w[0];
            // one ulp of slack so that τ^k built by repeated multiplication passes
            let slack = 4.0 * f64::EPSILON;
            if !(ratio >= tau1 * (1.0 - slack) && ratio <= tau2 * (1.0 + slack)) {
                return Err(Error::invalid(
                    "radii",
                    format!("r_{}/r_{} = {ratio} is outside [{tau1}, {tau2}]", k + 1, k),
                ));
            }
        }
        Ok(Self { tau1, tau2, radii })
    }

    /// The ladder `r_k = τ^k`, `k < max(count, 1)`, carrying `τ₁ = τ²` and
    /// `τ₂ = τ` (a geometric ladder is quasi-geometric for any wider bracket).
    pub fn geometric(tau: f64, count: usize) -> Result<Self> {
        ensure_open("tau", tau, 0.0, 1.0)?;
        let radii = (0..count.max(1) as i32).map(|k| tau.powi(k)).collect();
        Self::new(tau * tau, tau, radii)
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn tau2(&self) -> f64 {
        self.tau2
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

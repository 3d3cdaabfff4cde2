use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use statrs::function::gamma::gamma;

use crate::error::{ensure_open, ensure_positive, Error, Result};
use crate::sphere::{dist, norm, sample_direction};

/// Proposal budget of one rejection-sampled exit.
pub const MAX_REJECTIONS: usize = 1_000_000;

/// Exit density of the isotropic `s`-stable process from `B(0, r)` started at
/// `x`, evaluated at `|y| > r`.
pub fn fractional_poisson_kernel(x: &[f64], y: &[f64], r: f64, s: f64) -> Result<f64> {
    ensure_positive("r", r)?;
    ensure_open("s", s, 0.0, 2.0)?;
    if x.len() != y.len() {
        return Err(Error::invalid("y", "dimension differs from x"));
    }
    let n = x.len() as f64;
    let rx = norm(x);
    if rx >= r {
        return Err(Error::invalid("x", format!("|x| = {rx} is not inside B(0, {r})")));
    }
    let ry = norm(y);
    if ry <= r {
        return Err(Error::invalid("y", format!("|y| = {ry} is not outside B(0, {r})")));
    }
    let c = gamma(n / 2.0) / PI.powf(n / 2.0 + 1.0) * (PI * s / 2.0).sin();
    let ratio = (r * r - rx * rx) / ((ry - r) * (ry + r));
    Ok(c * ratio.powf(s / 2.0) * dist(x, y).powf(-n))
}

/// Exact sampler for [`fractional_poisson_kernel`].
///
/// From the centre, `u = r²/|y|²` is `Beta(s/2, 1 − s/2)` and the direction is
/// uniform. Off-centre exits are rejection-sampled from the centred law using
/// `P_x(y)/P_0(y) ≤ (|y|/(|y|−|x|))^n ≤ (r/(r−|x|))^n`.
#[derive(Debug, Clone)]
pub struct FractionalExitSampler {
    s: f64,
    radial: Beta<f64>,
}

impl FractionalExitSampler {
    pub fn new(s: f64) -> Result<Self> {
        ensure_open("s", s, 0.0, 2.0)?;
        let radial = Beta::new(s / 2.0, 1.0 - s / 2.0).map_err(|e| Error::invalid("s", e.to_string()))?;
        Ok(Self { s, radial })
    }

    pub fn order(&self) -> f64 {
        self.s
    }

    fn sample_centered<R: Rng + ?Sized>(&self, rng: &mut R, r: f64, out: &mut [f64]) {
        let rho = loop {
            let u: f64 = self.radial.sample(rng);
            if u > 0.0 {
                let rho = r / u.sqrt();
                if rho > r && rho.is_finite() {
                    break rho;
                }
            }
        };
        sample_direction(rng, out);
        out.iter_mut().for_each(|v| *v *= rho);
    }

    /// Writes an exit point of `B(0, r)` from `x` into `out` and returns the
    /// number of proposals used.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, x: &[f64], r: f64, out: &mut [f64]) -> Result<usize> {
        let rx = norm(x);
        if rx >= r {
            return Err(Error::invalid("x", format!("|x| = {rx} is not inside B(0, {r})")));
        }
        if out.len() != x.len() {
            return Err(Error::invalid("out", "dimension differs from x"));
        }
        if rx == 0.0 {
            self.sample_centered(rng, r, out);
            return Ok(1);
        }
        let n = x.len() as i32;
        let damping = (1.0 - (rx / r).powi(2)).powf(self.s / 2.0);
        let bound = (r / (r - rx)).powi(n);
        for attempt in 1..=MAX_REJECTIONS {
            self.sample_centered(rng, r, out);
            let ry = norm(out);
            let ratio = damping * (ry / dist(x, out)).powi(n);
            if rng.random::<f64>() * bound < ratio {
                return Ok(attempt);
            }
        }
        Err(Error::RejectionCapExceeded(MAX_REJECTIONS))
    }
}

/// One exit of `B(0, r)` from `x`; see [`FractionalExitSampler`].
pub fn sample_fractional_exit<R: Rng + ?Sized>(x: &[f64], r: f64, s: f64, rng: &mut R) -> Result<Vec<f64>> {
    let sampler = FractionalExitSampler::new(s)?;
    let mut out = vec![0.0; x.len()];
    sampler.sample(rng, x, r, &mut out)?;
    Ok(out)
}

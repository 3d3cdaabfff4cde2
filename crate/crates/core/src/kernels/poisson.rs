use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_open, ensure_positive, Error, Result};
use crate::quadrature::integrate_adaptive;
use crate::sphere::{chord_to_angle, dot, norm, sphere_tail_fraction, unit_sphere_area};

const SPHERE_TOL: f64 = 1e-9;
const CAP_QUAD_TOL: f64 = 1e-12;

/// Poisson kernel of `B(0, r)`: `(r² − |x|²) / (nω_n r) · |x − y|^{−n}`.
pub fn poisson_kernel(x: &[f64], y: &[f64], r: f64) -> Result<f64> {
    ensure_positive("r", r)?;
    if x.len() != y.len() {
        return Err(Error::invalid("y", "dimension differs from x"));
    }
    let n = x.len();
    let rx = norm(x);
    if rx >= r {
        return Err(Error::invalid("x", format!("|x| = {rx} is not inside B(0, {r})")));
    }
    let ry = norm(y);
    if (ry - r).abs() > SPHERE_TOL * r {
        return Err(Error::invalid("y", format!("|y| = {ry} is not on the sphere of radius {r}")));
    }
    let d = crate::sphere::dist(x, y);
    Ok((r * r - rx * rx) / (unit_sphere_area(n) * r * d.powi(n as i32)))
}

/// The closed spherical cap of polar half-angle `half_angle` about `axis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub axis: Vec<f64>,
    pub half_angle: f64,
}

impl Cap {
    pub fn new(axis: Vec<f64>, half_angle: f64) -> Result<Self> {
        let len = norm(&axis);
        if !(len > 0.0) {
            return Err(Error::invalid("axis", "must be a nonzero vector"));
        }
        if !(0.0..=PI).contains(&half_angle) {
            return Err(Error::invalid("half_angle", format!("{half_angle} is outside [0, π]")));
        }
        Ok(Self {
            axis: axis.iter().map(|v| v / len).collect(),
            half_angle,
        })
    }

    /// Cap of the unit sphere cut out by `B(axis, chord)`.
    pub fn from_chord(axis: Vec<f64>, chord: f64) -> Result<Self> {
        ensure_positive("chord", chord)?;
        Self::new(axis, chord_to_angle(chord))
    }
}

/// Harmonic measure at `x ∈ B(0,r)` of the cap `r·cap` of `∂B(0,r)`, i.e. the
/// Poisson integral of its indicator.
///
/// Integrating in the polar angle `t` about `x/|x|` reduces the sphere integral
/// to one dimension: the kernel depends on `t` only, and the cap occupies a
/// closed-form fraction of each `(n−2)`-sphere `{angle(y, x) = t}`.
pub fn cap_harmonic_measure(x: &[f64], cap: &Cap, r: f64) -> Result<f64> {
    ensure_positive("r", r)?;
    let n = x.len();
    if cap.axis.len() != n {
        return Err(Error::invalid("axis", "dimension differs from x"));
    }
    let rho = norm(x) / r;
    if rho >= 1.0 {
        return Err(Error::invalid("x", format!("|x|/r = {rho} is not below 1")));
    }
    let theta = cap.half_angle;
    let area = unit_sphere_area(n);

    if n == 1 {
        let xs = x[0] / r;
        let axis = cap.axis[0].signum();
        let value: f64 = [1.0f64, -1.0]
            .iter()
            .filter(|&&y| if y == axis { true } else { theta >= PI })
            .map(|&y| (1.0 - xs * xs) / (area * (xs - y).abs()))
            .sum();
        return Ok(value.clamp(0.0, 1.0));
    }

    let cos_psi = if rho == 0.0 {
        1.0
    } else {
        (dot(x, &cap.axis) / (rho * r)).clamp(-1.0, 1.0)
    };
    let psi = cos_psi.acos();
    let sin_psi = psi.sin();
    let cos_theta = theta.cos();
    let slice_area = unit_sphere_area(n - 1);
    let prefactor = (1.0 - rho * rho) / area;

    let integrand = |t: f64| {
        let (sin_t, cos_t) = t.sin_cos();
        let frac = if sin_psi < 1e-12 || sin_t <= 0.0 {
            // the slice is a single point or x lies on the axis
            let angle = if cos_psi > 0.0 { t } else { PI - t };
            let angle = if sin_t <= 0.0 && sin_psi >= 1e-12 {
                if t < 1.0 { psi } else { PI - psi }
            } else {
                angle
            };
            if angle <= theta { 1.0 } else { 0.0 }
        } else {
            let c = (cos_theta - cos_t * cos_psi) / (sin_t * sin_psi);
            sphere_tail_fraction(n - 1, c)
        };
        if frac == 0.0 {
            return 0.0;
        }
        let d2 = 1.0 + rho * rho - 2.0 * rho * cos_t;
        prefactor * slice_area * sin_t.powi(n as i32 - 2) * frac / d2.powf(n as f64 / 2.0)
    };
    let t1 = (psi - theta).abs();
    let t2 = (psi + theta).min(2.0 * PI - psi - theta);
    let result = integrate_adaptive(integrand, 0.0, PI, &[t1, t2], CAP_QUAD_TOL, 0.0)?;
    Ok(result.value.clamp(0.0, 1.0))
}

/// Cap boundary data: `low_value` on the cap of half-angle `inner_angle`,
/// `high_value` outside the cap of half-angle `outer_angle`, linear in the
/// polar angle between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapBoundaryData {
    pub axis: Vec<f64>,
    pub inner_angle: f64,
    pub outer_angle: f64,
    pub low_value: f64,
    pub high_value: f64,
}

impl CapBoundaryData {
    pub fn new(axis: Vec<f64>, inner_angle: f64, outer_angle: f64, low_value: f64, high_value: f64) -> Result<Self> {
        if !(0.0 < inner_angle && inner_angle < outer_angle && outer_angle < PI) {
            return Err(Error::invalid(
                "inner_angle",
                format!("need 0 < inner ({inner_angle}) < outer ({outer_angle}) < π"),
            ));
        }
        let axis = Cap::new(axis, inner_angle)?.axis;
        Ok(Self { axis, inner_angle, outer_angle, low_value, high_value })
    }

    /// `g_ν` about `axis`: 0 on `B(axis, ν/2)`, 1 off `B(axis, ν)`.
    pub fn g_nu(nu: f64, axis: Vec<f64>) -> Result<Self> {
        ensure_open("nu", nu, 0.0, 1.0)?;
        Self::new(axis, chord_to_angle(nu / 2.0), chord_to_angle(nu), 0.0, 1.0)
    }

    /// Data for scale `r_k`: the same profile with values scaled, as for
    /// `g_k(r_k T_k x) = g_ν(x)` followed by an affine change of level.
    pub fn with_values(mut self, low_value: f64, high_value: f64) -> Self {
        self.low_value = low_value;
        self.high_value = high_value;
        self
    }

    /// Value at direction `y` (any nonzero point; only its angle matters).
    pub fn evaluate(&self, y: &[f64]) -> f64 {
        let len = norm(y);
        if len == 0.0 {
            return self.low_value;
        }
        let angle = (dot(y, &self.axis) / len).clamp(-1.0, 1.0).acos();
        let ramp = ((angle - self.inner_angle) / (self.outer_angle - self.inner_angle)).clamp(0.0, 1.0);
        self.low_value + (self.high_value - self.low_value) * ramp
    }

    /// Poisson integral over `∂B(0,r)` at `x`. The linear ramp is the average
    /// of cap indicators over the threshold angle, so the integral reduces to
    /// a one-dimensional average of cap harmonic measures.
    pub fn poisson_integral(&self, x: &[f64], r: f64) -> Result<f64> {
        let width = self.outer_angle - self.inner_angle;
        let failure = std::cell::RefCell::new(None);
        let avg = integrate_adaptive(
            |phi| match Cap::new(self.axis.clone(), phi).and_then(|c| cap_harmonic_measure(x, &c, r)) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            },
            self.inner_angle,
            self.outer_angle,
            &[],
            1e-10 * width,
            0.0,
        )?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let covered = avg.value / width;
        Ok(self.low_value + (self.high_value - self.low_value) * (1.0 - covered))
    }
}

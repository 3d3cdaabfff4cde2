//! Measures of balls, spheres and caps, and exact samplers on them.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::gamma;

/// Surface measure `nω_n` of the unit sphere in `R^n` (2 for `n = 1`).
pub fn unit_sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// Volume `ω_n` of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    PI.powf(h) / gamma(h + 1.0)
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Fraction of the unit sphere `S^{m-1} ⊂ R^m` where the first coordinate is
/// at least `c`.
pub fn sphere_tail_fraction(m: usize, c: f64) -> f64 {
    if m == 1 {
        // S^0 = {-1, +1}
        return if c <= -1.0 {
            1.0
        } else if c <= 1.0 {
            0.5
        } else {
            0.0
        };
    }
    if c >= 1.0 {
        return 0.0;
    }
    if c <= -1.0 {
        return 1.0;
    }
    let half = 0.5 * beta_reg((m as f64 - 1.0) / 2.0, 0.5, 1.0 - c * c);
    if c >= 0.0 {
        half
    } else {
        1.0 - half
    }
}

/// Fraction of `S^{n-1}` within polar angle `theta` of a fixed axis.
pub fn cap_area_fraction(n: usize, theta: f64) -> f64 {
    if theta >= PI {
        1.0
    } else if theta <= 0.0 {
        0.0
    } else {
        sphere_tail_fraction(n, theta.cos())
    }
}

/// Polar half-angle of the spherical cap `∂B(0,1) ∩ B(y, chord)` for `|y| = 1`.
pub fn chord_to_angle(chord: f64) -> f64 {
    if chord >= 2.0 {
        PI
    } else {
        2.0 * (chord / 2.0).asin()
    }
}

/// Writes an isotropic unit vector into `out` (normalised Gaussian).
pub fn sample_direction<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut sq = 0.0;
        for v in out.iter_mut() {
            *v = rng.sample(StandardNormal);
            sq += *v * *v;
        }
        if sq > 1e-300 {
            let inv = sq.sqrt().recip();
            out.iter_mut().for_each(|v| *v *= inv);
            return;
        }
    }
}

/// Uniform point in the ball of radius `radius` about the origin.
pub fn sample_in_ball<R: Rng + ?Sized>(rng: &mut R, radius: f64, out: &mut [f64]) {
    sample_direction(rng, out);
    let u: f64 = rng.random();
    let rho = radius * u.powf(1.0 / out.len() as f64);
    out.iter_mut().for_each(|v| *v *= rho);
}

/// Uniform point in the annulus `inner ≤ |x| ≤ outer` (radial inverse CDF by
/// volume).
pub fn sample_in_annulus<R: Rng + ?Sized>(rng: &mut R, inner: f64, outer: f64, out: &mut [f64]) {
    let n = out.len() as f64;
    sample_direction(rng, out);
    let u: f64 = rng.random();
    let (a, b) = (inner.powf(n), outer.powf(n));
    let rho = (a + u * (b - a)).powf(1.0 / n);
    out.iter_mut().for_each(|v| *v *= rho);
}

/// A unit vector orthogonal to the unit vector `axis`, chosen at random.
pub fn sample_orthogonal<R: Rng + ?Sized>(rng: &mut R, axis: &[f64], out: &mut [f64]) {
    loop {
        sample_direction(rng, out);
        let p = dot(out, axis);
        out.iter_mut().zip(axis).for_each(|(v, a)| *v -= p * a);
        let len = norm(out);
        if len > 1e-8 {
            out.iter_mut().for_each(|v| *v /= len);
            return;
        }
        if out.len() == 1 {
            out.iter_mut().for_each(|v| *v = 0.0);
            return;
        }
    }
}

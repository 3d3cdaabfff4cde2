use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_open, ensure_positive, Error, Result};
use crate::sphere::{dist, norm};

/// Implicit domain `Ω ⊂ R^n` whose studied boundary point is the origin.
///
/// `dist_to_complement` must never exceed the true distance to `Ω^c`, and it
/// must be positive only at points of `Ω`.
pub trait DomainOracle: Send + Sync {
    fn dim(&self) -> usize;
    fn contains(&self, x: &[f64]) -> bool;
    fn dist_to_complement(&self, x: &[f64]) -> f64;
    /// `R` with `Ω ⊆ B(0, R)`.
    fn bounding_radius(&self) -> f64;
}

impl<D: DomainOracle + ?Sized> DomainOracle for &D {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn contains(&self, x: &[f64]) -> bool {
        (**self).contains(x)
    }
    fn dist_to_complement(&self, x: &[f64]) -> f64 {
        (**self).dist_to_complement(x)
    }
    fn bounding_radius(&self) -> f64 {
        (**self).bounding_radius()
    }
}

/// Parameters of the built-in domains. Every complement feature near the
/// origin is centred on the `-e₁` axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainKind {
    /// `B(center, radius)`; an empty center means the origin.
    Ball {
        #[serde(default)]
        center: Vec<f64>,
        #[serde(default = "unit_radius")]
        radius: f64,
    },
    /// `Ω = ∅`, so the complement is everything.
    Empty,
    /// Unit ball minus the closed cone of half-aperture `aperture` about `-e₁`.
    ConeComplement { aperture: f64 },
    /// Unit ball minus a twisting chain of balls accumulating at the origin;
    /// every `B(0,r)`, `r ≤ 1`, contains an excluded ball of radius `δr`.
    /// Requires `δ < 6/17`.
    Corkscrew { delta: f64 },
    /// Unit ball minus thickened dyadic spherical caps `2^{-k}Γ`, where `Γ`
    /// is the cap of Euclidean radius `ν` on `∂B_{1/2}` about `-e₁/2`.
    ShellCaps { nu: f64, thickness: f64 },
    /// `B₁ ∩ {x₁ > 0}`.
    HalfBall,
}

fn unit_radius() -> f64 {
    1.0
}

#[derive(Debug, Clone)]
enum Shape {
    Ball { center: Vec<f64>, radius: f64 },
    Empty,
    Cone { aperture: f64 },
    Corkscrew { ratio: f64, balls: Vec<(Vec<f64>, f64)> },
    ShellCaps { half_angle: f64, thickness: f64 },
    HalfBall,
}

/// A [`DomainOracle`] for one of the [`DomainKind`]s.
#[derive(Debug, Clone)]
pub struct BuiltinDomain {
    dim: usize,
    kind: DomainKind,
    shape: Shape,
}

/// Rotation of the corkscrew chain per halving of the scale, in radians.
const CORKSCREW_TWIST: f64 = 1.0;
/// Relative inner radius `κ` of the annulus holding each corkscrew ball.
const CORKSCREW_GAP: f64 = 0.25;
/// Excluded balls have radius `δ(1+η)` times their scale, so the `δr` ball
/// inside `B(0,r)` has room to move at every `r`.
const CORKSCREW_MARGIN: f64 = 1.0 / 16.0;

pub fn builtin_domain(kind: DomainKind, dim: usize) -> Result<BuiltinDomain> {
    if dim == 0 {
        return Err(Error::invalid("dimension", "must be at least 1"));
    }
    let shape = match &kind {
        DomainKind::Ball { center, radius } => {
            ensure_positive("radius", *radius)?;
            let center = if center.is_empty() {
                vec![0.0; dim]
            } else if center.len() == dim {
                center.clone()
            } else {
                return Err(Error::invalid(
                    "center",
                    format!("has {} coordinates, expected {dim}", center.len()),
                ));
            };
            Shape::Ball { center, radius: *radius }
        }
        DomainKind::Empty => Shape::Empty,
        DomainKind::ConeComplement { aperture } => {
            ensure_open("aperture", *aperture, 0.0, PI)?;
            Shape::Cone { aperture: *aperture }
        }
        DomainKind::Corkscrew { delta } => {
            // ball j sits in the annulus [κ q^{j+1}, q^{j+1}], so 2δ(1+η) ≤ (1-κ)q < 1-κ
            let grown = 1.0 + CORKSCREW_MARGIN;
            ensure_open("delta", *delta, 0.0, 0.5 * (1.0 - CORKSCREW_GAP) / grown)?;
            let ratio = (2.0 * delta * grown / (1.0 - CORKSCREW_GAP)).max(0.5);
            let twist = CORKSCREW_TWIST * ratio.recip().log2();
            let mut balls = Vec::new();
            let mut scale = 1.0;
            let mut j = 0usize;
            while scale > 1e-16 {
                let radius = delta * grown * scale;
                let offset = scale * ratio - radius;
                let mut c = vec![0.0; dim];
                if dim == 1 {
                    c[0] = -offset;
                } else {
                    let t = j as f64 * twist;
                    c[0] = -offset * t.cos();
                    c[1] = -offset * t.sin();
                }
                balls.push((c, radius));
                scale *= ratio;
                j += 1;
            }
            Shape::Corkscrew { ratio, balls }
        }
        DomainKind::ShellCaps { nu, thickness } => {
            ensure_open("nu", *nu, 0.0, 1.0)?;
            // neighbouring dyadic bands stay disjoint only below 1/3
            ensure_open("thickness", *thickness, 0.0, 1.0 / 3.0)?;
            Shape::ShellCaps {
                half_angle: 2.0 * nu.asin(),
                thickness: *thickness,
            }
        }
        DomainKind::HalfBall => Shape::HalfBall,
    };
    Ok(BuiltinDomain { dim, kind, shape })
}

/// Angle between `x` and `-e₁`, in `[0, π]`.
fn angle_from_negative_axis(x: &[f64], r: f64) -> f64 {
    let perp = (r * r - x[0] * x[0]).max(0.0).sqrt();
    perp.atan2(-x[0])
}

/// Distance from a point at radius `r`, polar angle `phi`, to the annular
/// sector `{a ≤ ρ ≤ b, angle ≤ theta}` of a rotationally symmetric set.
fn annular_sector_distance(r: f64, phi: f64, a: f64, b: f64, theta: f64) -> f64 {
    if phi <= theta {
        return (a - r).max(r - b).max(0.0);
    }
    let (px, py) = (r * (phi - theta).cos(), r * (phi - theta).sin());
    if px < a {
        (px - a).hypot(py)
    } else if px > b {
        (px - b).hypot(py)
    } else {
        py.abs()
    }
}

impl BuiltinDomain {
    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    fn shell_bands(thickness: f64) -> impl Iterator<Item = (usize, f64, f64)> {
        (0..1100).map(move |k| {
            let rho = 0.5f64.powi(k as i32 + 1);
            (k, rho * (1.0 - thickness), rho * (1.0 + thickness))
        })
    }
}

impl DomainOracle for BuiltinDomain {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &[f64]) -> bool {
        let r = norm(x);
        match &self.shape {
            Shape::Ball { center, radius } => dist(x, center) < *radius,
            Shape::Empty => false,
            Shape::Cone { aperture } => {
                r < 1.0 && r > 0.0 && angle_from_negative_axis(x, r) > *aperture
            }
            Shape::Corkscrew { ratio, balls } => {
                if !(r < 1.0 && r > 0.0) {
                    return false;
                }
                let mut outer = *ratio;
                for (c, rad) in balls {
                    if outer < r {
                        break;
                    }
                    if dist(x, c) <= *rad {
                        return false;
                    }
                    outer *= ratio;
                }
                true
            }
            Shape::ShellCaps { half_angle, thickness } => {
                if !(r < 1.0 && r > 0.0) {
                    return false;
                }
                let phi = angle_from_negative_axis(x, r);
                if phi > *half_angle {
                    return true;
                }
                !Self::shell_bands(*thickness)
                    .take_while(|&(_, _, hi)| hi >= r)
                    .any(|(_, lo, hi)| lo <= r && r <= hi)
            }
            Shape::HalfBall => r < 1.0 && x[0] > 0.0,
        }
    }

    fn dist_to_complement(&self, x: &[f64]) -> f64 {
        if !self.contains(x) {
            return 0.0;
        }
        let r = norm(x);
        let d = match &self.shape {
            Shape::Ball { center, radius } => radius - dist(x, center),
            Shape::Empty => 0.0,
            Shape::Cone { aperture } => {
                let gap = angle_from_negative_axis(x, r) - aperture;
                let to_cone = if gap >= FRAC_PI_2 { r } else { r * gap.sin() };
                (1.0 - r).min(to_cone)
            }
            Shape::Corkscrew { ratio, balls } => {
                let mut best = (1.0 - r).min(r);
                let mut outer = *ratio;
                for (c, rad) in balls {
                    if outer < 1e-2 * r {
                        // every remaining ball lies inside B(0, outer)
                        best = best.min(r - outer);
                        break;
                    }
                    best = best.min(dist(x, c) - rad);
                    outer *= ratio;
                }
                best
            }
            Shape::ShellCaps { half_angle, thickness } => {
                let phi = angle_from_negative_axis(x, r);
                let mut best = (1.0 - r).min(r);
                for (_, lo, hi) in Self::shell_bands(*thickness) {
                    if hi < 1e-2 * r {
                        best = best.min(r - hi);
                        break;
                    }
                    best = best.min(annular_sector_distance(r, phi, lo, hi, *half_angle));
                }
                best
            }
            Shape::HalfBall => (1.0 - r).min(x[0]),
        };
        d.max(0.0)
    }

    fn bounding_radius(&self) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => norm(center) + radius,
            _ => 1.0,
        }
    }
}

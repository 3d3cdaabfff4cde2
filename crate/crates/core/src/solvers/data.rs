use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::kernels::CapBoundaryData;
use crate::sphere::norm;

/// Dirichlet (or exterior) data, with an optional Hölder bound at the origin:
/// `|g(x) − g(0)| ≤ seminorm·|x|^exponent`.
pub trait BoundaryData: Send + Sync {
    fn evaluate(&self, y: &[f64]) -> f64;

    fn holder_seminorm_at_origin(&self) -> Option<f64> {
        None
    }

    fn holder_exponent(&self) -> Option<f64> {
        None
    }
}

/// Bounded right-hand side of `Δu = f`.
pub trait SourceTerm: Send + Sync {
    fn evaluate(&self, y: &[f64]) -> f64;

    /// `sup |f|`; zero means the source can be skipped entirely.
    fn sup_bound(&self) -> f64;
}

impl<T: BoundaryData + ?Sized> BoundaryData for &T {
    fn evaluate(&self, y: &[f64]) -> f64 {
        (**self).evaluate(y)
    }
    fn holder_seminorm_at_origin(&self) -> Option<f64> {
        (**self).holder_seminorm_at_origin()
    }
    fn holder_exponent(&self) -> Option<f64> {
        (**self).holder_exponent()
    }
}

impl<T: SourceTerm + ?Sized> SourceTerm for &T {
    fn evaluate(&self, y: &[f64]) -> f64 {
        (**self).evaluate(y)
    }
    fn sup_bound(&self) -> f64 {
        (**self).sup_bound()
    }
}

/// Boundary data from a closure, without Hölder information.
pub struct FnData<F>(pub F);

impl<F: Fn(&[f64]) -> f64 + Send + Sync> BoundaryData for FnData<F> {
    fn evaluate(&self, y: &[f64]) -> f64 {
        (self.0)(y)
    }
}

/// Named boundary data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataKind {
    Constant { value: f64 },
    /// `g(y) = y[axis]`.
    Coordinate { axis: usize },
    /// 1 where `|y| ≥ 1 − tolerance`, 0 elsewhere.
    OuterShell { tolerance: f64 },
    /// 0 on `{y₁ ≤ 0} ∩ B(0, radius)`, 1 elsewhere.
    HalfSpaceStep { radius: f64 },
    /// Linear-in-angle ramp from 0 on the `nu/2` cap about `axis` to 1 off the
    /// `nu` cap.
    CapRamp { nu: f64, axis: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuiltinData {
    kind: DataKind,
    ramp: Option<CapBoundaryData>,
}

impl BuiltinData {
    pub fn new(kind: DataKind) -> Result<Self> {
        let mut ramp = None;
        match &kind {
            DataKind::Constant { value } if !value.is_finite() => {
                return Err(Error::invalid("value", "must be finite"));
            }
            DataKind::OuterShell { tolerance } => {
                if !(*tolerance > 0.0 && *tolerance < 1.0) {
                    return Err(Error::invalid("tolerance", format!("{tolerance} is outside (0, 1)")));
                }
            }
            DataKind::HalfSpaceStep { radius } => ensure_positive("radius", *radius)?,
            DataKind::CapRamp { nu, axis } => ramp = Some(CapBoundaryData::g_nu(*nu, axis.clone())?),
            _ => {}
        }
        Ok(Self { kind, ramp })
    }

    pub fn kind(&self) -> &DataKind {
        &self.kind
    }

    /// Rejects data that does not fit a space of dimension `dim`.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match &self.kind {
            DataKind::Coordinate { axis } if *axis >= dim => {
                Err(Error::invalid("axis", format!("{axis} is not below the dimension {dim}")))
            }
            DataKind::CapRamp { axis, .. } if axis.len() != dim => {
                Err(Error::invalid("axis", format!("has {} entries for dimension {dim}", axis.len())))
            }
            _ => Ok(()),
        }
    }
}

impl BoundaryData for BuiltinData {
    fn evaluate(&self, y: &[f64]) -> f64 {
        match &self.kind {
            DataKind::Constant { value } => *value,
            DataKind::Coordinate { axis } => y[*axis],
            DataKind::OuterShell { tolerance } => {
                if norm(y) >= 1.0 - tolerance {
                    1.0
                } else {
                    0.0
                }
            }
            DataKind::HalfSpaceStep { radius } => {
                if y[0] <= 0.0 && norm(y) < *radius {
                    0.0
                } else {
                    1.0
                }
            }
            DataKind::CapRamp { .. } => self.ramp.as_ref().expect("built in new").evaluate(y),
        }
    }

    fn holder_seminorm_at_origin(&self) -> Option<f64> {
        match &self.kind {
            DataKind::Constant { .. } => Some(0.0),
            DataKind::Coordinate { .. } => Some(1.0),
            // nonzero only where |y| ≥ 1 − tolerance
            DataKind::OuterShell { tolerance } => Some(1.0 / (1.0 - tolerance)),
            // on the exterior of the half ball, nonzero only where |y| ≥ 1
            DataKind::HalfSpaceStep { radius } => Some(1.0 / radius.min(1.0)),
            // the origin is not on the unit sphere; the ramp is only bounded
            DataKind::CapRamp { .. } => None,
        }
    }

    fn holder_exponent(&self) -> Option<f64> {
        match &self.kind {
            DataKind::CapRamp { .. } => None,
            _ => Some(1.0),
        }
    }
}

/// Named bounded sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceKind {
    Zero,
    Constant { value: f64 },
}

impl SourceTerm for SourceKind {
    fn evaluate(&self, _y: &[f64]) -> f64 {
        match self {
            SourceKind::Zero => 0.0,
            SourceKind::Constant { value } => *value,
        }
    }

    fn sup_bound(&self) -> f64 {
        match self {
            SourceKind::Zero => 0.0,
            SourceKind::Constant { value } => value.abs(),
        }
    }
}

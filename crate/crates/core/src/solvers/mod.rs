//! Stochastic solvers: walk-on-spheres for `Δu = f` with Dirichlet data and
//! walk-on-balls for the fractional Laplacian with exterior data.

mod data;
mod wob;
mod wos;

pub use data::{BoundaryData, BuiltinData, DataKind, FnData, SourceKind, SourceTerm};
pub use wob::{wob_fractional_estimate, WobConfig};
pub use wos::{ball_green_at_center, wos_estimate, EstimatorResult, WosConfig};

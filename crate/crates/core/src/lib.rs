//! Numerical laboratory for pointwise boundary regularity of elliptic equations.
//!
//! The crate is organised around a boundary point normalised to the origin:
//!
//! * [`geometry`] describes domains through membership and conservative
//!   distance oracles, and estimates the four geometric richness conditions
//!   (sphere measure, spherical caps, annulus volume, divergent sums) of the
//!   complement near the origin.
//! * [`kernels`] holds the classical and fractional Poisson kernels, cap
//!   harmonic measures and the exponent calculus turning a decay constant into
//!   a certified Hölder exponent.
//! * [`solvers`] implements walk-on-spheres for `Δu = f` and walk-on-balls for
//!   the fractional Laplacian with exterior data.
//! * [`regularity`] measures oscillation decay at the origin and certifies it
//!   against an [`ExponentBudget`](kernels::ExponentBudget).
//! * [`perron`] evaluates the modulus-of-continuity recursion for the
//!   divergent-sum condition.
//!
//! All Monte Carlo routines are deterministic functions of their seed: every
//! sample draws from a stream keyed by `(seed, index)`, and reductions happen
//! in a fixed order, so results do not depend on the rayon thread count.

pub mod error;
pub mod geometry;
pub mod kernels;
pub mod perron;
pub mod quadrature;
pub mod regularity;
pub mod rng;
pub mod solvers;
pub mod sphere;
pub mod stats;

pub use error::{Error, Result};

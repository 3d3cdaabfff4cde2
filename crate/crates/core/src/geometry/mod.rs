//! Domains and checkers for the geometric conditions at the origin.

mod checks;
mod domain;
mod sequence;

pub use checks::{
    check_h2, h1_fraction, h3_fraction, h4_partial_sums, AnnulusMeasure, H2Outcome, H2Witness,
    H4Term, SphereMeasure,
};
pub use domain::{builtin_domain, BuiltinDomain, DomainKind, DomainOracle};
pub use sequence::QuasiGeometricSequence;

//! Classical and fractional Poisson kernels, cap harmonic measure, and the
//! chain `ν → μ → α → (β, Ĉ)` of decay constants.

mod budget;
mod fractional;
mod poisson;

pub use budget::{
    alpha_of, chaser_lhs, constant_chaser, mu_cap, mu_for_cap_angle, mu_h1_lower, BudgetInputs, CapMinimum,
    ChaserResult, ExponentBudget, MuSource,
};
pub use fractional::{fractional_poisson_kernel, sample_fractional_exit, FractionalExitSampler, MAX_REJECTIONS};
pub use poisson::{cap_harmonic_measure, poisson_kernel, Cap, CapBoundaryData};

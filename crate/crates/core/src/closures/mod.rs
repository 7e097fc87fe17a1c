//! Closed-form maximum-entropy closures.

pub mod gaussian;
pub mod linearized;
pub mod polyatomic;

pub use gaussian::{gaussian_closure_10, gaussian_flux_10, maxwellian, GaussianClosure, GaussianParams};
pub use linearized::{linearized_closure, EquilibriumState, LinearizedClosure};
pub use polyatomic::{
    ellipsoidal_gaussian_11, normalization_a, polyatomic_f6, solve_ti, F11Params, F6Params, InternalEnergy,
    Pchip, PolyatomicEos, F11, F6,
};

/// A distribution function `f(xi, I)` that can be sampled pointwise.
pub trait Distribution {
    fn value(&self, xi: &[f64; 3], energy: f64) -> f64;
}

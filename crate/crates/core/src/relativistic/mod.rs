//! Relativistic 14-moment closure near a Jüttner equilibrium.
//!
//! Integrals are written in the dimensionless fugacity `a = m alpha / kB` and
//! coldness `gamma = m c^2 / (kB T)`. The metric is `diag(+, -, -, -)`.

pub mod closure;
pub mod equilibrium;
pub mod integrals;
pub mod table;

use serde::{Deserialize, Serialize};

use crate::basis::Statistics;
use crate::error::{Error, Result};

pub use closure::{
    boost_matrix, boost_tensor3, closure_coefficients, coefficient_determinants, heat_coefficient, pi_coefficient,
    trace_contraction, triple_tensor, ClosureCoefficients, CoefficientDeterminants, RelNoneqState, Tensor3,
};
pub use equilibrium::{equilibrium_state, juttner, RelEquilibrium};
pub use integrals::{i_nu, i_nu_report, j_from_i, j_munu, j_prime, j_prime_quadrature, IValue, Regime, RegimeChoice};
pub use table::{coefficient_sweep_csv, table_csv, table_rows, TableRow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RelGas {
    pub m: f64,
    pub c: f64,
    pub kb: f64,
    pub y: f64,
    pub statistics: Statistics,
}

impl Default for RelGas {
    fn default() -> Self {
        RelGas {
            m: 1.0,
            c: 1.0,
            kb: 1.0,
            y: 1.0,
            statistics: Statistics::Classical,
        }
    }
}

impl RelGas {
    pub fn with_statistics(mut self, s: Statistics) -> Self {
        self.statistics = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("m", self.m), ("c", self.c), ("kB", self.kb), ("Y", self.y)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// `a = m alpha / kB`
    pub fn reduced_fugacity(&self, alpha: f64) -> f64 {
        self.m * alpha / self.kb
    }

    pub fn temperature(&self, gamma: f64) -> f64 {
        self.m * self.c * self.c / (self.kb * gamma)
    }
}

/// `N = (N+1)(N+2)(2N+3)/6` classical moments behind a relativistic tensor
/// hierarchy of order `N`.
pub fn classical_moment_count(n: u64) -> u64 {
    (n + 1) * (n + 2) * (2 * n + 3) / 6
}

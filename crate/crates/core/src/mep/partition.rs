//! Partition function `F(chi)` with `F'(chi) = Y / (exp(m chi / kB) + s)`.

use serde::Serialize;

use crate::basis::{GasModel, Statistics};
use crate::error::{Error, Result};

/// Minimum of `m chi / kB` allowed for Bose statistics.
pub const BOSE_MARGIN: f64 = 1e-8;

/// `F`, `F'` and `F''` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionJet {
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionFunction {
    pub statistics: Statistics,
    pub y: f64,
    /// `m / kB`
    pub beta: f64,
}

pub fn partition_function(gas: &GasModel) -> Result<PartitionFunction> {
    gas.validate()?;
    Ok(PartitionFunction {
        statistics: gas.statistics,
        y: gas.y,
        beta: gas.m / gas.kb,
    })
}

impl PartitionFunction {
    pub fn eval(&self, chi: f64) -> Result<PartitionJet> {
        let x = self.beta * chi;
        let (y, b) = (self.y, self.beta);
        match self.statistics {
            Statistics::Classical => {
                let e = (-x).exp();
                Ok(PartitionJet {
                    f: -y / b * e,
                    fp: y * e,
                    fpp: -b * y * e,
                })
            }
            Statistics::Fermi => {
                if x > 0.0 {
                    let e = (-x).exp();
                    let d = 1.0 + e;
                    Ok(PartitionJet {
                        f: -y / b * e.ln_1p(),
                        fp: y * e / d,
                        fpp: -b * y * e / (d * d),
                    })
                } else {
                    let e = x.exp();
                    let d = 1.0 + e;
                    Ok(PartitionJet {
                        f: -y / b * (e.ln_1p() - x),
                        fp: y / d,
                        fpp: -b * y * e / (d * d),
                    })
                }
            }
            Statistics::Bose => {
                if !(x > BOSE_MARGIN) {
                    return Err(Error::DomainError { chi });
                }
                let e = (-x).exp();
                let d = -(-e).ln_1p();
                let em1 = -(-x).exp_m1();
                Ok(PartitionJet {
                    f: -y / b * d,
                    fp: y * e / em1,
                    fpp: -b * y * e / (em1 * em1),
                })
            }
        }
    }

    /// Entropy density `chi F'(chi) - F(chi)` written in terms of `f = F'`,
    /// evaluated without going through `chi`.
    pub fn entropy_of(&self, f: f64) -> f64 {
        let (y, b) = (self.y, self.beta);
        if f <= 0.0 {
            return 0.0;
        }
        match self.statistics {
            Statistics::Classical => f / b * (1.0 - (f / y).ln()),
            _ => {
                let s = self.statistics.s();
                let rest = y - s * f;
                f / b * (rest / f).ln() + y / (b * s) * (y / rest).ln()
            }
        }
    }
}

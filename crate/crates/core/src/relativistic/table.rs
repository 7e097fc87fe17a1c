//! Machine-readable regime table for `I_nu` and coefficient sweeps.

use serde::Serialize;

use super::integrals::{i_nu_report, Regime, RegimeChoice};
use super::{closure_coefficients, equilibrium_state, RelGas};
use crate::basis::Statistics;
use crate::cli::fmt_num;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub regime: Regime,
    pub nu: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub value: f64,
    pub method: String,
}

/// Sample points per regime, as `(regime, statistics, a, gamma)`.
fn samples() -> Vec<(Regime, Statistics, f64, f64)> {
    vec![
        (Regime::NonDegenerate, Statistics::Classical, 0.0, 1.0),
        (Regime::NonDegenerate, Statistics::Classical, 2.0, 5.0),
        (Regime::NonDegenerate, Statistics::Fermi, 20.0, 2.0),
        (Regime::StrongFermi, Statistics::Fermi, -20.0 * 2f64.cosh(), 20.0),
        (Regime::CompleteFermi, Statistics::Fermi, -50.0 * 1f64.cosh(), 50.0),
        (Regime::CompleteBose, Statistics::Bose, 0.5, 1.0),
        (Regime::CompleteBose, Statistics::Bose, -0.9, 1.0),
    ]
}

/// Each regime row is followed by a `NUMERIC` row at the same point, so the
/// table carries its own cross-check.
pub fn table_rows(base: &RelGas) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for (regime, stats, a, gamma) in samples() {
        let gas = base.with_statistics(stats);
        let alpha = a * gas.kb / gas.m;
        for nu in 0..=4 {
            for r in [regime, Regime::Numeric] {
                let v = i_nu_report(nu, alpha, gamma, &gas, RegimeChoice::Forced(r))?;
                rows.push(TableRow {
                    regime: r,
                    nu,
                    alpha,
                    gamma,
                    value: v.value,
                    method: v.method.to_string(),
                });
            }
        }
    }
    Ok(rows)
}

/// CSV with columns `regime,nu,alpha,gamma,I_value,method`.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from("regime,nu,alpha,gamma,I_value,method\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.regime.name(),
            r.nu,
            fmt_num(r.alpha),
            fmt_num(r.gamma),
            fmt_num(r.value),
            r.method
        ));
    }
    s
}

/// Equilibrium variables and closure coefficients over an `(alpha, gamma)`
/// grid. Points that fail keep their row with `NaN` values and the error
/// kind in `status`.
pub fn coefficient_sweep_csv(alphas: &[f64], gammas: &[f64], gas: &RelGas) -> String {
    let mut s = String::from("alpha,gamma,n,e,p,C01,Cpi1,C03,C05,status\n");
    for &alpha in alphas {
        for &gamma in gammas {
            let res = equilibrium_state(alpha, gamma, gas)
                .and_then(|eq| Ok((eq, closure_coefficients(alpha, gamma, gas)?)));
            let (vals, status) = match res {
                Ok((eq, c)) => ([eq.n, eq.e, eq.p, c.c01, c.cpi1, c.c03, c.c05], "ok".to_string()),
                Err(e) => ([f64::NAN; 7], e.kind().to_string()),
            };
            let cols: Vec<String> = [alpha, gamma].iter().chain(vals.iter()).map(|x| fmt_num(*x)).collect();
            s.push_str(&cols.join(","));
            s.push(',');
            s.push_str(&status);
            s.push('\n');
        }
    }
    s
}

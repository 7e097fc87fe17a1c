//! One-dimensional finite-volume solver for truncated moment systems with a
//! BGK production.
//!
//! Each step is a first-order Rusanov transport step followed by the exact
//! exponential relaxation of the nonequilibrium moments. Cells that leave the
//! admissible set are pulled back by shrinking their nonequilibrium part.

pub mod closure;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{GasModel, MomentVector};
use crate::cli::fmt_num;
use crate::error::{Error, Result};

pub use closure::{CellFields, ClosureKind, SimClosure};

/// Equilibrium state given by density, velocity and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    pub rho: f64,
    #[serde(default)]
    pub v: [f64; 3],
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// Jump at `x0` (the domain midpoint when absent).
    Riemann {
        left: Primitive,
        right: Primitive,
        #[serde(default)]
        x0: Option<f64>,
    },
    /// `rho (1 + amplitude sin(2 pi mode x / L))` at uniform velocity and temperature.
    Smooth {
        base: Primitive,
        amplitude: f64,
        #[serde(default = "one")]
        mode: u32,
    },
    Uniform { state: Primitive },
    /// Explicit moment vectors, one per cell, in the closure's basis order.
    Cells { values: Vec<Vec<f64>> },
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Outflow,
    Periodic,
}

fn default_length() -> f64 {
    1.0
}
fn default_cfl() -> f64 {
    0.45
}
fn default_unit() -> f64 {
    1.0
}
fn default_boundary() -> Boundary {
    Boundary::Outflow
}
fn default_max_steps() -> usize {
    10_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub closure: ClosureKind,
    pub cells: usize,
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_final: f64,
    pub tau: f64,
    pub initial: InitialCondition,
    #[serde(default = "default_boundary")]
    pub boundary: Boundary,
    /// Output times in `[0, t_final]`; `t_final` is always included.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "default_unit")]
    pub m: f64,
    #[serde(default = "default_unit")]
    pub kb: f64,
    /// Record the total entropy after every step (Gaussian system only).
    #[serde(default)]
    pub record_entropy: bool,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidInput(s));
        if self.cells < 4 {
            return bad(format!("at least 4 cells are required, got {}", self.cells));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("CFL number must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.tau > 0.0) {
            return bad(format!("relaxation time must be positive, got {}", self.tau));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return bad(format!("domain length must be positive, got {}", self.length));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("final time must be non-negative, got {}", self.t_final));
        }
        if !(self.m > 0.0 && self.kb > 0.0) {
            return bad("m and kB must be positive".into());
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0 && **t <= self.t_final)) {
            return bad(format!("snapshot time {t} outside [0, {}]", self.t_final));
        }
        if self.record_entropy && self.closure != ClosureKind::Gaussian10 {
            return bad("entropy tracking is available for the gaussian10 closure only".into());
        }
        Ok(())
    }

    pub fn gas(&self) -> GasModel {
        GasModel {
            m: self.m,
            kb: self.kb,
            ..GasModel::default()
        }
    }

    pub fn dx(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx()
    }
}

/// Moment vectors of all cells at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellState {
    pub time: f64,
    pub cells: Vec<Vec<f64>>,
}

impl CellState {
    pub fn moment_vector(&self, closure: &SimClosure, i: usize) -> MomentVector {
        MomentVector {
            basis: closure.basis.clone(),
            values: self.cells[i].clone(),
        }
    }
}

/// Realizability-guard intervention: the nonequilibrium part of `cell` was
/// multiplied by `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Intervention {
    pub cell: usize,
    pub time: f64,
    pub scale: f64,
}

pub const CONSERVED_LABELS: [&str; 5] = ["mass", "momentum_1", "momentum_2", "momentum_3", "energy"];

/// Domain totals of the conserved densities and what crossed the boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationLedger {
    pub labels: Vec<String>,
    pub initial: [f64; 5],
    pub final_totals: [f64; 5],
    /// Time-integrated flux entering through the two ends.
    pub boundary_inflow: [f64; 5],
    /// `final - initial - inflow`, relative to the scale of each quantity.
    pub relative_residual: [f64; 5],
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub snapshots: Vec<CellState>,
    pub ledger: ConservationLedger,
    pub interventions: Vec<Intervention>,
    pub steps: usize,
    /// Total entropy at the start and after every step, when recorded.
    pub entropy: Vec<f64>,
}

/// Rusanov flux `(F(l) + F(r))/2 - a (r - l)/2` with `a` the larger spectral
/// radius of the two states.
pub fn numerical_flux(left: &[f64], right: &[f64], closure: &SimClosure) -> Result<Vec<f64>> {
    let a = closure.max_speed(left)?.max(closure.max_speed(right)?);
    let fl = closure.flux_x(left)?;
    let fr = closure.flux_x(right)?;
    Ok(rusanov(&fl, &fr, left, right, a))
}

fn rusanov(fl: &[f64], fr: &[f64], l: &[f64], r: &[f64], a: f64) -> Vec<f64> {
    (0..fl.len())
        .map(|k| 0.5 * (fl[k] + fr[k]) - 0.5 * a * (r[k] - l[k]))
        .collect()
}

/// Exact relaxation over `dt`: `u_E + (u - u_E) exp(-dt/tau)`, with the
/// conserved components copied unchanged.
pub fn step_bgk(u: &[f64], dt: f64, tau: f64, closure: &SimClosure) -> Result<Vec<f64>> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidInput(format!("relaxation time must be positive, got {tau}")));
    }
    let ue = closure.equilibrium(u)?;
    let decay = (-dt / tau).exp();
    let mut out: Vec<f64> = ue.iter().zip(u).map(|(e, x)| e + (x - e) * decay).collect();
    for k in closure.conserved_components() {
        out[k] = u[k];
    }
    Ok(out)
}

/// Pulls a cell back into the admissible set by halving its nonequilibrium
/// part until it passes. Returns the applied scale (1 when untouched).
pub fn guard(u: &mut [f64], closure: &SimClosure) -> std::result::Result<f64, String> {
    if closure.check_realizable(u).is_ok() {
        return Ok(1.0);
    }
    let ue = closure.equilibrium(u).map_err(|e| e.to_string())?;
    let mut s = 1.0;
    for _ in 0..40 {
        s *= 0.5;
        let w: Vec<f64> = ue.iter().zip(u.iter()).map(|(e, x)| e + s * (x - e)).collect();
        if closure.check_realizable(&w).is_ok() {
            u.copy_from_slice(&w);
            return Ok(s);
        }
    }
    closure.check_realizable(&ue)?;
    u.copy_from_slice(&ue);
    Ok(0.0)
}

pub fn initial_state(config: &SimConfig, closure: &SimClosure) -> Result<Vec<Vec<f64>>> {
    let r = config.kb / config.m;
    let eq = |p: &Primitive| -> Result<Vec<f64>> {
        if !(p.rho > 0.0 && p.t > 0.0) {
            return Err(Error::InvalidInput(format!(
                "initial state needs rho > 0 and T > 0 (rho = {}, T = {})",
                p.rho, p.t
            )));
        }
        Ok(closure.equilibrium_from(p.rho, p.v, r * p.t))
    };
    let n = config.cells;
    let cells = match &config.initial {
        InitialCondition::Uniform { state } => vec![eq(state)?; n],
        InitialCondition::Riemann { left, right, x0 } => {
            let x0 = x0.unwrap_or(0.5 * config.length);
            let (l, r) = (eq(left)?, eq(right)?);
            (0..n)
                .map(|i| if config.cell_center(i) < x0 { l.clone() } else { r.clone() })
                .collect()
        }
        InitialCondition::Smooth { base, amplitude, mode } => {
            if !(amplitude.abs() < 1.0) {
                return Err(Error::InvalidInput(format!("perturbation amplitude must be below 1, got {amplitude}")));
            }
            let k = 2.0 * std::f64::consts::PI * *mode as f64 / config.length;
            (0..n)
                .map(|i| {
                    let p = Primitive {
                        rho: base.rho * (1.0 + amplitude * (k * config.cell_center(i)).sin()),
                        ..*base
                    };
                    eq(&p)
                })
                .collect::<Result<_>>()?
        }
        InitialCondition::Cells { values } => {
            if values.len() != n {
                return Err(Error::InvalidInput(format!("expected {n} initial cells, got {}", values.len())));
            }
            if let Some(v) = values.iter().find(|v| v.len() != closure.len()) {
                return Err(Error::InvalidInput(format!(
                    "cell vectors need {} components, got {}",
                    closure.len(),
                    v.len()
                )));
            }
            values.clone()
        }
    };
    for (i, u) in cells.iter().enumerate() {
        closure.check_realizable(u).map_err(|reason| Error::RealizabilityLoss {
            cell: i,
            time: 0.0,
            reason,
        })?;
    }
    Ok(cells)
}

fn totals(cells: &[Vec<f64>], closure: &SimClosure, dx: f64) -> [f64; 5] {
    let mut t = [0.0; 5];
    for u in cells {
        let c = closure.conserved(u);
        for k in 0..5 {
            t[k] += c[k] * dx;
        }
    }
    t
}

fn total_entropy(cells: &[Vec<f64>], closure: &SimClosure, gas: &GasModel, dx: f64) -> Result<f64> {
    let h: Vec<f64> = cells
        .par_iter()
        .map(|u| closure.entropy_density(u, gas).expect("gaussian closure"))
        .collect::<Result<_>>()?;
    Ok(h.iter().sum::<f64>() * dx)
}

pub fn run(config: &SimConfig) -> Result<RunResult> {
    config.validate()?;
    let gas = config.gas();
    let closure = SimClosure::new(config.closure, &gas)?;
    let n = config.cells;
    let dx = config.dx();
    let mut u = initial_state(config, &closure)?;
    let initial = totals(&u, &closure, dx);
    let mut inflow = [0.0; 5];
    let mut targets: Vec<f64> = config.snapshot_times.clone();
    targets.push(config.t_final);
    targets.sort_by(f64::total_cmp);
    targets.dedup();
    let mut snapshots = Vec::new();
    let mut interventions = Vec::new();
    let mut entropy = Vec::new();
    if config.record_entropy {
        entropy.push(total_entropy(&u, &closure, &gas, dx)?);
    }
    let mut t = 0.0;
    let mut steps = 0;
    let mut next = 0;
    let periodic = config.boundary == Boundary::Periodic;
    let loss = |cell: usize, time: f64, e: Error| Error::RealizabilityLoss {
        cell,
        time,
        reason: e.to_string(),
    };
    loop {
        while next < targets.len() && targets[next] <= t {
            snapshots.push(CellState {
                time: t,
                cells: u.clone(),
            });
            next += 1;
        }
        if next >= targets.len() {
            break;
        }
        if steps >= config.max_steps {
            return Err(Error::MaxIterations {
                iterations: steps,
                residual: config.t_final - t,
            });
        }
        let speed: Vec<f64> = u
            .par_iter()
            .enumerate()
            .map(|(i, c)| closure.max_speed(c).map_err(|e| loss(i, t, e)))
            .collect::<Result<_>>()?;
        let fluxes: Vec<Vec<f64>> = u
            .par_iter()
            .enumerate()
            .map(|(i, c)| closure.flux_x(c).map_err(|e| loss(i, t, e)))
            .collect::<Result<_>>()?;
        let lam = speed.iter().copied().fold(0.0, f64::max);
        if !(lam > 0.0 && lam.is_finite()) {
            return Err(Error::RealizabilityLoss {
                cell: 0,
                time: t,
                reason: format!("invalid maximum speed {lam}"),
            });
        }
        let mut dt = config.cfl * dx / lam;
        let target = targets[next];
        let last = t + dt >= target - 1e-12 * target.max(dx);
        if last {
            dt = target - t;
        }
        // Interface k lies between cells k-1 and k; ghosts copy the edge cell.
        let left_of = |k: usize| if k == 0 { if periodic { n - 1 } else { 0 } } else { k - 1 };
        let right_of = |k: usize| if k == n { if periodic { 0 } else { n - 1 } } else { k };
        let iface: Vec<Vec<f64>> = (0..=n)
            .into_par_iter()
            .map(|k| {
                let (l, r) = (left_of(k), right_of(k));
                let a = speed[l].max(speed[r]);
                rusanov(&fluxes[l], &fluxes[r], &u[l], &u[r], a)
            })
            .collect();
        let lam_dt = dt / dx;
        let mut new: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                u[i].iter()
                    .enumerate()
                    .map(|(a, x)| x - lam_dt * (iface[i + 1][a] - iface[i][a]))
                    .collect()
            })
            .collect();
        if !periodic {
            let (fin, fout) = (closure.conserved(&iface[0]), closure.conserved(&iface[n]));
            for k in 0..5 {
                inflow[k] += dt * (fin[k] - fout[k]);
            }
        }
        let time = if last { target } else { t + dt };
        new = new
            .into_par_iter()
            .enumerate()
            .map(|(i, c)| step_bgk(&c, dt, config.tau, &closure).map_err(|e| loss(i, time, e)))
            .collect::<Result<_>>()?;
        for (i, c) in new.iter_mut().enumerate() {
            let s = guard(c, &closure).map_err(|reason| Error::RealizabilityLoss { cell: i, time, reason })?;
            if s < 1.0 {
                log::info!("realizability guard: cell {i} at t = {time:e}, nonequilibrium scaled by {s:e}");
                interventions.push(Intervention { cell: i, time, scale: s });
            }
        }
        u = new;
        t = time;
        steps += 1;
        if config.record_entropy {
            entropy.push(total_entropy(&u, &closure, &gas, dx)?);
        }
    }
    let final_totals = totals(&u, &closure, dx);
    let mut relative_residual = [0.0; 5];
    // Momentum is measured against sqrt(mass * energy), which stays finite
    // when the net momentum vanishes.
    let momentum_scale = (initial[0] * initial[4]).abs().sqrt().max(1e-300);
    for k in 0..5 {
        let scale = if k == 0 || k == 4 { initial[k].abs().max(1e-300) } else { momentum_scale };
        relative_residual[k] = (final_totals[k] - initial[k] - inflow[k]) / scale;
    }
    Ok(RunResult {
        snapshots,
        ledger: ConservationLedger {
            labels: CONSERVED_LABELS.iter().map(|s| s.to_string()).collect(),
            initial,
            final_totals,
            boundary_inflow: inflow,
            relative_residual,
        },
        interventions,
        steps,
        entropy,
    })
}

/// Snapshot as CSV with cell centres and primitive fields.
pub fn snapshot_csv(config: &SimConfig, closure: &SimClosure, snap: &CellState) -> Result<String> {
    let mut s = String::from(closure.csv_header());
    s.push('\n');
    for (i, u) in snap.cells.iter().enumerate() {
        let mut row = vec![fmt_num(config.cell_center(i))];
        row.extend(closure.csv_fields(u)?.into_iter().map(fmt_num));
        s.push_str(&row.join(","));
        s.push('\n');
    }
    Ok(s)
}

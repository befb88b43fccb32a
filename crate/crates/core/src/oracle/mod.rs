//! Independent numerical solvers for the four master equations.
//!
//! The closed forms in [`crate::evolutions`] are checked against direct
//! integration of the equations of motion: RK4 for the Markovian and
//! correlated-projection equations, RK4 on an augmented local system for the
//! exponential memory kernel, and a trapezoid Volterra scheme for the
//! post-Markovian equation. All solvers work in the interaction picture.

mod ode;
mod volterra;

pub use ode::{solve_correlated, solve_markovian, solve_memory_kernel};
pub use volterra::{solve_post_markovian, solve_volterra_ide};

use crate::evolutions::{evolve, ModelParams};
use crate::state::{min_eigenvalue, BlochState, Trajectory};
use crate::{Error, Result};

/// Trace drift beyond this aborts a run.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-9;

/// Eigenvalues below `-POSITIVITY_TOLERANCE` count as violations.
pub const POSITIVITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    TrapezoidVolterra,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub method: Method,
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64, method: Method) -> Result<Self> {
        let cfg = Self { dt, t_end, method };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn rk4(dt: f64, t_end: f64) -> Result<Self> {
        Self::new(dt, t_end, Method::Rk4)
    }

    pub fn volterra(dt: f64, t_end: f64) -> Result<Self> {
        Self::new(dt, t_end, Method::TrapezoidVolterra)
    }

    /// Default step: `1e-4` in units of the shortest of `1/omega` and the
    /// inverse rates of `model`.
    pub fn default_for(model: &ModelParams, t_end: f64, method: Method) -> Result<Self> {
        use crate::evolutions::Dynamics::*;
        let fastest = match *model.dynamics() {
            MarkovianProjection { gamma2 } => gamma2,
            CorrelatedProjection { gamma } => gamma,
            MemoryKernel { gamma0, gamma } | PostMarkovian { gamma0, gamma } => gamma0.max(gamma),
        }
        .max(model.omega());
        Self::new(1e-4 / fastest, t_end, method)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_end = {} must be at least dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(())
    }

    /// Number of steps; the effective step is `t_end / steps`.
    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }

    pub fn effective_dt(&self) -> f64 {
        self.t_end / self.steps() as f64
    }
}

/// Largest entrywise discrepancy between two trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub max_abs: f64,
    pub at_time: f64,
    /// Per-entry maxima in the order `rho_11, rho_12, rho_21, rho_22`.
    pub per_entry: [f64; 4],
}

pub fn compare(analytic: &Trajectory, numeric: &Trajectory) -> Result<Deviation> {
    if analytic.picture() != numeric.picture() {
        return Err(Error::GridMismatch(format!(
            "pictures differ: {:?} vs {:?}",
            analytic.picture(),
            numeric.picture()
        )));
    }
    if analytic.len() != numeric.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples vs {}",
            analytic.len(),
            numeric.len()
        )));
    }
    let scale = analytic.final_time().abs().max(numeric.final_time().abs());
    for (&ta, &tb) in analytic.times().iter().zip(numeric.times()) {
        if (ta - tb).abs() > 1e-12 * scale.max(1.0) {
            return Err(Error::GridMismatch(format!("time {ta} vs {tb}")));
        }
    }
    let mut dev = Deviation {
        max_abs: 0.0,
        at_time: 0.0,
        per_entry: [0.0; 4],
    };
    for ((a, b), &t) in analytic
        .states()
        .iter()
        .zip(numeric.states())
        .zip(analytic.times())
    {
        let (ea, eb) = (a.entries(), b.entries());
        for (slot, (i, j)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
            let d = (ea[i][j] - eb[i][j]).norm();
            if d > dev.per_entry[slot] {
                dev.per_entry[slot] = d;
            }
            if d > dev.max_abs {
                dev.max_abs = d;
                dev.at_time = t;
            }
        }
    }
    Ok(dev)
}

/// Numerical solution for `model` in the interaction picture.
pub fn solve(model: &ModelParams, init: &BlochState, cfg: &SolverConfig) -> Result<Trajectory> {
    use crate::evolutions::Dynamics::*;
    match *model.dynamics() {
        MarkovianProjection { gamma2 } => solve_markovian(gamma2, init, cfg),
        CorrelatedProjection { gamma } => solve_correlated(gamma, gamma, init, cfg),
        MemoryKernel { gamma0, gamma } => solve_memory_kernel(gamma0, gamma, init, cfg),
        PostMarkovian { gamma0, gamma } => solve_post_markovian(gamma0, gamma, init, cfg),
    }
}

/// Closed form against its oracle, both in the Schroedinger picture on the
/// oracle's grid.
pub fn check_closed_form(model: &ModelParams, init: &BlochState, cfg: &SolverConfig) -> Result<Deviation> {
    let numeric = solve(model, init, cfg)?.into_schroedinger(model.omega());
    let analytic = crate::evolutions::trajectory(model, init, cfg.t_end, cfg.steps())?;
    compare(&analytic, &numeric)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityViolation {
    pub theta: f64,
    pub t: f64,
    pub lambda_min: f64,
}

/// All grid points where the closed-form state has an eigenvalue below
/// `-POSITIVITY_TOLERANCE`.
pub fn positivity_scan(model: &ModelParams, thetas: &[f64], times: &[f64]) -> Result<Vec<PositivityViolation>> {
    if thetas.is_empty() || times.is_empty() {
        return Err(Error::InvalidConfig("positivity scan needs nonempty grids".into()));
    }
    let mut out = Vec::new();
    for &theta in thetas {
        let init = BlochState::new(theta, 0.0)?;
        for &t in times {
            let lambda_min = min_eigenvalue(&evolve(model, &init, t)?);
            if lambda_min < -POSITIVITY_TOLERANCE {
                out.push(PositivityViolation { theta, t, lambda_min });
            }
        }
    }
    Ok(out)
}

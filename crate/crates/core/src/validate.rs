//! Self-check suite: oracle comparisons, limit checks and positivity scans.
//!
//! [`run_validation`] evaluates every check and collects them in a
//! [`ValidationReport`]. Memory-kernel positivity findings are reported as
//! informational rows and never fail the run.

use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use crate::evolutions::{evolve, trajectory, xi_memory, xi_post, Dynamics, ModelParams};
use crate::figures::figure_models;
use crate::oracle::{compare, positivity_scan, solve, SolverConfig};
use crate::phase::{phase_closed, phase_general, wrap_phase, QuadratureConfig};
use crate::state::BlochState;
use crate::sweep::theta_grid;
use crate::{Error, Result};

/// Limits used by the suite. Every field can be overridden by key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// RK4 oracles (Markovian, correlated, augmented memory kernel).
    pub rk4: f64,
    /// Memory kernel against its augmented system on `tau in [0, 10]`.
    pub memory: f64,
    /// Post-Markovian against the Volterra solver.
    pub volterra: f64,
    /// Minimum error reduction when the Volterra step is halved.
    pub halving: f64,
    /// Minimum error reduction when the RK4 step is halved.
    pub rk4_order: f64,
    pub trace: f64,
    /// Closed-form vs general phase evaluation, radians.
    pub path: f64,
    /// Change of the phase from 2000 to 4000 quadrature steps, radians.
    pub convergence: f64,
    pub unitary: f64,
    /// `|phase(0.999 pi)|`, units of pi.
    pub pole: f64,
    /// Memory vs post-Markovian phase at `gamma0 << gamma`, units of pi.
    pub kinship: f64,
    /// Coefficient `c` in `|Delta rho_11| <= c (gamma t)^2`.
    pub short_time: f64,
    pub continuity: f64,
    pub markov_limit: f64,
    pub xi_kinship: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rk4: 1e-8,
            memory: 1e-6,
            volterra: 1e-4,
            halving: 1.9,
            rk4_order: 8.0,
            trace: 1e-10,
            path: 1e-6,
            convergence: 1e-8,
            unitary: 1e-5,
            pole: 0.01,
            kinship: 0.01,
            short_time: 2.0,
            continuity: 1e-4,
            markov_limit: 0.02,
            xi_kinship: 0.02,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 15] = [
        "rk4",
        "memory",
        "volterra",
        "halving",
        "rk4-order",
        "trace",
        "path",
        "convergence",
        "unitary",
        "pole",
        "kinship",
        "short-time",
        "continuity",
        "markov-limit",
        "xi-kinship",
    ];

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance {key} = {value} must be finite and >= 0")));
        }
        let slot = match key {
            "rk4" => &mut self.rk4,
            "memory" => &mut self.memory,
            "volterra" => &mut self.volterra,
            "halving" => &mut self.halving,
            "rk4-order" => &mut self.rk4_order,
            "trace" => &mut self.trace,
            "path" => &mut self.path,
            "convergence" => &mut self.convergence,
            "unitary" => &mut self.unitary,
            "pole" => &mut self.pole,
            "kinship" => &mut self.kinship,
            "short-time" => &mut self.short_time,
            "continuity" => &mut self.continuity,
            "markov-limit" => &mut self.markov_limit,
            "xi-kinship" => &mut self.xi_kinship,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "unknown tolerance `{key}` (expected one of {})",
                    Self::KEYS.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }

    /// Applies a `KEY=VALUE` override.
    pub fn apply(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("expected KEY=VALUE, got `{spec}`")))?;
        let value = value
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidConfig(format!("bad tolerance value in `{spec}`")))?;
        self.set(key.trim(), value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
    /// Reported only.
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub limit: f64,
    pub bound: Bound,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, limit, bound: Bound::AtMost }
    }

    fn at_least(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, limit, bound: Bound::AtLeast }
    }

    fn info(name: impl Into<String>, measured: f64) -> Self {
        Self { name: name.into(), measured, limit: f64::NAN, bound: Bound::Info }
    }

    /// NaN measurements never pass.
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.measured <= self.limit,
            Bound::AtLeast => self.measured >= self.limit,
            Bound::Info => true,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (status, relation) = match self.bound {
            Bound::Info => ("INFO", ""),
            Bound::AtMost => (if self.passed() { "PASS" } else { "FAIL" }, "<="),
            Bound::AtLeast => (if self.passed() { "PASS" } else { "FAIL" }, ">="),
        };
        if self.bound == Bound::Info {
            write!(f, "{status}  {:<52} {:>12.4e}", self.name, self.measured)
        } else {
            write!(
                f,
                "{status}  {:<52} {:>12.4e} {relation} {:.4e}",
                self.name, self.measured, self.limit
            )
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write_table<W: Write>(&self, mut out: W) -> Result<()> {
        for check in &self.checks {
            writeln!(out, "{check}")?;
        }
        let failed = self.failures().count();
        writeln!(
            out,
            "{} checks, {} failed",
            self.checks.len(),
            failed
        )?;
        Ok(())
    }
}

fn model(d: Dynamics) -> ModelParams {
    ModelParams::new(d, 1.0).expect("validation parameters are valid")
}

/// The 19-point angle set `0.05 pi, 0.10 pi, ..., 0.95 pi`.
pub fn check_angles() -> Vec<f64> {
    (1..=19).map(|k| k as f64 * 0.05 * PI).collect()
}

/// Deviation of an oracle run from the closed form and its worst trace drift.
fn oracle_run(model: &ModelParams, theta: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
    let init = BlochState::new(theta, 0.0)?;
    let numeric = solve(model, &init, cfg)?.into_schroedinger(model.omega());
    let analytic = trajectory(model, &init, cfg.t_end, cfg.steps())?;
    let dev = compare(&analytic, &numeric)?;
    let drift = numeric
        .states()
        .iter()
        .map(|s| (s.trace() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((dev.max_abs, drift))
}

fn max_pair(runs: Result<Vec<(f64, f64)>>) -> Result<(f64, f64)> {
    Ok(runs?
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a.max(x), b.max(y))))
}

fn oracle_checks(tol: &Tolerances, checks: &mut Vec<Check>) -> Result<()> {
    let mut drift = 0.0f64;
    let angles = check_angles();

    for rate in [0.1, 1.0] {
        for (label, d) in [
            ("markovian", Dynamics::MarkovianProjection { gamma2: rate }),
            ("correlated", Dynamics::CorrelatedProjection { gamma: rate }),
        ] {
            let m = model(d);
            let cfg = SolverConfig::rk4(1e-4, 3.0 * m.quasi_period())?;
            let (dev, tr) = max_pair(angles.par_iter().map(|&th| oracle_run(&m, th, &cfg)).collect())?;
            drift = drift.max(tr);
            checks.push(Check::at_most(format!("{label} oracle {}", d.params_label()), dev, tol.rk4));
        }
    }

    for r in [0.1, 0.25, 0.5, 2.5] {
        let m = model(Dynamics::MemoryKernel { gamma0: r, gamma: 1.0 });
        let cfg = SolverConfig::rk4(1e-4, 10.0)?;
        let (dev, tr) = max_pair([0.0, 0.5 * PI].par_iter().map(|&th| oracle_run(&m, th, &cfg)).collect())?;
        drift = drift.max(tr);
        checks.push(Check::at_most(format!("memory oracle R={r}"), dev, tol.memory));
    }

    for r in [0.1, 1.0, 10.0] {
        let m = model(Dynamics::PostMarkovian { gamma0: r, gamma: 1.0 });
        let runs: Vec<(f64, f64)> = [(0.0, 1e-3), (0.5 * PI, 1e-3), (0.5 * PI, 5e-4)]
            .par_iter()
            .map(|&(th, dt)| oracle_run(&m, th, &SolverConfig::volterra(dt, 10.0)?))
            .collect::<Result<_>>()?;
        drift = runs.iter().fold(drift, |d, r| d.max(r.1));
        let dev = runs[0].0.max(runs[1].0);
        checks.push(Check::at_most(format!("post-Markovian oracle R={r}"), dev, tol.volterra));
        checks.push(Check::at_least(
            format!("post-Markovian dt-halving ratio R={r}"),
            runs[1].0 / runs[2].0,
            tol.halving,
        ));
    }

    let kernel_sets: Vec<ModelParams> = figure_models()
        .into_iter()
        .filter(|m| matches!(m.dynamics(), Dynamics::MemoryKernel { .. } | Dynamics::PostMarkovian { .. }))
        .collect();
    let runs: Vec<(f64, f64)> = kernel_sets
        .par_iter()
        .map(|m| {
            let t_end = 3.0 * m.quasi_period();
            let cfg = match *m.dynamics() {
                Dynamics::PostMarkovian { gamma, .. } => {
                    let n = ((t_end * gamma / 1e-3).round() as usize).clamp(1, 20_000);
                    SolverConfig::volterra(t_end / n as f64, t_end)?
                }
                _ => SolverConfig::default_for(m, t_end, crate::oracle::Method::Rk4)?,
            };
            oracle_run(m, 0.3 * PI, &cfg)
        })
        .collect::<Result<_>>()?;
    for (m, (dev, tr)) in kernel_sets.iter().zip(runs) {
        drift = drift.max(tr);
        let (label, limit) = match m.dynamics() {
            Dynamics::PostMarkovian { .. } => ("post-Markovian", tol.volterra),
            _ => ("memory", tol.rk4),
        };
        checks.push(Check::at_most(
            format!("{label} oracle over 3T {}", m.dynamics().params_label()),
            dev,
            limit,
        ));
    }

    let m = model(Dynamics::MarkovianProjection { gamma2: 1.0 });
    let t_end = 3.0 * m.quasi_period();
    let coarse = oracle_run(&m, 0.5 * PI, &SolverConfig::rk4(t_end / 60.0, t_end)?)?.0;
    let fine = oracle_run(&m, 0.5 * PI, &SolverConfig::rk4(t_end / 120.0, t_end)?)?.0;
    checks.push(Check::at_least("RK4 dt-halving ratio", coarse / fine, tol.rk4_order));

    checks.push(Check::at_most("oracle trace drift", drift, tol.trace));
    Ok(())
}

fn phase_checks(tol: &Tolerances, checks: &mut Vec<Check>) -> Result<()> {
    let models = figure_models();
    let cfg = QuadratureConfig::default();
    let fine = QuadratureConfig::with_steps(4000);
    let pairs: Vec<(ModelParams, f64)> = models
        .iter()
        .flat_map(|m| check_angles().into_iter().map(move |th| (*m, th)))
        .collect();
    let (path, conv) = max_pair(
        pairs
            .par_iter()
            .map(|(m, th)| {
                let closed = phase_closed(m, *th, &cfg)?;
                let traj = trajectory(m, &BlochState::new(*th, 0.0)?, m.quasi_period(), cfg.steps)?;
                let general = phase_general(&traj, &cfg)?;
                let refined = phase_closed(m, *th, &fine)?;
                Ok((
                    wrap_phase(closed.principal - general.principal).abs(),
                    wrap_phase(closed.principal - refined.principal).abs(),
                ))
            })
            .collect(),
    )?;
    checks.push(Check::at_most("phase path agreement", path, tol.path));
    checks.push(Check::at_most("phase quadrature convergence", conv, tol.convergence));

    let unitary = [
        Dynamics::MarkovianProjection { gamma2: 1e-12 },
        Dynamics::CorrelatedProjection { gamma: 1e-12 },
        Dynamics::MemoryKernel { gamma0: 1e-12, gamma: 1.0 },
        Dynamics::PostMarkovian { gamma0: 1e-12, gamma: 1.0 },
    ];
    for d in unitary {
        let m = model(d);
        let mut worst = 0.0f64;
        for th in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
            let expected = -PI * (1.0 - th.cos());
            worst = worst.max(wrap_phase(phase_closed(&m, th, &cfg)?.principal - expected).abs());
        }
        checks.push(Check::at_most(format!("unitary limit {}", d.name()), worst, tol.unitary));
    }

    for d in [
        Dynamics::MarkovianProjection { gamma2: 1.0 },
        Dynamics::CorrelatedProjection { gamma: 1.0 },
        Dynamics::MemoryKernel { gamma0: 1.0, gamma: 1.0 },
        Dynamics::PostMarkovian { gamma0: 1.0, gamma: 1.0 },
    ] {
        let p = phase_closed(&model(d), 0.0, &cfg)?;
        checks.push(Check::at_most(
            format!("zero phase at theta=0 {}", d.name()),
            p.principal.abs() + p.unwrapped.abs(),
            0.0,
        ));
    }

    let mut pole = 0.0f64;
    for m in &models {
        pole = pole.max(phase_closed(m, 0.999 * PI, &cfg)?.principal.abs() / PI);
    }
    checks.push(Check::at_most("phase near theta=pi (units of pi)", pole, tol.pole));

    let memory = model(Dynamics::MemoryKernel { gamma0: 0.1, gamma: 10.0 });
    let post = model(Dynamics::PostMarkovian { gamma0: 0.1, gamma: 10.0 });
    let kin = theta_grid(0.01 * PI, 0.99 * PI, 99)
        .par_iter()
        .map(|&th| {
            let a = phase_closed(&memory, th, &cfg)?.principal;
            let b = phase_closed(&post, th, &cfg)?.principal;
            Ok(wrap_phase(a - b).abs() / PI)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::at_most("memory/post-Markovian phase kinship R=0.01", kin, tol.kinship));
    Ok(())
}

fn limit_checks(tol: &Tolerances, checks: &mut Vec<Check>) -> Result<()> {
    let taus: Vec<f64> = (0..=2000).map(|k| k as f64 * 0.01).collect();

    let mut jump = 0.0f64;
    for &tau in &taus {
        let c = xi_memory(0.25, tau)?;
        for r in [0.25 - 1e-6, 0.25 + 1e-6] {
            jump = jump.max((xi_memory(r, tau)? - c).abs());
        }
    }
    checks.push(Check::at_most("memory xi continuity across 4R=1", jump, tol.continuity));

    let short: Vec<f64> = taus.iter().copied().filter(|&t| t <= 10.0).collect();
    for (label, xi) in [("memory", xi_memory as fn(f64, f64) -> Result<f64>), ("post-Markovian", xi_post)] {
        let mut sup = 0.0f64;
        for &tau in &short {
            sup = sup.max((xi(0.01, tau)? - (-0.01 * tau).exp()).abs());
        }
        checks.push(Check::at_most(format!("{label} xi Markovian limit R=0.01"), sup, tol.markov_limit));
    }

    let mut kin = 0.0f64;
    for r in [0.001, 0.01, 0.025, 0.05] {
        for &tau in &short {
            kin = kin.max((xi_post(r, tau)? - xi_memory(r, tau)?).abs());
        }
    }
    checks.push(Check::at_most("xi kinship R<=0.05", kin, tol.xi_kinship));

    let mut ratio = 0.0f64;
    for gamma in [0.1, 1.0] {
        let mk = model(Dynamics::MarkovianProjection { gamma2: gamma });
        let cr = model(Dynamics::CorrelatedProjection { gamma });
        for th in theta_grid(0.0, PI, 101) {
            let init = BlochState::new(th, 0.0)?;
            for k in 1..=100 {
                let t = k as f64 * 0.001 / gamma;
                let d = (evolve(&mk, &init, t)?.rho11() - evolve(&cr, &init, t)?.rho11()).abs();
                ratio = ratio.max(d / (gamma * t).powi(2));
            }
        }
    }
    checks.push(Check::at_most(
        "short-time markovian/correlated |d rho11|/(gamma t)^2",
        ratio,
        tol.short_time,
    ));
    Ok(())
}

fn positivity_checks(checks: &mut Vec<Check>) -> Result<()> {
    let thetas = theta_grid(0.01 * PI, 0.99 * PI, 99);
    let models = figure_models();
    let scans: Vec<(ModelParams, Vec<crate::oracle::PositivityViolation>)> = models
        .par_iter()
        .map(|m| {
            let times = theta_grid(0.0, 3.0 * m.quasi_period(), 601);
            Ok((*m, positivity_scan(m, &thetas, &times)?))
        })
        .collect::<Result<_>>()?;
    for (m, found) in scans {
        let label = format!("positivity {} {}", m.dynamics().name(), m.dynamics().params_label());
        if m.dynamics().preserves_positivity() {
            checks.push(Check::at_most(format!("{label} violations"), found.len() as f64, 0.0));
        } else {
            let worst = found.iter().map(|v| v.lambda_min).fold(0.0, f64::min);
            checks.push(Check::info(format!("{label} violations"), found.len() as f64));
            checks.push(Check::info(format!("{label} min eigenvalue"), worst));
        }
    }
    Ok(())
}

/// Runs the whole suite.
pub fn run_validation(tol: &Tolerances) -> Result<ValidationReport> {
    let mut checks = Vec::new();
    oracle_checks(tol, &mut checks)?;
    phase_checks(tol, &mut checks)?;
    limit_checks(tol, &mut checks)?;
    positivity_checks(&mut checks)?;
    Ok(ValidationReport { checks })
}

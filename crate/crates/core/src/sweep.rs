//! Theta sweeps of the quasi-period phase and their CSV encoding.
//!
//! All angles and phases are written in units of pi. Numbers carry 12
//! significant digits in plain decimal notation; rows are LF-terminated and
//! always appear in ascending theta regardless of how many threads computed
//! them.

use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

use crate::evolutions::ModelParams;
use crate::phase::{phase_closed, PhaseResult, QuadratureConfig};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "model,params,theta_over_pi,gp_principal_over_pi,gp_unwrapped_over_pi,visibility";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub model: ModelParams,
    pub theta_start: f64,
    pub theta_end: f64,
    pub theta_count: usize,
    pub steps: usize,
}

impl SweepSpec {
    /// `0.01 pi ..= 0.99 pi` in 99 points with 2000 quadrature steps.
    pub fn new(model: ModelParams) -> Self {
        Self {
            model,
            theta_start: 0.01 * PI,
            theta_end: 0.99 * PI,
            theta_count: 99,
            steps: 2000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_count == 0 {
            return Err(Error::InvalidConfig("theta count must be at least 1".into()));
        }
        for theta in [self.theta_start, self.theta_end] {
            if !(0.0..=PI).contains(&theta) {
                return Err(Error::InvalidAngle(theta));
            }
        }
        QuadratureConfig::with_steps(self.steps).validate()
    }

    /// Evenly spaced grid; a single point sits at `theta_start`.
    pub fn thetas(&self) -> Vec<f64> {
        theta_grid(self.theta_start, self.theta_end, self.theta_count)
    }
}

pub fn theta_grid(start: f64, end: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let step = (end - start) / (count - 1) as f64;
    (0..count)
        .map(|k| if k == count - 1 { end } else { start + k as f64 * step })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub model: &'static str,
    pub params: String,
    pub theta: f64,
    pub phase: PhaseResult,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.model,
            self.params,
            format_number(self.theta / PI),
            format_number(self.phase.principal / PI),
            format_number(self.phase.unwrapped / PI),
            format_number(self.phase.visibility),
        )
    }
}

/// Phase at a single polar angle.
pub fn phase_row(model: &ModelParams, theta: f64, steps: usize) -> Result<SweepRow> {
    let phase = phase_closed(model, theta, &QuadratureConfig::with_steps(steps))?;
    Ok(SweepRow {
        model: model.dynamics().name(),
        params: model.dynamics().params_label(),
        theta,
        phase,
    })
}

/// Evaluates every grid point; `threads > 1` spreads rows over a rayon pool.
pub fn run_sweep(spec: &SweepSpec, threads: usize) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let thetas = spec.thetas();
    let eval = |&theta: &f64| phase_row(&spec.model, theta, spec.steps);
    if threads <= 1 {
        return thetas.iter().map(eval).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| thetas.par_iter().map(eval).collect())
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    out.flush()?;
    Ok(())
}

/// Plain decimal with 12 significant digits.
pub fn format_number(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() { "0".to_string() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(0, 20) as usize;
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Parses `0.5pi`, `pi`, `-pi` or a plain number of radians.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::InvalidConfig(format!("cannot parse angle `{text}`"));
    let value = if let Some(prefix) = t.strip_suffix("pi") {
        let factor = match prefix.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            p => p.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
        };
        factor * PI
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

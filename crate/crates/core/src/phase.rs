//! Mixed-state geometric phase.
//!
//! For a density matrix with spectral decomposition
//! `rho(t) = sum_i lambda_i(t) |phi_i(t)><phi_i(t)|` the kinematic phase at
//! time `tau` is
//!
//! ```text
//! Arg sum_i sqrt(lambda_i(0) lambda_i(tau)) <phi_i(0)|phi_i(tau)>
//!           exp(-int_0^tau <phi_i|d phi_i/dt> dt)
//! ```
//!
//! [`phase_general`] evaluates this for any sampled trajectory.
//! [`phase_closed`] uses the closed-form `lambda_+` eigenvector of the four
//! models, for which only the `lambda_+` branch contributes (the initial
//! state is pure) and the connection integral reduces to
//! `-omega int cos^2(theta_t/2) dt`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::evolutions::{coherence_sign, cos2_unchecked, ModelParams};
use crate::quadrature::{derivative, integrate_fn, integrate_samples};
use crate::state::{eigensystem, inner, Picture, Trajectory};
use crate::{Error, Result};

pub use crate::quadrature::Scheme;

/// Eigenvalues at or below this at `t = 0` give a branch zero weight.
const NEGLIGIBLE_WEIGHT: f64 = 1e-12;

/// Overlap modulus below which [`gauge_align`] refuses to align.
pub const ALIGNMENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    /// Phase folded into `(-pi, pi]`.
    pub principal: f64,
    /// Accumulated phase before folding.
    pub unwrapped: f64,
    /// Modulus of the complex sum whose argument is the phase.
    pub visibility: f64,
}

impl PhaseResult {
    fn trivial() -> Self {
        Self {
            principal: 0.0,
            unwrapped: 0.0,
            visibility: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub steps: usize,
    pub scheme: Scheme,
    pub degeneracy_tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            steps: 2000,
            scheme: Scheme::Simpson,
            degeneracy_tolerance: crate::state::DEGENERACY_TOLERANCE,
        }
    }
}

impl QuadratureConfig {
    pub fn with_steps(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidConfig(format!("steps = {} must be >= 2", self.steps)));
        }
        if self.scheme == Scheme::Simpson && !self.steps.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "Simpson quadrature needs an even step count, got {}",
                self.steps
            )));
        }
        if !(self.degeneracy_tolerance >= 0.0) {
            return Err(Error::InvalidConfig("degeneracy tolerance must be >= 0".into()));
        }
        Ok(())
    }
}

/// Folds an angle into `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

fn arg(z: Complex64) -> f64 {
    wrap_phase(z.arg())
}

/// Phase acquired over one quasi-period `2 pi / omega`.
pub fn phase_closed(model: &ModelParams, theta: f64, config: &QuadratureConfig) -> Result<PhaseResult> {
    phase_closed_at(model, theta, model.quasi_period(), config)
}

/// Closed-form evaluation at an arbitrary final time.
///
/// The `lambda_+` eigenvector is
/// `sin(theta_t/2)|1> + cos(theta_t/2) e^{i(phi + omega t)}|0>`, where
/// `sin(theta_t/2)` carries the sign of the coherence factor. The result is
/// `Arg[<+(0)|+(t)> exp(-i omega int_0^t cos^2(theta_s/2) ds)]`; `unwrapped`
/// is the integral term plus the argument of the endpoint overlap, which is
/// zero after a full quasi-period whenever the overlap is positive.
pub fn phase_closed_at(
    model: &ModelParams,
    theta: f64,
    t_final: f64,
    config: &QuadratureConfig,
) -> Result<PhaseResult> {
    config.validate()?;
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidAngle(theta));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::NegativeTime(t_final));
    }
    if theta == 0.0 || t_final == 0.0 {
        return Ok(PhaseResult::trivial());
    }

    let omega = model.omega();
    let integral = integrate_fn(
        |t| cos2_unchecked(model, theta, t),
        0.0,
        t_final,
        config.steps,
        config.scheme,
    );
    let connection_phase = -omega * integral;

    let cos2_end = cos2_unchecked(model, theta, t_final);
    let ground = cos2_end.sqrt();
    let excited = coherence_sign(model, t_final) * (1.0 - cos2_end).max(0.0).sqrt();
    let (s0, c0) = (0.5 * theta).sin_cos();
    let overlap = c0 * excited + s0 * ground * Complex64::from_polar(1.0, omega * t_final);

    let eta_end = crate::evolutions::eta(model, theta, t_final)?;
    let weight = (0.5 * (1.0 + eta_end)).sqrt();
    let total = weight * overlap * Complex64::from_polar(1.0, connection_phase);

    Ok(PhaseResult {
        principal: arg(total),
        unwrapped: connection_phase + arg(overlap),
        visibility: total.norm(),
    })
}

/// Returns `current` times the unit phase that makes `<previous|aligned>`
/// real and positive.
pub fn gauge_align(previous: &[Complex64; 2], current: &[Complex64; 2]) -> Result<[Complex64; 2]> {
    let overlap = inner(previous, current);
    let r = overlap.norm();
    if r < ALIGNMENT_TOLERANCE {
        return Err(Error::AlignmentImpossible { overlap: r });
    }
    let phase = overlap.conj() / r;
    Ok([current[0] * phase, current[1] * phase])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// One eigenvalue branch sampled along a trajectory, with eigenvectors made
/// continuous by successive [`gauge_align`] calls.
#[derive(Debug, Clone)]
pub struct BranchTrack {
    pub times: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<[Complex64; 2]>,
}

impl BranchTrack {
    pub fn step(&self) -> f64 {
        self.times[self.times.len() - 1] / (self.times.len() - 1) as f64
    }
}

/// Follows the sorted eigenvalue `branch` along `traj`.
///
/// An orthogonal jump between consecutive eigenvectors (an exact level
/// crossing) is reported as [`Error::Degenerate`] over the offending interval.
pub fn track_branch(traj: &Trajectory, branch: Branch) -> Result<BranchTrack> {
    let mut eigenvalues = Vec::with_capacity(traj.len());
    let mut vectors: Vec<[Complex64; 2]> = Vec::with_capacity(traj.len());
    let times = traj.times();
    for (k, rho) in traj.states().iter().enumerate() {
        let sp = eigensystem(rho);
        let (lambda, v) = match branch {
            Branch::Plus => (sp.lambda_plus, sp.vec_plus),
            Branch::Minus => (sp.lambda_minus, sp.vec_minus),
        };
        let v = match vectors.last() {
            None => v,
            Some(prev) => gauge_align(prev, &v).map_err(|_| Error::Degenerate {
                start: times[k - 1],
                end: times[k],
            })?,
        };
        eigenvalues.push(lambda);
        vectors.push(v);
    }
    Ok(BranchTrack {
        times: times.to_vec(),
        eigenvalues,
        vectors,
    })
}

/// `<phi(t_k)|d phi/dt(t_k)>` at every sample.
pub fn connection(vectors: &[[Complex64; 2]], h: f64) -> Vec<Complex64> {
    let first: Vec<Complex64> = vectors.iter().map(|v| v[0]).collect();
    let second: Vec<Complex64> = vectors.iter().map(|v| v[1]).collect();
    let d0 = derivative(&first, h);
    let d1 = derivative(&second, h);
    vectors
        .iter()
        .zip(d0.iter().zip(&d1))
        .map(|(v, (&a, &b))| inner(v, &[a, b]))
        .collect()
}

/// Norms `||d phi/dt||` at every sample.
pub fn velocity_norms(vectors: &[[Complex64; 2]], h: f64) -> Vec<f64> {
    let first: Vec<Complex64> = vectors.iter().map(|v| v[0]).collect();
    let second: Vec<Complex64> = vectors.iter().map(|v| v[1]).collect();
    let d0 = derivative(&first, h);
    let d1 = derivative(&second, h);
    d0.iter().zip(&d1).map(|(a, b)| a.norm().hypot(b.norm())).collect()
}

/// Contribution of a branch:
/// `sqrt(lambda(0) lambda(T)) <phi(0)|phi(T)> exp(-int <phi|phi'> dt)`.
pub fn branch_term(track: &BranchTrack, scheme: Scheme) -> Complex64 {
    let n = track.vectors.len();
    let weight = (track.eigenvalues[0] * track.eigenvalues[n - 1]).max(0.0).sqrt();
    let conn = connection(&track.vectors, track.step());
    let integral = integrate_samples(&conn, track.step(), scheme);
    weight * inner(&track.vectors[0], &track.vectors[n - 1]) * (-integral).exp()
}

/// Phase accumulated by a branch in the gauge whose excited amplitude is
/// real. The amplitude may change sign, so its argument is followed modulo
/// pi rather than wrapped.
fn unwrapped_branch_phase(track: &BranchTrack, scheme: Scheme) -> f64 {
    let mut alpha = track.vectors[0][0].arg();
    let rotated: Vec<[Complex64; 2]> = track
        .vectors
        .iter()
        .map(|v| {
            if v[0].norm() > 0.0 {
                let mut d = wrap_phase(v[0].arg() - alpha);
                if d > 0.5 * PI {
                    d -= PI;
                } else if d <= -0.5 * PI {
                    d += PI;
                }
                alpha += d;
            }
            let g = Complex64::from_polar(1.0, -alpha);
            [v[0] * g, v[1] * g]
        })
        .collect();
    let conn = connection(&rotated, track.step());
    let integral = integrate_samples(&conn, track.step(), scheme);
    -integral.im + arg(inner(&rotated[0], &rotated[rotated.len() - 1]))
}

/// General evaluator over a sampled Schroedinger-picture trajectory.
///
/// Branches with zero initial weight are skipped. The connection is
/// differentiated on the aligned eigenvector samples and integrated with the
/// configured scheme; `config.steps` is ignored since the trajectory fixes
/// the grid. A run of more than two consecutive degenerate samples is an error.
pub fn phase_general(traj: &Trajectory, config: &QuadratureConfig) -> Result<PhaseResult> {
    if traj.picture() != Picture::Schroedinger {
        return Err(Error::InvalidTrajectory(
            "geometric phase needs a Schroedinger-picture trajectory".into(),
        ));
    }
    check_degenerate_runs(traj, config.degeneracy_tolerance)?;

    let initial = eigensystem(&traj.states()[0]);
    let mut total = Complex64::new(0.0, 0.0);
    let mut dominant: Option<(f64, BranchTrack)> = None;
    for (branch, lambda0) in [
        (Branch::Plus, initial.lambda_plus),
        (Branch::Minus, initial.lambda_minus),
    ] {
        if lambda0 <= NEGLIGIBLE_WEIGHT {
            continue;
        }
        let track = track_branch(traj, branch)?;
        let term = branch_term(&track, config.scheme);
        total += term;
        if dominant.as_ref().is_none_or(|(m, _)| term.norm() > *m) {
            dominant = Some((term.norm(), track));
        }
    }

    let unwrapped = match &dominant {
        Some((_, track)) => unwrapped_branch_phase(track, config.scheme),
        None => 0.0,
    };
    Ok(PhaseResult {
        principal: arg(total),
        unwrapped,
        visibility: total.norm(),
    })
}

fn check_degenerate_runs(traj: &Trajectory, tol: f64) -> Result<()> {
    let times = traj.times();
    let mut run_start: Option<usize> = None;
    for (k, rho) in traj.states().iter().enumerate() {
        let gap = eigensystem(rho).gap();
        if gap < tol {
            let start = *run_start.get_or_insert(k);
            if k - start + 1 > 2 {
                let mut end = k;
                while end + 1 < traj.len() && eigensystem(&traj.states()[end + 1]).gap() < tol {
                    end += 1;
                }
                return Err(Error::Degenerate {
                    start: times[start],
                    end: times[end],
                });
            }
        } else {
            run_start = None;
        }
    }
    Ok(())
}

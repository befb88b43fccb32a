//! Geometric phases of a dissipative two-level atom.
//!
//! The crate computes the mixed-state (kinematic) geometric phase of a
//! two-level atom whose reduced density matrix evolves under one of four
//! open-system models:
//!
//! - a Markovian amplitude-damping master equation,
//! - a pair of coupled generalized-Lindblad equations obtained from a
//!   correlated projection onto a two-band environment,
//! - an integro-differential master equation with an exponential memory kernel,
//! - a post-Markovian master equation with the same kernel.
//!
//! Every closed-form evolution in [`evolutions`] has an independent numerical
//! counterpart in [`oracle`], and the phase itself can be evaluated either by
//! the quasi-period quadrature in [`phase::phase_closed`] or by the general
//! spectral evaluator [`phase::phase_general`], which only sees sampled
//! density matrices.
//!
//! ```
//! use geophase::{Dynamics, ModelParams, QuadratureConfig};
//! use geophase::phase::phase_closed;
//!
//! let model = ModelParams::new(Dynamics::MarkovianProjection { gamma2: 0.1 }, 1.0).unwrap();
//! let result = phase_closed(&model, std::f64::consts::FRAC_PI_2, &QuadratureConfig::default()).unwrap();
//! assert!(result.principal.abs() <= std::f64::consts::PI);
//! assert!(result.visibility > 0.0 && result.visibility < 1.0);
//! ```

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod evolutions;
pub mod figures;
pub mod oracle;
pub mod phase;
pub mod quadrature;
pub mod state;
pub mod sweep;
pub mod validate;

pub use evolutions::{evolve, Dynamics, ModelParams, XiBranch};
pub use phase::{PhaseResult, QuadratureConfig, Scheme};
pub use state::{BlochState, DensityMatrix2, Picture, SpectralPair, Trajectory};

pub use num_complex::Complex64;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polar angle {0} outside [0, pi]")]
    InvalidAngle(f64),

    #[error("time {0} is negative")]
    NegativeTime(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("eigenvalues degenerate over t in [{start}, {end}]")]
    Degenerate { start: f64, end: f64 },

    #[error("cannot align orthogonal vectors (overlap modulus {overlap:e})")]
    AlignmentImpossible { overlap: f64 },

    #[error("solver diverged at t = {time}: trace drift {drift:e}")]
    SolverDiverged { time: f64, drift: f64 },

    #[error("trajectory grids differ: {0}")]
    GridMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

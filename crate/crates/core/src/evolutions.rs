//! Closed-form reduced dynamics for the four master-equation families.
//!
//! Every model produces a Schroedinger-picture state of the form
//!
//! ```text
//! rho_11(t) = P(t) cos^2(theta/2)
//! rho_12(t) = 1/2 sin(theta) e^{-i(phi + omega t)} D(t)
//! ```
//!
//! with a population factor `P` and a coherence factor `D` that depend on the
//! model. The phase integrand `cos^2(theta_t/2)` and the eigenvalue gap `eta`
//! follow from `P` and `D` alone.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::state::{BlochState, DensityMatrix2, Picture, Trajectory};
use crate::{Error, Result};

/// `|1 - 4R|` (memory kernel) or `|1 - R|` (post-Markovian) below this uses the
/// limiting form of the solution.
pub const CRITICAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dynamics {
    /// Amplitude damping at rate `gamma2` from the standard projection.
    MarkovianProjection { gamma2: f64 },
    /// Coupled generalized-Lindblad equations with `gamma1 = gamma2 = gamma`
    /// and the upper band initially empty.
    CorrelatedProjection { gamma: f64 },
    /// Exponential memory kernel `gamma e^{-gamma t}` acting on an
    /// amplitude-damping Liouvillian with constant `gamma0`.
    MemoryKernel { gamma0: f64, gamma: f64 },
    /// Post-Markovian master equation with the same kernel and Liouvillian.
    PostMarkovian { gamma0: f64, gamma: f64 },
}

impl Dynamics {
    /// Short identifier used on the command line and in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            Dynamics::MarkovianProjection { .. } => "markovian",
            Dynamics::CorrelatedProjection { .. } => "correlated",
            Dynamics::MemoryKernel { .. } => "memory",
            Dynamics::PostMarkovian { .. } => "post",
        }
    }

    /// Rate constants as `name=value` pairs joined by `;`.
    pub fn params_label(&self) -> String {
        match *self {
            Dynamics::MarkovianProjection { gamma2 } => format!("gamma2={gamma2}"),
            Dynamics::CorrelatedProjection { gamma } => format!("gamma={gamma}"),
            Dynamics::MemoryKernel { gamma0, gamma } | Dynamics::PostMarkovian { gamma0, gamma } => {
                format!("gamma0={gamma0};gamma={gamma}")
            }
        }
    }

    /// Whether the dynamics is known to keep the density matrix positive.
    pub fn preserves_positivity(&self) -> bool {
        !matches!(self, Dynamics::MemoryKernel { .. })
    }
}

/// Model family plus the atomic transition frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    dynamics: Dynamics,
    omega: f64,
}

fn check_rate(name: &'static str, value: f64, strictly_positive: bool) -> Result<()> {
    let ok = value.is_finite() && if strictly_positive { value > 0.0 } else { value >= 0.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: if strictly_positive {
                "must be finite and > 0"
            } else {
                "must be finite and >= 0"
            },
        })
    }
}

impl ModelParams {
    pub fn new(dynamics: Dynamics, omega: f64) -> Result<Self> {
        check_rate("omega", omega, true)?;
        match dynamics {
            Dynamics::MarkovianProjection { gamma2 } => check_rate("gamma2", gamma2, false)?,
            Dynamics::CorrelatedProjection { gamma } => check_rate("gamma", gamma, false)?,
            Dynamics::MemoryKernel { gamma0, gamma } | Dynamics::PostMarkovian { gamma0, gamma } => {
                check_rate("gamma0", gamma0, false)?;
                check_rate("gamma", gamma, true)?;
            }
        }
        Ok(Self { dynamics, omega })
    }

    pub fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// One free precession period `2 pi / omega`.
    pub fn quasi_period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// `(P(t), D(t))`: excited-population and coherence decay factors.
    pub fn decay_factors(&self, t: f64) -> (f64, f64) {
        match self.dynamics {
            Dynamics::MarkovianProjection { gamma2 } => {
                ((-gamma2 * t).exp(), (-0.5 * gamma2 * t).exp())
            }
            Dynamics::CorrelatedProjection { gamma } => (
                0.5 * (1.0 + (-2.0 * gamma * t).exp()),
                (-0.5 * gamma * t).exp(),
            ),
            Dynamics::MemoryKernel { gamma0, gamma } => {
                let r = gamma0 / gamma;
                let tau = gamma * t;
                (xi_memory_unchecked(r, tau), xi_memory_unchecked(0.5 * r, tau))
            }
            Dynamics::PostMarkovian { gamma0, gamma } => {
                let r = gamma0 / gamma;
                let tau = gamma * t;
                (xi_post_unchecked(r, tau), xi_post_unchecked(0.5 * r, tau))
            }
        }
    }
}

/// Which analytic form of the memory-kernel solution applies for a given `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiBranch {
    /// `4R < 1`: overdamped, sinh/cosh.
    Hyperbolic,
    /// `4R > 1`: underdamped, sin/cos.
    Trigonometric,
    /// `|1 - 4R| < CRITICAL_TOLERANCE`.
    Critical,
}

impl XiBranch {
    pub fn select(r: f64) -> Self {
        let d = 1.0 - 4.0 * r;
        if d.abs() < CRITICAL_TOLERANCE {
            XiBranch::Critical
        } else if d > 0.0 {
            XiBranch::Hyperbolic
        } else {
            XiBranch::Trigonometric
        }
    }
}

fn check_xi_args(r: f64, tau: f64) -> Result<()> {
    check_rate("R", r, false)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::NegativeTime(tau));
    }
    Ok(())
}

/// Decay function of the exponential-memory-kernel master equation,
/// `x'' + x' + R x = 0`, `x(0) = 1`, `x'(0) = 0` in the scaled time `tau`.
pub fn xi_memory(r: f64, tau: f64) -> Result<f64> {
    check_xi_args(r, tau)?;
    Ok(xi_memory_unchecked(r, tau))
}

fn xi_memory_unchecked(r: f64, tau: f64) -> f64 {
    let damping = (-0.5 * tau).exp();
    match XiBranch::select(r) {
        XiBranch::Hyperbolic => {
            let s = (1.0 - 4.0 * r).sqrt();
            let x = 0.5 * tau * s;
            damping * (x.sinh() / s + x.cosh())
        }
        XiBranch::Trigonometric => {
            let s = (4.0 * r - 1.0).sqrt();
            let x = 0.5 * tau * s;
            damping * (x.sin() / s + x.cos())
        }
        XiBranch::Critical => damping * (1.0 + 0.5 * tau),
    }
}

/// Decay function of the post-Markovian master equation,
/// `(e^{-R tau} - R e^{-tau}) / (1 - R)`, with the `R = 1` limit `(1 + tau) e^{-tau}`.
pub fn xi_post(r: f64, tau: f64) -> Result<f64> {
    check_xi_args(r, tau)?;
    Ok(xi_post_unchecked(r, tau))
}

fn xi_post_unchecked(r: f64, tau: f64) -> f64 {
    let delta = r - 1.0;
    if delta.abs() < CRITICAL_TOLERANCE {
        (1.0 + tau) * (-tau).exp()
    } else if delta.abs() < 0.5 {
        // Same expression rewritten as e^{-tau} (1 + (1 - e^{-delta tau}) / delta)
        // to avoid cancellation near R = 1.
        (-tau).exp() * (1.0 - (-delta * tau).exp_m1() / delta)
    } else {
        ((-r * tau).exp() - r * (-tau).exp()) / (1.0 - r)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

/// Schroedinger-picture state at time `t` starting from the pure Bloch state.
pub fn evolve(model: &ModelParams, init: &BlochState, t: f64) -> Result<DensityMatrix2> {
    check_time(t)?;
    Ok(evolve_unchecked(model, init, t))
}

fn evolve_unchecked(model: &ModelParams, init: &BlochState, t: f64) -> DensityMatrix2 {
    let (p, d) = model.decay_factors(t);
    let theta = init.theta();
    let cos2 = (0.5 * theta).cos().powi(2);
    let rho12 = Complex64::from_polar(0.5 * theta.sin() * d, -(init.phi() + model.omega * t));
    DensityMatrix2::from_population_coherence(p * cos2, rho12)
}

/// Schroedinger-picture samples at `t_k = k * t_end / intervals`, `k = 0..=intervals`.
pub fn trajectory(
    model: &ModelParams,
    init: &BlochState,
    t_end: f64,
    intervals: usize,
) -> Result<Trajectory> {
    check_time(t_end)?;
    if intervals == 0 || t_end == 0.0 {
        return Err(Error::InvalidConfig("trajectory needs a positive span and at least one interval".into()));
    }
    let dt = t_end / intervals as f64;
    let states = (0..=intervals)
        .map(|k| evolve_unchecked(model, init, k as f64 * dt))
        .collect();
    Trajectory::uniform(dt, states, Picture::Schroedinger)
}

/// Ingredients shared by `eta` and `cos^2(theta_t/2)`.
struct Spectrum {
    /// `1 - 2 rho_11`
    imbalance: f64,
    /// `sin^2(theta) D^2 = 4 |rho_12|^2`
    coherence2: f64,
    eta: f64,
}

fn spectrum(model: &ModelParams, theta: f64, t: f64) -> Spectrum {
    let (p, d) = model.decay_factors(t);
    let imbalance = 1.0 - 2.0 * (0.5 * theta).cos().powi(2) * p;
    let coherence2 = (theta.sin() * d).powi(2);
    Spectrum {
        imbalance,
        coherence2,
        eta: (imbalance * imbalance + coherence2).sqrt(),
    }
}

/// Eigenvalue gap `lambda_+ - lambda_-`, so that `lambda_pm = (1 +- eta) / 2`.
pub fn eta(model: &ModelParams, theta: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidAngle(theta));
    }
    Ok(spectrum(model, theta, t).eta)
}

/// Ground-state weight `cos^2(theta_t/2)` of the `lambda_+` eigenvector,
///
/// ```text
/// (1 + eta - 2 rho_11)^2 / ((1 + eta - 2 rho_11)^2 + sin^2(theta) D^2)
/// ```
///
/// `theta = 0` is rejected: the expression is `0/0` once `rho_11 > 1/2`.
pub fn cos2_half_theta_t(model: &ModelParams, theta: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::InvalidAngle(theta));
    }
    Ok(cos2_unchecked(model, theta, t))
}

pub(crate) fn cos2_unchecked(model: &ModelParams, theta: f64, t: f64) -> f64 {
    let s = spectrum(model, theta, t);
    // (1 + eta - 2 rho_11)(eta - 1 + 2 rho_11) = sin^2(theta) D^2; pick the
    // cancellation-free route to the first factor.
    let numerator = if s.imbalance >= 0.0 {
        s.imbalance + s.eta
    } else {
        s.coherence2 / (s.eta - s.imbalance)
    };
    let n2 = numerator * numerator;
    let denom = n2 + s.coherence2;
    if denom == 0.0 {
        // no coherence and rho_11 > 1/2: the eigenvector is |1>
        return 0.0;
    }
    n2 / denom
}

/// Sign of `D(t)`; the `lambda_+` eigenvector's excited amplitude carries it.
pub(crate) fn coherence_sign(model: &ModelParams, t: f64) -> f64 {
    let (_, d) = model.decay_factors(t);
    if d < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{eigensystem, pure_state};

    fn model(d: Dynamics) -> ModelParams {
        ModelParams::new(d, 1.0).unwrap()
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(ModelParams::new(Dynamics::MarkovianProjection { gamma2: -1.0 }, 1.0).is_err());
        assert!(ModelParams::new(Dynamics::MemoryKernel { gamma0: 1.0, gamma: 0.0 }, 1.0).is_err());
        assert!(ModelParams::new(Dynamics::PostMarkovian { gamma0: 0.0, gamma: 1.0 }, 0.0).is_err());
        assert!(ModelParams::new(Dynamics::CorrelatedProjection { gamma: 0.0 }, 1.0).is_ok());
    }

    #[test]
    fn xi_at_zero_time() {
        for r in [0.0, 0.1, 0.25, 0.5, 1.0, 2.5, 10.0] {
            assert_eq!(xi_memory(r, 0.0).unwrap(), 1.0);
            assert!((xi_post(r, 0.0).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn xi_rejects_negative_arguments() {
        assert!(xi_memory(-0.1, 1.0).is_err());
        assert!(xi_memory(0.1, -1.0).is_err());
        assert!(xi_post(-0.1, 1.0).is_err());
        assert!(xi_post(0.1, -1.0).is_err());
    }

    #[test]
    fn branch_selection() {
        assert_eq!(XiBranch::select(0.1), XiBranch::Hyperbolic);
        assert_eq!(XiBranch::select(0.25), XiBranch::Critical);
        assert_eq!(XiBranch::select(0.25 + 1e-10), XiBranch::Critical);
        assert_eq!(XiBranch::select(0.3), XiBranch::Trigonometric);
    }

    #[test]
    fn critical_values() {
        let two_over_e = 2.0 * (-1.0f64).exp();
        assert!((xi_memory(0.25, 2.0).unwrap() - two_over_e).abs() < 1e-15);
        assert!((xi_post(1.0, 1.0).unwrap() - two_over_e).abs() < 1e-15);
        assert!((two_over_e - 0.735759).abs() < 1e-6);
    }

    #[test]
    fn post_near_removable_singularity() {
        // both sides of R = 1 against the limit expansion in delta
        for delta in [1e-7f64, -1e-7, 1e-5, -1e-5, 0.3, -0.3] {
            let r: f64 = 1.0 + delta;
            for tau in [0.5f64, 2.0, 7.0] {
                let direct = ((-r * tau).exp() - r * (-tau).exp()) / (1.0 - r);
                let v = xi_post(r, tau).unwrap();
                // direct formula loses ~1e-16/|delta| relative accuracy
                assert!((v - direct).abs() < 1e-15 / delta.abs() + 1e-14, "{r} {tau}");
            }
        }
    }

    #[test]
    fn ground_state_is_stationary() {
        let m = model(Dynamics::MarkovianProjection { gamma2: 1.0 });
        let init = BlochState::new(PI, 0.0).unwrap();
        for t in [0.0, 0.5, 3.0, 40.0] {
            let rho = evolve(&m, &init, t).unwrap();
            assert!(rho.max_abs_diff(&DensityMatrix2::diagonal(0.0)) < 1e-15);
        }
    }

    #[test]
    fn correlated_relaxes_to_half() {
        let m = model(Dynamics::CorrelatedProjection { gamma: 0.7 });
        let init = BlochState::new(0.0, 0.0).unwrap();
        let rho = evolve(&m, &init, 60.0).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix2::diagonal(0.5)) < 1e-15);
    }

    #[test]
    fn eta_markovian_reference_point() {
        let m = model(Dynamics::MarkovianProjection { gamma2: 1.0 });
        let t = 4.0f64.ln();
        let e = eta(&m, PI / 2.0, t).unwrap();
        assert!((e - 13.0f64.sqrt() / 4.0).abs() < 1e-15);
        let rho = evolve(&m, &BlochState::new(PI / 2.0, 0.3).unwrap(), t).unwrap();
        assert!((eigensystem(&rho).gap() - e).abs() < 1e-12);
    }

    #[test]
    fn eta_correlated_at_theta_zero() {
        let gamma = 0.8;
        let m = model(Dynamics::CorrelatedProjection { gamma });
        for t in [0.1, 2.0f64.ln(), 1.5] {
            let e = eta(&m, 0.0, t).unwrap();
            assert!((e - (-2.0 * gamma * t).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn cos2_at_zero_time_and_at_pi() {
        let models = [
            model(Dynamics::MarkovianProjection { gamma2: 1.0 }),
            model(Dynamics::CorrelatedProjection { gamma: 1.0 }),
            model(Dynamics::MemoryKernel { gamma0: 1.0, gamma: 0.1 }),
            model(Dynamics::PostMarkovian { gamma0: 1.0, gamma: 1.0 }),
        ];
        for m in &models {
            for theta in [0.1, 1.0, 2.0, 3.0] {
                let c = cos2_half_theta_t(m, theta, 0.0).unwrap();
                assert!((c - (0.5 * theta).sin().powi(2)).abs() < 1e-14);
            }
            assert!(cos2_half_theta_t(m, 0.0, 1.0).is_err());
        }
        let mk = model(Dynamics::MemoryKernel { gamma0: 0.4, gamma: 1.0 });
        for t in [0.0, 1.0, 5.0] {
            assert!((cos2_half_theta_t(&mk, PI, t).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn starts_from_the_pure_state() {
        let b = BlochState::new(1.3, 0.9).unwrap();
        for d in [
            Dynamics::MarkovianProjection { gamma2: 1.0 },
            Dynamics::CorrelatedProjection { gamma: 1.0 },
            Dynamics::MemoryKernel { gamma0: 1.0, gamma: 0.1 },
            Dynamics::PostMarkovian { gamma0: 0.1, gamma: 10.0 },
        ] {
            let rho = evolve(&model(d), &b, 0.0).unwrap();
            assert!(rho.max_abs_diff(&pure_state(&b)) < 1e-15);
        }
    }

    #[test]
    fn negative_time_rejected() {
        let m = model(Dynamics::MarkovianProjection { gamma2: 1.0 });
        let b = BlochState::new(1.0, 0.0).unwrap();
        assert!(matches!(evolve(&m, &b, -0.1), Err(Error::NegativeTime(_))));
        assert!(eta(&m, 1.0, -1.0).is_err());
    }
}

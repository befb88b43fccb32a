use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{SolverConfig, TRACE_DRIFT_LIMIT};
use crate::state::{pure_state, BlochState, DensityMatrix2, Picture, Trajectory};
use crate::{Error, Result};

type M2 = Matrix2<Complex64>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `|0><1|` in the (excited, ground) basis.
fn sigma_minus() -> M2 {
    M2::new(c(0.0), c(0.0), c(1.0), c(0.0))
}

fn sigma_plus() -> M2 {
    sigma_minus().adjoint()
}

fn anticommutator(a: &M2, b: &M2) -> M2 {
    a * b + b * a
}

/// `sigma_- rho sigma_+ - {sigma_+ sigma_-, rho} / 2`
fn damping(rho: &M2) -> M2 {
    let (sm, sp) = (sigma_minus(), sigma_plus());
    sm * rho * sp - anticommutator(&(sp * sm), rho) * c(0.5)
}

fn to_matrix(rho: &DensityMatrix2) -> M2 {
    let e = rho.entries();
    M2::new(e[0][0], e[0][1], e[1][0], e[1][1])
}

fn from_matrix(m: &M2, time: f64) -> Result<DensityMatrix2> {
    DensityMatrix2::from_entries([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]).map_err(|_| {
        Error::SolverDiverged {
            time,
            drift: (m.trace() - c(1.0)).norm(),
        }
    })
}

fn axpy<const K: usize>(y: &[M2; K], a: f64, k: &[M2; K]) -> [M2; K] {
    std::array::from_fn(|i| y[i] + k[i] * c(a))
}

fn rk4_step<const K: usize, F>(y: &[M2; K], h: f64, f: &F) -> [M2; K]
where
    F: Fn(&[M2; K]) -> [M2; K],
{
    let k1 = f(y);
    let k2 = f(&axpy(y, 0.5 * h, &k1));
    let k3 = f(&axpy(y, 0.5 * h, &k2));
    let k4 = f(&axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + (k1[i] + (k2[i] + k3[i]) * c(2.0) + k4[i]) * c(h / 6.0))
}

/// Integrates `f` from `y0`, recording `observe(y)` at every step and
/// aborting once its trace drifts from 1.
fn integrate<const K: usize, F, O>(y0: [M2; K], cfg: &SolverConfig, f: F, observe: O) -> Result<Trajectory>
where
    F: Fn(&[M2; K]) -> [M2; K],
    O: Fn(&[M2; K]) -> M2,
{
    cfg.validate()?;
    let n = cfg.steps();
    let h = cfg.effective_dt();
    let mut y = y0;
    let mut states = Vec::with_capacity(n + 1);
    states.push(from_matrix(&observe(&y), 0.0)?);
    for k in 1..=n {
        y = rk4_step(&y, h, &f);
        let rho = observe(&y);
        let time = k as f64 * h;
        let drift = (rho.trace() - c(1.0)).norm();
        if drift > TRACE_DRIFT_LIMIT || !drift.is_finite() {
            return Err(Error::SolverDiverged { time, drift });
        }
        states.push(from_matrix(&rho, time)?);
    }
    Trajectory::uniform(h, states, Picture::Interaction)
}

/// RK4 on `d rho/dt = gamma2 (sigma_- rho sigma_+ - {sigma_+ sigma_-, rho}/2)`.
pub fn solve_markovian(gamma2: f64, init: &BlochState, cfg: &SolverConfig) -> Result<Trajectory> {
    let rho0 = to_matrix(&pure_state(init));
    integrate([rho0], cfg, |y| [damping(&y[0]) * c(gamma2)], |y| y[0])
}

/// RK4 on the band-resolved pair
///
/// ```text
/// d rho1/dt = g1 sigma_+ rho2 sigma_- - g2/2 {sigma_+ sigma_-, rho1}
/// d rho2/dt = g2 sigma_- rho1 sigma_+ - g1/2 {sigma_- sigma_+, rho2}
/// ```
///
/// starting with the whole state in the lower band (`rho2 = 0`). Returns
/// `rho1 + rho2`.
pub fn solve_correlated(gamma1: f64, gamma2: f64, init: &BlochState, cfg: &SolverConfig) -> Result<Trajectory> {
    let (sm, sp) = (sigma_minus(), sigma_plus());
    let (p_excited, p_ground) = (sp * sm, sm * sp);
    let rho1 = to_matrix(&pure_state(init));
    let rho2 = M2::zeros();
    integrate(
        [rho1, rho2],
        cfg,
        |y| {
            let [r1, r2] = y;
            [
                sp * r2 * sm * c(gamma1) - anticommutator(&p_excited, r1) * c(0.5 * gamma2),
                sm * r1 * sp * c(gamma2) - anticommutator(&p_ground, r2) * c(0.5 * gamma1),
            ]
        },
        |y| y[0] + y[1],
    )
}

/// Memory-kernel equation `d rho/dt = int_0^t K(t - s) L rho(s) ds` with
/// `K(t) = gamma e^{-gamma t}` and `L = gamma0 * damping`.
///
/// For an exponential kernel the memory term `u = int K L rho` obeys
/// `du/dt = gamma (L rho - u)` with `u(0) = 0`, so `(rho, u)` is integrated
/// as a local system.
pub fn solve_memory_kernel(gamma0: f64, gamma: f64, init: &BlochState, cfg: &SolverConfig) -> Result<Trajectory> {
    let rho0 = to_matrix(&pure_state(init));
    integrate(
        [rho0, M2::zeros()],
        cfg,
        |y| {
            let [rho, u] = y;
            [*u, (damping(rho) * c(gamma0) - u) * c(gamma)]
        },
        |y| y[0],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn damping_generator_elements() {
        let rho = M2::new(c(0.3), Complex64::new(0.1, 0.2), Complex64::new(0.1, -0.2), c(0.7));
        let d = damping(&rho);
        assert!((d[(0, 0)] - c(-0.3)).norm() < 1e-16);
        assert!((d[(1, 1)] - c(0.3)).norm() < 1e-16);
        assert!((d[(0, 1)] - Complex64::new(-0.05, -0.1)).norm() < 1e-16);
    }

    #[test]
    fn stationary_cases() {
        let cfg = SolverConfig::rk4(1e-2, 2.0).unwrap();
        let ground = BlochState::new(PI, 0.0).unwrap();
        let tr = solve_markovian(1.0, &ground, &cfg).unwrap();
        for s in tr.states() {
            assert!(s.max_abs_diff(&pure_state(&ground)) < 1e-15);
        }
        let b = BlochState::new(1.0, 0.5).unwrap();
        for tr in [
            solve_markovian(0.0, &b, &cfg).unwrap(),
            solve_correlated(0.0, 0.0, &b, &cfg).unwrap(),
            solve_memory_kernel(0.0, 1.0, &b, &cfg).unwrap(),
        ] {
            assert_eq!(*tr.states().last().unwrap(), pure_state(&b));
        }
    }

    #[test]
    fn markovian_population_reference() {
        let cfg = SolverConfig::rk4(1e-3, 1.0).unwrap();
        let tr = solve_markovian(1.0, &BlochState::new(PI / 2.0, 0.0).unwrap(), &cfg).unwrap();
        let last = tr.states().last().unwrap();
        assert!((last.rho11() - 0.5 * (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn correlated_population_at_pole() {
        let gamma = 0.8;
        let cfg = SolverConfig::rk4(1e-3, 3.0).unwrap();
        let tr = solve_correlated(gamma, gamma, &BlochState::new(0.0, 0.0).unwrap(), &cfg).unwrap();
        for (t, s) in tr.times().iter().zip(tr.states()) {
            assert!((s.rho11() - 0.5 * (1.0 + (-2.0 * gamma * t).exp())).abs() < 1e-9);
            assert!((s.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unequal_rates_run() {
        let cfg = SolverConfig::rk4(1e-3, 5.0).unwrap();
        let tr = solve_correlated(0.2, 1.5, &BlochState::new(1.2, 0.0).unwrap(), &cfg).unwrap();
        let last = tr.states().last().unwrap();
        assert!((last.trace() - 1.0).abs() < 1e-12);
        // the steady state balances the two bands: gamma2 p1 = gamma1 p2
        let long = SolverConfig::rk4(1e-2, 60.0).unwrap();
        let tr = solve_correlated(0.2, 1.5, &BlochState::new(0.0, 0.0).unwrap(), &long).unwrap();
        let p = tr.states().last().unwrap().rho11();
        assert!((p - 0.2 / 1.7).abs() < 1e-9, "{p}");
    }
}

use num_complex::Complex64;

use super::{Method, SolverConfig};
use crate::state::{pure_state, BlochState, DensityMatrix2, Picture, Trajectory};
use crate::{Error, Result};

/// Solves `x'(t) = -rate * int_0^t k(t - s) x(s) ds`, `x(0) = x0`, on the grid
/// `t_n = n h`, `n = 0..=steps`.
///
/// The history integral uses the trapezoid rule over all past samples and the
/// time stepping is the (implicit) trapezoid rule, which for this linear
/// scalar equation is solved in closed form at each step. Cost is
/// `O(steps^2)`.
pub fn solve_volterra_ide<K>(rate: f64, kernel: K, x0: Complex64, h: f64, steps: usize) -> Vec<Complex64>
where
    K: Fn(f64) -> f64,
{
    let k: Vec<f64> = (0..=steps).map(|m| kernel(m as f64 * h)).collect();
    let mut x = Vec::with_capacity(steps + 1);
    x.push(x0);
    let implicit = 1.0 + 0.25 * h * h * rate * k[0];
    // F_n = -rate * h * [k_n x_0 / 2 + sum_{j=1}^{n-1} k_{n-j} x_j + k_0 x_n / 2]
    let mut f_prev = Complex64::new(0.0, 0.0);
    for n in 0..steps {
        let m = n + 1;
        let mut history = 0.5 * k[m] * x0;
        for j in 1..m {
            history += k[m - j] * x[j];
        }
        let g = -rate * h * history;
        let next = (x[n] + 0.5 * h * (f_prev + g)) / implicit;
        f_prev = g - 0.5 * rate * h * k[0] * next;
        x.push(next);
    }
    x
}

/// Post-Markovian equation `d rho/dt = L int_0^t K(s) e^{L s} rho(t - s) ds`
/// with `K(s) = gamma e^{-gamma s}` and amplitude damping `L` of strength
/// `gamma0`.
///
/// `L` maps `rho_11 -> -gamma0 rho_11` and `rho_12 -> -gamma0/2 rho_12`, so
/// each of these elements obeys a scalar Volterra equation with kernel
/// `gamma e^{-(gamma + rate) s}`; `rho_22 = 1 - rho_11`.
pub fn solve_post_markovian(gamma0: f64, gamma: f64, init: &BlochState, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if cfg.method != Method::TrapezoidVolterra {
        return Err(Error::InvalidConfig(
            "the post-Markovian oracle uses the trapezoid Volterra method".into(),
        ));
    }
    if !(gamma > 0.0) || !(gamma0 >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "memory-kernel rates need gamma > 0 and gamma0 >= 0",
        });
    }
    let n = cfg.steps();
    let h = cfg.effective_dt();
    let rho0 = pure_state(init);

    let element = |rate: f64, x0: Complex64| {
        solve_volterra_ide(rate, |s| gamma * (-(gamma + rate) * s).exp(), x0, h, n)
    };
    let population = element(gamma0, Complex64::new(rho0.rho11(), 0.0));
    let coherence = element(0.5 * gamma0, rho0.rho12());

    let mut states = Vec::with_capacity(n + 1);
    for (k, (p, q)) in population.iter().zip(&coherence).enumerate() {
        if !(p.re.is_finite() && q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::SolverDiverged {
                time: k as f64 * h,
                drift: f64::INFINITY,
            });
        }
        states.push(DensityMatrix2::from_population_coherence(p.re, *q));
    }
    Trajectory::uniform(h, states, Picture::Interaction)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rate_is_constant() {
        let x = solve_volterra_ide(0.0, |s| (-s).exp(), Complex64::new(0.3, -0.1), 0.01, 50);
        assert!(x.iter().all(|&v| v == Complex64::new(0.3, -0.1)));
    }

    #[test]
    fn exponential_kernel_matches_damped_oscillator() {
        // x' = -R int e^{-(t-s)} x(s) ds  <=>  x'' + x' + R x = 0, x'(0) = 0
        let r: f64 = 0.1;
        let h = 1e-3;
        let x = solve_volterra_ide(r, |s| (-s).exp(), Complex64::new(1.0, 0.0), h, 5000);
        let sq = (1.0 - 4.0 * r).sqrt();
        let exact = |t: f64| (-0.5 * t).exp() * ((0.5 * t * sq).sinh() / sq + (0.5 * t * sq).cosh());
        for (n, v) in x.iter().enumerate() {
            assert!((v.re - exact(n as f64 * h)).abs() < 1e-6);
        }
    }

    #[test]
    fn requires_volterra_method() {
        let b = BlochState::new(1.0, 0.0).unwrap();
        let cfg = SolverConfig::rk4(1e-2, 1.0).unwrap();
        assert!(solve_post_markovian(1.0, 1.0, &b, &cfg).is_err());
    }

    #[test]
    fn zero_dissipation_is_constant() {
        let b = BlochState::new(1.0, 0.4).unwrap();
        let cfg = SolverConfig::volterra(1e-2, 1.0).unwrap();
        let tr = solve_post_markovian(0.0, 1.0, &b, &cfg).unwrap();
        for s in tr.states() {
            assert!(s.max_abs_diff(&pure_state(&b)) < 1e-15);
        }
    }
}

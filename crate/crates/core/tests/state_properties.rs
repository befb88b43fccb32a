use geophase::state::{
    eigensystem, min_eigenvalue, pure_state, to_interaction, to_schroedinger, DensityMatrix2,
};
use geophase::{BlochState, Complex64};
use nalgebra::Matrix2;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Density matrix `(I + r.sigma)/2` in the (excited, ground) basis.
fn from_bloch(x: f64, y: f64, z: f64) -> DensityMatrix2 {
    DensityMatrix2::from_population_coherence(0.5 * (1.0 + z), Complex64::new(0.5 * x, -0.5 * y))
}

fn bloch_ball() -> impl Strategy<Value = DensityMatrix2> {
    (0.0..=1.0f64, 0.0..=PI, 0.0..2.0 * PI).prop_map(|(r, pol, az)| {
        from_bloch(r * pol.sin() * az.cos(), r * pol.sin() * az.sin(), r * pol.cos())
    })
}

fn nalgebra_eigenvalues(rho: &DensityMatrix2) -> (f64, f64) {
    let e = rho.entries();
    let m = Matrix2::new(e[0][0], e[0][1], e[1][0], e[1][1]);
    let vals = m.symmetric_eigenvalues();
    (vals[0].max(vals[1]), vals[0].min(vals[1]))
}

proptest! {
    #[test]
    fn pure_states_are_valid(theta in 0.0..=PI, phi in -10.0..10.0f64) {
        let rho = pure_state(&BlochState::new(theta, phi).unwrap());
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        prop_assert!((rho.rho12() - rho.rho21().conj()).norm() < 1e-12);
        prop_assert!(min_eigenvalue(&rho).abs() < 1e-12);
        prop_assert!((rho.rho11() - (0.5 * theta).cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn spectral_reconstruction(rho in bloch_ball()) {
        let sp = eigensystem(&rho);
        let e = rho.entries();
        for i in 0..2 {
            for j in 0..2 {
                let rebuilt = sp.vec_plus[i] * sp.vec_plus[j].conj() * sp.lambda_plus
                    + sp.vec_minus[i] * sp.vec_minus[j].conj() * sp.lambda_minus;
                prop_assert!((rebuilt - e[i][j]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn eigenvalues_match_independent_solver(rho in bloch_ball()) {
        let sp = eigensystem(&rho);
        let (hi, lo) = nalgebra_eigenvalues(&rho);
        prop_assert!((sp.lambda_plus - hi).abs() < 1e-12);
        prop_assert!((sp.lambda_minus - lo).abs() < 1e-12);
        prop_assert!((min_eigenvalue(&rho) - lo).abs() < 1e-12);
    }

    #[test]
    fn gauge_is_deterministic(rho in bloch_ball()) {
        let a = eigensystem(&rho);
        let b = eigensystem(&rho.clone());
        prop_assert_eq!(a, b);
        for v in [a.vec_plus, a.vec_minus] {
            let dominant = if v[0].norm() >= v[1].norm() - 1e-9 { v[0] } else { v[1] };
            prop_assert!(dominant.im.abs() < 1e-15 && dominant.re >= 0.0);
        }
    }

    #[test]
    fn picture_change_preserves_spectrum(rho in bloch_ball(), omega in 0.1..5.0f64, t in 0.0..50.0f64) {
        let s = to_schroedinger(&rho, omega, t);
        let (a, b) = (eigensystem(&rho), eigensystem(&s));
        prop_assert!((a.lambda_plus - b.lambda_plus).abs() < 1e-12);
        prop_assert!((a.lambda_minus - b.lambda_minus).abs() < 1e-12);
        prop_assert!(to_interaction(&s, omega, t).max_abs_diff(&rho) < 1e-12);
    }
}

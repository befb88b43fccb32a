use geophase::evolutions::trajectory;
use geophase::phase::{
    branch_term, connection, phase_closed, phase_general, track_branch, velocity_norms, wrap_phase, Branch,
};
use geophase::{BlochState, Complex64, Dynamics, ModelParams, QuadratureConfig, Scheme};
use proptest::prelude::*;
use std::f64::consts::PI;

fn figure_like_model() -> impl Strategy<Value = ModelParams> {
    prop_oneof![
        (0.05..1.5f64).prop_map(|g| Dynamics::MarkovianProjection { gamma2: g }),
        (0.05..1.5f64).prop_map(|g| Dynamics::CorrelatedProjection { gamma: g }),
        (0.05..1.5f64, 0.1..10.0f64).prop_map(|(g0, g)| Dynamics::MemoryKernel { gamma0: g0, gamma: g }),
        (0.05..1.5f64, 0.1..10.0f64).prop_map(|(g0, g)| Dynamics::PostMarkovian { gamma0: g0, gamma: g }),
    ]
    .prop_map(|d| ModelParams::new(d, 1.0).unwrap())
}

fn sampled_with(m: &ModelParams, theta: f64, phi: f64, intervals: usize) -> geophase::Trajectory {
    trajectory(m, &BlochState::new(theta, phi).unwrap(), m.quasi_period(), intervals).unwrap()
}

fn sampled(m: &ModelParams, theta: f64, phi: f64) -> geophase::Trajectory {
    sampled_with(m, theta, phi, 2000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wrap_lands_in_half_open_interval(x in -100.0..100.0f64) {
        let w = wrap_phase(x);
        prop_assert!(w > -PI && w <= PI);
        let k = ((x - w) / (2.0 * PI)).round();
        prop_assert!((x - w - 2.0 * PI * k).abs() < 1e-9);
    }

    #[test]
    fn general_and_closed_paths_agree(m in figure_like_model(), theta in 0.05..3.09f64, phi in 0.0..6.2f64) {
        let cfg = QuadratureConfig::default();
        let closed = phase_closed(&m, theta, &cfg).unwrap();
        let general = phase_general(&sampled(&m, theta, phi), &cfg).unwrap();
        prop_assert!(wrap_phase(closed.principal - general.principal).abs() < 1e-6);
        prop_assert!((closed.visibility - general.visibility).abs() < 1e-6);
        prop_assert!(closed.visibility <= 1.0 + 1e-12);
    }

    #[test]
    fn branch_phase_is_gauge_invariant(
        m in figure_like_model(),
        theta in 0.1..3.0f64,
        amp in 0.0..1.0f64,
        freq in 0.0..1.0f64,
        offset in 0.0..6.3f64,
        drift in -1.0..1.0f64,
    ) {
        let track = track_branch(&sampled(&m, theta, 0.0), Branch::Plus).unwrap();
        let reference = branch_term(&track, Scheme::Simpson);
        let mut regauged = track.clone();
        for (v, &t) in regauged.vectors.iter_mut().zip(&track.times) {
            let g = Complex64::from_polar(1.0, amp * (freq * t + offset).sin() + drift * t);
            *v = [v[0] * g, v[1] * g];
        }
        let moved = branch_term(&regauged, Scheme::Simpson);
        prop_assert!(wrap_phase(moved.arg() - reference.arg()).abs() < 1e-8);
        prop_assert!((moved.norm() - reference.norm()).abs() < 1e-8);
    }

    #[test]
    fn aligned_connection_is_imaginary(m in figure_like_model(), theta in 0.1..3.0f64) {
        // near-degenerate passages at small theta need the finer grid
        let track = track_branch(&sampled_with(&m, theta, 0.0, 8000), Branch::Plus).unwrap();
        let h = track.step();
        let conn = connection(&track.vectors, h);
        let speed = velocity_norms(&track.vectors, h);
        for k in 1..conn.len() - 1 {
            prop_assert!(conn[k].re.abs() <= 1e-6 * speed[k].max(1e-300) || conn[k].re.abs() < 1e-12);
        }
    }
}

#[test]
fn unitary_evolution_has_full_visibility() {
    let cfg = QuadratureConfig::default();
    for d in [
        Dynamics::MarkovianProjection { gamma2: 0.0 },
        Dynamics::CorrelatedProjection { gamma: 0.0 },
        Dynamics::MemoryKernel { gamma0: 0.0, gamma: 1.0 },
        Dynamics::PostMarkovian { gamma0: 0.0, gamma: 1.0 },
    ] {
        let m = ModelParams::new(d, 1.0).unwrap();
        for k in 1..10 {
            let theta = k as f64 * 0.1 * PI;
            let p = phase_closed(&m, theta, &cfg).unwrap();
            assert!((p.visibility - 1.0).abs() < 1e-9);
            assert!(wrap_phase(p.principal + PI * (1.0 - theta.cos())).abs() < 1e-9);
            let g = phase_general(&sampled(&m, theta, 0.4), &cfg).unwrap();
            assert!((g.visibility - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn trapezoid_converges_more_slowly_than_simpson() {
    let m = ModelParams::new(Dynamics::PostMarkovian { gamma0: 1.0, gamma: 1.0 }, 1.0).unwrap();
    let exact = phase_closed(&m, 0.3 * PI, &QuadratureConfig::with_steps(20000)).unwrap().principal;
    let err = |steps, scheme| {
        let cfg = QuadratureConfig { scheme, ..QuadratureConfig::with_steps(steps) };
        (phase_closed(&m, 0.3 * PI, &cfg).unwrap().principal - exact).abs()
    };
    assert!(err(200, Scheme::Simpson) < err(200, Scheme::Trapezoid));
    let ratio = err(100, Scheme::Trapezoid) / err(200, Scheme::Trapezoid);
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}

#[test]
fn multi_period_phase_is_consistent() {
    let m = ModelParams::new(Dynamics::CorrelatedProjection { gamma: 0.3 }, 1.0).unwrap();
    let cfg = QuadratureConfig::default();
    for periods in [0.5, 2.0] {
        let t = periods * m.quasi_period();
        let closed = geophase::phase::phase_closed_at(&m, 0.4 * PI, t, &cfg).unwrap();
        let traj = trajectory(&m, &BlochState::new(0.4 * PI, 0.0).unwrap(), t, 2000).unwrap();
        let general = phase_general(&traj, &cfg).unwrap();
        assert!(wrap_phase(closed.principal - general.principal).abs() < 1e-6);
    }
}

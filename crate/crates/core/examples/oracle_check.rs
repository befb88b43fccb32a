//! Closed-form density matrices against direct numerical integration of each
//! master equation over three quasi-periods.

use geophase::oracle::{check_closed_form, Method, SolverConfig};
use geophase::{BlochState, Dynamics, ModelParams};
use std::f64::consts::PI;

fn main() -> geophase::Result<()> {
    let init = BlochState::new(0.3 * PI, 0.7)?;
    let cases = [
        (Dynamics::MarkovianProjection { gamma2: 1.0 }, Method::Rk4, 1e-4),
        (Dynamics::CorrelatedProjection { gamma: 1.0 }, Method::Rk4, 1e-4),
        (Dynamics::MemoryKernel { gamma0: 1.0, gamma: 1.0 }, Method::Rk4, 1e-4),
        (Dynamics::PostMarkovian { gamma0: 1.0, gamma: 1.0 }, Method::TrapezoidVolterra, 1e-3),
    ];
    for (d, method, dt) in cases {
        let m = ModelParams::new(d, 1.0)?;
        let cfg = SolverConfig::new(dt, 3.0 * m.quasi_period(), method)?;
        let dev = check_closed_form(&m, &init, &cfg)?;
        println!(
            "{:<11} dt={dt:<7} max |closed - numeric| = {:.3e} at t = {:.3}",
            d.name(),
            dev.max_abs,
            dev.at_time
        );
    }
    Ok(())
}

//! The phase functional applied to a sampled trajectory, compared with the
//! closed-form evaluation. The general path works for any trajectory,
//! including ones produced by the numerical solvers.

use geophase::evolutions::trajectory;
use geophase::oracle::{solve, SolverConfig};
use geophase::phase::{phase_closed, phase_general};
use geophase::{BlochState, Dynamics, ModelParams, QuadratureConfig};
use std::f64::consts::PI;

fn main() -> geophase::Result<()> {
    let model = ModelParams::new(Dynamics::MemoryKernel { gamma0: 1.0, gamma: 1.0 }, 1.0)?;
    let theta = 0.4 * PI;
    let config = QuadratureConfig::default();
    let t = model.quasi_period();

    let closed = phase_closed(&model, theta, &config)?;
    let sampled = trajectory(&model, &BlochState::new(theta, 0.0)?, t, 2000)?;
    let general = phase_general(&sampled, &config)?;

    let numeric = solve(&model, &BlochState::new(theta, 0.0)?, &SolverConfig::rk4(t / 2000.0, t)?)?
        .into_schroedinger(model.omega());
    let from_solver = phase_general(&numeric, &config)?;

    println!("closed form      {:+.12}", closed.principal / PI);
    println!("sampled closed   {:+.12}", general.principal / PI);
    println!("sampled solver   {:+.12}", from_solver.principal / PI);
    Ok(())
}

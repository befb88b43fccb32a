//! The four master equations side by side at one polar angle.

use geophase::phase::phase_closed;
use geophase::{Dynamics, ModelParams, QuadratureConfig};
use std::f64::consts::PI;

fn main() -> geophase::Result<()> {
    let theta = 0.25 * PI;
    let models = [
        Dynamics::MarkovianProjection { gamma2: 1.0 },
        Dynamics::CorrelatedProjection { gamma: 1.0 },
        Dynamics::MemoryKernel { gamma0: 1.0, gamma: 0.1 },
        Dynamics::MemoryKernel { gamma0: 1.0, gamma: 10.0 },
        Dynamics::PostMarkovian { gamma0: 1.0, gamma: 0.1 },
        Dynamics::PostMarkovian { gamma0: 1.0, gamma: 10.0 },
    ];
    println!("theta = 0.25 pi, omega = 1, one quasi-period");
    for d in models {
        let m = ModelParams::new(d, 1.0)?;
        let p = phase_closed(&m, theta, &QuadratureConfig::default())?;
        println!(
            "{:<11} {:<22} phase/pi = {:+.6}  unwrapped/pi = {:+.6}",
            d.name(),
            d.params_label(),
            p.principal / PI,
            p.unwrapped / PI
        );
    }
    Ok(())
}

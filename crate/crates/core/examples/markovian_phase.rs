//! Geometric phase of a spontaneously decaying atom across the Bloch sphere,
//! next to the unitary value `-pi (1 - cos theta)`.

use geophase::phase::{phase_closed, wrap_phase};
use geophase::{Dynamics, ModelParams, QuadratureConfig};
use std::f64::consts::PI;

fn main() -> geophase::Result<()> {
    let model = ModelParams::new(Dynamics::MarkovianProjection { gamma2: 0.1 }, 1.0)?;
    let config = QuadratureConfig::default();
    println!("theta/pi   phase/pi   unitary/pi  visibility");
    for k in 1..10 {
        let theta = k as f64 * 0.1 * PI;
        let p = phase_closed(&model, theta, &config)?;
        let unitary = wrap_phase(-PI * (1.0 - theta.cos()));
        println!(
            "{:8.2} {:10.5} {:11.5} {:11.5}",
            theta / PI,
            p.principal / PI,
            unitary / PI,
            p.visibility
        );
    }
    Ok(())
}

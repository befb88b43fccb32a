//! Scans the memory-kernel and post-Markovian states for negative
//! eigenvalues.

use geophase::oracle::positivity_scan;
use geophase::sweep::theta_grid;
use geophase::{Dynamics, ModelParams};
use std::f64::consts::PI;

fn main() -> geophase::Result<()> {
    let thetas = theta_grid(0.01 * PI, 0.99 * PI, 99);
    for gamma0 in [0.1, 1.0] {
        for gamma in [0.1, 1.0, 10.0] {
            for d in [
                Dynamics::MemoryKernel { gamma0, gamma },
                Dynamics::PostMarkovian { gamma0, gamma },
            ] {
                let m = ModelParams::new(d, 1.0)?;
                let times = theta_grid(0.0, 3.0 * m.quasi_period(), 601);
                let found = positivity_scan(&m, &thetas, &times)?;
                let worst = found.iter().min_by(|a, b| a.lambda_min.total_cmp(&b.lambda_min));
                match worst {
                    None => println!("{:<7} {:<20} positive", d.name(), d.params_label()),
                    Some(v) => println!(
                        "{:<7} {:<20} {:>6} violations, worst {:.3e} at theta = {:.2} pi, t = {:.3}",
                        d.name(),
                        d.params_label(),
                        found.len(),
                        v.lambda_min,
                        v.theta / PI,
                        v.t
                    ),
                }
            }
        }
    }
    Ok(())
}

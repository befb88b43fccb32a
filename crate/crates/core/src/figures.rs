//! Parameter sets of the three figure pairs and their CSV datasets.
//!
//! - `fig2_top` / `fig2_bottom`: Markovian vs correlated projection at
//!   `gamma = 0.1` / `gamma = 1`.
//! - `fig3_top` / `fig3_bottom`: memory kernel at `gamma0 = 0.1` / `gamma0 = 1`,
//!   one curve per inverse memory time `gamma` in {0.1, 1, 10}.
//! - `fig4_top` / `fig4_bottom`: the same for the post-Markovian equation.
//!
//! Every dataset uses `omega = 1` and the default 99-point theta grid.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::evolutions::{Dynamics, ModelParams};
use crate::sweep::{format_number, run_sweep, SweepRow, SweepSpec};
use crate::Result;

pub const FIGURE_OMEGA: f64 = 1.0;
pub const TWO_BAND_RATES: [f64; 2] = [0.1, 1.0];
pub const DISSIPATION_CONSTANTS: [f64; 2] = [0.1, 1.0];
pub const MEMORY_RATES: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    pub model: ModelParams,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub name: &'static str,
    pub curves: Vec<Curve>,
}

fn model(d: Dynamics) -> ModelParams {
    ModelParams::new(d, FIGURE_OMEGA).expect("figure parameters are valid")
}

fn kernel_curves(gamma0: f64, make: fn(f64, f64) -> Dynamics) -> Vec<Curve> {
    MEMORY_RATES
        .iter()
        .map(|&gamma| Curve {
            label: format!("gamma_{gamma}"),
            model: model(make(gamma0, gamma)),
        })
        .collect()
}

/// The six datasets in output order.
pub fn figures() -> Vec<Figure> {
    let two_band = |gamma: f64| {
        vec![
            Curve {
                label: "markovian".into(),
                model: model(Dynamics::MarkovianProjection { gamma2: gamma }),
            },
            Curve {
                label: "correlated".into(),
                model: model(Dynamics::CorrelatedProjection { gamma }),
            },
        ]
    };
    let memory = |g0, g| Dynamics::MemoryKernel { gamma0: g0, gamma: g };
    let post = |g0, g| Dynamics::PostMarkovian { gamma0: g0, gamma: g };
    vec![
        Figure { name: "fig2_top", curves: two_band(TWO_BAND_RATES[0]) },
        Figure { name: "fig2_bottom", curves: two_band(TWO_BAND_RATES[1]) },
        Figure { name: "fig3_top", curves: kernel_curves(DISSIPATION_CONSTANTS[0], memory) },
        Figure { name: "fig3_bottom", curves: kernel_curves(DISSIPATION_CONSTANTS[1], memory) },
        Figure { name: "fig4_top", curves: kernel_curves(DISSIPATION_CONSTANTS[0], post) },
        Figure { name: "fig4_bottom", curves: kernel_curves(DISSIPATION_CONSTANTS[1], post) },
    ]
}

/// Every distinct model appearing in the figures (2 + 2 + 6 + 6 sets).
pub fn figure_models() -> Vec<ModelParams> {
    figures()
        .into_iter()
        .flat_map(|f| f.curves.into_iter().map(|c| c.model))
        .collect()
}

/// One computed dataset: a sweep per curve over a shared theta grid.
#[derive(Debug, Clone)]
pub struct FigureData {
    pub name: &'static str,
    pub labels: Vec<String>,
    pub sweeps: Vec<Vec<SweepRow>>,
}

impl FigureData {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut header = vec!["theta_over_pi".to_string()];
        for label in &self.labels {
            header.push(format!("{label}_principal_over_pi"));
            header.push(format!("{label}_unwrapped_over_pi"));
            header.push(format!("{label}_visibility"));
        }
        writeln!(out, "{}", header.join(","))?;
        let rows = self.sweeps.first().map_or(0, Vec::len);
        for i in 0..rows {
            let mut fields = vec![format_number(self.sweeps[0][i].theta / std::f64::consts::PI)];
            for sweep in &self.sweeps {
                let p = sweep[i].phase;
                fields.push(format_number(p.principal / std::f64::consts::PI));
                fields.push(format_number(p.unwrapped / std::f64::consts::PI));
                fields.push(format_number(p.visibility));
            }
            writeln!(out, "{}", fields.join(","))?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn compute_figure(figure: &Figure, steps: usize, threads: usize) -> Result<FigureData> {
    let sweeps = figure
        .curves
        .iter()
        .map(|c| {
            let mut spec = SweepSpec::new(c.model);
            spec.steps = steps;
            run_sweep(&spec, threads)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureData {
        name: figure.name,
        labels: figure.curves.iter().map(|c| c.label.clone()).collect(),
        sweeps,
    })
}

/// Writes `<name>.csv` for all six datasets into `dir`, creating it if needed.
pub fn write_figures(dir: &Path, steps: usize, threads: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for figure in figures() {
        let data = compute_figure(&figure, steps, threads)?;
        let path = dir.join(format!("{}.csv", figure.name));
        data.write_csv(BufWriter::new(fs::File::create(&path)?))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_figures_sixteen_models() {
        let figs = figures();
        assert_eq!(figs.len(), 6);
        assert_eq!(figure_models().len(), 16);
        assert!(figs[2..].iter().all(|f| f.curves.len() == 3));
    }
}

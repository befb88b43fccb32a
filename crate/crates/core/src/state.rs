//! Two-level density matrices, Bloch-angle pure states and their spectra.
//!
//! Basis ordering throughout the crate: index 0 is the excited state `|1>`,
//! index 1 is the ground state `|0>`. With this ordering `rho[0][0]` is the
//! excited-state population.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

/// Tolerance for the Hermiticity and unit-trace checks on [`DensityMatrix2`].
pub const STATE_TOLERANCE: f64 = 1e-12;

/// Absolute eigenvalue gap below which a [`SpectralPair`] is flagged degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Component magnitudes closer than this are treated as a tie by the gauge rule.
const GAUGE_TIE_TOLERANCE: f64 = 1e-9;

/// Pure state `cos(theta/2)|1> + sin(theta/2) e^{i phi}|0>` on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    theta: f64,
    phi: f64,
}

impl BlochState {
    /// `theta` must lie in `[0, pi]`; `phi` is reduced into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidAngle(theta));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: phi,
                reason: "azimuth must be finite",
            });
        }
        Ok(Self {
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// State vector `(excited, ground)` amplitudes.
    pub fn ket(&self) -> [Complex64; 2] {
        let half = 0.5 * self.theta;
        [
            Complex64::new(half.cos(), 0.0),
            Complex64::from_polar(half.sin(), self.phi),
        ]
    }
}

/// A 2x2 Hermitian, unit-trace matrix. Positivity is not enforced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    entries: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    /// Checked constructor: Hermitian and unit trace within [`STATE_TOLERANCE`].
    pub fn from_entries(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let herm = (entries[1][0] - entries[0][1].conj()).norm();
        let diag_imag = entries[0][0].im.abs().max(entries[1][1].im.abs());
        if herm > STATE_TOLERANCE || diag_imag > STATE_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "not Hermitian (off-diagonal mismatch {herm:e}, diagonal imaginary part {diag_imag:e})"
            )));
        }
        let trace = entries[0][0].re + entries[1][1].re;
        if (trace - 1.0).abs() > STATE_TOLERANCE || !trace.is_finite() {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        Ok(Self { entries })
    }

    /// Builds the matrix from the excited population and the coherence `rho_12`.
    /// Hermiticity and unit trace hold exactly.
    pub fn from_population_coherence(rho11: f64, rho12: Complex64) -> Self {
        Self {
            entries: [
                [Complex64::new(rho11, 0.0), rho12],
                [rho12.conj(), Complex64::new(1.0 - rho11, 0.0)],
            ],
        }
    }

    pub fn diagonal(p_excited: f64) -> Self {
        Self::from_population_coherence(p_excited, Complex64::new(0.0, 0.0))
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn rho11(&self) -> f64 {
        self.entries[0][0].re
    }

    pub fn rho22(&self) -> f64 {
        self.entries[1][1].re
    }

    pub fn rho12(&self) -> Complex64 {
        self.entries[0][1]
    }

    pub fn rho21(&self) -> Complex64 {
        self.entries[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    /// `rho * v`
    pub fn apply(&self, v: &[Complex64; 2]) -> [Complex64; 2] {
        let e = &self.entries;
        [
            e[0][0] * v[0] + e[0][1] * v[1],
            e[1][0] * v[0] + e[1][1] * v[1],
        ]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        m
    }
}

/// Eigenvalues in descending order with gauge-fixed normalized eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub vec_plus: [Complex64; 2],
    pub vec_minus: [Complex64; 2],
    pub degenerate: bool,
}

impl SpectralPair {
    pub fn gap(&self) -> f64 {
        self.lambda_plus - self.lambda_minus
    }
}

/// `|psi><psi|` for the Bloch state.
pub fn pure_state(b: &BlochState) -> DensityMatrix2 {
    let half = 0.5 * b.theta;
    let (s, c) = half.sin_cos();
    // 0.5 sin(theta) e^{-i phi} = cos(theta/2) sin(theta/2) e^{-i phi}
    let rho12 = Complex64::from_polar(c * s, -b.phi);
    DensityMatrix2::from_population_coherence(c * c, rho12)
}

/// Closed-form spectral decomposition of a 2x2 Hermitian matrix.
///
/// Eigenvalues come from the trace and the half-gap
/// `sqrt(((a - d)/2)^2 + |b|^2)`. Each eigenvector is built from whichever
/// row of `rho - lambda` is better conditioned, then normalized and put in the
/// canonical gauge: the component of largest modulus is real and nonnegative,
/// with ties (within 1e-9) resolved toward the first component.
pub fn eigensystem(rho: &DensityMatrix2) -> SpectralPair {
    let a = rho.rho11();
    let d = rho.rho22();
    let b = rho.rho12();
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let half_gap = half_diff.hypot(b.norm());
    let lambda_plus = mean + half_gap;
    let lambda_minus = mean - half_gap;
    let degenerate = 2.0 * half_gap < DEGENERACY_TOLERANCE;

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if half_gap == 0.0 {
        return SpectralPair {
            lambda_plus,
            lambda_minus,
            vec_plus: [one, zero],
            vec_minus: [zero, one],
            degenerate,
        };
    }

    // For a >= d, lambda_plus - d >= half_gap > 0, so (lambda_plus - d, conj b)
    // never vanishes; symmetrically for a < d.
    let (raw_plus, raw_minus) = if a >= d {
        (
            [Complex64::new(lambda_plus - d, 0.0), b.conj()],
            [b, Complex64::new(lambda_minus - a, 0.0)],
        )
    } else {
        (
            [b, Complex64::new(lambda_plus - a, 0.0)],
            [Complex64::new(lambda_minus - d, 0.0), b.conj()],
        )
    };

    SpectralPair {
        lambda_plus,
        lambda_minus,
        vec_plus: canonical_gauge(normalize(raw_plus)),
        vec_minus: canonical_gauge(normalize(raw_minus)),
        degenerate,
    }
}

/// Smallest eigenvalue; negative values signal a positivity violation.
pub fn min_eigenvalue(rho: &DensityMatrix2) -> f64 {
    let half_diff = 0.5 * (rho.rho11() - rho.rho22());
    0.5 * rho.trace() - half_diff.hypot(rho.rho12().norm())
}

/// Interaction picture to Schroedinger picture for `H_S = omega sigma_z / 2`.
pub fn to_schroedinger(rho_i: &DensityMatrix2, omega: f64, t: f64) -> DensityMatrix2 {
    rotate_coherence(rho_i, -omega * t)
}

/// Inverse of [`to_schroedinger`].
pub fn to_interaction(rho_s: &DensityMatrix2, omega: f64, t: f64) -> DensityMatrix2 {
    rotate_coherence(rho_s, omega * t)
}

fn rotate_coherence(rho: &DensityMatrix2, angle: f64) -> DensityMatrix2 {
    let phase = Complex64::from_polar(1.0, angle);
    let mut entries = rho.entries;
    entries[0][1] *= phase;
    entries[1][0] *= phase.conj();
    DensityMatrix2 { entries }
}

pub(crate) fn normalize(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = v[0].norm().hypot(v[1].norm());
    [v[0] / n, v[1] / n]
}

/// Multiplies `v` by the unit phase that makes its dominant component real
/// and nonnegative.
pub fn canonical_gauge(v: [Complex64; 2]) -> [Complex64; 2] {
    let (m0, m1) = (v[0].norm(), v[1].norm());
    let pivot = if m0 >= m1 || (m1 - m0) <= GAUGE_TIE_TOLERANCE {
        v[0]
    } else {
        v[1]
    };
    let r = pivot.norm();
    if r == 0.0 {
        return v;
    }
    let phase = pivot.conj() / r;
    [v[0] * phase, v[1] * phase]
}

/// `<u|v>`
pub fn inner(u: &[Complex64; 2], v: &[Complex64; 2]) -> Complex64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// Time-ordered samples of the atom's state on a uniform grid starting at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    Interaction,
    Schroedinger,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix2>,
    picture: Picture,
}

impl Trajectory {
    /// Samples at `t_k = k * dt`.
    pub fn uniform(dt: f64, states: Vec<DensityMatrix2>, picture: Picture) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidTrajectory(format!("time step {dt} must be positive")));
        }
        let times = (0..states.len()).map(|k| k as f64 * dt).collect();
        Self::new(times, states, picture)
    }

    pub fn new(times: Vec<f64>, states: Vec<DensityMatrix2>, picture: Picture) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} times but {} states",
                times.len(),
                states.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidTrajectory("need at least two samples".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidTrajectory(format!("first time is {}, not 0", times[0])));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTrajectory("times not strictly increasing".into()));
        }
        let span = times[times.len() - 1];
        let dt = span / (times.len() - 1) as f64;
        for (k, &t) in times.iter().enumerate() {
            if (t - k as f64 * dt).abs() > 1e-12 * span {
                return Err(Error::InvalidTrajectory(format!(
                    "sample {k} at t = {t} is off the uniform grid of step {dt}"
                )));
            }
        }
        Ok(Self {
            times,
            states,
            picture,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix2] {
        &self.states
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.final_time() / (self.times.len() - 1) as f64
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory has at least two samples")
    }

    /// Converts an interaction-picture trajectory; Schroedinger input is returned as is.
    pub fn into_schroedinger(self, omega: f64) -> Self {
        match self.picture {
            Picture::Schroedinger => self,
            Picture::Interaction => {
                let states = self
                    .times
                    .iter()
                    .zip(&self.states)
                    .map(|(&t, rho)| to_schroedinger(rho, omega, t))
                    .collect();
                Self {
                    times: self.times,
                    states,
                    picture: Picture::Schroedinger,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poles_and_equator() {
        let up = pure_state(&BlochState::new(0.0, 0.0).unwrap());
        assert_eq!(up.rho11(), 1.0);
        assert_eq!(up.rho22(), 0.0);
        assert_eq!(up.rho12(), c(0.0, 0.0));

        let down = pure_state(&BlochState::new(PI, 0.0).unwrap());
        assert!(down.rho11().abs() < 1e-15);
        assert!((down.rho22() - 1.0).abs() < 1e-15);

        let eq = pure_state(&BlochState::new(PI / 2.0, 0.0).unwrap());
        for row in eq.entries() {
            for z in row {
                assert!((z - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn theta_out_of_range() {
        assert!(matches!(BlochState::new(-1e-3, 0.0), Err(Error::InvalidAngle(_))));
        assert!(matches!(BlochState::new(PI + 1e-9, 0.0), Err(Error::InvalidAngle(_))));
        assert!(BlochState::new(PI, 7.0).unwrap().phi() < 2.0 * PI);
    }

    #[test]
    fn rejects_non_hermitian_and_bad_trace() {
        let bad = [[c(0.5, 0.0), c(0.1, 0.0)], [c(0.2, 0.0), c(0.5, 0.0)]];
        assert!(DensityMatrix2::from_entries(bad).is_err());
        let bad_trace = [[c(0.6, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]];
        assert!(DensityMatrix2::from_entries(bad_trace).is_err());
    }

    #[test]
    fn pure_state_spectrum() {
        let b = BlochState::new(1.1, 0.4).unwrap();
        let sp = eigensystem(&pure_state(&b));
        assert!((sp.lambda_plus - 1.0).abs() < 1e-14);
        assert!(sp.lambda_minus.abs() < 1e-14);
        assert!(!sp.degenerate);
        // vec_plus equals the ket up to a global phase
        let overlap = inner(&b.ket(), &sp.vec_plus);
        assert!((overlap.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_is_degenerate() {
        let sp = eigensystem(&DensityMatrix2::diagonal(0.5));
        assert_eq!(sp.lambda_plus, 0.5);
        assert_eq!(sp.lambda_minus, 0.5);
        assert!(sp.degenerate);
    }

    #[test]
    fn min_eigenvalue_examples() {
        let b = BlochState::new(0.7, 2.0).unwrap();
        assert!(min_eigenvalue(&pure_state(&b)).abs() < 1e-15);
        assert_eq!(min_eigenvalue(&DensityMatrix2::diagonal(0.5)), 0.5);
        assert!((min_eigenvalue(&DensityMatrix2::diagonal(-0.1)) + 0.1).abs() < 1e-15);
    }

    #[test]
    fn picture_transform_examples() {
        let diag = DensityMatrix2::diagonal(0.3);
        assert_eq!(to_schroedinger(&diag, 1.3, 4.0), diag);

        let rho = DensityMatrix2::from_population_coherence(0.5, c(0.5, 0.0));
        let back = to_schroedinger(&rho, 1.0, 2.0 * PI);
        assert!(back.max_abs_diff(&rho) < 1e-15);

        let phi = 0.8;
        let t = 0.37;
        let rho = DensityMatrix2::from_population_coherence(0.5, Complex64::from_polar(0.5, -phi));
        let s = to_schroedinger(&rho, 1.0, t);
        assert!((s.rho12() - Complex64::from_polar(0.5, -(phi + t))).norm() < 1e-15);
        assert!((s.rho21() - s.rho12().conj()).norm() == 0.0);
        assert!(to_interaction(&s, 1.0, t).max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn gauge_rule() {
        let v = canonical_gauge([c(0.0, 0.6), c(-0.8, 0.0)]);
        assert_eq!(v[1].im, 0.0);
        assert!(v[1].re > 0.0);
        // tie resolves to the first component
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = canonical_gauge([Complex64::from_polar(s, 1.0), Complex64::from_polar(s, 2.0)]);
        assert!(v[0].im.abs() < 1e-16 && v[0].re > 0.0);
    }

    #[test]
    fn trajectory_validation() {
        let s = DensityMatrix2::diagonal(1.0);
        assert!(Trajectory::uniform(0.1, vec![s], Picture::Schroedinger).is_err());
        assert!(Trajectory::new(vec![0.0, 0.1, 0.3], vec![s; 3], Picture::Schroedinger).is_err());
        assert!(Trajectory::new(vec![0.0, 0.1], vec![s; 3], Picture::Schroedinger).is_err());
        let tr = Trajectory::uniform(0.25, vec![s; 5], Picture::Interaction).unwrap();
        assert_eq!(tr.final_time(), 1.0);
    }
}

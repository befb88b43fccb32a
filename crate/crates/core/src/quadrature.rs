//! Fixed-step quadrature and finite-difference stencils on uniform grids.

use std::ops::{Add, Mul, Sub};

/// Composite quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Simpson,
    Trapezoid,
}

/// Integrates uniformly spaced samples `f(k h)`, `k = 0..n`.
///
/// Simpson requires an even number of intervals; an odd count is handled by
/// closing the last three intervals with the 3/8 rule.
pub fn integrate_samples<T>(samples: &[T], h: f64, scheme: Scheme) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    let n = samples.len();
    if n < 2 {
        return T::default();
    }
    let intervals = n - 1;
    match scheme {
        Scheme::Trapezoid => trapezoid(samples, h),
        Scheme::Simpson if intervals == 1 => trapezoid(samples, h),
        Scheme::Simpson if intervals.is_multiple_of(2) => simpson(samples, h),
        Scheme::Simpson => {
            let split = intervals - 3;
            let head = if split > 0 { simpson(&samples[..=split], h) } else { T::default() };
            let t = &samples[split..];
            head + (t[0] + t[1] * 3.0 + t[2] * 3.0 + t[3]) * (3.0 * h / 8.0)
        }
    }
}

fn trapezoid<T>(samples: &[T], h: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    let n = samples.len();
    let inner = samples[1..n - 1].iter().fold(T::default(), |acc, &x| acc + x);
    (samples[0] * 0.5 + inner + samples[n - 1] * 0.5) * h
}

fn simpson<T>(samples: &[T], h: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    let n = samples.len();
    let mut acc = samples[0] + samples[n - 1];
    for (k, &x) in samples.iter().enumerate().take(n - 1).skip(1) {
        acc = acc + x * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * (h / 3.0)
}

/// Integrates `f` over `[a, b]` with `steps` intervals.
pub fn integrate_fn<F>(f: F, a: f64, b: f64, steps: usize, scheme: Scheme) -> f64
where
    F: Fn(f64) -> f64,
{
    let h = (b - a) / steps as f64;
    let samples: Vec<f64> = (0..=steps).map(|k| f(a + k as f64 * h)).collect();
    integrate_samples(&samples, h, scheme)
}

/// Derivative of uniformly sampled data.
///
/// Interior points use the fourth-order central stencil, the two points
/// nearest each end use fourth-order one-sided stencils. Fewer than five
/// samples fall back to second-order central differences.
pub fn derivative<T>(samples: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = samples.len();
    assert!(n >= 2, "derivative needs at least two samples");
    let f = samples;
    if n < 5 {
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let d = if k == 0 {
                (f[1] - f[0]) * (1.0 / h)
            } else if k == n - 1 {
                (f[n - 1] - f[n - 2]) * (1.0 / h)
            } else {
                (f[k + 1] - f[k - 1]) * (0.5 / h)
            };
            out.push(d);
        }
        return out;
    }
    let s = 1.0 / (12.0 * h);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let d = match k {
            0 => f[1] * 48.0 - f[0] * 25.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0,
            1 => f[2] * 18.0 - f[0] * 3.0 - f[1] * 10.0 - f[3] * 6.0 + f[4],
            _ if k == n - 2 => f[n - 1] * 3.0 + f[n - 2] * 10.0 - f[n - 3] * 18.0 + f[n - 4] * 6.0 - f[n - 5],
            _ if k == n - 1 => {
                f[n - 1] * 25.0 - f[n - 2] * 48.0 + f[n - 3] * 36.0 - f[n - 4] * 16.0 + f[n - 5] * 3.0
            }
            _ => (f[k - 2] - f[k + 2]) + (f[k + 1] - f[k - 1]) * 8.0,
        };
        out.push(d * s);
    }
    out
}

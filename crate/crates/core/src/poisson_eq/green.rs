//! Dirichlet Green functions of `-Delta`.

use std::f64::consts::PI;

use super::{check_point, dot, norm_sq, Domain};
use crate::error::{Error, Result};

/// `G(x, y)`, zero when either point lies outside the closed domain.
/// Coincident points are rejected for `d >= 2`.
pub fn green(domain: &Domain, x: &[f64], y: &[f64]) -> Result<f64> {
    let d = domain.dim();
    for p in [x, y] {
        if p.len() != d {
            return Err(Error::Dimension {
                expected: d,
                got: p.len(),
            });
        }
    }
    if !domain.contains(x) || !domain.contains(y) {
        return Ok(0.0);
    }
    if d >= 2 && x == y {
        return Err(Error::SingularPoint(x.to_vec()));
    }
    Ok(green_unchecked(domain, x, y))
}

/// Green function for points known to lie in the closed domain.
pub(crate) fn green_unchecked(domain: &Domain, x: &[f64], y: &[f64]) -> f64 {
    match domain {
        Domain::Interval => interval(x[0], y[0]),
        Domain::Disk => {
            // (1/2pi) ln(|y| |x - y*| / |x - y|) with y* = y / |y|^2
            let num = norm_sq(x) * norm_sq(y) - 2.0 * dot(x, y) + 1.0;
            let den = dist_sq(x, y);
            (num / den).ln() / (4.0 * PI)
        }
        Domain::Ball => {
            let num = (norm_sq(x) * norm_sq(y) - 2.0 * dot(x, y) + 1.0).sqrt();
            (1.0 / dist_sq(x, y).sqrt() - 1.0 / num) / (4.0 * PI)
        }
        Domain::Hypercube { d: 1, .. } => interval(x[0], y[0]),
        Domain::Hypercube { .. } => hypercube_heat(x, y),
    }
}

fn interval(x: f64, y: f64) -> f64 {
    if x <= y {
        x * (1.0 - y)
    } else {
        y * (1.0 - x)
    }
}

fn dist_sq(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

// Below this time the 1D Dirichlet heat kernel is summed over images,
// above it over sine modes; both are converged to double precision there.
const IMAGE_SWITCH: f64 = 0.02;
const MODES: usize = 14;
const LOG_STEP: f64 = 0.25;

/// Heat kernel of `d/dt = d^2/dx^2` on `(0,1)` with zero boundary values.
struct AxisKernel {
    a: f64,
    b: f64,
    modes: [f64; MODES],
}

impl AxisKernel {
    fn new(a: f64, b: f64) -> Self {
        let mut modes = [0.0; MODES];
        for (n, m) in modes.iter_mut().enumerate() {
            let k = (n + 1) as f64 * PI;
            *m = 2.0 * (k * a).sin() * (k * b).sin();
        }
        Self { a, b, modes }
    }

    fn at(&self, t: f64) -> f64 {
        if t < IMAGE_SWITCH {
            let g = |u: f64| (-u * u / (4.0 * t)).exp();
            let mut s = 0.0;
            for shift in [-2.0, 0.0, 2.0] {
                s += g(self.a - self.b + shift) - g(self.a + self.b + shift);
            }
            s / (4.0 * PI * t).sqrt()
        } else {
            let q = (-PI * PI * t).exp();
            self.modes
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let n = (n + 1) as i32;
                    c * q.powi(n * n)
                })
                .sum()
        }
    }
}

/// `G(x, y) = int_0^inf prod_j p_t(x_j, y_j) dt`, integrated in `s = ln t`
/// by the trapezoidal rule, which converges geometrically here.
fn hypercube_heat(x: &[f64], y: &[f64]) -> f64 {
    let kernels: Vec<AxisKernel> = x.iter().zip(y).map(|(&a, &b)| AxisKernel::new(a, b)).collect();
    let r2 = dist_sq(x, y).max(1e-300);
    let lo = (r2 / 200.0).ln();
    let hi = 5.0f64.ln();
    let n = ((hi - lo) / LOG_STEP).ceil() as usize;
    let h = (hi - lo) / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let s = lo + h * i as f64;
        let t = s.exp();
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        let p: f64 = kernels.iter().map(|k| k.at(t)).product();
        acc += w * t * p;
    }
    acc * h
}

/// Truncated eigen-series `sum_{1 <= n_j <= n_max} e_n(x) e_n(y) / lambda_n`.
pub fn green_hypercube_series(x: &[f64], y: &[f64], n_max: usize) -> Result<f64> {
    let d = x.len();
    let cube = Domain::Hypercube { d, n_max };
    check_point(&cube, x)?;
    check_point(&cube, y)?;
    // per-axis products 2 sin(n pi x_j) sin(n pi y_j)
    let axes: Vec<Vec<f64>> = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            (1..=n_max)
                .map(|n| {
                    let k = n as f64 * PI;
                    2.0 * (k * a).sin() * (k * b).sin()
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    loop {
        let mut prod = 1.0;
        let mut lam = 0.0;
        for (j, &i) in idx.iter().enumerate() {
            prod *= axes[j][i];
            lam += ((i + 1) * (i + 1)) as f64;
        }
        total += prod / (PI * PI * lam);
        let mut pos = 0;
        loop {
            if pos == d {
                return Ok(total);
            }
            idx[pos] += 1;
            if idx[pos] < n_max {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Upper bound on the L2 tail `sum_{max n_j > n_max} lambda_n^{-2}` of the
/// truncated series; infinite for `d >= 4`.
pub fn hypercube_tail_bound(d: usize, n_max: usize) -> f64 {
    if d >= 4 {
        return f64::INFINITY;
    }
    // shell max n_j = s has at most d s^{d-1} modes with lambda >= pi^2 s^2
    let n = n_max as f64;
    d as f64 * n.powi(d as i32 - 4) / ((4 - d) as f64 * PI.powi(4))
}

//! Hermite functions `xi_n` (1-based) and their tensor products `zeta_k`.

use crate::multiindex::dim_unrank;
use crate::quad::Rule;

/// `pi^{-1/4}`
pub const HERMITE_SEED: f64 = 0.751_125_544_464_942_5;

/// `xi_n(t)`: the `n`-th L2(R)-orthonormal Hermite function, `n >= 1`.
pub fn hermite_fn(n: usize, t: f64) -> f64 {
    assert!(n >= 1, "Hermite functions are indexed from 1");
    hermite_all(n, t)[n - 1]
}

// Three-term recurrence for psi_0..psi_{len-1}, with xi_n = psi_{n-1}.
fn fill(buf: &mut [f64], t: f64) {
    if buf.is_empty() {
        return;
    }
    buf[0] = HERMITE_SEED * (-0.5 * t * t).exp();
    if buf.len() > 1 {
        buf[1] = std::f64::consts::SQRT_2 * t * buf[0];
    }
    for j in 2..buf.len() {
        // psi_j = t sqrt(2/j) psi_{j-1} - sqrt((j-1)/j) psi_{j-2}
        let jf = j as f64;
        buf[j] = t * (2.0 / jf).sqrt() * buf[j - 1] - ((jf - 1.0) / jf).sqrt() * buf[j - 2];
    }
}

/// `[xi_1(t), ..., xi_n(t)]`.
pub fn hermite_all(n: usize, t: f64) -> Vec<f64> {
    let mut buf = vec![0.0; n];
    fill(&mut buf, t);
    buf
}

/// `[int_a^b xi_1, ..., int_a^b xi_n]` by composite Gauss-Legendre with
/// panels fine enough to resolve the oscillations of `xi_n`.
pub fn hermite_integrals(n: usize, a: f64, b: f64) -> Vec<f64> {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut acc = vec![0.0; n];
    if hi == lo || n == 0 {
        return acc;
    }
    // local wavenumber of xi_n is at most sqrt(2n + 1)
    let wave = (2.0 * n as f64 + 1.0).sqrt();
    let panels = ((hi - lo) * wave / 2.0).ceil().max(2.0) as usize;
    let rule = Rule::composite(lo, hi, panels);
    let mut buf = vec![0.0; n];
    for &(t, w) in &rule.points {
        fill(&mut buf, t);
        for (a, v) in acc.iter_mut().zip(&buf) {
            *a += w * v;
        }
    }
    acc.iter_mut().for_each(|v| *v *= sign);
    acc
}

/// Tensor Hermite functions `zeta_k(x) = prod_j xi_{i_j}(x_j)` with `(i_1..i_d)`
/// the graded-lexicographic unranking of `k`.
#[derive(Clone, Debug)]
pub struct TensorHermite {
    dim: usize,
    tuples: Vec<Vec<u64>>,
    max_component: usize,
}

impl TensorHermite {
    /// Prepares `zeta_1..zeta_count` in dimension `dim`.
    pub fn new(dim: usize, count: usize) -> Self {
        assert!(dim >= 1);
        let tuples: Vec<Vec<u64>> = (1..=count as u64).map(|k| dim_unrank(k, dim)).collect();
        let max_component = tuples
            .iter()
            .flat_map(|t| t.iter().copied())
            .max()
            .unwrap_or(1) as usize;
        Self {
            dim,
            tuples,
            max_component,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuple(&self, k: usize) -> &[u64] {
        &self.tuples[k - 1]
    }

    /// `[zeta_1(x), ..., zeta_count(x)]`
    pub fn eval_all(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.count()];
        self.eval_into(x, &mut out);
        out
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        let per_axis: Vec<Vec<f64>> = x.iter().map(|&t| hermite_all(self.max_component, t)).collect();
        for (o, tuple) in out.iter_mut().zip(&self.tuples) {
            *o = tuple
                .iter()
                .zip(&per_axis)
                .map(|(&i, vals)| vals[i as usize - 1])
                .product();
        }
    }

    /// `zeta_k(x)` for a single `k <= count`.
    pub fn eval(&self, k: usize, x: &[f64]) -> f64 {
        self.tuple(k)
            .iter()
            .zip(x)
            .map(|(&i, &t)| hermite_fn(i as usize, t))
            .product()
    }

    /// `[int_{[a,b]} zeta_1, ...]` over an axis-aligned rectangle; the
    /// integrals factor over coordinates.
    pub fn integrals(&self, lower: &[f64], upper: &[f64]) -> Vec<f64> {
        let per_axis: Vec<Vec<f64>> = lower
            .iter()
            .zip(upper)
            .map(|(&a, &b)| hermite_integrals(self.max_component, a, b))
            .collect();
        self.tuples
            .iter()
            .map(|tuple| {
                tuple
                    .iter()
                    .zip(&per_axis)
                    .map(|(&i, vals)| vals[i as usize - 1])
                    .product()
            })
            .collect()
    }
}

/// `zeta_k(x)` for arbitrary `k` and dimension `x.len()`.
pub fn tensor_hermite(k: usize, x: &[f64]) -> f64 {
    dim_unrank(k as u64, x.len())
        .iter()
        .zip(x)
        .map(|(&i, &t)| hermite_fn(i as usize, t))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn seed_constant() {
        assert!((HERMITE_SEED - PI.powf(-0.25)).abs() < 1e-16);
    }

    #[test]
    fn point_values() {
        assert!((hermite_fn(1, 0.0) - 0.7511255).abs() < 1e-7);
        assert_eq!(hermite_fn(2, 0.0), 0.0);
        // xi_2(t) = pi^{-1/4} sqrt(2) t e^{-t^2/2}
        let t = 0.7;
        let closed = HERMITE_SEED * 2f64.sqrt() * t * (-t * t / 2.0).exp();
        assert!((hermite_fn(2, t) - closed).abs() < 1e-15);
        // xi_3(t) = pi^{-1/4} (2t^2 - 1)/sqrt(2) e^{-t^2/2}
        let closed = HERMITE_SEED * (2.0 * t * t - 1.0) / 2f64.sqrt() * (-t * t / 2.0).exp();
        assert!((hermite_fn(3, t) - closed).abs() < 1e-15);
    }

    #[test]
    fn parity() {
        for n in 1..20 {
            let s = if n % 2 == 1 { 1.0 } else { -1.0 };
            assert!((hermite_fn(n, -1.3) - s * hermite_fn(n, 1.3)).abs() < 1e-14);
        }
    }

    #[test]
    fn uniform_bound() {
        let mut overall: f64 = 0.0;
        for n in 1..=200 {
            let mut m: f64 = 0.0;
            let mut t = -25.0;
            while t <= 25.0 {
                m = m.max(hermite_fn(n, t).abs());
                t += 0.005;
            }
            assert!(m <= 0.816, "n = {n}: {m}");
            overall = overall.max(m);
        }
        assert!((overall - HERMITE_SEED).abs() < 1e-6);
    }

    #[test]
    fn tensor_values() {
        let th = TensorHermite::new(1, 10);
        for k in 1..=10 {
            assert_eq!(th.eval(k, &[0.3]), hermite_fn(k, 0.3));
        }
        let th = TensorHermite::new(2, 3);
        assert!((th.eval(1, &[0.0, 0.0]) - 1.0 / PI.sqrt()).abs() < 1e-15);
        let all = th.eval_all(&[0.2, -0.4]);
        assert!((all[1] - hermite_fn(1, 0.2) * hermite_fn(2, -0.4)).abs() < 1e-15);
        assert!((all[2] - hermite_fn(2, 0.2) * hermite_fn(1, -0.4)).abs() < 1e-15);
        assert_eq!(tensor_hermite(3, &[0.2, -0.4]), all[2]);
    }

    #[test]
    fn integrals_match_closed_forms() {
        // int_0^x xi_2 = pi^{-1/4} sqrt(2) (1 - e^{-x^2/2})
        let v = hermite_integrals(2, 0.0, 1.5);
        let closed = HERMITE_SEED * 2f64.sqrt() * (1.0 - (-1.125f64).exp());
        assert!((v[1] - closed).abs() < 1e-14);
        let back = hermite_integrals(2, 1.5, 0.0);
        assert!((back[1] + closed).abs() < 1e-14);
        // full line: int xi_1 = sqrt(2) pi^{1/4}
        let v = hermite_integrals(1, -40.0, 40.0);
        assert!((v[0] - 2f64.sqrt() * PI.powf(0.25)).abs() < 1e-12);
    }
}

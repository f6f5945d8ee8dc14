//! Measure-level identities: the characteristic functional and the raw
//! moment formula of `<omega, f>`.

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::LevyMeasureModel;
use crate::error::{Error, Result};
use crate::par::{replicate, RandomSource};
use crate::prm::config::{PrmSampler, SampleBox};
use crate::prm::integrals::{pair_raw, Intensity};

/// Empirical `E[exp(i <omega, f>)]` against `exp(int (e^{if} - 1) dpi)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CharFunctional {
    pub empirical: Complex64,
    pub theory: Complex64,
    /// standard errors of the real and imaginary parts
    pub std_error: (f64, f64),
    pub n: usize,
}

impl CharFunctional {
    pub fn within(&self, k: f64) -> bool {
        let d = self.empirical - self.theory;
        d.re.abs() <= k * self.std_error.0 && d.im.abs() <= k * self.std_error.1
    }
}

pub fn char_functional_theory<F: Fn(&[f64], f64) -> f64>(intensity: &Intensity, f: F) -> Complex64 {
    let re = intensity.integrate(|x, z| f(x, z).cos() - 1.0);
    let im = intensity.integrate(|x, z| f(x, z).sin());
    Complex64::new(re, im).exp()
}

pub fn char_functional_check<F>(
    model: &LevyMeasureModel,
    bbox: &SampleBox,
    eps: f64,
    f: F,
    n: usize,
    source: &RandomSource,
) -> Result<CharFunctional>
where
    F: Fn(&[f64], f64) -> f64 + Sync + Send + Copy,
{
    let sampler = PrmSampler::new(model, bbox, eps)?;
    let theory = char_functional_theory(&Intensity::new(model, bbox, eps), f);
    let phases = replicate(source, n, |rng, _| pair_raw(&sampler.sample(rng), f));
    let re: Vec<f64> = phases.iter().map(|t| t.cos()).collect();
    let im: Vec<f64> = phases.iter().map(|t| t.sin()).collect();
    let (er, ei) = (crate::stats::mean(&re), crate::stats::mean(&im));
    Ok(CharFunctional {
        empirical: Complex64::new(er.estimate, ei.estimate),
        theory,
        std_error: (er.std_error, ei.std_error),
        n,
    })
}

/// Compositions of `n` into `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `M_n = sum_k n!/k! sum_{a in compositions(n, k)} prod_j <pi, f^{a_j}> / a_j!`
/// given `powers[a - 1] = <pi, f^a>` for `a = 1..=n`.
pub fn moment_from_integrals(powers: &[f64], n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    if powers.len() < n {
        return Err(Error::Dimension {
            expected: n,
            got: powers.len(),
        });
    }
    let mut total = 0.0;
    for k in 1..=n {
        let inner: f64 = compositions(n, k)
            .iter()
            .map(|c| c.iter().map(|&a| powers[a - 1] / factorial(a)).product::<f64>())
            .sum();
        total += factorial(n) / factorial(k) * inner;
    }
    Ok(total)
}

/// Raw `n`-th moment of `<omega, f>` from the intensity integrals of `f^a`.
pub fn moment_formula<F: Fn(&[f64], f64) -> f64>(
    model: &LevyMeasureModel,
    bbox: &SampleBox,
    eps: f64,
    f: F,
    n: usize,
) -> Result<f64> {
    if n > 4 {
        return Err(Error::Unsupported(format!("moment order {n} > 4")));
    }
    let intensity = Intensity::new(model, bbox, eps);
    moment_with(&intensity, f, n)
}

pub fn moment_with<F: Fn(&[f64], f64) -> f64>(intensity: &Intensity, f: F, n: usize) -> Result<f64> {
    let powers: Vec<f64> = (1..=n as i32).map(|a| intensity.integrate(|x, z| f(x, z).powi(a))).collect();
    if powers.iter().any(|v| !v.is_finite()) {
        return Err(Error::Quadrature("non-finite moment integral".into()));
    }
    moment_from_integrals(&powers, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit() -> (LevyMeasureModel, SampleBox) {
        (LevyMeasureModel::atoms(&[(1.0, 1.0)]).unwrap(), SampleBox::cube(1, 1.0))
    }

    /// Raw moments of Poisson(1): Bell numbers.
    #[test]
    fn poisson_moments() {
        let (m, b) = unit();
        let want = [1.0, 2.0, 5.0, 15.0];
        for n in 1..=4 {
            let v = moment_formula(&m, &b, 0.0, |_, _| 1.0, n).unwrap();
            assert!((v - want[n - 1]).abs() < 1e-12, "{n}: {v}");
        }
        assert!(moment_formula(&m, &b, 0.0, |_, _| 1.0, 5).is_err());
    }

    #[test]
    fn compound_poisson_moments() {
        // N ~ Poisson(lam), jumps +-1 equally: E[S^2] = lam, E[S^4] = lam + 3 lam^2
        let m = LevyMeasureModel::atoms(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let b = SampleBox::cube(1, 2.0);
        let lam = 2.0;
        assert!(moment_formula(&m, &b, 0.0, |_, z| z, 1).unwrap().abs() < 1e-14);
        assert!((moment_formula(&m, &b, 0.0, |_, z| z, 2).unwrap() - lam).abs() < 1e-12);
        assert!(moment_formula(&m, &b, 0.0, |_, z| z, 3).unwrap().abs() < 1e-12);
        assert!((moment_formula(&m, &b, 0.0, |_, z| z, 4).unwrap() - (lam + 3.0 * lam * lam)).abs() < 1e-12);
    }

    #[test]
    fn composition_counts() {
        // C(n-1, k-1)
        assert_eq!(compositions(4, 1).len(), 1);
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(4, 3).len(), 3);
        assert_eq!(compositions(6, 3).len(), 10);
        assert!(compositions(2, 3).is_empty());
    }

    #[test]
    fn char_functional_values() {
        let (m, b) = unit();
        let intensity = Intensity::new(&m, &b, 0.0);
        let t = char_functional_theory(&intensity, |_, _| PI);
        assert!((t - Complex64::new((-2.0f64).exp(), 0.0)).norm() < 1e-14);
        let zero = char_functional_check(&m, &b, 0.0, |_, _| 0.0, 100, &RandomSource::new(1)).unwrap();
        assert_eq!(zero.empirical, Complex64::new(1.0, 0.0));
        assert_eq!(zero.theory, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn char_functional_mc() {
        let (m, b) = unit();
        let r = char_functional_check(&m, &b, 0.0, |_, _| 1.3, 20_000, &RandomSource::new(3)).unwrap();
        assert!(r.within(4.0), "{r:?}");
    }
}

//! Monte Carlo estimators with standard errors and the report row format
//! shared by the `verify`, `sample` and `moments` commands.

use serde::Serialize;

/// Point estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
}

impl Estimate {
    /// `|estimate - theory| <= k * std_error`
    pub fn within(&self, theory: f64, k: f64) -> bool {
        (self.estimate - theory).abs() <= k * self.std_error
    }

    pub fn z_score(&self, theory: f64) -> f64 {
        (self.estimate - theory) / self.std_error
    }
}

/// Sample mean, SE = s / sqrt(n).
pub fn mean(values: &[f64]) -> Estimate {
    let n = values.len();
    let m = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n as f64 - 1.0);
    Estimate {
        estimate: m,
        std_error: (var / n as f64).sqrt(),
        n,
    }
}

/// Unbiased sample variance; SE from the central fourth moment,
/// `sqrt((m4 - s^4) / n)`.
pub fn variance(values: &[f64]) -> Estimate {
    let n = values.len();
    let nf = n as f64;
    let m = values.iter().sum::<f64>() / nf;
    let (mut m2, mut m4) = (0.0, 0.0);
    for v in values {
        let d = (v - m) * (v - m);
        m2 += d;
        m4 += d * d;
    }
    let s2 = m2 / (nf - 1.0);
    let m4 = m4 / nf;
    let b2 = m2 / nf;
    Estimate {
        estimate: s2,
        std_error: ((m4 - b2 * b2).max(0.0) / nf).sqrt(),
        n,
    }
}

/// Mean of the products `x_i y_i`.
pub fn product_mean(x: &[f64], y: &[f64]) -> Estimate {
    let prods: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
    mean(&prods)
}

/// Difference of two independent sample means with combined SE.
pub fn mean_difference(a: &[f64], b: &[f64]) -> Estimate {
    let (ea, eb) = (mean(a), mean(b));
    Estimate {
        estimate: ea.estimate - eb.estimate,
        std_error: (ea.std_error.powi(2) + eb.std_error.powi(2)).sqrt(),
        n: a.len().min(b.len()),
    }
}

/// Difference of two independent sample variances with combined SE.
pub fn variance_difference(a: &[f64], b: &[f64]) -> Estimate {
    let (ea, eb) = (variance(a), variance(b));
    Estimate {
        estimate: ea.estimate - eb.estimate,
        std_error: (ea.std_error.powi(2) + eb.std_error.powi(2)).sqrt(),
        n: a.len().min(b.len()),
    }
}

/// One line of a numeric report. Every row carries the theory value, the
/// estimate, its SE and the tolerance it was judged against.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub quantity: String,
    pub estimate: f64,
    pub theory: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub eps: f64,
    pub truncation_var: f64,
    pub tolerance: String,
    pub pass: bool,
}

impl ReportRow {
    /// Row judged by `|estimate - theory| <= k SE`.
    pub fn mc(quantity: impl Into<String>, est: Estimate, theory: f64, k: f64, seed: u64) -> Self {
        Self {
            quantity: quantity.into(),
            estimate: est.estimate,
            theory,
            std_error: est.std_error,
            n_samples: est.n,
            seed,
            eps: 0.0,
            truncation_var: 0.0,
            tolerance: format!("{k} SE"),
            pass: est.within(theory, k),
        }
    }

    /// Row judged by an absolute tolerance.
    pub fn abs(quantity: impl Into<String>, estimate: f64, theory: f64, tol: f64) -> Self {
        Self {
            quantity: quantity.into(),
            estimate,
            theory,
            std_error: 0.0,
            n_samples: 0,
            seed: 0,
            eps: 0.0,
            truncation_var: 0.0,
            tolerance: format!("abs {tol:e}"),
            pass: (estimate - theory).abs() <= tol && estimate.is_finite(),
        }
    }

    /// Row judged by a relative tolerance.
    pub fn rel(quantity: impl Into<String>, estimate: f64, theory: f64, tol: f64) -> Self {
        Self {
            tolerance: format!("rel {tol:e}"),
            pass: (estimate - theory).abs() <= tol * theory.abs() && estimate.is_finite(),
            ..Self::abs(quantity, estimate, theory, 0.0)
        }
    }

    /// Row carrying an externally decided verdict.
    pub fn flag(quantity: impl Into<String>, estimate: f64, theory: f64, tolerance: impl Into<String>, pass: bool) -> Self {
        Self {
            tolerance: tolerance.into(),
            pass,
            ..Self::abs(quantity, estimate, theory, 0.0)
        }
    }

    pub fn with_truncation(mut self, eps: f64, truncation_var: f64) -> Self {
        self.eps = eps;
        self.truncation_var = truncation_var;
        self
    }
}

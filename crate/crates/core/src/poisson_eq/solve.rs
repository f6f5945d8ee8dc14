//! Chaos and Monte Carlo solutions of `Delta U = -eta'`.

use num_complex::Complex64;
use serde::Serialize;

use super::green::green_unchecked;
use super::polar::{polar_integrate, polar_sum, PolarOptions};
use super::{check_point, Domain};
use crate::basis::{LevyMeasureModel, TensorHermite};
use crate::chaos::{ChaosExpansion, ComplexPoint};
use crate::error::{Error, Result};
use crate::multiindex::{cantor_pair, MultiIndex};
use crate::par::{replicate, RandomSource};
use crate::prm::{PointConfiguration, PrmSampler};
use crate::quad::Rule;
use crate::stats::{self, Estimate};

/// Truncated chaos solution at one point.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionField {
    pub x: Vec<f64>,
    /// truncation `K`: coefficients for `zeta_1..zeta_K`
    pub count: usize,
    pub m: f64,
    /// `int_D G(x, y) zeta_k(y) dy`
    pub integrals: Vec<f64>,
    #[serde(skip)]
    pub chaos: ChaosExpansion,
    /// `m^2 int_D G^2(x, y) dy` for `d <= 3`
    pub variance_exact: Option<f64>,
}

impl SolutionField {
    /// `c_k = m int_D G(x, y) zeta_k(y) dy`
    pub fn coefficients(&self) -> Vec<f64> {
        self.integrals.iter().map(|v| self.m * v).collect()
    }

    /// `sum_{k <= K} c_k^2`
    pub fn partial_variance(&self) -> f64 {
        self.coefficients().iter().map(|c| c * c).sum()
    }

    /// `(k, z(k,1), c_k, sum_{j <= k} c_j^2)` rows.
    pub fn rows(&self) -> Vec<(usize, u64, f64, f64)> {
        let mut acc = 0.0;
        self.coefficients()
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                acc += c * c;
                (i + 1, cantor_pair(i as u64 + 1, 1), c, acc)
            })
            .collect()
    }
}

/// `[int_D G(x, y) zeta_k(y) dy]_{k <= count}`.
pub fn green_zeta_integrals(domain: &Domain, x: &[f64], count: usize) -> Result<Vec<f64>> {
    check_point(domain, x)?;
    if domain.on_boundary(x) {
        return Ok(vec![0.0; count]);
    }
    let space = TensorHermite::new(domain.dim(), count);
    let opts = PolarOptions::resolving(domain.dim(), count);
    let out = polar_sum(domain, x, 0.0, &opts, count, |y, w, acc| {
        let g = w * green_unchecked(domain, x, y);
        let z = space.eval_all(y);
        for (a, v) in acc.iter_mut().zip(z) {
            *a += g * v;
        }
    });
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Quadrature("non-finite Green-Hermite integral".into()));
    }
    Ok(out)
}

fn solve_with_m(domain: &Domain, m: f64, x: &[f64], count: usize) -> Result<SolutionField> {
    let integrals = green_zeta_integrals(domain, x, count)?;
    let chaos = ChaosExpansion::from_terms(
        integrals
            .iter()
            .enumerate()
            .map(|(i, v)| (MultiIndex::unit(cantor_pair(i as u64 + 1, 1) as usize), m * v)),
    );
    let variance_exact = if domain.dim() <= 3 {
        Some(m * m * green_l2sq(domain, x)?)
    } else {
        None
    };
    Ok(SolutionField {
        x: x.to_vec(),
        count,
        m,
        integrals,
        chaos,
        variance_exact,
    })
}

/// `U(x) = m sum_{k <= count} (int_D G(x, y) zeta_k(y) dy) K_{eps^{z(k,1)}}`.
pub fn solve_chaos(domain: &Domain, model: &LevyMeasureModel, x: &[f64], count: usize) -> Result<SolutionField> {
    solve_with_m(domain, model.m(), x, count)
}

/// `int_D G^2(x, y) dy`, finite only for `d <= 3`.
pub fn green_l2sq(domain: &Domain, x: &[f64]) -> Result<f64> {
    check_point(domain, x)?;
    let d = domain.dim();
    if d >= 4 {
        return Err(Error::Divergent(format!(
            "int G^2(x, y) dy is infinite in dimension {d}"
        )));
    }
    if matches!(domain, Domain::Interval | Domain::Hypercube { d: 1, .. }) {
        let t = x[0];
        return Ok(t * t * (1.0 - t) * (1.0 - t) / 3.0);
    }
    if domain.on_boundary(x) {
        return Ok(0.0);
    }
    let opts = PolarOptions::for_dim(d);
    Ok(polar_integrate(domain, x, 0.0, &opts, |y| green_unchecked(domain, x, y).powi(2)))
}

/// `int_D G(x, y) dy`.
pub fn green_integral(domain: &Domain, x: &[f64]) -> Result<f64> {
    check_point(domain, x)?;
    if let Some(v) = domain.torsion(x) {
        return Ok(v);
    }
    let opts = PolarOptions::for_dim(domain.dim());
    Ok(polar_integrate(domain, x, 0.0, &opts, |y| green_unchecked(domain, x, y)))
}

/// `Var U(x) = m^2 int_D G^2(x, y) dy`.
pub fn variance_exact(domain: &Domain, model: &LevyMeasureModel, x: &[f64]) -> Result<f64> {
    Ok(model.m().powi(2) * green_l2sq(domain, x)?)
}

/// `u(x, z)`: the Hermite transform of the chaos solution.
pub fn hermite_solution(
    domain: &Domain,
    model: &LevyMeasureModel,
    x: &[f64],
    z: &ComplexPoint,
    count: usize,
) -> Result<Complex64> {
    Ok(solve_chaos(domain, model, x, count)?.chaos.hermite_transform(z))
}

// int_D G(x, y) sum_k w_k zeta_k(y) dy with the weights summed inside the
// integrand, on a rule independent of the one behind `green_zeta_integrals`.
fn direct_route(domain: &Domain, x: &[f64], weights: &[Complex64]) -> Result<Complex64> {
    check_point(domain, x)?;
    let count = weights.len();
    if domain.on_boundary(x) || count == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let space = TensorHermite::new(domain.dim(), count);
    let field = |y: &[f64]| -> Complex64 {
        space
            .eval_all(y)
            .iter()
            .zip(weights)
            .map(|(z, w)| w * z)
            .sum()
    };
    let out = match domain {
        Domain::Interval | Domain::Hypercube { d: 1, .. } => {
            let wave = (2.0 * count as f64 + 1.0).sqrt();
            let rule = Rule::composite_split(0.0, 1.0, &[x[0]], (wave * 2.0).ceil() as usize + 4);
            let mut acc = Complex64::new(0.0, 0.0);
            for &(t, w) in &rule.points {
                acc += w * green_unchecked(domain, x, &[t]) * field(&[t]);
            }
            acc
        }
        _ => {
            let base = PolarOptions::resolving(domain.dim(), count);
            let opts = PolarOptions {
                sphere: base.sphere + base.sphere / 2,
                levels: base.levels + 4,
                max_panel: base.max_panel * 0.6,
            };
            let v = polar_sum(domain, x, 0.0, &opts, 2, |y, w, acc| {
                let f = w * green_unchecked(domain, x, y) * field(y);
                acc[0] += f.re;
                acc[1] += f.im;
            });
            Complex64::new(v[0], v[1])
        }
    };
    Ok(out)
}

/// `int_D G(x, y) H(eta')(y, z) dy`, with `H(eta')(y, z) = m sum_k zeta_k(y) z_{z(k,1)}`,
/// integrating the transformed noise rather than transforming coefficients.
pub fn hermite_solution_direct(
    domain: &Domain,
    model: &LevyMeasureModel,
    x: &[f64],
    z: &ComplexPoint,
    count: usize,
) -> Result<Complex64> {
    let m = model.m();
    let weights: Vec<Complex64> = (1..=count as u64)
        .map(|k| m * z.get(cantor_pair(k, 1) as usize))
        .collect();
    direct_route(domain, x, &weights)
}

/// Both sides of the action of `U(x)` on a test element `f`:
/// `<U(x), f>` from the chaos solution, and `int_D G(x, y) <eta'(y), f> dy`
/// by direct quadrature.
pub fn test_action(
    domain: &Domain,
    model: &LevyMeasureModel,
    x: &[f64],
    f: &ChaosExpansion,
    count: usize,
) -> Result<(f64, f64)> {
    let lhs = solve_chaos(domain, model, x, count)?.chaos.inner(f)?;
    // <eta'(y), f> = m sum_k zeta_k(y) f_{eps^{z(k,1)}}, since eps^l! = 1
    let m = model.m();
    let weights: Vec<Complex64> = (1..=count as u64)
        .map(|k| Complex64::new(m * f.coefficient(&MultiIndex::unit(cantor_pair(k, 1) as usize)), 0.0))
        .collect();
    Ok((lhs, direct_route(domain, x, &weights)?.re))
}

/// Result of the coefficient-wise PDE residual check.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub k: usize,
    pub h: f64,
    /// `max_x |Delta_h c_k(x) + m zeta_k(x)|` over the grid
    pub residual: f64,
    /// `h^2`, the expected order of the residual
    pub scale: f64,
    pub grid: Vec<Vec<f64>>,
}

fn residual_grid(domain: &Domain) -> Vec<Vec<f64>> {
    match domain {
        Domain::Interval | Domain::Hypercube { d: 1, .. } => {
            [0.2, 0.35, 0.5, 0.65, 0.8].iter().map(|&t| vec![t]).collect()
        }
        Domain::Disk => vec![
            vec![0.0, 0.0],
            vec![0.3, 0.1],
            vec![-0.2, 0.4],
            vec![0.1, -0.5],
            vec![-0.45, -0.25],
        ],
        Domain::Ball => vec![vec![0.0, 0.0, 0.0], vec![0.2, -0.1, 0.3], vec![-0.3, 0.2, 0.1]],
        Domain::Hypercube { d, .. } => vec![vec![0.5; *d], vec![0.35; *d]],
    }
}

/// `max |Delta_h c_k + m zeta_k|` over a fixed interior grid, with `Delta_h`
/// the standard `2d + 1` point stencil.
pub fn laplacian_residual_with_m(domain: &Domain, m: f64, k: usize, h: f64) -> Result<ResidualReport> {
    if k == 0 {
        return Err(Error::IndexOutOfRange { index: 0, available: 0 });
    }
    let grid = residual_grid(domain);
    let d = domain.dim();
    let space = TensorHermite::new(d, k);
    let c = |y: &[f64]| -> Result<f64> { Ok(m * green_zeta_integrals(domain, y, k)?[k - 1]) };
    let mut worst: f64 = 0.0;
    for x in &grid {
        let mut lap = -2.0 * d as f64 * c(x)?;
        for j in 0..d {
            for s in [-1.0, 1.0] {
                let mut y = x.clone();
                y[j] += s * h;
                lap += c(&y)?;
            }
        }
        lap /= h * h;
        worst = worst.max((lap + m * space.eval(k, x)).abs());
    }
    Ok(ResidualReport {
        k,
        h,
        residual: worst,
        scale: h * h,
        grid,
    })
}

pub fn laplacian_residual(domain: &Domain, model: &LevyMeasureModel, k: usize, h: f64) -> Result<ResidualReport> {
    laplacian_residual_with_m(domain, model.m(), k, h)
}

/// Pathwise solution `U(x) = sum_i G(x, x_i) z_i - (int z nu) int_D G(x, y) dy`
/// with the compensator precomputed.
#[derive(Clone, Debug)]
pub struct McSolver {
    domain: Domain,
    x: Vec<f64>,
    compensator: f64,
    sampler: PrmSampler,
}

impl McSolver {
    pub fn new(domain: &Domain, model: &LevyMeasureModel, x: &[f64], eps: f64) -> Result<Self> {
        let d = domain.dim();
        if d >= 4 {
            return Err(Error::Divergent(format!(
                "U(x) is not square integrable in dimension {d}"
            )));
        }
        check_point(domain, x)?;
        let compensator = model.restricted_mean(eps) * green_integral(domain, x)?;
        Ok(Self {
            domain: *domain,
            x: x.to_vec(),
            compensator,
            sampler: PrmSampler::new(model, &domain.bounding_box(), eps)?,
        })
    }

    pub fn sampler(&self) -> &PrmSampler {
        &self.sampler
    }

    pub fn eval(&self, config: &PointConfiguration) -> f64 {
        let mut s = 0.0;
        for p in &config.points {
            if p.x != self.x && self.domain.contains(&p.x) {
                s += green_unchecked(&self.domain, &self.x, &p.x) * p.z;
            }
        }
        s - self.compensator
    }

    /// Draws `n` independent solutions.
    pub fn samples(&self, n: usize, source: &RandomSource) -> Vec<f64> {
        replicate(source, n, |rng, _| self.eval(&self.sampler.sample(rng)))
    }
}

/// `U(x)` for one configuration whose box covers the domain.
pub fn solve_mc(domain: &Domain, model: &LevyMeasureModel, config: &PointConfiguration, x: &[f64]) -> Result<f64> {
    let bb = domain.bounding_box();
    let covers = config
        .bbox
        .lower
        .iter()
        .zip(&config.bbox.upper)
        .zip(bb.lower.iter().zip(&bb.upper))
        .all(|((a, b), (c, d))| a <= c && b >= d);
    if config.bbox.dim() != domain.dim() || !covers {
        return Err(Error::Unsupported(format!(
            "sampling box {:?} does not cover the {} domain",
            config.bbox,
            domain.name()
        )));
    }
    Ok(McSolver::new(domain, model, x, config.eps)?.eval(config))
}

/// Sample mean and variance of `U(x)` over `n` configurations.
pub fn mc_moments(
    domain: &Domain,
    model: &LevyMeasureModel,
    x: &[f64],
    eps: f64,
    n: usize,
    source: &RandomSource,
) -> Result<(Estimate, Estimate)> {
    let samples = McSolver::new(domain, model, x, eps)?.samples(n, source);
    Ok((stats::mean(&samples), stats::variance(&samples)))
}

/// Dyadic radii used by default: `2^{-1}..2^{-20}` for `d <= 3`,
/// `0.1 * 2^{-j}`, `j < 4`, in four dimensions.
pub fn default_deltas(d: usize) -> Vec<f64> {
    if d >= 4 {
        (0..4).map(|j| 0.1 * 0.5f64.powi(j)).collect()
    } else {
        (1..=20).map(|j| 0.5f64.powi(j)).collect()
    }
}

/// `I(delta) = int_{D \ B_delta(x)} G^2(x, y) dy` for each radius, on the
/// domain for dimension `d`.
pub fn divergence_profile(d: usize, x: &[f64], deltas: &[f64]) -> Result<Vec<f64>> {
    let domain = Domain::for_dim(d)?;
    check_point(&domain, x)?;
    if domain.on_boundary(x) {
        return Err(Error::Unsupported("divergence profile needs an interior point".into()));
    }
    let opts = PolarOptions::for_dim(d);
    deltas
        .iter()
        .map(|&delta| {
            if !(delta > 0.0) {
                return Err(Error::Unsupported(format!("radius {delta} must be positive")));
            }
            Ok(polar_integrate(&domain, x, delta, &opts, |y| green_unchecked(&domain, x, y).powi(2)))
        })
        .collect()
}

//! Quadrature over `D \ B_delta(x)` in polar coordinates centred at `x`,
//! which absorbs the `|x - y|^{2-d}` singularity of the Green function into
//! the Jacobian `r^{d-1}`.

use serde::{Deserialize, Serialize};

use super::Domain;
use crate::par::map_range;
use crate::quad::{GaussLegendre, Rule, SphereRule};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarOptions {
    /// resolution parameter of the sphere rule
    pub sphere: usize,
    /// geometric levels towards `r = 0` when `delta = 0`; kept below ~34 so
    /// that `x + r w` still differs from `x` in double precision
    pub levels: usize,
    /// longest radial panel
    pub max_panel: f64,
}

impl PolarOptions {
    pub fn for_dim(d: usize) -> Self {
        match d {
            1 => Self {
                sphere: 1,
                levels: 10,
                max_panel: 0.25,
            },
            2 => Self {
                sphere: 48,
                levels: 30,
                max_panel: 0.25,
            },
            3 => Self {
                sphere: 16,
                levels: 30,
                max_panel: 0.25,
            },
            _ => Self {
                sphere: 6,
                levels: 20,
                max_panel: 0.25,
            },
        }
    }

    /// Panels short enough for `zeta_k`, `k <= count` in dimension `d`.
    pub fn resolving(d: usize, count: usize) -> Self {
        let base = Self::for_dim(d);
        let wave = (2.0 * count as f64 + 1.0).sqrt();
        Self {
            max_panel: base.max_panel.min(2.0 / wave),
            ..base
        }
    }
}

/// Radial rule on `[lo, hi]`: dyadic panels `[lo 2^j, lo 2^{j+1}]` when
/// `lo > 0`, geometric grading towards `0` otherwise; panels longer than
/// `max_panel` are split evenly.
pub fn radial_rule(lo: f64, hi: f64, levels: usize, max_panel: f64) -> Rule {
    let mut cuts = Vec::new();
    if hi <= lo {
        return Rule::default();
    }
    if lo > 0.0 {
        let mut c = lo;
        while c < hi {
            cuts.push(c);
            c *= 2.0;
        }
    } else {
        cuts.push(0.0);
        cuts.extend((1..=levels).rev().map(|j| hi * 0.5f64.powi(j as i32)));
    }
    cuts.push(hi);
    let gl = GaussLegendre::standard();
    let mut points = Vec::new();
    for w in cuts.windows(2) {
        let pieces = ((w[1] - w[0]) / max_panel).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / pieces as f64;
        for p in 0..pieces {
            let a = w[0] + h * p as f64;
            points.extend(gl.mapped(a, a + h));
        }
    }
    Rule { points }
}

/// `int_{D \ B_delta(x)} f(y) dy` for a vector-valued integrand of the
/// given width: `f(y, w, acc)` adds `w * f(y)` into `acc`.
pub fn polar_sum<F>(domain: &Domain, x: &[f64], delta: f64, opts: &PolarOptions, width: usize, f: F) -> Vec<f64>
where
    F: Fn(&[f64], f64, &mut [f64]) + Sync + Send,
{
    let d = domain.dim();
    let sphere = SphereRule::new(d, opts.sphere);
    let partials = map_range(sphere.len(), |i| {
        let (w, dw) = (&sphere.dirs[i], sphere.weights[i]);
        let mut acc = vec![0.0; width];
        let reach = domain.exit_distance(x, w);
        if reach <= delta {
            return acc;
        }
        let rule = radial_rule(delta, reach, opts.levels, opts.max_panel);
        let mut y = vec![0.0; d];
        for &(r, wr) in &rule.points {
            for j in 0..d {
                y[j] = x[j] + r * w[j];
            }
            f(&y, dw * wr * r.powi(d as i32 - 1), &mut acc);
        }
        acc
    });
    let mut total = vec![0.0; width];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// Scalar form of [`polar_sum`].
pub fn polar_integrate<F>(domain: &Domain, x: &[f64], delta: f64, opts: &PolarOptions, f: F) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    polar_sum(domain, x, delta, opts, 1, |y, w, acc| acc[0] += w * f(y))[0]
}

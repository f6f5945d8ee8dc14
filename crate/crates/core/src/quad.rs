//! Gauss-Legendre rules and the composite/graded/spherical rules built on
//! them. Every integral in the crate goes through this module.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn standard() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    /// Integrate `f` over `[a, b]` with this rule (one panel).
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }

    /// Mapped nodes and weights on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (mid + half * t, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A one-dimensional quadrature rule as explicit (node, weight) pairs.
#[derive(Clone, Debug, Default)]
pub struct Rule {
    pub points: Vec<(f64, f64)>,
}

impl Rule {
    /// `panels` equal panels of the shared 16-point rule on `[a, b]`.
    pub fn composite(a: f64, b: f64, panels: usize) -> Self {
        Self::composite_with(GaussLegendre::standard(), a, b, panels)
    }

    pub fn composite_with(gl: &GaussLegendre, a: f64, b: f64, panels: usize) -> Self {
        let mut points = Vec::with_capacity(panels * gl.nodes.len());
        if b <= a || panels == 0 {
            return Self { points };
        }
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + h * p as f64;
            points.extend(gl.mapped(lo, lo + h));
        }
        Self { points }
    }

    /// Panels split at each breakpoint inside `(a, b)`.
    pub fn composite_split(a: f64, b: f64, breaks: &[f64], panels_per_piece: usize) -> Self {
        let mut cuts = vec![a];
        let mut inner: Vec<f64> = breaks.iter().copied().filter(|&t| t > a && t < b).collect();
        inner.sort_by(f64::total_cmp);
        cuts.extend(inner);
        cuts.push(b);
        let mut points = Vec::new();
        for w in cuts.windows(2) {
            points.extend(Self::composite(w[0], w[1], panels_per_piece).points);
        }
        Self { points }
    }

    /// Rule on `[lo, hi]` geometrically graded towards `lo`: the panels are
    /// `[lo + s 2^{-j-1}, lo + s 2^{-j}]` for `j < levels`, then one final
    /// panel `[lo, lo + s 2^{-levels}]`, with `s = hi - lo`.
    pub fn graded(lo: f64, hi: f64, levels: usize) -> Self {
        let gl = GaussLegendre::standard();
        let mut points = Vec::new();
        if hi <= lo {
            return Self { points };
        }
        let span = hi - lo;
        let mut upper = span;
        for _ in 0..levels {
            let lower = 0.5 * upper;
            points.extend(gl.mapped(lo + lower, lo + upper));
            upper = lower;
        }
        points.extend(gl.mapped(lo, lo + upper));
        Self { points }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.points.iter().map(|&(x, w)| w * f(x)).sum()
    }
}

/// Unit direction vectors with weights summing to the surface area of the
/// unit sphere `S^{d-1}` (for `d = 1` the two directions `+-1`).
#[derive(Clone, Debug)]
pub struct SphereRule {
    pub dirs: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    /// `n` controls the resolution: the azimuth gets `2n` equispaced nodes
    /// and every polar angle an `n`-point Gauss-Legendre rule.
    pub fn new(d: usize, n: usize) -> Self {
        match d {
            1 => Self {
                dirs: vec![vec![1.0], vec![-1.0]],
                weights: vec![1.0, 1.0],
            },
            _ => {
                let n = n.max(2);
                let azimuth: Vec<(f64, f64)> = (0..2 * n)
                    .map(|i| (PI * i as f64 / n as f64, PI / n as f64))
                    .collect();
                let gl = GaussLegendre::new(n);
                // Odd powers of sin are polynomials in t = cos(psi), so those
                // angles use Gauss-Legendre in t; even powers carry the
                // Chebyshev weight sqrt(1 - t^2), whose Gauss rule is the
                // equispaced one in psi.
                let in_psi: Vec<(f64, f64)> = (1..=n)
                    .map(|i| (PI * i as f64 / (n + 1) as f64, PI / (n + 1) as f64))
                    .collect();
                let in_cos: Vec<(f64, f64)> = gl
                    .mapped(-1.0, 1.0)
                    .map(|(t, w)| {
                        let s = (1.0 - t * t).sqrt();
                        (t.acos(), w / s)
                    })
                    .collect();
                // Hyperspherical coordinates: psi_1..psi_{d-2} in (0, pi),
                // phi in [0, 2pi), measure prod sin^{d-1-i}(psi_i).
                let mut dirs = Vec::new();
                let mut weights = Vec::new();
                let n_polar = d - 2;
                let mut idx = vec![0usize; n_polar];
                loop {
                    let mut w_polar = 1.0;
                    let mut sin_prod = 1.0;
                    let mut prefix = Vec::with_capacity(d);
                    for (i, &pi) in idx.iter().enumerate() {
                        let power = d - 2 - i;
                        let (psi, w) = if power % 2 == 1 { in_cos[pi] } else { in_psi[pi] };
                        prefix.push(sin_prod * psi.cos());
                        w_polar *= w * psi.sin().powi((d - 2 - i) as i32);
                        sin_prod *= psi.sin();
                    }
                    for &(phi, w) in &azimuth {
                        let mut v = prefix.clone();
                        v.push(sin_prod * phi.cos());
                        v.push(sin_prod * phi.sin());
                        dirs.push(v);
                        weights.push(w_polar * w);
                    }
                    // advance the odometer over polar indices
                    let mut pos = 0;
                    loop {
                        if pos == n_polar {
                            return Self { dirs, weights };
                        }
                        idx[pos] += 1;
                        if idx[pos] < in_psi.len() {
                            break;
                        }
                        idx[pos] = 0;
                        pos += 1;
                    }
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }
}

/// Surface area of `S^{d-1}`.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        _ => {
            let half = d as f64 / 2.0;
            2.0 * PI.powf(half) / gamma_half_integer(d)
        }
    }
}

// Gamma(d/2) for positive integer d.
fn gamma_half_integer(d: usize) -> f64 {
    if d % 2 == 0 {
        (1..d / 2).map(|k| k as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < d as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Tensor-product rule over an axis-aligned box given per-axis rules.
pub fn tensor_points(rules: &[Rule]) -> Vec<(Vec<f64>, f64)> {
    let mut out = vec![(Vec::with_capacity(rules.len()), 1.0)];
    for rule in rules {
        let mut next = Vec::with_capacity(out.len() * rule.points.len());
        for (x, w) in &out {
            for &(t, wt) in &rule.points {
                let mut y = x.clone();
                y.push(t);
                next.push((y, w * wt));
            }
        }
        out = next;
    }
    out
}

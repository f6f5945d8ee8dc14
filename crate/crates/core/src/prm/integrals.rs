//! Pairings of a configuration with test functions, compensators against
//! the intensity `pi = Lebesgue x nu`, and pathwise Charlier / `K_alpha`
//! evaluation up to order two.

use crate::basis::{DeltaSystem, JumpTable, LevyMeasureModel, OrthonormalJumpBasis};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::prm::config::{PointConfiguration, SampleBox};
use crate::quad::{tensor_points, Rule};

/// Quadrature for integrals against `pi` over `box x {|z| >= eps}`.
#[derive(Clone, Debug)]
pub struct Intensity {
    bbox: SampleBox,
    eps: f64,
    space: Vec<(Vec<f64>, f64)>,
    jumps: JumpTable,
}

fn default_panels(d: usize, len: f64) -> usize {
    match d {
        1 => ((4.0 * len).ceil() as usize).clamp(4, 256),
        2 => ((2.0 * len).ceil() as usize).clamp(2, 32),
        3 => (len.ceil() as usize).clamp(1, 8),
        _ => 2,
    }
}

impl Intensity {
    pub fn new(model: &LevyMeasureModel, bbox: &SampleBox, eps: f64) -> Self {
        let breaks = vec![Vec::new(); bbox.dim()];
        Self::with_breaks(model, bbox, eps, &breaks)
    }

    /// Per-axis breakpoints (discontinuities of the integrands) are honoured
    /// by splitting the composite rule there.
    pub fn with_breaks(model: &LevyMeasureModel, bbox: &SampleBox, eps: f64, breaks: &[Vec<f64>]) -> Self {
        let d = bbox.dim();
        let rules: Vec<Rule> = (0..d)
            .map(|i| {
                let (a, b) = (bbox.lower[i], bbox.upper[i]);
                let panels = default_panels(d, b - a);
                let br = breaks.get(i).cloned().unwrap_or_default();
                let pieces = br.iter().filter(|&&t| t > a && t < b).count() + 1;
                Rule::composite_split(a, b, &br, panels.div_ceil(pieces).max(1))
            })
            .collect();
        Self {
            bbox: bbox.clone(),
            eps,
            space: tensor_points(&rules),
            jumps: model.jump_table(eps),
        }
    }

    pub fn bbox(&self) -> &SampleBox {
        &self.bbox
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn jumps(&self) -> &JumpTable {
        &self.jumps
    }

    /// `int_box int_{|z|>=eps} f dpi`
    pub fn integrate<F: Fn(&[f64], f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        for (x, wx) in &self.space {
            let mut inner = 0.0;
            for &(z, wz) in &self.jumps.nodes {
                inner += wz * f(x, z);
            }
            acc += wx * inner;
        }
        acc
    }

    /// `||f||^2_{L2(pi)}` over the truncated region.
    pub fn norm_sq<F: Fn(&[f64], f64) -> f64>(&self, f: F) -> f64 {
        self.integrate(|x, z| {
            let v = f(x, z);
            v * v
        })
    }
}

/// `<omega, f> = sum_i f(x_i, z_i)`
pub fn pair_raw<F: Fn(&[f64], f64) -> f64>(config: &PointConfiguration, f: F) -> f64 {
    config.points.iter().map(|p| f(&p.x, p.z)).sum()
}

/// `<omega, f> - compensator`, with the compensator supplied.
pub fn pair_centered<F: Fn(&[f64], f64) -> f64>(config: &PointConfiguration, f: F, compensator: f64) -> f64 {
    pair_raw(config, f) - compensator
}

/// `<omega - pi, f>` with the compensator integrated over the sampled region.
pub fn pair_compensated<F: Fn(&[f64], f64) -> f64 + Copy>(
    config: &PointConfiguration,
    model: &LevyMeasureModel,
    f: F,
) -> Result<f64> {
    let comp = Intensity::new(model, &config.bbox, config.eps).integrate(f);
    if !comp.is_finite() {
        return Err(Error::Quadrature("non-finite compensator".into()));
    }
    Ok(pair_raw(config, f) - comp)
}

/// Order 0, 1 or 2 generalized Charlier functional with kernel `f (x) g`
/// (symmetrized), given the compensators `int f dpi` and `int g dpi`:
/// `C_2(f, g) = <omega - pi, f><omega - pi, g> - <omega, f g>`.
pub fn charlier_with<F, G>(config: &PointConfiguration, f: F, g: G, comp_f: f64, comp_g: f64, order: u32) -> Result<f64>
where
    F: Fn(&[f64], f64) -> f64,
    G: Fn(&[f64], f64) -> f64,
{
    match order {
        0 => Ok(1.0),
        1 => Ok(pair_raw(config, &f) - comp_f),
        2 => {
            let (mut sf, mut sg, mut sfg) = (0.0, 0.0, 0.0);
            for p in &config.points {
                let (a, b) = (f(&p.x, p.z), g(&p.x, p.z));
                sf += a;
                sg += b;
                sfg += a * b;
            }
            Ok((sf - comp_f) * (sg - comp_g) - sfg)
        }
        _ => Err(Error::Unsupported(format!("Charlier order {order} > 2"))),
    }
}

/// [`charlier_with`] with the compensators computed from `intensity`.
pub fn charlier_eval<F, G>(config: &PointConfiguration, intensity: &Intensity, f: F, g: G, order: u32) -> Result<f64>
where
    F: Fn(&[f64], f64) -> f64 + Copy,
    G: Fn(&[f64], f64) -> f64 + Copy,
{
    if order > 2 {
        return Err(Error::Unsupported(format!("Charlier order {order} > 2")));
    }
    let cf = intensity.integrate(f);
    let cg = intensity.integrate(g);
    charlier_with(config, f, g, cf, cg, order)
}

/// Pathwise `K_alpha` for `|alpha| <= 2` built from `delta_1..delta_count`.
#[derive(Clone, Debug)]
pub struct KAlphaEvaluator {
    system: DeltaSystem,
    compensators: Vec<f64>,
}

/// Raw sums of one configuration: `S_l = <omega, delta_l>` and
/// `Q_jl = <omega, delta_j delta_l>`.
#[derive(Clone, Debug)]
pub struct DeltaSums {
    pub linear: Vec<f64>,
    pub quadratic: Vec<Vec<f64>>,
}

impl KAlphaEvaluator {
    pub fn new(
        model: &LevyMeasureModel,
        basis: &OrthonormalJumpBasis,
        bbox: &SampleBox,
        eps: f64,
        count: usize,
    ) -> Result<Self> {
        let system = DeltaSystem::new(basis.clone(), bbox.dim(), count)?;
        // int_box zeta_i dx * int_{|z|>=eps} p_j dnu
        let space = system.space().integrals(&bbox.lower, &bbox.upper);
        let jumps = model.jump_table(eps);
        let pj: Vec<f64> = (1..=basis.len())
            .map(|j| jumps.integrate(|z| basis.eval(j, z).unwrap_or(0.0)))
            .collect();
        let compensators = (1..=count)
            .map(|k| {
                let (i, j) = system.pair(k);
                space[i - 1] * pj[j - 1]
            })
            .collect();
        Ok(Self { system, compensators })
    }

    pub fn count(&self) -> usize {
        self.system.count()
    }

    pub fn compensator(&self, l: usize) -> f64 {
        self.compensators[l - 1]
    }

    pub fn system(&self) -> &DeltaSystem {
        &self.system
    }

    pub fn sums(&self, config: &PointConfiguration) -> DeltaSums {
        let n = self.count();
        let mut linear = vec![0.0; n];
        let mut quadratic = vec![vec![0.0; n]; n];
        let mut buf = vec![0.0; n];
        for p in &config.points {
            self.system.eval_into(&p.x, p.z, &mut buf);
            for j in 0..n {
                linear[j] += buf[j];
                for l in j..n {
                    quadratic[j][l] += buf[j] * buf[l];
                }
            }
        }
        for j in 0..n {
            for l in 0..j {
                quadratic[j][l] = quadratic[l][j];
            }
        }
        DeltaSums { linear, quadratic }
    }

    /// `K_alpha` from precomputed sums.
    pub fn from_sums(&self, sums: &DeltaSums, alpha: &MultiIndex) -> Result<f64> {
        if alpha.index_of() > self.count() {
            return Err(Error::IndexOutOfRange {
                index: alpha.index_of(),
                available: self.count(),
            });
        }
        let centered = |l: usize| sums.linear[l - 1] - self.compensators[l - 1];
        match alpha.order() {
            0 => Ok(1.0),
            1 => Ok(centered(alpha.index_of())),
            2 => {
                let support: Vec<(usize, u32)> = alpha.support().collect();
                let (j, l) = match support.as_slice() {
                    [(j, 2)] => (*j, *j),
                    [(j, 1), (l, 1)] => (*j, *l),
                    _ => unreachable!("order-2 multi-index"),
                };
                Ok(centered(j) * centered(l) - sums.quadratic[j - 1][l - 1])
            }
            o => Err(Error::Unsupported(format!("K_alpha of order {o} > 2"))),
        }
    }

    pub fn eval(&self, config: &PointConfiguration, alpha: &MultiIndex) -> Result<f64> {
        self.from_sums(&self.sums(config), alpha)
    }
}

/// `K_alpha(omega)` for `|alpha| <= 2`.
pub fn k_alpha_eval(
    config: &PointConfiguration,
    model: &LevyMeasureModel,
    basis: &OrthonormalJumpBasis,
    alpha: &MultiIndex,
) -> Result<f64> {
    if alpha.order() > 2 {
        return Err(Error::Unsupported(format!("K_alpha of order {} > 2", alpha.order())));
    }
    let count = alpha.index_of().max(1);
    KAlphaEvaluator::new(model, basis, &config.bbox, config.eps, count)?.eval(config, alpha)
}

/// All multi-indices with `|alpha| <= 2` and `Index(alpha) <= max_index`,
/// in canonical order.
pub fn low_order_indices(max_index: usize) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zero()];
    for l in 1..=max_index {
        out.push(MultiIndex::unit(l));
    }
    for j in 1..=max_index {
        for l in j..=max_index {
            out.push(MultiIndex::unit(j).sum(&MultiIndex::unit(l)));
        }
    }
    out.sort();
    out
}

//! Levy measures on `R \ {0}`: finite atomic measures and tabulated
//! densities, with moment queries, jump tables for integration and exact
//! jump sampling above a truncation threshold.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub z: f64,
    pub w: f64,
}

/// Catalogue of jump densities selectable by `expr_id`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityExpr {
    /// standard normal density (compound Poisson, unit intensity)
    Gaussian,
    /// `exp(-|z|)/2` (compound Poisson, unit intensity)
    Laplace,
    /// `exp(-|z|)/|z|` (symmetric, infinite activity)
    VarianceGamma,
    /// `exp(-z)/z` on `z > 0` (infinite activity)
    Gamma,
    /// constant 1 on the support
    Uniform,
}

impl DensityExpr {
    pub fn eval(self, z: f64) -> f64 {
        match self {
            DensityExpr::Gaussian => (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            DensityExpr::Laplace => 0.5 * (-z.abs()).exp(),
            DensityExpr::VarianceGamma => (-z.abs()).exp() / z.abs(),
            DensityExpr::Gamma => {
                if z > 0.0 {
                    (-z).exp() / z
                } else {
                    0.0
                }
            }
            DensityExpr::Uniform => 1.0,
        }
    }

    pub fn finite_activity(self) -> bool {
        !matches!(self, DensityExpr::VarianceGamma | DensityExpr::Gamma)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMeasure {
    pub expr: DensityExpr,
    /// support bounds `[a, b]`; the origin is always excluded
    pub support: [f64; 2],
    /// panels per side of the origin
    pub nodes: usize,
    /// total-mass multiplier applied to the density
    pub intensity: f64,
}

impl DensityMeasure {
    fn density(&self, z: f64) -> f64 {
        if z == 0.0 || z < self.support[0] || z > self.support[1] {
            return 0.0;
        }
        self.intensity * self.expr.eval(z)
    }

    // Integration pieces over {|z| >= eps} within the support: `nodes`
    // uniform panels on each side of the origin, the panel touching the
    // origin refined geometrically.
    fn panels(&self, eps: f64, nodes: usize) -> Vec<(f64, f64)> {
        let [a, b] = self.support;
        let mut out = Vec::new();
        // each side as a range of distances from the origin
        for (positive, t0, t1) in [(true, a.max(0.0), b), (false, (-b).max(0.0), -a)] {
            if t1 <= t0 {
                continue;
            }
            let h = (t1 - t0) / nodes as f64;
            let mut cuts = Vec::with_capacity(nodes + 42);
            if t0 == 0.0 {
                cuts.push(0.0);
                cuts.extend((1..=40).rev().map(|j| h * 0.5f64.powi(j)));
            } else {
                cuts.push(t0);
            }
            cuts.extend((1..=nodes).map(|p| t0 + h * p as f64));
            for w in cuts.windows(2) {
                let (u, v) = (w[0].max(eps), w[1]);
                if v <= u {
                    continue;
                }
                out.push(if positive { (u, v) } else { (-v, -u) });
            }
        }
        out.sort_by(|p, q| p.0.total_cmp(&q.0));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LevyMeasureModel {
    Atoms { atoms: Vec<Atom> },
    Density {
        expr_id: DensityExpr,
        support: [f64; 2],
        #[serde(default = "default_nodes")]
        nodes: usize,
        #[serde(default = "default_intensity")]
        intensity: f64,
    },
}

fn default_nodes() -> usize {
    32
}

fn default_intensity() -> f64 {
    1.0
}

/// Finite list of `(z, weight)` pairs representing `nu` restricted to
/// `{|z| >= eps}`; integrals against `nu` are weighted sums over it.
#[derive(Clone, Debug, Default)]
pub struct JumpTable {
    pub nodes: Vec<(f64, f64)>,
}

impl JumpTable {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|&(z, w)| w * f(z)).sum()
    }

    pub fn mass(&self) -> f64 {
        self.nodes.iter().map(|&(_, w)| w).sum()
    }
}

impl LevyMeasureModel {
    pub fn atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        let model = Self::Atoms {
            atoms: atoms.iter().map(|&(z, w)| Atom { z, w }).collect(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn density(expr: DensityExpr, support: [f64; 2], nodes: usize, intensity: f64) -> Result<Self> {
        let model = Self::Density {
            expr_id: expr,
            support,
            nodes,
            intensity,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Atoms { atoms } => {
                if atoms.is_empty() {
                    return Err(Error::InvalidMeasure("no atoms".into()));
                }
                for a in atoms {
                    if a.z == 0.0 || !a.z.is_finite() {
                        return Err(Error::InvalidMeasure(format!("atom at {} not allowed", a.z)));
                    }
                    if !(a.w > 0.0) || !a.w.is_finite() {
                        return Err(Error::InvalidMeasure(format!("atom weight {} must be positive", a.w)));
                    }
                }
            }
            Self::Density {
                support,
                nodes,
                intensity,
                ..
            } => {
                if !(support[0] < support[1]) || !support.iter().all(|s| s.is_finite()) {
                    return Err(Error::InvalidMeasure(format!("bad support {support:?}")));
                }
                if *nodes == 0 {
                    return Err(Error::InvalidMeasure("nodes must be positive".into()));
                }
                if !(*intensity > 0.0) {
                    return Err(Error::InvalidMeasure("intensity must be positive".into()));
                }
            }
        }
        let m2 = self.moment(2)?;
        if !(m2 > 0.0) || !m2.is_finite() {
            return Err(Error::InvalidMeasure(format!("second moment {m2} must be finite and positive")));
        }
        Ok(())
    }

    fn density_measure(&self) -> Option<DensityMeasure> {
        match self {
            Self::Density {
                expr_id,
                support,
                nodes,
                intensity,
            } => Some(DensityMeasure {
                expr: *expr_id,
                support: *support,
                nodes: *nodes,
                intensity: *intensity,
            }),
            Self::Atoms { .. } => None,
        }
    }

    fn table_with(&self, eps: f64, refine: usize) -> JumpTable {
        match self {
            Self::Atoms { atoms } => JumpTable {
                nodes: atoms.iter().filter(|a| a.z.abs() >= eps).map(|a| (a.z, a.w)).collect(),
            },
            Self::Density { .. } => {
                let dm = self.density_measure().unwrap();
                let gl = GaussLegendre::standard();
                let mut nodes = Vec::new();
                for (lo, hi) in dm.panels(eps, dm.nodes * refine) {
                    for (z, w) in gl.mapped(lo, hi) {
                        nodes.push((z, w * dm.density(z)));
                    }
                }
                JumpTable { nodes }
            }
        }
    }

    /// Quadrature/atom table for `nu` restricted to `{|z| >= eps}`.
    pub fn jump_table(&self, eps: f64) -> JumpTable {
        self.table_with(eps, 1)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Self::Atoms { .. })
    }

    pub fn atom_count(&self) -> Option<usize> {
        match self {
            Self::Atoms { atoms } => Some(atoms.len()),
            Self::Density { .. } => None,
        }
    }

    /// `int z^k nu(dz)` for `k >= 2`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        if k < 2 {
            return Err(Error::Unsupported(format!(
                "moments of order {k} < 2 need not exist for a Levy measure"
            )));
        }
        let f = |z: f64| z.powi(k as i32);
        let coarse = self.table_with(0.0, 1).integrate(f);
        if self.is_atomic() {
            return if coarse.is_finite() {
                Ok(coarse)
            } else {
                Err(Error::MomentDivergence {
                    order: k,
                    detail: "non-finite atom sum".into(),
                })
            };
        }
        let refined = self.table_with(0.0, 3);
        let fine = refined.integrate(f);
        let scale = refined.integrate(|z| z.abs().powi(k as i32));
        if !fine.is_finite() || (fine - coarse).abs() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::MomentDivergence {
                order: k,
                detail: format!("coarse {coarse:e} vs refined {fine:e}"),
            });
        }
        Ok(fine)
    }

    /// `m = (int z^2 nu(dz))^{1/2}`
    pub fn m(&self) -> f64 {
        self.moment(2).expect("validated measure has a second moment").sqrt()
    }

    /// `nu({|z| >= eps})`, an error when it is infinite.
    pub fn restricted_mass(&self, eps: f64) -> Result<f64> {
        if let Some(dm) = self.density_measure() {
            let touches_origin = dm.support[0] <= 0.0 && dm.support[1] >= 0.0;
            if eps == 0.0 && touches_origin && !dm.expr.finite_activity() {
                return Err(Error::InfiniteMass { eps });
            }
        }
        Ok(self.jump_table(eps).mass())
    }

    /// `int_{|z| >= eps} z nu(dz)`
    pub fn restricted_mean(&self, eps: f64) -> f64 {
        self.jump_table(eps).integrate(|z| z)
    }

    /// Variance dropped by truncation: `int_{|z| < eps} z^2 nu(dz)`.
    pub fn truncation_variance(&self, eps: f64) -> f64 {
        if eps == 0.0 {
            return 0.0;
        }
        let total = self.jump_table(0.0).integrate(|z| z * z);
        let kept = self.jump_table(eps).integrate(|z| z * z);
        (total - kept).max(0.0)
    }

    /// Sampler for jump sizes from `nu` restricted to `{|z| >= eps}` and
    /// normalized to a probability law.
    pub fn jump_law(&self, eps: f64) -> Result<JumpLaw> {
        let mass = self.restricted_mass(eps)?;
        if mass == 0.0 {
            return Ok(JumpLaw::Empty);
        }
        match self {
            Self::Atoms { atoms } => {
                let kept: Vec<&Atom> = atoms.iter().filter(|a| a.z.abs() >= eps).collect();
                let mut cumulative = Vec::with_capacity(kept.len());
                let mut acc = 0.0;
                for a in &kept {
                    acc += a.w;
                    cumulative.push(acc);
                }
                Ok(JumpLaw::Atoms {
                    values: kept.iter().map(|a| a.z).collect(),
                    cumulative,
                })
            }
            Self::Density { .. } => {
                let dm = self.density_measure().unwrap();
                let gl = GaussLegendre::standard();
                let mut panels = Vec::new();
                let mut acc = 0.0;
                for (lo, hi) in dm.panels(eps, dm.nodes) {
                    let panel_mass = gl.integrate(lo, hi, |z| dm.density(z));
                    let bound = (0..=64)
                        .map(|i| dm.density(lo + (hi - lo) * i as f64 / 64.0))
                        .chain(gl.mapped(lo, hi).map(|(z, _)| dm.density(z)))
                        .filter(|v| v.is_finite())
                        .fold(0.0f64, f64::max)
                        * 1.05;
                    acc += panel_mass;
                    panels.push(Panel {
                        lo,
                        hi,
                        cumulative: acc,
                        bound,
                    });
                }
                Ok(JumpLaw::Density { measure: dm, panels })
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Panel {
    lo: f64,
    hi: f64,
    cumulative: f64,
    bound: f64,
}

/// Probability law of one jump size.
#[derive(Clone, Debug)]
pub enum JumpLaw {
    Empty,
    Atoms { values: Vec<f64>, cumulative: Vec<f64> },
    Density { measure: DensityMeasure, panels: Vec<Panel> },
}

impl JumpLaw {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            JumpLaw::Empty => panic!("sampling from an empty jump law"),
            JumpLaw::Atoms { values, cumulative } => {
                let u = rng.random::<f64>() * cumulative[cumulative.len() - 1];
                let i = cumulative.partition_point(|&c| c <= u).min(values.len() - 1);
                values[i]
            }
            JumpLaw::Density { measure, panels } => {
                let total = panels[panels.len() - 1].cumulative;
                let u = rng.random::<f64>() * total;
                let i = panels.partition_point(|p| p.cumulative <= u).min(panels.len() - 1);
                let p = &panels[i];
                loop {
                    let z = p.lo + (p.hi - p.lo) * rng.random::<f64>();
                    if rng.random::<f64>() * p.bound <= measure.density(z) {
                        return z;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn atomic_moments() {
        let one = LevyMeasureModel::atoms(&[(1.0, 1.0)]).unwrap();
        assert_eq!(one.moment(2).unwrap(), 1.0);
        let sym = LevyMeasureModel::atoms(&[(-1.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(sym.moment(2).unwrap(), 2.0);
        assert_eq!(sym.moment(3).unwrap(), 0.0);
        assert_eq!(sym.moment(4).unwrap(), 2.0);
        assert!(sym.moment(1).is_err());
        assert_eq!(sym.restricted_mass(0.0).unwrap(), 2.0);
        assert_eq!(sym.restricted_mass(1.5).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_measures() {
        assert!(LevyMeasureModel::atoms(&[(0.0, 1.0)]).is_err());
        assert!(LevyMeasureModel::atoms(&[(1.0, -1.0)]).is_err());
        assert!(LevyMeasureModel::atoms(&[]).is_err());
        assert!(LevyMeasureModel::from_json(r#"{"type":"atoms","atoms":[{"z":0.0,"w":1.0}]}"#).is_err());
        assert!(LevyMeasureModel::from_json(r#"{"type":"bogus"}"#).is_err());
    }

    #[test]
    fn json_schema() {
        let m = LevyMeasureModel::from_json(r#"{"type":"atoms","atoms":[{"z":-1,"w":1},{"z":1,"w":1}]}"#).unwrap();
        assert_eq!(m.moment(2).unwrap(), 2.0);
        let d = LevyMeasureModel::from_json(
            r#"{"type":"density","expr_id":"gaussian","support":[-10,10],"nodes":40}"#,
        )
        .unwrap();
        assert!((d.moment(2).unwrap() - 1.0).abs() < 1e-12);
        assert!((d.moment(4).unwrap() - 3.0).abs() < 1e-11);
        let back = LevyMeasureModel::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn density_moments_with_origin_singularity() {
        // int z^2 e^{-|z|}/|z| = 2 int_0^inf z e^{-z} = 2, z^4 -> 2 * 3! = 12
        let vg = LevyMeasureModel::density(DensityExpr::VarianceGamma, [-60.0, 60.0], 64, 1.0).unwrap();
        assert!((vg.moment(2).unwrap() - 2.0).abs() < 1e-10);
        assert!((vg.moment(4).unwrap() - 12.0).abs() < 1e-9);
        assert!(matches!(vg.restricted_mass(0.0), Err(Error::InfiniteMass { .. })));
        // nu(|z| >= 1) = 2 E_1(1) = 0.438767...
        let mass = vg.restricted_mass(1.0).unwrap();
        assert!((mass - 2.0 * 0.219_383_934_395_520_27).abs() < 1e-10);
        // int_{|z|<eps} z^2 nu = 2 (1 - e^{-eps}(1 + eps))
        let eps = 0.1f64;
        let tv = vg.truncation_variance(eps);
        assert!((tv - 2.0 * (1.0 - (-eps).exp() * (1.0 + eps))).abs() < 1e-10);
    }

    #[test]
    fn divergent_moment_is_reported() {
        // z^150 e^{-|z|} peaks at 150 inside a single wide 16-point panel
        let bad = LevyMeasureModel::Density {
            expr_id: DensityExpr::Laplace,
            support: [-1.0e6, 1.0e6],
            nodes: 1,
            intensity: 1.0,
        };
        let r = bad.moment(150);
        assert!(matches!(r, Err(Error::MomentDivergence { .. })), "{r:?}");
        assert!(bad.moment(2).is_ok());
    }

    #[test]
    fn atom_sampling_frequencies() {
        let m = LevyMeasureModel::atoms(&[(-1.0, 1.0), (2.0, 3.0)]).unwrap();
        let law = m.jump_law(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 100_000;
        let hits = (0..n).filter(|_| law.sample(&mut rng) == 2.0).count() as f64 / n as f64;
        assert!((hits - 0.75).abs() < 4.0 * (0.75f64 * 0.25 / n as f64).sqrt());
    }

    #[test]
    fn density_sampling_mean() {
        let m = LevyMeasureModel::density(DensityExpr::Gamma, [0.0, 50.0], 50, 1.0).unwrap();
        let eps = 0.5;
        let law = m.jump_law(eps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        assert!(xs.iter().all(|&z| z >= eps));
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
        let theory = m.restricted_mean(eps) / m.restricted_mass(eps).unwrap();
        assert!((mean - theory).abs() < 4.0 * (var / n as f64).sqrt());
    }
}

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::basis::LevyMeasureModel;
use crate::error::{Error, Result};

/// Axis-aligned sampling region `prod_i [lower_i, upper_i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SampleBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Dimension {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::Unsupported(format!("box bounds {lower:?} / {upper:?}")));
        }
        Ok(Self { lower, upper })
    }

    /// `[0, L]^d`
    pub fn cube(d: usize, side: f64) -> Self {
        Self {
            lower: vec![0.0; d],
            upper: vec![side; d],
        }
    }

    /// `[-h, h]^d`
    pub fn centered(d: usize, half: f64) -> Self {
        Self {
            lower: vec![-half; d],
            upper: vec![half; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(t, (a, b))| a <= t && t <= b)
    }
}

/// One atom of the Poisson random measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpPoint {
    pub x: Vec<f64>,
    pub z: f64,
}

/// One realization of the Poisson random measure on `box x {|z| >= eps}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub bbox: SampleBox,
    pub eps: f64,
    pub points: Vec<JumpPoint>,
    /// `nu({|z| >= eps}) vol(box)`, the expected point count
    pub mass: f64,
}

impl PointConfiguration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Precomputed sampler: Poisson point count, uniform locations, jump sizes
/// from the normalized restriction of `nu` to `{|z| >= eps}`.
#[derive(Clone, Debug)]
pub struct PrmSampler {
    bbox: SampleBox,
    eps: f64,
    mass: f64,
    count: Option<Poisson<f64>>,
    jumps: crate::basis::JumpLaw,
}

impl PrmSampler {
    pub fn new(model: &LevyMeasureModel, bbox: &SampleBox, eps: f64) -> Result<Self> {
        if !(eps >= 0.0) {
            return Err(Error::Unsupported(format!("truncation eps = {eps}")));
        }
        let restricted = model.restricted_mass(eps)?;
        if !restricted.is_finite() {
            return Err(Error::InfiniteMass { eps });
        }
        let mass = restricted * bbox.volume();
        let count = if mass > 0.0 {
            Some(Poisson::new(mass).map_err(|e| Error::Unsupported(format!("Poisson({mass}): {e}")))?)
        } else {
            None
        };
        Ok(Self {
            bbox: bbox.clone(),
            eps,
            mass,
            count,
            jumps: model.jump_law(eps)?,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PointConfiguration {
        let n = match &self.count {
            Some(p) => p.sample(rng) as usize,
            None => 0,
        };
        let points = (0..n)
            .map(|_| {
                let x = self
                    .bbox
                    .lower
                    .iter()
                    .zip(&self.bbox.upper)
                    .map(|(a, b)| a + (b - a) * rng.random::<f64>())
                    .collect();
                JumpPoint {
                    x,
                    z: self.jumps.sample(rng),
                }
            })
            .collect();
        PointConfiguration {
            bbox: self.bbox.clone(),
            eps: self.eps,
            points,
            mass: self.mass,
        }
    }
}

/// Draws one configuration of the Poisson random measure with intensity
/// `Lebesgue x nu` restricted to `bbox x {|z| >= eps}`.
pub fn sample_prm<R: Rng + ?Sized>(
    model: &LevyMeasureModel,
    bbox: &SampleBox,
    eps: f64,
    rng: &mut R,
) -> Result<PointConfiguration> {
    Ok(PrmSampler::new(model, bbox, eps)?.sample(rng))
}

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use levy_noise::LevyMeasureModel;
use serde::Deserialize;

/// Run configuration read from `--config`; command-line flags take
/// precedence over every field.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub measure: Option<serde_json::Value>,
    pub dim: Option<usize>,
    pub domain: Option<String>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub mc_samples: Option<usize>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub x: Option<Vec<f64>>,
    pub suite: Option<String>,
    pub deltas: Option<Vec<f64>>,
    pub order: Option<usize>,
    pub functional: Option<String>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| levy_noise::Error::Parse(format!("config: {e}")).into())
    }

    /// Measure from a flag (inline JSON or a file path), else the config,
    /// else `delta_{-1} + delta_1`.
    pub fn measure(&self, flag: Option<&str>) -> Result<LevyMeasureModel> {
        let model = match (flag, &self.measure) {
            (Some(arg), _) => {
                let text = if arg.trim_start().starts_with('{') {
                    arg.to_string()
                } else {
                    std::fs::read_to_string(arg).with_context(|| format!("reading measure {arg}"))?
                };
                LevyMeasureModel::from_json(&text)?
            }
            (None, Some(serde_json::Value::String(path))) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading measure {path}"))?;
                LevyMeasureModel::from_json(&text)?
            }
            (None, Some(value)) => LevyMeasureModel::from_json(&value.to_string())?,
            (None, None) => LevyMeasureModel::atoms(&[(-1.0, 1.0), (1.0, 1.0)])?,
        };
        Ok(model)
    }

    pub fn dim(&self, flag: Option<usize>) -> Result<usize> {
        let d = flag.or(self.dim).unwrap_or(1);
        if !(1..=4).contains(&d) {
            return Err(levy_noise::Error::Unsupported(format!("dimension {d}")).into());
        }
        Ok(d)
    }

    pub fn seed(&self, flag: Option<u64>, default: u64) -> u64 {
        flag.or(self.seed).unwrap_or(default)
    }

    pub fn eps(&self, flag: Option<f64>) -> Result<f64> {
        let eps = flag.or(self.eps).unwrap_or(0.0);
        if !(eps >= 0.0 && eps.is_finite()) {
            bail!(levy_noise::Error::Parse(format!("eps must be a finite non-negative number, got {eps}")));
        }
        Ok(eps)
    }

    pub fn out(&self, flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| self.out.clone())
    }

    /// The evaluation point: `--x 0.2,-0.1`, else the config, else the
    /// centre of the domain.
    pub fn point(&self, flag: Option<&str>, center: Vec<f64>) -> Result<Vec<f64>> {
        match flag {
            Some(s) => parse_list(s),
            None => Ok(self.x.clone().unwrap_or(center)),
        }
    }
}

pub fn positive(name: &str, value: usize) -> Result<usize> {
    if value == 0 {
        bail!(levy_noise::Error::Parse(format!("{name} must be at least 1")));
    }
    Ok(value)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| levy_noise::Error::Parse(format!("bad number {t:?}: {e}")).into())
        })
        .collect()
}

//! The stochastic Poisson equation `Delta U = -eta'` with zero Dirichlet
//! data on reference domains: Green functions, the chaos solution, its
//! Hermite transform, the pathwise Monte Carlo solution and the `d >= 4`
//! divergence of `int G^2`.

mod green;
mod polar;
mod solve;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prm::SampleBox;

pub use green::{green, green_hypercube_series, hypercube_tail_bound};
pub use polar::{polar_integrate, polar_sum, radial_rule, PolarOptions};
pub use solve::{
    default_deltas, divergence_profile, green_integral, green_l2sq, green_zeta_integrals, hermite_solution, hermite_solution_direct,
    laplacian_residual, laplacian_residual_with_m, mc_moments, solve_chaos, solve_mc, test_action, variance_exact,
    McSolver, ResidualReport, SolutionField,
};

/// Eigen-series order used by default for the hypercube.
pub const DEFAULT_N_MAX: usize = 40;

/// Reference domains: `(0,1)`, the unit disk, the unit ball and `(0,1)^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Interval,
    Disk,
    Ball,
    Hypercube { d: usize, n_max: usize },
}

impl Domain {
    /// Domain used for dimension `d`: interval, disk, ball, then the cube.
    pub fn for_dim(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Domain::Interval),
            2 => Ok(Domain::Disk),
            3 => Ok(Domain::Ball),
            4 => Ok(Domain::Hypercube {
                d: 4,
                n_max: DEFAULT_N_MAX,
            }),
            _ => Err(Error::Unsupported(format!("dimension {d}"))),
        }
    }

    /// Parses a domain name together with the dimension.
    pub fn parse(name: &str, d: usize) -> Result<Self> {
        let dom = match name {
            "interval" => Domain::Interval,
            "disk" => Domain::Disk,
            "ball" => Domain::Ball,
            "hypercube" | "cube" => Domain::Hypercube {
                d,
                n_max: DEFAULT_N_MAX,
            },
            _ => return Err(Error::Parse(format!("unknown domain {name:?}"))),
        };
        if dom.dim() != d || !(1..=4).contains(&d) {
            return Err(Error::Unsupported(format!("domain {name} in dimension {d}")));
        }
        Ok(dom)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Interval => "interval",
            Domain::Disk => "disk",
            Domain::Ball => "ball",
            Domain::Hypercube { .. } => "hypercube",
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Domain::Interval => 1,
            Domain::Disk => 2,
            Domain::Ball => 3,
            Domain::Hypercube { d, .. } => d,
        }
    }

    /// Smallest axis-aligned box containing the domain.
    pub fn bounding_box(&self) -> SampleBox {
        match self {
            Domain::Interval | Domain::Hypercube { .. } => SampleBox::cube(self.dim(), 1.0),
            Domain::Disk | Domain::Ball => SampleBox::centered(self.dim(), 1.0),
        }
    }

    /// Membership in the closure.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && match self {
                Domain::Interval | Domain::Hypercube { .. } => x.iter().all(|&t| (0.0..=1.0).contains(&t)),
                Domain::Disk | Domain::Ball => norm_sq(x) <= 1.0,
            }
    }

    /// Distance from the closure to the boundary, negative outside.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        match self {
            Domain::Interval | Domain::Hypercube { .. } => {
                x.iter().map(|&t| t.min(1.0 - t)).fold(f64::INFINITY, f64::min)
            }
            Domain::Disk | Domain::Ball => 1.0 - norm_sq(x).sqrt(),
        }
    }

    pub fn on_boundary(&self, x: &[f64]) -> bool {
        self.boundary_distance(x).abs() <= 1e-14
    }

    /// Distance from `x` to the boundary along the unit direction `w`.
    pub fn exit_distance(&self, x: &[f64], w: &[f64]) -> f64 {
        match self {
            Domain::Interval | Domain::Hypercube { .. } => x
                .iter()
                .zip(w)
                .filter(|(_, &wj)| wj != 0.0)
                .map(|(&xj, &wj)| if wj > 0.0 { (1.0 - xj) / wj } else { -xj / wj })
                .fold(f64::INFINITY, f64::min)
                .max(0.0),
            Domain::Disk | Domain::Ball => {
                // |x + r w| = 1
                let b = dot(x, w);
                let c = norm_sq(x) - 1.0;
                (-b + (b * b - c).max(0.0).sqrt()).max(0.0)
            }
        }
    }

    /// `int_D G(x, y) dy`, the torsion function, where it has closed form.
    fn torsion(&self, x: &[f64]) -> Option<f64> {
        let r2 = norm_sq(x);
        match self {
            Domain::Interval => Some(x[0] * (1.0 - x[0]) / 2.0),
            Domain::Disk => Some((1.0 - r2) / 4.0),
            Domain::Ball => Some((1.0 - r2) / 6.0),
            Domain::Hypercube { d: 1, .. } => Some(x[0] * (1.0 - x[0]) / 2.0),
            Domain::Hypercube { .. } => None,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

fn check_point(domain: &Domain, x: &[f64]) -> Result<()> {
    if x.len() != domain.dim() {
        return Err(Error::Dimension {
            expected: domain.dim(),
            got: x.len(),
        });
    }
    if !domain.contains(x) {
        return Err(Error::OutsideBox(x.to_vec()));
    }
    Ok(())
}

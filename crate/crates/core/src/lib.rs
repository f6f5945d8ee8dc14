//! Numerical white-noise calculus for pure-jump Levy fields.
//!
//! The crate builds the chaos basis `K_alpha` of a Levy white-noise space
//! (Hermite functions in space, polynomials orthonormal in `L2(nu)` in the
//! jump variable), the Wick/Hermite-transform algebra of finite chaos
//! expansions, exact sampling of finite-activity Poisson random measures,
//! and uses all of it to solve the stochastic Poisson equation
//! `Delta U = -eta'` on reference domains, both in chaos form and by
//! Monte Carlo.
//!
//! Monte Carlo replication and quadrature sweeps run on rayon when the
//! `parallel` feature is enabled (the default); results are identical with
//! the feature off.

pub mod basis;
pub mod chaos;
pub mod error;
pub mod multiindex;
pub mod par;
pub mod poisson_eq;
pub mod prm;
pub mod quad;
pub mod stats;
pub mod verify;

pub use basis::{LevyMeasureModel, OrthonormalJumpBasis};
pub use chaos::{ChaosExpansion, ComplexPoint};
pub use error::{Error, Result};
pub use multiindex::MultiIndex;

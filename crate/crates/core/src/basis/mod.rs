//! Hermite functions, Levy measures and the combined basis
//! `delta_k(x, z) = zeta_i(x) p_j(z)` with `k = z(i, j)`.

pub mod hermite;
pub mod jump;
pub mod levy;

pub use hermite::{hermite_all, hermite_fn, hermite_integrals, tensor_hermite, TensorHermite};
pub use jump::OrthonormalJumpBasis;
pub use levy::{Atom, DensityExpr, JumpLaw, JumpTable, LevyMeasureModel};

use crate::error::{Error, Result};
use crate::multiindex::cantor_unpair;

/// `delta_k(x, z) = zeta_i(x) p_j(z)` where `(i, j) = z^{-1}(k)`.
pub fn delta_k(basis: &OrthonormalJumpBasis, k: usize, x: &[f64], z: f64) -> Result<f64> {
    let (i, j) = cantor_unpair(k as u64);
    if j as usize > basis.len() {
        return Err(Error::IndexOutOfRange {
            index: j as usize,
            available: basis.len(),
        });
    }
    Ok(tensor_hermite(i as usize, x) * basis.eval(j as usize, z)?)
}

/// Evaluates `delta_1..delta_count` at many points, caching the Hermite
/// and jump-polynomial factors.
#[derive(Clone, Debug)]
pub struct DeltaSystem {
    pairs: Vec<(usize, usize)>,
    space: TensorHermite,
    basis: OrthonormalJumpBasis,
}

impl DeltaSystem {
    pub fn new(basis: OrthonormalJumpBasis, dim: usize, count: usize) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (1..=count as u64)
            .map(|k| {
                let (i, j) = cantor_unpair(k);
                (i as usize, j as usize)
            })
            .collect();
        let max_i = pairs.iter().map(|p| p.0).max().unwrap_or(1);
        if let Some(&(_, j)) = pairs.iter().find(|p| p.1 > basis.len()) {
            return Err(Error::IndexOutOfRange {
                index: j,
                available: basis.len(),
            });
        }
        Ok(Self {
            pairs,
            space: TensorHermite::new(dim, max_i),
            basis,
        })
    }

    pub fn count(&self) -> usize {
        self.pairs.len()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> &OrthonormalJumpBasis {
        &self.basis
    }

    pub fn space(&self) -> &TensorHermite {
        &self.space
    }

    /// `(i, j)` with `delta_k = zeta_i p_j`.
    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.pairs[k - 1]
    }

    pub fn eval_into(&self, x: &[f64], z: f64, out: &mut [f64]) {
        let zeta = self.space.eval_all(x);
        let p = self.basis.eval_all(z);
        for (o, &(i, j)) in out.iter_mut().zip(&self.pairs) {
            *o = zeta[i - 1] * p[j - 1];
        }
    }

    pub fn eval_all(&self, x: &[f64], z: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.count()];
        self.eval_into(x, z, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Rule;

    fn three_atoms() -> LevyMeasureModel {
        LevyMeasureModel::atoms(&[(-1.0, 0.5), (0.5, 1.0), (2.0, 0.25)]).unwrap()
    }

    #[test]
    fn delta_values() {
        let m = three_atoms();
        let b = OrthonormalJumpBasis::build(&m, 3).unwrap();
        let x = [0.4];
        let v = delta_k(&b, 1, &x, 0.5).unwrap();
        assert!((v - hermite_fn(1, 0.4) * b.eval(1, 0.5).unwrap()).abs() < 1e-15);
        for k in 1..=6 {
            assert_eq!(delta_k(&b, k, &x, 0.0).unwrap(), 0.0);
        }
        // k = 10 is z(1, 4): beyond three polynomials
        assert!(delta_k(&b, 10, &x, 1.0).is_err());
        let sys = DeltaSystem::new(b.clone(), 1, 6).unwrap();
        let all = sys.eval_all(&x, 2.0);
        for k in 1..=6 {
            assert!((all[k - 1] - delta_k(&b, k, &x, 2.0).unwrap()).abs() < 1e-15);
        }
        assert!(DeltaSystem::new(b, 1, 10).is_err());
    }

    #[test]
    fn delta_system_is_orthonormal_in_l2_pi() {
        // tensor Gauss-Legendre in x times the atom sum in z
        let m = three_atoms();
        let b = OrthonormalJumpBasis::build(&m, 3).unwrap();
        let sys = DeltaSystem::new(b, 1, 6).unwrap();
        let rule = Rule::composite(-12.0, 12.0, 48);
        let table = m.jump_table(0.0);
        let mut g = [[0.0; 6]; 6];
        for &(x, wx) in &rule.points {
            for &(z, wz) in &table.nodes {
                let v = sys.eval_all(&[x], z);
                for i in 0..6 {
                    for j in 0..6 {
                        g[i][j] += wx * wz * v[i] * v[j];
                    }
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g[i][j] - want).abs() < 1e-8, "({i},{j}) {}", g[i][j]);
            }
        }
    }
}

//! Polynomials `p_1..p_M` orthonormal in `L2(nu)`, obtained from the
//! orthonormalization `l_0, l_1, ...` of the monomials in `L2(rho)`,
//! `rho(dz) = z^2 nu(dz)`, via `p_m(z) = z l_{m-1}(z)`.

use serde::Serialize;

use crate::basis::levy::LevyMeasureModel;
use crate::error::{Error, Result};

/// Pivots below this fraction of the largest pivot mark a rank-deficient
/// moment matrix.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct OrthonormalJumpBasis {
    /// row `m - 1` holds the monomial coefficients `c_0..c_m` of `p_m`
    coeffs: Vec<Vec<f64>>,
    m: f64,
    requested: usize,
}

impl OrthonormalJumpBasis {
    /// Gram-Schmidt of `{1, z, z^2, ...}` in `L2(rho)` through a Cholesky
    /// factorization of the Hankel matrix `H_ij = int z^{i+j+2} nu(dz)`.
    /// Rank deficiency (an atomic `nu` with fewer atoms than requested)
    /// caps the basis instead of failing.
    pub fn build(model: &LevyMeasureModel, requested: usize) -> Result<Self> {
        if requested == 0 {
            return Err(Error::Unsupported("jump basis needs at least one polynomial".into()));
        }
        let moments: Vec<f64> = (0..2 * requested as u32 - 1)
            .map(|k| model.moment(k + 2))
            .collect::<Result<_>>()?;
        if moments.iter().any(|m| !m.is_finite()) {
            return Err(Error::MomentDivergence {
                order: 2 * requested as u32,
                detail: "non-finite moment".into(),
            });
        }
        let n = requested;
        let hankel = |i: usize, j: usize| moments[i + j];

        // lower-triangular Cholesky factor, stopped at the numerical rank
        let mut chol = vec![vec![0.0; n]; n];
        let mut largest: f64 = 0.0;
        let mut rank = 0;
        for i in 0..n {
            let mut diag = hankel(i, i);
            for k in 0..i {
                diag -= chol[i][k] * chol[i][k];
            }
            largest = largest.max(hankel(i, i));
            if !(diag > RANK_TOLERANCE * largest) {
                break;
            }
            let pivot = diag.sqrt();
            chol[i][i] = pivot;
            for j in (i + 1)..n {
                let mut v = hankel(j, i);
                for k in 0..i {
                    v -= chol[j][k] * chol[i][k];
                }
                chol[j][i] = v / pivot;
            }
            rank += 1;
        }

        // rows of chol^{-1} are the coefficients of the orthonormal l_i
        let mut inv = vec![vec![0.0; rank]; rank];
        for i in 0..rank {
            inv[i][i] = 1.0 / chol[i][i];
            for j in 0..i {
                let mut s = 0.0;
                for k in j..i {
                    s += chol[i][k] * inv[k][j];
                }
                inv[i][j] = -s / chol[i][i];
            }
        }

        let m = model.moment(2)?.sqrt();
        let coeffs = (0..rank)
            .map(|i| {
                let mut row = vec![0.0; i + 2];
                row[1..].copy_from_slice(&inv[i][..=i]);
                row
            })
            .collect::<Vec<_>>();
        let mut basis = Self {
            coeffs,
            m,
            requested,
        };
        // p_1 = z / m with the same rounding as m itself
        basis.coeffs[0][1] = 1.0 / m;
        Ok(basis)
    }

    /// Number of polynomials actually available.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn requested(&self) -> usize {
        self.requested
    }

    /// True when rank deficiency capped the basis below the request.
    pub fn is_capped(&self) -> bool {
        self.coeffs.len() < self.requested
    }

    /// `m = ||z||_{L2(nu)}`
    pub fn m(&self) -> f64 {
        self.m
    }

    /// Monomial coefficients `c_0..c_m` of `p_m`.
    pub fn coefficients(&self, m: usize) -> Result<&[f64]> {
        if m == 0 || m > self.len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                available: self.len(),
            });
        }
        Ok(&self.coeffs[m - 1])
    }

    /// `p_m(z)` by Horner's rule.
    pub fn eval(&self, m: usize, z: f64) -> Result<f64> {
        let c = self.coefficients(m)?;
        Ok(c.iter().rev().fold(0.0, |acc, &a| acc * z + a))
    }

    /// `[p_1(z), ..., p_len(z)]`
    pub fn eval_all(&self, z: f64) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.iter().rev().fold(0.0, |acc, &a| acc * z + a))
            .collect()
    }

    /// `(p_i, p_j)_{L2(nu)}` by direct summation over the jump table.
    pub fn gram(&self, model: &LevyMeasureModel) -> Vec<Vec<f64>> {
        let table = model.jump_table(0.0);
        let n = self.len();
        let mut g = vec![vec![0.0; n]; n];
        for &(z, w) in &table.nodes {
            let p = self.eval_all(z);
            for i in 0..n {
                for j in 0..n {
                    g[i][j] += w * p[i] * p[j];
                }
            }
        }
        g
    }

    /// Row-wise `max_j |G_ij - delta_ij|`.
    pub fn gram_residuals(&self, model: &LevyMeasureModel) -> Vec<f64> {
        self.gram(model)
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &g)| (g - if i == j { 1.0 } else { 0.0 }).abs())
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_atoms() -> LevyMeasureModel {
        LevyMeasureModel::atoms(&[(-1.5, 0.4), (-0.5, 1.0), (0.3, 0.7), (1.0, 1.2), (2.0, 0.3)]).unwrap()
    }

    #[test]
    fn single_atom_caps_at_one() {
        let m = LevyMeasureModel::atoms(&[(1.0, 1.0)]).unwrap();
        let b = OrthonormalJumpBasis::build(&m, 2).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b.is_capped());
        assert_eq!(b.m(), 1.0);
        assert_eq!(b.coefficients(1).unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn symmetric_pair() {
        // by hand: l_0 = 1/sqrt 2, l_1 = z/sqrt 2 in L2(rho), ||.||_rho^2 = 2
        let m = LevyMeasureModel::atoms(&[(-1.0, 1.0), (1.0, 1.0)]).unwrap();
        let b = OrthonormalJumpBasis::build(&m, 2).unwrap();
        assert_eq!(b.len(), 2);
        let r = 1.0 / 2f64.sqrt();
        assert!((b.m() - 2f64.sqrt()).abs() < 1e-15);
        let c1 = b.coefficients(1).unwrap();
        let c2 = b.coefficients(2).unwrap();
        assert!((c1[1] - r).abs() < 1e-15 && c1[0] == 0.0);
        assert!((c2[2] - r).abs() < 1e-15 && c2[1].abs() < 1e-15 && c2[0] == 0.0);
        assert!((b.eval(1, 1.0).unwrap() - r).abs() < 1e-15);
        assert!((b.eval(2, -1.0).unwrap() - r).abs() < 1e-15);
        assert_eq!(b.eval(1, 0.0).unwrap(), 0.0);
        assert!(b.eval(3, 1.0).is_err());
        assert!(b.eval(0, 1.0).is_err());
        // three requested, two atoms
        let b3 = OrthonormalJumpBasis::build(&m, 3).unwrap();
        assert_eq!(b3.len(), 2);
    }

    #[test]
    fn orthonormal_for_five_atoms() {
        let m = five_atoms();
        let b = OrthonormalJumpBasis::build(&m, 5).unwrap();
        assert_eq!(b.len(), 5);
        for (i, row) in b.gram(&m).iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-10, "G[{i}][{j}] = {g}");
            }
        }
        for mm in 1..=5 {
            let c = b.coefficients(mm).unwrap();
            assert_eq!(c.len(), mm + 1);
            assert_eq!(c[0], 0.0);
            assert!(c[mm] != 0.0);
        }
        assert_eq!(b.coefficients(1).unwrap()[1], 1.0 / b.m());
    }

    #[test]
    fn z_projects_onto_p1_only() {
        let m = five_atoms();
        let b = OrthonormalJumpBasis::build(&m, 5).unwrap();
        let table = m.jump_table(0.0);
        for mm in 1..=5 {
            let v = table.integrate(|z| z * b.eval(mm, z).unwrap());
            let want = if mm == 1 { b.m() } else { 0.0 };
            assert!((v - want).abs() < 1e-10);
        }
    }

    #[test]
    fn atomic_completeness() {
        // the matrix (p_m(z_i) sqrt(w_i)) is orthogonal when r = M atoms
        let m = five_atoms();
        let b = OrthonormalJumpBasis::build(&m, 5).unwrap();
        let table = m.jump_table(0.0);
        let mat: Vec<Vec<f64>> = table
            .nodes
            .iter()
            .map(|&(z, w)| b.eval_all(z).iter().map(|p| p * w.sqrt()).collect())
            .collect();
        for i in 0..5 {
            for j in 0..5 {
                let s: f64 = (0..5).map(|k| mat[i][k] * mat[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn density_basis() {
        let g = LevyMeasureModel::density(crate::basis::levy::DensityExpr::Gaussian, [-12.0, 12.0], 48, 2.0)
            .unwrap();
        let b = OrthonormalJumpBasis::build(&g, 4).unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.gram_residuals(&g).iter().all(|&r| r < 1e-10));
    }
}

//! Finite chaos expansions `sum_alpha c_alpha K_alpha` and their algebra:
//! Wick product, L2 and Kondratiev norms, the dual pairing and the Hermite
//! transform.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChaosExpansion {
    terms: BTreeMap<MultiIndex, f64>,
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    alpha: MultiIndex,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct ExpansionRecord {
    terms: Vec<TermRecord>,
}

/// One CSV row of an expansion.
#[derive(Clone, Debug, Serialize)]
pub struct TermRow {
    pub alpha: String,
    pub coefficient: f64,
    pub order: u64,
    pub index: usize,
    pub weight_k: f64,
}

impl ChaosExpansion {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut f = Self::zero();
        f.add_term(MultiIndex::zero(), c);
        f
    }

    /// `c K_alpha`
    pub fn monomial(alpha: MultiIndex, c: f64) -> Self {
        let mut f = Self::zero();
        f.add_term(alpha, c);
        f
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, f64)>>(terms: I) -> Self {
        let mut f = Self::zero();
        for (a, c) in terms {
            f.add_term(a, c);
        }
        f
    }

    /// Adds `c` to the coefficient of `alpha`, dropping exact zeros.
    pub fn add_term(&mut self, alpha: MultiIndex, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(alpha);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if v == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> u64 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn add(&self, other: &ChaosExpansion) -> ChaosExpansion {
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> ChaosExpansion {
        Self::from_terms(self.terms().map(|(a, c)| (a.clone(), s * c)))
    }

    /// Wick product: the coefficient of `gamma` is
    /// `sum_{alpha + beta = gamma} a_alpha b_beta`.
    pub fn wick(&self, other: &ChaosExpansion) -> ChaosExpansion {
        let mut out = ChaosExpansion::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.sum(b), ca * cb);
            }
        }
        out
    }

    /// `E[F]`: the zero-index coefficient.
    pub fn expectation(&self) -> f64 {
        self.coefficient(&MultiIndex::zero())
    }

    /// `sum_alpha alpha! a_alpha b_alpha`
    pub fn inner(&self, other: &ChaosExpansion) -> Result<f64> {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = 0.0;
        for (a, c) in small.terms() {
            let d = large.coefficient(a);
            if d != 0.0 {
                acc += a.factorial()? * c * d;
            }
        }
        Ok(acc)
    }

    /// `(sum_alpha alpha! c_alpha^2)^{1/2}`
    pub fn l2_norm(&self) -> Result<f64> {
        self.kondratiev_norm(0.0, 0.0)
    }

    /// `(sum_alpha (alpha!)^{1+rho} c_alpha^2 (2N)^{k alpha})^{1/2}`. With
    /// `rho < 0` and `k < 0` this is the distribution-space norm.
    pub fn kondratiev_norm(&self, rho: f64, k: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (a, c) in self.terms() {
            let fact = a.factorial()?;
            let w = if rho == 0.0 { fact } else { fact.powf(1.0 + rho) };
            acc += w * c * c * a.weight(k);
        }
        Ok(acc.sqrt())
    }

    /// `sum_alpha c_alpha z^alpha`, coordinates beyond `z`'s support being 0.
    pub fn hermite_transform(&self, z: &ComplexPoint) -> Complex64 {
        self.terms()
            .map(|(a, c)| z.power(a) * c)
            .fold(Complex64::new(0.0, 0.0), |s, t| s + t)
    }

    /// `M_q = (sum_alpha c_alpha^2 (2N)^{-q alpha})^{1/2}`, so that
    /// `|H F(z)| <= M_q (sum_alpha (2N)^{q alpha} |z^alpha|^2)^{1/2}`.
    pub fn growth_constant(&self, q: f64) -> f64 {
        self.terms()
            .map(|(a, c)| c * c * a.weight(-q))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_json(&self) -> String {
        let rec = ExpansionRecord {
            terms: self
                .terms()
                .map(|(a, c)| TermRecord {
                    alpha: a.clone(),
                    c,
                })
                .collect(),
        };
        serde_json::to_string(&rec).expect("expansion serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: ExpansionRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self::from_terms(rec.terms.into_iter().map(|t| (t.alpha, t.c))))
    }

    /// Rows for the CSV emitter; `weight_k` is `(2N)^{k alpha}`.
    pub fn rows(&self, k: f64) -> Vec<TermRow> {
        self.terms()
            .map(|(a, c)| TermRow {
                alpha: a.to_string(),
                coefficient: c,
                order: a.order(),
                index: a.index_of(),
                weight_k: a.weight(k),
            })
            .collect()
    }
}

/// Finitely supported point `(z_1, z_2, ...)` of `C^N`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexPoint {
    entries: Vec<Complex64>,
}

impl ComplexPoint {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `z_j` (1-based), zero beyond the stored entries.
    pub fn get(&self, j: usize) -> Complex64 {
        if j == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.entries.get(j - 1).copied().unwrap_or_default()
    }

    /// `z^alpha = prod_j z_j^{alpha_j}`
    pub fn power(&self, alpha: &MultiIndex) -> Complex64 {
        alpha
            .support()
            .map(|(j, a)| self.get(j).powu(a))
            .fold(Complex64::new(1.0, 0.0), |s, t| s * t)
    }

    /// `sum_{alpha != 0} |z^alpha|^2 (2N)^{q alpha}` in closed form, or
    /// `None` when the series diverges.
    pub fn neighborhood_sum(&self, q: f64) -> Option<f64> {
        let mut prod = 1.0;
        for (j, zj) in self.entries.iter().enumerate() {
            let t = zj.norm_sqr() * (2.0 * (j + 1) as f64).powf(q);
            if t >= 1.0 {
                return None;
            }
            prod /= 1.0 - t;
        }
        Some(prod - 1.0)
    }

    /// Membership in `K_q(R)`.
    pub fn in_neighborhood(&self, q: f64, r: f64) -> bool {
        self.neighborhood_sum(q).is_some_and(|s| s < r * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn one_plus_k1() -> ChaosExpansion {
        ChaosExpansion::from_terms([(MultiIndex::zero(), 1.0), (MultiIndex::unit(1), 1.0)])
    }

    #[test]
    fn wick_square() {
        let f = one_plus_k1();
        let sq = f.wick(&f);
        let want = ChaosExpansion::from_terms([
            (MultiIndex::zero(), 1.0),
            (MultiIndex::unit(1), 2.0),
            (mi(&[2]), 1.0),
        ]);
        assert_eq!(sq, want);
        assert_eq!(f.wick(&ChaosExpansion::constant(1.0)), f);
    }

    #[test]
    fn wick_grading() {
        let f = ChaosExpansion::from_terms([(mi(&[1, 1]), 1.0), (mi(&[0, 0, 2]), -2.0)]);
        let g = ChaosExpansion::from_terms([(mi(&[1]), 0.5), (mi(&[0, 0, 0, 1]), 3.0)]);
        let p = f.wick(&g);
        assert!(p.terms().all(|(a, _)| a.order() == 3));
    }

    #[test]
    fn expectation_and_inner() {
        let f = ChaosExpansion::from_terms([(MultiIndex::zero(), 3.0), (MultiIndex::unit(1), 2.0)]);
        assert_eq!(f.expectation(), 3.0);
        assert_eq!(ChaosExpansion::monomial(mi(&[0, 1]), 1.0).expectation(), 0.0);
        assert_eq!(f.inner(&ChaosExpansion::constant(1.0)).unwrap(), 3.0);
        let k2 = ChaosExpansion::monomial(mi(&[2]), 1.0);
        assert_eq!(k2.inner(&k2).unwrap(), 2.0);
        let ka = ChaosExpansion::monomial(mi(&[1, 2]), 1.0);
        let kb = ChaosExpansion::monomial(mi(&[2, 1]), 1.0);
        assert_eq!(ka.inner(&kb).unwrap(), 0.0);
        assert_eq!(ka.inner(&ka).unwrap(), 2.0);
    }

    #[test]
    fn norms() {
        assert_eq!(ChaosExpansion::monomial(MultiIndex::unit(1), 1.0).l2_norm().unwrap(), 1.0);
        assert_eq!(ChaosExpansion::zero().l2_norm().unwrap(), 0.0);
        let f = ChaosExpansion::monomial(mi(&[2]), 2.0);
        assert!((f.l2_norm().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let e2 = ChaosExpansion::monomial(MultiIndex::unit(2), 1.0);
        assert!((e2.kondratiev_norm(1.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        let g = ChaosExpansion::from_terms([(mi(&[1, 0, 2]), 0.3), (mi(&[0, 3]), -1.2)]);
        assert_eq!(g.kondratiev_norm(0.0, 0.0).unwrap(), g.l2_norm().unwrap());
        let mut prev = 0.0;
        for k in -3..=3 {
            let n = g.kondratiev_norm(0.5, k as f64).unwrap();
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn hermite_transform_examples() {
        let f = ChaosExpansion::from_terms([
            (MultiIndex::zero(), 1.0),
            (MultiIndex::unit(1), 2.0),
            (mi(&[2]), 1.0),
        ]);
        let z = ComplexPoint::new(vec![Complex64::new(0.3, -0.7)]);
        let want = (Complex64::new(1.0, 0.0) + z.get(1)).powu(2);
        assert!((f.hermite_transform(&z) - want).norm() < 1e-15);
        let k3 = ChaosExpansion::monomial(MultiIndex::unit(3), 1.0);
        assert_eq!(k3.hermite_transform(&ComplexPoint::real(&[1.0, 1.0])), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn neighborhoods() {
        // geometric series checked against partial sums over alpha_1 <= 60
        let c = Complex64::new(0.3, 0.2);
        let q = 1.0;
        let t = c.norm_sqr() * 2f64.powf(q);
        let partial: f64 = (1..=60).map(|n| t.powi(n)).sum();
        let z = ComplexPoint::new(vec![c]);
        let closed = z.neighborhood_sum(q).unwrap();
        assert!((closed - t / (1.0 - t)).abs() < 1e-15);
        assert!((closed - partial).abs() < 1e-12);
        assert!(z.in_neighborhood(q, (closed + 1e-9).sqrt()));
        assert!(!z.in_neighborhood(q, (closed - 1e-9).sqrt()));
        let zero = ComplexPoint::default();
        assert_eq!(zero.neighborhood_sum(3.0), Some(0.0));
        assert!(zero.in_neighborhood(3.0, 1e-6));
        let one = ComplexPoint::real(&[1.0]);
        assert_eq!(one.neighborhood_sum(1.0), None);
        assert!(!one.in_neighborhood(1.0, 1e9));
    }

    #[test]
    fn growth_constant_examples() {
        let k1 = ChaosExpansion::monomial(MultiIndex::unit(1), 1.0);
        assert!((k1.growth_constant(2.0) - 0.5).abs() < 1e-15);
        assert_eq!(ChaosExpansion::constant(1.0).growth_constant(2.0), 1.0);
    }

    #[test]
    fn json_and_rows() {
        let f = ChaosExpansion::from_terms([(mi(&[1, 0, 2]), 0.25), (MultiIndex::zero(), -1.0)]);
        let text = f.to_json();
        assert_eq!(text, r#"{"terms":[{"alpha":[],"c":-1.0},{"alpha":[1,0,2],"c":0.25}]}"#);
        assert_eq!(ChaosExpansion::from_json(&text).unwrap(), f);
        let rows = f.rows(1.0);
        assert_eq!(rows[1].alpha, "[1,0,2]");
        assert_eq!(rows[1].order, 3);
        assert_eq!(rows[1].index, 3);
        assert_eq!(rows[1].weight_k, 72.0);
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let mut f = ChaosExpansion::monomial(MultiIndex::unit(2), 1.0);
        f.add_term(MultiIndex::unit(2), -1.0);
        assert!(f.is_empty());
        f.add_term(MultiIndex::unit(4), 0.0);
        assert!(f.is_empty());
    }

    fn arb_expansion() -> impl Strategy<Value = ChaosExpansion> {
        let term = (proptest::collection::vec(0u32..3, 0..5), -2.0f64..2.0);
        proptest::collection::vec(term, 0..12).prop_map(|ts| {
            ChaosExpansion::from_terms(ts.into_iter().map(|(a, c)| (MultiIndex::new(a), c)))
        })
    }

    fn arb_point() -> impl Strategy<Value = ComplexPoint> {
        proptest::collection::vec((-0.6f64..0.6, -0.6f64..0.6), 0..5)
            .prop_map(|v| ComplexPoint::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
    }

    fn close(a: &ChaosExpansion, b: &ChaosExpansion, tol: f64) -> bool {
        a.terms().chain(b.terms()).all(|(k, _)| {
            let (x, y) = (a.coefficient(k), b.coefficient(k));
            (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
        })
    }

    proptest! {
        #[test]
        fn wick_is_commutative_associative_distributive(
            f in arb_expansion(), g in arb_expansion(), h in arb_expansion()
        ) {
            prop_assert!(close(&f.wick(&g), &g.wick(&f), 1e-12));
            prop_assert!(close(&f.wick(&g).wick(&h), &f.wick(&g.wick(&h)), 1e-12));
            prop_assert!(close(&f.wick(&g.add(&h)), &f.wick(&g).add(&f.wick(&h)), 1e-12));
            prop_assert_eq!(f.wick(&ChaosExpansion::constant(1.0)), f.clone());
            let e = f.wick(&g).expectation() - f.expectation() * g.expectation();
            prop_assert!(e.abs() < 1e-12);
        }

        #[test]
        fn transform_is_multiplicative(f in arb_expansion(), g in arb_expansion(), z in arb_point()) {
            let lhs = f.wick(&g).hermite_transform(&z);
            let rhs = f.hermite_transform(&z) * g.hermite_transform(&z);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn inner_is_symmetric_and_matches_norm(f in arb_expansion(), g in arb_expansion()) {
            prop_assert_eq!(f.inner(&g).unwrap(), g.inner(&f).unwrap());
            let n = f.l2_norm().unwrap();
            prop_assert!((f.inner(&f).unwrap() - n * n).abs() <= 1e-12 * (1.0 + n * n));
        }

        #[test]
        fn growth_bound_holds(f in arb_expansion(), z in arb_point(), q in 0.0f64..2.0) {
            if let Some(s) = z.neighborhood_sum(q) {
                let bound = f.growth_constant(q) * (s + 1.0).sqrt();
                prop_assert!(f.hermite_transform(&z).norm() <= bound * (1.0 + 1e-12) + 1e-15);
            }
        }
    }
}

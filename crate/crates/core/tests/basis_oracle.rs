use levy_noise::{LevyMeasureModel, OrthonormalJumpBasis};
use nalgebra::DMatrix;

/// Coefficients of `p_1..p_M` from a QR factorization of the weighted
/// Vandermonde matrix `sqrt(w_a) z_a^{j+1}`: `p_j = z * sum_i (R^{-1})_{ij} z^i`.
fn qr_coefficients(atoms: &[(f64, f64)], count: usize) -> Vec<Vec<f64>> {
    let v = DMatrix::from_fn(atoms.len(), count, |a, j| atoms[a].1.sqrt() * atoms[a].0.powi(j as i32 + 1));
    let r = v.qr().r();
    // fix signs so that leading coefficients are positive
    let signs = DMatrix::from_diagonal(&r.diagonal().map(f64::signum));
    let r = signs * r;
    let rinv = r.try_inverse().expect("full rank");
    (0..count)
        .map(|j| {
            let mut c = vec![0.0; j + 2];
            for i in 0..=j {
                c[i + 1] = rinv[(i, j)];
            }
            c
        })
        .collect()
}

fn check(atoms: &[(f64, f64)], count: usize, tol: f64) {
    let model = LevyMeasureModel::atoms(atoms).unwrap();
    let basis = OrthonormalJumpBasis::build(&model, count).unwrap();
    assert_eq!(basis.len(), count);
    for (j, expect) in qr_coefficients(atoms, count).iter().enumerate() {
        let got = basis.coefficients(j + 1).unwrap();
        assert_eq!(got.len(), expect.len());
        let scale = expect.iter().fold(1.0f64, |s, c| s.max(c.abs()));
        for (g, e) in got.iter().zip(expect) {
            assert!((g - e).abs() <= tol * scale, "p_{}: {got:?} vs {expect:?}", j + 1);
        }
    }
}

#[test]
fn symmetric_pair_matches_qr() {
    check(&[(-1.0, 1.0), (1.0, 1.0)], 2, 1e-14);
}

#[test]
fn five_atoms_match_qr() {
    check(&[(-1.5, 0.4), (-0.5, 1.0), (0.3, 0.7), (1.0, 1.2), (2.0, 0.3)], 5, 1e-9);
}

#[test]
fn skewed_atoms_match_qr() {
    let atoms: Vec<(f64, f64)> = (0..8).map(|i| (0.3 + 0.4 * i as f64, 1.0 / (1.0 + i as f64))).collect();
    check(&atoms, 6, 1e-8);
}

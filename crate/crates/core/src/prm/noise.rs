//! The d-parameter Levy field `eta(x)`, pathwise and in chaos form, and the
//! chaos expansions of its white noise and of the Poisson white noise.

use crate::basis::{LevyMeasureModel, OrthonormalJumpBasis, TensorHermite};
use crate::chaos::ChaosExpansion;
use crate::error::{Error, Result};
use crate::multiindex::{cantor_pair, MultiIndex};
use crate::prm::config::PointConfiguration;

/// Signed indicator of the rectangle spanned by the origin and `x`.
fn rectangle_sign(y: &[f64], x: &[f64]) -> f64 {
    let mut s = 1.0;
    for (&t, &b) in y.iter().zip(x) {
        if b >= 0.0 {
            if !(0.0 <= t && t <= b) {
                return 0.0;
            }
        } else {
            if !(b <= t && t <= 0.0) {
                return 0.0;
            }
            s = -s;
        }
    }
    s
}

/// `eta(x) = sum_{x_i in [0,x]} z_i - vol([0,x]) int_{|z|>=eps} z nu(dz)`,
/// with the mean jump supplied.
pub fn eta_sample_with_mean(config: &PointConfiguration, mean_jump: f64, x: &[f64]) -> Result<f64> {
    let bbox = &config.bbox;
    if x.len() != bbox.dim() {
        return Err(Error::Dimension {
            expected: bbox.dim(),
            got: x.len(),
        });
    }
    let inside = x
        .iter()
        .zip(bbox.lower.iter().zip(&bbox.upper))
        .all(|(&t, (&a, &b))| a <= t.min(0.0) && t.max(0.0) <= b);
    if !inside {
        return Err(Error::OutsideBox(x.to_vec()));
    }
    let raw: f64 = config.points.iter().map(|p| rectangle_sign(&p.x, x) * p.z).sum();
    let signed_volume: f64 = x.iter().product();
    Ok(raw - signed_volume * mean_jump)
}

/// Pathwise value of the d-parameter Levy process at `x`.
pub fn eta_sample(config: &PointConfiguration, model: &LevyMeasureModel, x: &[f64]) -> Result<f64> {
    eta_sample_with_mean(config, model.restricted_mean(config.eps), x)
}

/// `eta(x) = sum_k m (int_{[0,x]} zeta_k) K_{eps^{z(k,1)}}`, `k <= count`.
pub fn eta_chaos(model: &LevyMeasureModel, x: &[f64], count: usize) -> ChaosExpansion {
    let space = TensorHermite::new(x.len(), count);
    let zeros = vec![0.0; x.len()];
    let m = model.m();
    let integrals = space.integrals(&zeros, x);
    ChaosExpansion::from_terms(
        integrals
            .into_iter()
            .enumerate()
            .map(|(i, v)| (MultiIndex::unit(cantor_pair(i as u64 + 1, 1) as usize), m * v)),
    )
}

/// `eta'(x) = m sum_k zeta_k(x) K_{eps^{z(k,1)}}`, `k <= count`.
pub fn white_noise_chaos(model: &LevyMeasureModel, x: &[f64], count: usize) -> ChaosExpansion {
    white_noise_chaos_with_m(model.m(), x, count)
}

pub fn white_noise_chaos_with_m(m: f64, x: &[f64], count: usize) -> ChaosExpansion {
    let space = TensorHermite::new(x.len(), count);
    ChaosExpansion::from_terms(
        space
            .eval_all(x)
            .into_iter()
            .enumerate()
            .map(|(i, v)| (MultiIndex::unit(cantor_pair(i as u64 + 1, 1) as usize), m * v)),
    )
}

/// `N'(x, z) = sum_{k <= ks, j <= km} zeta_k(x) p_j(z) K_{eps^{z(k,j)}}`.
pub fn prm_noise_chaos(
    basis: &OrthonormalJumpBasis,
    x: &[f64],
    z: f64,
    ks: usize,
    km: usize,
) -> Result<ChaosExpansion> {
    if km > basis.len() {
        return Err(Error::IndexOutOfRange {
            index: km,
            available: basis.len(),
        });
    }
    let zeta = TensorHermite::new(x.len(), ks).eval_all(x);
    let p = basis.eval_all(z);
    let mut out = ChaosExpansion::zero();
    for (k, zk) in zeta.iter().enumerate() {
        for (j, pj) in p.iter().take(km).enumerate() {
            let l = cantor_pair(k as u64 + 1, j as u64 + 1) as usize;
            out.add_term(MultiIndex::unit(l), zk * pj);
        }
    }
    Ok(out)
}

// eighth-order central difference weights for offsets 1..=4
const FD8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Mixed partial `d^d f / dx_1 ... dx_d` at `x` by a tensorized
/// eighth-order central difference with step `h`.
pub fn mixed_partial<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> f64 {
    let d = x.len();
    let offsets: Vec<(f64, f64)> = FD8
        .iter()
        .enumerate()
        .flat_map(|(i, &w)| {
            let s = (i + 1) as f64;
            [(s, w / h), (-s, -w / h)]
        })
        .collect();
    let mut total = 0.0;
    let mut idx = vec![0usize; d];
    let mut y = x.to_vec();
    loop {
        let mut w = 1.0;
        for (j, &i) in idx.iter().enumerate() {
            let (s, wj) = offsets[i];
            y[j] = x[j] + s * h;
            w *= wj;
        }
        total += w * f(&y);
        let mut pos = 0;
        loop {
            if pos == d {
                return total;
            }
            idx[pos] += 1;
            if idx[pos] < offsets.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Largest deviation, over `k <= count`, between the finite-difference mixed
/// partial of the `eta` chaos coefficients and the white-noise coefficients.
pub fn white_noise_derivative_gap(model: &LevyMeasureModel, x: &[f64], count: usize, h: f64) -> f64 {
    let d = x.len();
    let space = TensorHermite::new(d, count);
    let zeros = vec![0.0; d];
    let m = model.m();
    // finite differences of the whole coefficient vector at once
    let offsets: Vec<Vec<f64>> = {
        let mut pts = Vec::new();
        let steps: Vec<(f64, f64)> = FD8
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| {
                let s = (i + 1) as f64;
                [(s, w / h), (-s, -w / h)]
            })
            .collect();
        let mut idx = vec![0usize; d];
        'outer: loop {
            let mut w = 1.0;
            let mut y = Vec::with_capacity(d + 1);
            for (j, &i) in idx.iter().enumerate() {
                y.push(x[j] + steps[i].0 * h);
                w *= steps[i].1;
            }
            y.push(w);
            pts.push(y);
            let mut pos = 0;
            loop {
                if pos == d {
                    break 'outer;
                }
                idx[pos] += 1;
                if idx[pos] < steps.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
        pts
    };
    let partials: Vec<Vec<f64>> = crate::par::map_slice(&offsets, |p| {
        let w = p[d];
        space.integrals(&zeros, &p[..d]).into_iter().map(|v| w * m * v).collect()
    });
    let mut fd = vec![0.0; count];
    for p in partials {
        for (a, v) in fd.iter_mut().zip(p) {
            *a += v;
        }
    }
    let exact = space.eval_all(x);
    fd.iter()
        .zip(exact)
        .map(|(a, e)| (a - m * e).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::hermite_fn;
    use crate::prm::config::{JumpPoint, SampleBox};

    fn sym() -> LevyMeasureModel {
        LevyMeasureModel::atoms(&[(-1.0, 1.0), (1.0, 1.0)]).unwrap()
    }

    #[test]
    fn eta_pathwise() {
        let model = LevyMeasureModel::atoms(&[(1.0, 1.0)]).unwrap();
        let c = PointConfiguration {
            bbox: SampleBox::cube(1, 1.0),
            eps: 0.0,
            points: vec![JumpPoint { x: vec![0.3], z: 1.0 }, JumpPoint { x: vec![0.8], z: 1.0 }],
            mass: 1.0,
        };
        // centered Poisson: count - 1
        assert_eq!(eta_sample(&c, &model, &[1.0]).unwrap(), 1.0);
        assert!((eta_sample(&c, &model, &[0.5]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(eta_sample(&c, &model, &[0.0]).unwrap(), 0.0);
        assert!(matches!(eta_sample(&c, &model, &[1.5]), Err(Error::OutsideBox(_))));
        assert!(eta_sample(&c, &model, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn eta_chaos_edge_cases() {
        let m = sym();
        assert!(eta_chaos(&m, &[0.0], 10).is_empty());
        assert!(eta_chaos(&m, &[0.0, 0.7], 10).is_empty());
        let e = eta_chaos(&m, &[1.0], 5);
        assert_eq!(e.expectation(), 0.0);
        // indices are eps^{z(k,1)} = eps^{1}, eps^{2}, eps^{4}, eps^{7}, eps^{11}
        let mut idx: Vec<usize> = e.terms().map(|(a, _)| a.index_of()).collect();
        idx.sort_unstable();
        assert_eq!(idx, vec![1, 2, 4, 7, 11]);
    }

    #[test]
    fn eta_chaos_parseval() {
        // m^2 sum_k (int_0^1 xi_k)^2 increases to m^2 * 1; the indicator's
        // jumps make the gap decay like K^{-1/2}
        let m = sym();
        let mut prev = 0.0;
        let mut gaps = Vec::new();
        for k in [50, 200, 800] {
            let n = eta_chaos(&m, &[1.0], k).l2_norm().unwrap().powi(2);
            assert!(n >= prev && n <= 2.0);
            prev = n;
            gaps.push(2.0 - n);
        }
        assert!(gaps[2] < 0.04, "{gaps:?}");
        for w in gaps.windows(2) {
            let ratio = w[0] / w[1];
            assert!((1.6..2.5).contains(&ratio), "{gaps:?}");
        }
    }

    #[test]
    fn white_noise_coefficients() {
        let m = sym();
        let x = [0.4, -0.2];
        let w = white_noise_chaos(&m, &x, 6);
        let th = TensorHermite::new(2, 6);
        for k in 1..=6 {
            let l = cantor_pair(k as u64, 1) as usize;
            let c = w.coefficient(&MultiIndex::unit(l));
            assert!((c - m.m() * th.eval(k, &x)).abs() < 1e-15);
        }
        assert_eq!(w.expectation(), 0.0);
    }

    #[test]
    fn prm_noise_integrates_to_white_noise() {
        let model = LevyMeasureModel::atoms(&[(-1.0, 0.5), (0.5, 1.0), (2.0, 0.25)]).unwrap();
        let basis = OrthonormalJumpBasis::build(&model, 3).unwrap();
        let x = [0.7];
        let n = prm_noise_chaos(&basis, &x, 0.5, 4, 3).unwrap();
        let c = n.coefficient(&MultiIndex::unit(cantor_pair(2, 3) as usize));
        assert!((c - hermite_fn(2, 0.7) * basis.eval(3, 0.5).unwrap()).abs() < 1e-15);
        assert!(prm_noise_chaos(&basis, &x, 0.0, 4, 3).unwrap().is_empty());
        assert!(prm_noise_chaos(&basis, &x, 0.5, 4, 4).is_err());
        // int z N'(x, z) nu(dz), coefficient-wise
        let mut integral = ChaosExpansion::zero();
        for &(z, w) in &model.jump_table(0.0).nodes {
            integral = integral.add(&prm_noise_chaos(&basis, &x, z, 4, 3).unwrap().scale(z * w));
        }
        let target = white_noise_chaos(&model, &x, 4);
        let keys: Vec<MultiIndex> = integral.terms().chain(target.terms()).map(|(a, _)| a.clone()).collect();
        for a in keys {
            assert!((integral.coefficient(&a) - target.coefficient(&a)).abs() < 1e-10, "{a}");
        }
    }

    #[test]
    fn finite_difference_stencil() {
        let f = |y: &[f64]| (y[0] * 1.3).sin() * (0.5 * y[1]).exp();
        let got = mixed_partial(f, &[0.2, 0.1], 0.02);
        let want = 1.3 * (0.26f64).cos() * 0.5 * (0.05f64).exp();
        assert!((got - want).abs() < 1e-11);
    }

    #[test]
    fn white_noise_is_the_mixed_derivative() {
        let m = sym();
        assert!(white_noise_derivative_gap(&m, &[0.8], 20, 0.02) < 1e-6);
        assert!(white_noise_derivative_gap(&m, &[0.5, 1.2], 20, 0.02) < 1e-6);
    }
}

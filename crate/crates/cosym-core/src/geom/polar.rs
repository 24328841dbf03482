//! Floating-point polarization of an almost cosymplectic pair.
//!
//! This is the single numerical operation in the crate: given a validated
//! pair `(eta, omega)` and a symmetric positive definite seed metric, it
//! produces an almost contact metric structure with the same `eta` and Reeb
//! vector whose fundamental 2-form is `omega`. The construction works on
//! `ker eta`: the seed is adjusted so the Reeb vector is unit and orthogonal
//! to the kernel, `omega` is written as `k(A., .)` for a skew map `A`, and
//! the polar decomposition `A = phi (A^T A)^{1/2}` (computed by symmetric
//! eigendecomposition) yields `phi` and the metric `k((A^T A)^{1/2}., .)`.

use super::{kernel_basis, reeb_vector, CosymPair};
use crate::error::Error;
use crate::lie::LieAlgebra;
use crate::linalg::QMat;
use crate::rat::q_to_f64;
use crate::Result;
use nalgebra::DMatrix;

/// Relative eigenvalue floor below which the skew map is declared
/// ill-conditioned.
const CONDITION_FLOOR: f64 = 1e-12;

/// Polarized structure, all entries floating point.
#[derive(Debug, Clone)]
pub struct PolarizedAcm {
    pub phi: Vec<Vec<f64>>,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub metric: Vec<Vec<f64>>,
    /// Largest residual over the almost-contact-metric identities and the
    /// fundamental-form match against `omega`.
    pub residual: f64,
}

/// Builds the structure. Deterministic for a fixed seed metric: the
/// eigendecomposition is sorted by descending eigenvalue with ties broken by
/// original index order.
pub fn polarize(g: &LieAlgebra, pair: &CosymPair, seed: &QMat) -> Result<PolarizedAcm> {
    let dim = g.dim();
    if seed.rows() != dim || !seed.is_symmetric() {
        return Err(Error::BadInput(
            "seed metric must be a symmetric dim x dim matrix".into(),
        ));
    }
    if !seed.is_positive_definite() {
        return Err(Error::BadInput("seed metric must be positive definite".into()));
    }
    let xi = reeb_vector(g, pair)?;
    let eta_vec = pair.eta.covector()?;
    let hbasis = kernel_basis(&eta_vec);
    let m = hbasis.len();

    // Seed metric and omega restricted to ker eta.
    let kf = |x: &[f64], a: &DMatrix<f64>, y: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..x.len() {
            for j in 0..y.len() {
                acc += x[i] * a[(i, j)] * y[j];
            }
        }
        acc
    };
    let seed_f = to_f64(seed);
    let w_f = to_f64(&pair.omega.gram()?);
    let bcols: Vec<Vec<f64>> = hbasis
        .iter()
        .map(|v| v.0.iter().map(q_to_f64).collect())
        .collect();
    let k = DMatrix::from_fn(m, m, |i, j| kf(&bcols[i], &seed_f, &bcols[j]));
    let w = DMatrix::from_fn(m, m, |i, j| kf(&bcols[i], &w_f, &bcols[j]));

    // Orthonormalize ker eta for the seed: K = L L^T, then B := L^{-1} W L^{-T}
    // is skew in the ordinary sense.
    let chol = nalgebra::Cholesky::new(k.clone())
        .ok_or_else(|| Error::NumericalFailure("seed metric not numerically positive".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("singular Cholesky factor".into()))?;
    let b = &linv * &w * linv.transpose();

    // S = -B^2 = B^T B is symmetric positive definite when omega is
    // nondegenerate on the kernel.
    let s = -(&b * &b);
    let eig = nalgebra::SymmetricEigen::new(s.clone());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &c| {
        eig.eigenvalues[c]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&c))
    });
    let lam_max = eig.eigenvalues[order[0]];
    let lam_min = eig.eigenvalues[order[m - 1]];
    if !(lam_min > 0.0) || lam_min <= CONDITION_FLOOR * lam_max {
        return Err(Error::NumericalFailure(format!(
            "skew map ill-conditioned: eigenvalue range [{:.3e}, {:.3e}]",
            lam_min, lam_max
        )));
    }
    let q = DMatrix::from_fn(m, m, |i, j| eig.eigenvectors[(i, order[j])]);
    let sqrt_s = &q
        * DMatrix::from_diagonal(&nalgebra::DVector::from_fn(m, |i, _| {
            eig.eigenvalues[order[i]].sqrt()
        }))
        * q.transpose();
    let inv_sqrt_s = &q
        * DMatrix::from_diagonal(&nalgebra::DVector::from_fn(m, |i, _| {
            1.0 / eig.eigenvalues[order[i]].sqrt()
        }))
        * q.transpose();
    let u = &b * &inv_sqrt_s;

    // Back to kernel coordinates: phi_H = L^{-T} U L^T, G_H = L |B| L^T.
    let phi_h = linv.transpose() * &u * l.transpose();
    let g_h = &l * &sqrt_s * l.transpose();

    // Assemble on the full space via the frame T = [xi | B].
    let xi_f: Vec<f64> = xi.0.iter().map(q_to_f64).collect();
    let mut t = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        t[(i, 0)] = xi_f[i];
        for (c, col) in bcols.iter().enumerate() {
            t[(i, c + 1)] = col[i];
        }
    }
    let tinv = t
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("frame is singular".into()))?;
    let mut phi_t = DMatrix::zeros(dim, dim);
    let mut g_t = DMatrix::zeros(dim, dim);
    g_t[(0, 0)] = 1.0;
    for i in 0..m {
        for j in 0..m {
            phi_t[(i + 1, j + 1)] = phi_h[(i, j)];
            g_t[(i + 1, j + 1)] = g_h[(i, j)];
        }
    }
    let phi_full = &t * phi_t * &tinv;
    let g_full = tinv.transpose() * g_t * &tinv;

    let eta_f: Vec<f64> = eta_vec.iter().map(q_to_f64).collect();
    let residual = acm_residual(&phi_full, &xi_f, &eta_f, &g_full, &w_f);

    Ok(PolarizedAcm {
        phi: to_rows(&phi_full),
        xi: xi_f,
        eta: eta_f,
        metric: to_rows(&g_full),
        residual,
    })
}

/// Max violation over: eta(xi)=1, phi^2 = -I + eta (x) xi, eta o phi = 0,
/// compatibility of the metric, symmetry of the metric, and the fundamental
/// form matching omega.
fn acm_residual(
    phi: &DMatrix<f64>,
    xi: &[f64],
    eta: &[f64],
    metric: &DMatrix<f64>,
    omega: &DMatrix<f64>,
) -> f64 {
    let dim = xi.len();
    let mut worst: f64 = 0.0;
    let mut track = |v: f64| {
        if v.abs() > worst {
            worst = v.abs();
        }
    };
    let eta_xi: f64 = (0..dim).map(|i| eta[i] * xi[i]).sum();
    track(eta_xi - 1.0);
    let phi2 = phi * phi;
    for i in 0..dim {
        for j in 0..dim {
            let expected = -id(i, j) + xi[i] * eta[j];
            track(phi2[(i, j)] - expected);
        }
    }
    for j in 0..dim {
        let v: f64 = (0..dim).map(|i| eta[i] * phi[(i, j)]).sum();
        track(v);
    }
    let compat = phi.transpose() * metric * phi;
    for i in 0..dim {
        for j in 0..dim {
            track(compat[(i, j)] - (metric[(i, j)] - eta[i] * eta[j]));
            track(metric[(i, j)] - metric[(j, i)]);
            // fundamental form: g(e_i, phi e_j) = omega(e_i, e_j)
            let phi_col: f64 = (0..dim).map(|k| metric[(i, k)] * phi[(k, j)]).sum();
            track(phi_col - omega[(i, j)]);
        }
    }
    worst
}

fn id(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

fn to_f64(m: &QMat) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| q_to_f64(m.at(i, j)))
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::KForm;
    use crate::geom::check_almost_cosymplectic;
    use crate::rat::qi;

    fn e(dim: usize, idx: &[usize]) -> KForm {
        KForm::basis(dim, idx).unwrap()
    }

    #[test]
    fn standard_pair_gives_block_j_and_identity_metric() {
        let g = LieAlgebra::abelian(5);
        let omega = e(5, &[1, 2]).add(&e(5, &[3, 4])).unwrap();
        let pair = check_almost_cosymplectic(&g, &e(5, &[0]), &omega).unwrap();
        let p = polarize(&g, &pair, &QMat::identity(5)).unwrap();
        assert!(p.residual < 1e-12, "residual {}", p.residual);
        // g = I; with Phi(x,y) = g(x, phi y) the block sends e3 -> e2 and
        // e2 -> -e3 (0-based rows/columns).
        for i in 0..5 {
            for j in 0..5 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((p.metric[i][j] - expected).abs() < 1e-12);
            }
        }
        assert!((p.phi[1][2] - 1.0).abs() < 1e-12);
        assert!((p.phi[2][1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaled_pair_polarizes_to_scaled_metric() {
        // omega = 2 e^{12} + e^{34}: the polar factor stretches the metric by
        // 2 on the first block.
        let g = LieAlgebra::abelian(5);
        let omega = e(5, &[1, 2]).scale(&qi(2)).add(&e(5, &[3, 4])).unwrap();
        let pair = check_almost_cosymplectic(&g, &e(5, &[0]), &omega).unwrap();
        let p = polarize(&g, &pair, &QMat::identity(5)).unwrap();
        assert!(p.residual < 1e-9);
        let expected_diag = [1.0, 2.0, 2.0, 1.0, 1.0];
        for (i, d) in expected_diag.iter().enumerate() {
            assert!((p.metric[i][i] - d).abs() < 1e-9, "metric {:?}", p.metric);
        }
    }

    #[test]
    fn rejects_bad_seed() {
        let g = LieAlgebra::abelian(3);
        let omega = e(3, &[1, 2]);
        let pair = check_almost_cosymplectic(&g, &e(3, &[0]), &omega).unwrap();
        let mut seed = QMat::identity(3);
        *seed.at_mut(0, 0) = qi(-1);
        assert!(polarize(&g, &pair, &seed).is_err());
    }
}

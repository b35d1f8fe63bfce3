//! Killing metric and the 2-form of a period function on the space of
//! transverse flag pairs, computed in the Lie algebra over an adapted basis of
//! `n- + n+`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::densities::BasePoint;
use crate::flags::{self, FlagError};
use crate::linalg::{self, c, CMat, Field, C64};
use crate::rootdata::{RootDataError, RootSystem, ThetaSet, WeightVector};

/// Relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("base point is not transverse")]
    NotTransverse,
    #[error("combinatorial regularity ({combinatorial}) disagrees with the rank of omega ({numerical})")]
    RankDisagreement { combinatorial: bool, numerical: bool },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Flag(#[from] FlagError),
}

/// Adapted basis `h E h^{-1}` of `n- + n+` at a transverse pair; `n-` first.
#[derive(Clone, Debug)]
pub struct TangentFrame {
    pub field: Field,
    h: CMat,
    hinv: CMat,
    pub minus: Vec<CMat>,
    pub plus: Vec<CMat>,
}

fn unit(d: usize, k: usize, l: usize, z: C64) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(k, l)] = z;
    m
}

impl TangentFrame {
    pub fn new(x: &BasePoint) -> Result<Self, GeometryError> {
        let grading = flags::grading_from_pair(&x.plus, &x.minus).map_err(|e| match e {
            FlagError::NotTransverse(_) => GeometryError::NotTransverse,
            other => GeometryError::Flag(other),
        })?;
        let pieces: Vec<&CMat> = grading.pieces().iter().collect();
        let h = linalg::hcat(&pieces);
        let hinv = linalg::inverse(&h).ok_or(GeometryError::NotTransverse)?;
        let field = x.field();
        let d = x.d();
        let blocks = x.plus.flag_type().blocks();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let scalars: &[C64] = match field {
            Field::Real => &[C64::new(1.0, 0.0)],
            Field::Complex => &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
        };
        for k in 0..d {
            for l in 0..d {
                if blocks[k] >= blocks[l] {
                    continue;
                }
                for &z in scalars {
                    plus.push(&h * unit(d, k, l, z) * &hinv);
                    minus.push(&h * unit(d, l, k, z) * &hinv);
                }
            }
        }
        Ok(TangentFrame { field, h, hinv, minus, plus })
    }

    /// `n` (real dimension of each Lagrangian half).
    pub fn half_dim(&self) -> usize {
        self.plus.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &CMat> {
        self.minus.iter().chain(self.plus.iter())
    }

    /// `h diag(v) h^{-1}`, a Cartan element at the base point.
    pub fn cartan_element(&self, v: &[f64]) -> CMat {
        &self.h * linalg::diag_real(v) * &self.hinv
    }
}

fn bracket(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Real Killing form `c Re tr(XY)`, without a tracelessness check.
fn killing(sys: &RootSystem, a: &CMat, b: &CMat) -> f64 {
    sys.killing_scale() * (a * b).trace().re
}

/// Diagonal entries of the Killing dual of `sum_alpha s_alpha m_alpha w_alpha`.
pub fn killing_dual_entries(sys: &RootSystem, s: &WeightVector) -> Result<Vec<f64>, GeometryError> {
    let d = sys.d;
    let mut v = vec![0.0; d];
    for (a, sa) in s.iter() {
        let m = sys.m_alpha(a)? as f64;
        for x in v.iter_mut().take(a) {
            *x += sa * m;
        }
    }
    let mean = v.iter().sum::<f64>() / d as f64;
    Ok(v.into_iter().map(|x| (x - mean) / sys.killing_scale()).collect())
}

/// Gram matrix of the Killing form on the tangent frame.
pub fn killing_metric_matrix(x: &BasePoint) -> Result<DMatrix<f64>, GeometryError> {
    let sys = RootSystem::new(x.d(), x.field())?;
    let frame = TangentFrame::new(x)?;
    let basis: Vec<&CMat> = frame.basis().collect();
    let n = basis.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = killing(&sys, basis[i], basis[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// `omega_{ij} = -B(X_s, [X_i, X_j])` over the tangent frame.
pub fn omega_ell_matrix(x: &BasePoint, s: &WeightVector) -> Result<DMatrix<f64>, GeometryError> {
    let sys = RootSystem::new(x.d(), x.field())?;
    check_theta(x, s)?;
    let frame = TangentFrame::new(x)?;
    let xs = frame.cartan_element(&killing_dual_entries(&sys, s)?);
    let basis: Vec<&CMat> = frame.basis().collect();
    let n = basis.len();
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = -killing(&sys, &xs, &bracket(basis[i], basis[j]));
            w[(i, j)] = v;
            w[(j, i)] = -v;
        }
    }
    Ok(w)
}

fn check_theta(x: &BasePoint, s: &WeightVector) -> Result<(), GeometryError> {
    let theta = x.theta();
    for (a, _) in s.iter() {
        if !theta.contains(a) {
            return Err(GeometryError::RootData(RootDataError::WeightOutsideTheta(a)));
        }
    }
    Ok(())
}

/// `(positive, negative, zero)` eigenvalue counts of a symmetric matrix.
pub fn signature(m: &DMatrix<f64>) -> (usize, usize, usize) {
    let eig = SymmetricEigen::new(m.clone()).eigenvalues;
    let scale = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let tol = RANK_TOL * scale.max(f64::MIN_POSITIVE);
    let pos = eig.iter().filter(|&&e| e > tol).count();
    let neg = eig.iter().filter(|&&e| e < -tol).count();
    (pos, neg, eig.len() - pos - neg)
}

/// Numerical rank with threshold `RANK_TOL` times the largest singular value.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    linalg::rank(&m.map(c), RANK_TOL)
}

/// Regularity of the 2-form of `s` on `F_Theta^t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub combinatorial: bool,
    pub numerical: bool,
    pub rank: usize,
    pub dimension: usize,
}

pub fn regularity_report(sys: &RootSystem, s: &WeightVector, theta: &ThetaSet) -> Result<RegularityReport, GeometryError> {
    let x = BasePoint::standard(sys.d, theta, sys.field);
    let w = omega_ell_matrix(&x, s)?;
    let rank = numerical_rank(&w);
    let combinatorial = theta.indices().iter().all(|&a| s.get(a) != 0.0);
    Ok(RegularityReport { combinatorial, numerical: rank == w.nrows(), rank, dimension: w.nrows() })
}

/// Regular iff every `s_alpha` is nonzero; the rank of `omega` must agree.
pub fn is_regular(sys: &RootSystem, s: &WeightVector, theta: &ThetaSet) -> Result<bool, GeometryError> {
    let r = regularity_report(sys, s, theta)?;
    if r.combinatorial != r.numerical {
        return Err(GeometryError::RankDisagreement { combinatorial: r.combinatorial, numerical: r.numerical });
    }
    Ok(r.numerical)
}

/// `B(X_s, X_{w_alpha})` per root, the verdicts `!= 0`, and whether those agree
/// with the combinatorial criterion `s_alpha != 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactReport {
    pub pairings: Vec<(usize, f64)>,
    pub verdicts: Vec<(usize, bool)>,
    pub nonvanishing: Vec<(usize, bool)>,
    pub agrees: bool,
}

pub fn contact_test(sys: &RootSystem, s: &WeightVector, theta: &ThetaSet) -> Result<ContactReport, GeometryError> {
    let xs = killing_dual_entries(sys, s)?;
    let scale = theta.indices().iter().map(|&a| s.get(a).abs()).fold(0.0, f64::max);
    let mut pairings = Vec::new();
    let mut verdicts = Vec::new();
    let mut nonvanishing = Vec::new();
    for &a in theta.indices() {
        let wa = killing_dual_entries(sys, &WeightVector::new(&ThetaSet::new(sys.d, [a])?, &[1.0 / sys.m_alpha(a)? as f64])?)?;
        let b = sys.killing_form(&linalg::diag_real(&xs), &linalg::diag_real(&wa))?;
        pairings.push((a, b));
        verdicts.push((a, b.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE)));
        nonvanishing.push((a, s.get(a) != 0.0));
    }
    let agrees = verdicts == nonvanishing;
    Ok(ContactReport { pairings, verdicts, nonvanishing, agrees })
}

/// Largest `|B(X_s, [[X_i, X_j], X_k]) + cyclic|` over the tangent frame.
pub fn closedness_defect(x: &BasePoint, s: &WeightVector) -> Result<f64, GeometryError> {
    let sys = RootSystem::new(x.d(), x.field())?;
    let frame = TangentFrame::new(x)?;
    let xs = frame.cartan_element(&killing_dual_entries(&sys, s)?);
    let basis: Vec<&CMat> = frame.basis().collect();
    let n = basis.len();
    let brackets: Vec<Vec<CMat>> = (0..n).map(|i| (0..n).map(|j| bracket(basis[i], basis[j])).collect()).collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let t = killing(&sys, &xs, &bracket(&brackets[i][j], basis[k]))
                    + killing(&sys, &xs, &bracket(&brackets[j][k], basis[i]))
                    + killing(&sys, &xs, &bracket(&brackets[k][i], basis[j]));
                worst = worst.max(t.abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::random::base_point;
    use crate::jordan::GroupElement;
    use crate::linalg::random as lr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn metric_d2() {
        let x = BasePoint::standard(2, &ThetaSet::full(2), Field::Real);
        let g = killing_metric_matrix(&x).unwrap();
        assert_eq!(g.nrows(), 2);
        assert!(g[(0, 0)].abs() < 1e-14 && g[(1, 1)].abs() < 1e-14);
        assert!((g[(0, 1)] - 4.0).abs() < 1e-12);
        assert_eq!(signature(&g), (1, 1, 0));
    }

    #[test]
    fn metric_signature_random() {
        let mut r = ChaCha8Rng::seed_from_u64(1);
        for field in [Field::Real, Field::Complex] {
            for d in 2..=4 {
                let theta = ThetaSet::full(d);
                let x = base_point(d, &theta, field, 10.0, &mut r);
                let g = killing_metric_matrix(&x).unwrap();
                let n = g.nrows() / 2;
                assert_eq!(signature(&g), (n, n, 0));
                let h = GroupElement::new(lr::special_linear(d, field, &mut r), field).unwrap();
                assert_eq!(signature(&killing_metric_matrix(&x.act(&h)).unwrap()), (n, n, 0));
            }
        }
    }

    #[test]
    fn omega_properties() {
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let d = 3;
        let theta = ThetaSet::full(d);
        let x = base_point(d, &theta, Field::Real, 10.0, &mut r);
        let zero = omega_ell_matrix(&x, &WeightVector::constant(&theta, 0.0)).unwrap();
        assert!(zero.norm() < 1e-14);
        let s1 = WeightVector::new(&theta, &[1.0, 2.0]).unwrap();
        let s2 = WeightVector::new(&theta, &[-0.5, 0.3]).unwrap();
        let s12 = WeightVector::new(&theta, &[0.5, 2.3]).unwrap();
        let w1 = omega_ell_matrix(&x, &s1).unwrap();
        assert!((&w1 + w1.transpose()).norm() == 0.0);
        let w12 = omega_ell_matrix(&x, &s12).unwrap();
        let w2 = omega_ell_matrix(&x, &s2).unwrap();
        assert!((w12 - (&w1 + w2)).norm() < 1e-9 * w1.norm());
        let n = w1.nrows() / 2;
        assert!(w1.view((0, 0), (n, n)).norm() < 1e-9 * w1.norm());
        assert!(w1.view((n, n), (n, n)).norm() < 1e-9 * w1.norm());
        assert!(closedness_defect(&x, &s1).unwrap() < 1e-9 * w1.norm().max(1.0));
    }

    #[test]
    fn regularity_examples() {
        let sys = RootSystem::new(3, Field::Real).unwrap();
        let theta = ThetaSet::full(3);
        assert!(is_regular(&sys, &WeightVector::new(&theta, &[1.0, 1.0]).unwrap(), &theta).unwrap());
        assert!(!is_regular(&sys, &WeightVector::new(&theta, &[1.0, 0.0]).unwrap(), &theta).unwrap());
        assert!(is_regular(&sys, &WeightVector::new(&theta, &[-2.0, 3.0]).unwrap(), &theta).unwrap());
        // X_s = diag(1/6, -1/3, 1/6) commutes with E_13: omega is degenerate
        let mixed = WeightVector::new(&theta, &[1.0, -1.0]).unwrap();
        assert!(matches!(is_regular(&sys, &mixed, &theta), Err(GeometryError::RankDisagreement { combinatorial: true, numerical: false })));
    }

    #[test]
    fn contact_pairings() {
        let sys = RootSystem::new(4, Field::Real).unwrap();
        let theta = ThetaSet::full(4);
        let all = contact_test(&sys, &WeightVector::constant(&theta, 1.0), &theta).unwrap();
        assert!(all.verdicts.iter().all(|v| v.1) && all.agrees);
        let none = contact_test(&sys, &WeightVector::constant(&theta, 0.0), &theta).unwrap();
        assert!(none.verdicts.iter().all(|v| !v.1) && none.agrees);
        // the weight Gram matrix (min(a,b) - ab/d) / c is entrywise positive
        let one_hot = contact_test(&sys, &WeightVector::new(&theta, &[0.0, 1.0, 0.0]).unwrap(), &theta).unwrap();
        for (a, b) in &one_hot.pairings {
            let (a, bb) = (*a as f64, 2.0);
            let expected = 4.0 * (a.min(bb) - a * bb / 4.0) / 8.0;
            assert!((b - expected).abs() < 1e-12, "{b} vs {expected}");
        }
        assert!(!one_hot.agrees);
    }
}

//! Jordan projection and decomposition of elements of `SL(d, k)`, the class
//! functions built from them, and attracting/repelling flags of proximal
//! elements.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flags::{Flag, FlagType};
use crate::linalg::{self, c, CMat, Field, C64};
use crate::rootdata::{CartanVector, RootDataError, RootSystem, ThetaSet, WeightVector};

/// Eigenvalues within this relative distance belong to one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Default gap below which an element is not considered proximal.
pub const DEFAULT_PROXIMAL_TOL: f64 = 1e-6;
const SYLVESTER_LIMIT: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JordanError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("determinant {0} is not 1")]
    NotSpecialLinear(C64),
    #[error("matrix has non-real entries but the field is R")]
    NotReal,
    #[error("matrix is singular")]
    Singular,
    #[error("eigenvalue computation failed")]
    EigenFailure,
    #[error("eigenvalue clusters cannot be separated (Sylvester solution norm {0:e})")]
    IllConditioned(f64),
    #[error("not proximal at block boundary {boundary}: gap {gap:e} <= tol")]
    NotProximal { boundary: usize, gap: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}

/// Element of `SL(d, k)` with its inverse and determinant carried along, so
/// long products never need to be inverted from scratch.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    matrix: CMat,
    inverse: CMat,
    det: C64,
    field: Field,
}

impl GroupElement {
    pub fn new(matrix: CMat, field: Field) -> Result<Self, JordanError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(JordanError::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        let matrix = match field {
            Field::Real => {
                if linalg::max_imag(&matrix) > 1e-12 * (1.0 + matrix.norm()) {
                    return Err(JordanError::NotReal);
                }
                linalg::real_part(&matrix)
            }
            Field::Complex => matrix,
        };
        let det = linalg::det(&matrix);
        if (det - c(1.0)).norm() >= 1e-9 {
            return Err(JordanError::NotSpecialLinear(det));
        }
        let inverse = linalg::inverse(&matrix).ok_or(JordanError::Singular)?;
        Ok(GroupElement { matrix, inverse, det, field })
    }

    pub fn identity(d: usize, field: Field) -> Self {
        GroupElement { matrix: CMat::identity(d, d), inverse: CMat::identity(d, d), det: c(1.0), field }
    }

    /// Assemble from a matrix and a known inverse, skipping the determinant check.
    pub(crate) fn from_parts(matrix: CMat, inverse: CMat, det: C64, field: Field) -> Self {
        GroupElement { matrix, inverse, det, field }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &CMat {
        &self.inverse
    }

    pub fn det(&self) -> C64 {
        self.det
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn inv(&self) -> Self {
        GroupElement { matrix: self.inverse.clone(), inverse: self.matrix.clone(), det: c(1.0) / self.det, field: self.field }
    }

    pub fn mul(&self, other: &GroupElement) -> Self {
        GroupElement {
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
            det: self.det * other.det,
            field: self.field,
        }
    }

    /// `h g h^{-1}`.
    pub fn conjugate_by(&self, h: &GroupElement) -> Self {
        h.mul(self).mul(&h.inv())
    }
}

/// Output of [`jordan_decomposition`].
#[derive(Clone, Debug)]
pub struct JordanData {
    pub lambda: CartanVector,
    pub eigen_moduli: Vec<f64>,
    pub hyperbolic_part: GroupElement,
    pub elliptic_part: GroupElement,
    pub unipotent_part: GroupElement,
}

/// Margins `alpha(lambda(g))` for `alpha` in `Theta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProximalityVerdict {
    pub proximal: bool,
    pub margins: Vec<(usize, f64)>,
}

impl ProximalityVerdict {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min)
    }
}

fn sorted_log_moduli(m: &CMat) -> Result<Vec<f64>, JordanError> {
    let ev = linalg::eigenvalues(m).ok_or(JordanError::EigenFailure)?;
    let mut l: Vec<f64> = ev.iter().map(|z| z.norm().max(f64::MIN_POSITIVE).ln()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok(l)
}

/// `lambda(g)`: sorted log-moduli of the eigenvalues.
///
/// Contracted directions are read off from `g^{-1}`, where they are expanding
/// and therefore computed to full relative accuracy.
pub fn jordan_projection(g: &GroupElement) -> Result<CartanVector, JordanError> {
    let fwd = sorted_log_moduli(g.matrix())?;
    let bwd = sorted_log_moduli(g.inverse_matrix())?;
    let d = fwd.len();
    let mut l: Vec<f64> = (0..d).map(|i| if fwd[i] >= 0.0 { fwd[i] } else { -bwd[d - 1 - i] }).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok(CartanVector::recentered(l))
}

/// Single-linkage clusters of eigenvalues; returns representative values.
fn cluster_eigenvalues(ev: &[C64]) -> Vec<C64> {
    let n = ev.len();
    let mut label = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if label[i] != usize::MAX {
            continue;
        }
        let id = reps.len();
        label[i] = id;
        let mut stack = vec![i];
        let mut members = vec![i];
        while let Some(k) = stack.pop() {
            for j in 0..n {
                if label[j] == usize::MAX && (ev[k] - ev[j]).norm() <= CLUSTER_TOL * ev[k].norm().max(ev[j].norm()) {
                    label[j] = id;
                    stack.push(j);
                    members.push(j);
                }
            }
        }
        let mean = members.iter().map(|&j| ev[j]).sum::<C64>() / c(members.len() as f64);
        reps.push(mean);
    }
    reps
}

fn nearest(reps: &[C64], z: C64) -> usize {
    let mut best = 0;
    for (i, r) in reps.iter().enumerate() {
        if (r - z).norm() < (reps[best] - z).norm() {
            best = i;
        }
    }
    best
}

/// Solve `A X - X C = rhs` through the Kronecker form.
fn sylvester(a: &CMat, cm: &CMat, rhs: &CMat) -> Option<CMat> {
    let (n1, n2) = (a.nrows(), cm.nrows());
    let n = n1 * n2;
    let mut k = CMat::zeros(n, n);
    for q in 0..n2 {
        for p in 0..n1 {
            let row = p + q * n1;
            for r in 0..n1 {
                k[(row, r + q * n1)] += a[(p, r)];
            }
            for r in 0..n2 {
                k[(row, p + r * n1)] -= cm[(r, q)];
            }
        }
    }
    let b = nalgebra::DVector::from_iterator(n, (0..n).map(|i| rhs[(i % n1, i / n1)]));
    let x = k.lu().solve(&b)?;
    Some(CMat::from_fn(n1, n2, |p, q| x[p + q * n1]))
}

/// Multiplicative Jordan decomposition `g = g_e g_h g_u`.
pub fn jordan_decomposition(g: &GroupElement) -> Result<JordanData, JordanError> {
    let d = g.dim();
    let field = g.field();
    let ev = linalg::eigenvalues(g.matrix()).ok_or(JordanError::EigenFailure)?;
    let reps = cluster_eigenvalues(&ev);
    let s = linalg::sorted_schur(g.matrix(), |z| -(nearest(&reps, z) as f64)).ok_or(JordanError::EigenFailure)?;
    let labels: Vec<usize> = s.eigenvalues().iter().map(|&z| nearest(&reps, z)).collect();

    // block-diagonalise the sorted triangular form cluster by cluster
    let mut t = s.t.clone();
    let mut basis = CMat::identity(d, d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && labels[end] == labels[start] {
            end += 1;
        }
        if end == d {
            break;
        }
        let a = t.view((start, start), (end - start, end - start)).into_owned();
        let b = t.view((start, end), (end - start, d - end)).into_owned();
        let cm = t.view((end, end), (d - end, d - end)).into_owned();
        let x = sylvester(&a, &cm, &(-b)).ok_or(JordanError::IllConditioned(f64::INFINITY))?;
        let xn = x.norm();
        if !xn.is_finite() || xn > SYLVESTER_LIMIT {
            return Err(JordanError::IllConditioned(xn));
        }
        let mut sm = CMat::identity(d, d);
        sm.view_mut((start, end), (end - start, d - end)).copy_from(&x);
        let mut sinv = CMat::identity(d, d);
        sinv.view_mut((start, end), (end - start, d - end)).copy_from(&(-&x));
        t = &sinv * t * &sm;
        basis *= sm;
        start = end;
    }
    let p = &s.q * &basis;
    let pinv = linalg::inverse(&p).ok_or(JordanError::IllConditioned(f64::INFINITY))?;
    let build = |f: &dyn Fn(C64) -> C64| -> CMat {
        let dg = CMat::from_fn(d, d, |i, j| if i == j { f(reps[labels[i]]) } else { c(0.0) });
        let m = &p * dg * &pinv;
        match field {
            Field::Real => linalg::real_part(&m),
            Field::Complex => m,
        }
    };
    let gs = build(&|z| z);
    let gs_inv = build(&|z| c(1.0) / z);
    let gh = build(&|z| c(z.norm()));
    let gh_inv = build(&|z| c(1.0 / z.norm()));
    let ge = build(&|z| z / z.norm());
    let ge_inv = build(&|z| z.norm() / z);
    let gu = &gs_inv * g.matrix();
    let gu_inv = g.inverse_matrix() * &gs;

    let mut moduli: Vec<f64> = ev.iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    Ok(JordanData {
        lambda: jordan_projection(g)?,
        eigen_moduli: moduli,
        hyperbolic_part: GroupElement::from_parts(gh, gh_inv, c(1.0), field),
        elliptic_part: GroupElement::from_parts(ge, ge_inv, c(1.0), field),
        unipotent_part: GroupElement::from_parts(gu, gu_inv, c(1.0), field),
    })
}

fn root_system(g: &GroupElement) -> Result<RootSystem, JordanError> {
    Ok(RootSystem::new(g.dim(), g.field())?)
}

/// `P_alpha(g) = alpha_j(lambda(g))`.
pub fn proximality_fn(j: usize, g: &GroupElement) -> Result<f64, JordanError> {
    let lambda = jordan_projection(g)?;
    Ok(root_system(g)?.simple_root(j, &lambda)?)
}

/// `J_F(g) = 2 rho_Theta(p_Theta(lambda(g)))`.
pub fn jacobian_class_fn(theta: &ThetaSet, g: &GroupElement) -> Result<f64, JordanError> {
    let sys = root_system(g)?;
    let lambda = jordan_projection(g)?;
    let p = sys.project_to_a_theta(&lambda, theta)?;
    Ok(2.0 * sys.rho_theta(theta, &p)?)
}

/// `J^s_Theta(g) = w^s_Theta(lambda(g))`.
pub fn weighted_jacobian(s: &WeightVector, g: &GroupElement) -> Result<f64, JordanError> {
    let lambda = jordan_projection(g)?;
    Ok(root_system(g)?.weighted_weight(s, &lambda)?)
}

pub fn is_theta_proximal(g: &GroupElement, theta: &ThetaSet, tol: f64) -> Result<ProximalityVerdict, JordanError> {
    let sys = root_system(g)?;
    let lambda = jordan_projection(g)?;
    let mut margins = Vec::with_capacity(theta.len());
    for &j in theta.indices() {
        margins.push((j, sys.simple_root(j, &lambda)?));
    }
    let proximal = !theta.is_empty() && margins.iter().all(|m| m.1 > tol);
    Ok(ProximalityVerdict { proximal, margins })
}

/// Dominant `k`-dimensional invariant subspace of `g` (top `k` eigenvalue
/// moduli), obtained either from the sorted Schur form of `g` or as the
/// orthogonal complement of the dominant `(d-k)`-subspace of `g^{-*}`,
/// whichever has the smaller forward error estimate.
pub(crate) fn dominant_subspace(g: &GroupElement, k: usize) -> Result<CMat, JordanError> {
    let d = g.dim();
    let field = g.field();
    if k == 0 {
        return Ok(CMat::zeros(d, 0));
    }
    if k == d {
        return Ok(CMat::identity(d, d));
    }
    let fwd = linalg::sorted_schur(g.matrix(), |z| z.norm()).ok_or(JordanError::EigenFailure)?;
    let adj_inv = g.inverse_matrix().adjoint();
    let bwd = linalg::sorted_schur(&adj_inv, |z| z.norm()).ok_or(JordanError::EigenFailure)?;
    let mf: Vec<f64> = fwd.eigenvalues().iter().map(|z| z.norm()).collect();
    let mb: Vec<f64> = bwd.eigenvalues().iter().map(|z| z.norm()).collect();
    let err_fwd = g.matrix().norm() / (mf[k - 1] - mf[k]).max(f64::MIN_POSITIVE);
    let err_bwd = adj_inv.norm() / (mb[d - k - 1] - mb[d - k]).max(f64::MIN_POSITIVE);
    let span = if err_fwd <= err_bwd {
        fwd.q.columns(0, k).into_owned()
    } else {
        let u = bwd.q.columns(0, d - k).into_owned();
        let u = match field {
            Field::Real => linalg::realify(&u),
            Field::Complex => u,
        };
        linalg::null_space_dim(&u.adjoint(), k)
    };
    Ok(match field {
        Field::Real => linalg::realify(&span),
        Field::Complex => span,
    })
}

/// Attracting flag of type `dvec` and repelling flag of the reversed type.
pub fn attracting_repelling_flags(g: &GroupElement, dvec: &[usize], tol: f64) -> Result<(Flag, Flag), JordanError> {
    let d = g.dim();
    let ftype = FlagType::new(dvec.to_vec()).map_err(|e| JordanError::DimensionMismatch(e.to_string()))?;
    if ftype.d() != d {
        return Err(JordanError::DimensionMismatch(format!("flag type of size {} in dimension {d}", ftype.d())));
    }
    let lambda = jordan_projection(g)?;
    let l = lambda.entries();
    for &b in &ftype.boundaries() {
        let gap = l[b - 1] - l[b];
        if gap <= tol {
            return Err(JordanError::NotProximal { boundary: b, gap });
        }
    }
    let plus = Flag::from_subspaces(ftype.clone(), &subspaces(g, &ftype.boundaries())?, g.field());
    let rtype = ftype.reverse();
    let ginv = g.inv();
    let minus = Flag::from_subspaces(rtype.clone(), &subspaces(&ginv, &rtype.boundaries())?, g.field());
    Ok((plus, minus))
}

fn subspaces(g: &GroupElement, dims: &[usize]) -> Result<Vec<CMat>, JordanError> {
    dims.iter().map(|&k| dominant_subspace(g, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, from_rows, random, subspace_distance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ge(m: CMat) -> GroupElement {
        GroupElement::new(m, Field::Real).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn projection_of_diagonal() {
        let l2 = 2f64.ln();
        let g = ge(diag_real(&[2.0, 1.0, 0.5]));
        assert!(close(jordan_projection(&g).unwrap().entries(), &[l2, 0.0, -l2], 1e-14));
        let id = GroupElement::identity(4, Field::Real);
        assert!(close(jordan_projection(&id).unwrap().entries(), &[0.0; 4], 1e-15));
    }

    #[test]
    fn projection_of_inverse_is_opposite() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 2..6 {
            let g = ge(random::special_linear(d, Field::Real, &mut rng));
            let a = jordan_projection(&g.inv()).unwrap();
            let b = jordan_projection(&g).unwrap().opposite();
            assert!(close(a.entries(), b.entries(), 1e-9));
        }
    }

    #[test]
    fn projection_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for field in [Field::Real, Field::Complex] {
            for d in 2..5 {
                let g = GroupElement::new(random::special_linear(d, field, &mut rng), field).unwrap();
                let h = GroupElement::new(random::conditioned(d, field, 1e3, &mut rng), field).unwrap();
                let a = jordan_projection(&g).unwrap();
                let b = jordan_projection(&g.conjugate_by(&h)).unwrap();
                assert!(close(a.entries(), b.entries(), 1e-8));
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let g = ge(diag_real(&[2.0, 0.5]));
        let jd = jordan_decomposition(&g).unwrap();
        assert!((jd.hyperbolic_part.matrix() - g.matrix()).norm() < 1e-12);
        assert!((jd.elliptic_part.matrix() - CMat::identity(2, 2)).norm() < 1e-12);
        assert!((jd.unipotent_part.matrix() - CMat::identity(2, 2)).norm() < 1e-12);

        let u = ge(from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]));
        let jd = jordan_decomposition(&u).unwrap();
        assert!((jd.unipotent_part.matrix() - u.matrix()).norm() < 1e-12);
        assert!((jd.hyperbolic_part.matrix() - CMat::identity(2, 2)).norm() < 1e-12);

        let th = 0.7f64;
        let r = ge(from_rows(&[&[th.cos(), -th.sin()], &[th.sin(), th.cos()]]));
        let jd = jordan_decomposition(&r).unwrap();
        assert!((jd.elliptic_part.matrix() - r.matrix()).norm() < 1e-12);
        assert!((jd.hyperbolic_part.matrix() - CMat::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn decomposition_parts_commute_and_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for field in [Field::Real, Field::Complex] {
            for d in 2..6 {
                let g = GroupElement::new(random::special_linear(d, field, &mut rng), field).unwrap();
                let jd = jordan_decomposition(&g).unwrap();
                let (e, h, u) = (jd.elliptic_part.matrix(), jd.hyperbolic_part.matrix(), jd.unipotent_part.matrix());
                let scale = g.matrix().norm();
                assert!((e * h * u - g.matrix()).norm() < 1e-7 * scale);
                assert!((e * h - h * e).norm() < 1e-7 * scale);
                assert!((e * u - u * e).norm() < 1e-7 * scale);
                assert!((h * u - u * h).norm() < 1e-7 * scale);
                let hl: Vec<f64> = {
                    let mut v: Vec<f64> = linalg::eigenvalues(h).unwrap().iter().map(|z| z.norm().ln()).collect();
                    v.sort_by(|a, b| b.total_cmp(a));
                    v
                };
                assert!(close(&hl, jd.lambda.entries(), 1e-7));
            }
        }
    }

    #[test]
    fn decomposition_with_nontrivial_jordan_block() {
        // conjugate of diag(2,2,1/4) * unipotent block
        let g0 = from_rows(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 0.25]]);
        let h = from_rows(&[&[1.0, 0.5, 0.2], &[0.0, 1.0, -0.3], &[0.1, 0.0, 1.0]]);
        let hinv = h.clone().try_inverse().unwrap();
        let g = ge(&h * g0 * &hinv);
        let jd = jordan_decomposition(&g).unwrap();
        let u = jd.unipotent_part.matrix();
        let n = u - CMat::identity(3, 3);
        assert!(n.norm() > 0.1);
        assert!((&n * &n).norm() < 1e-8);
        assert!((jd.elliptic_part.matrix() - CMat::identity(3, 3)).norm() < 1e-8);
    }

    #[test]
    fn class_function_examples() {
        let l2 = 2f64.ln();
        let g = ge(diag_real(&[2.0, 1.0, 0.5]));
        assert!((proximality_fn(1, &g).unwrap() - l2).abs() < 1e-14);
        let full = ThetaSet::full(3);
        assert!((jacobian_class_fn(&full, &g).unwrap() - 4.0 * l2).abs() < 1e-13);
        let th = 1.1f64;
        let r = ge(from_rows(&[&[th.cos(), -th.sin()], &[th.sin(), th.cos()]]));
        assert!(proximality_fn(1, &r).unwrap().abs() < 1e-12);
        assert!(jacobian_class_fn(&ThetaSet::full(2), &r).unwrap().abs() < 1e-12);
    }

    #[test]
    fn jacobian_splits_over_simple_roots_with_positive_coefficients() {
        // J_F = sum_alpha r_alpha J_{F_alpha}: fit r on two samples, test on a third
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = 4;
        let theta = ThetaSet::new(d, [1, 3]).unwrap();
        let samples: Vec<(f64, f64, f64)> = (0..3)
            .map(|_| {
                let logs = random::generic_logs(d, 0.3, 1.5, &mut rng);
                let g = ge(random::conjugated_diagonal(&logs, Field::Real, 10.0, &mut rng));
                let j1 = jacobian_class_fn(&ThetaSet::new(d, [1]).unwrap(), &g).unwrap();
                let j3 = jacobian_class_fn(&ThetaSet::new(d, [3]).unwrap(), &g).unwrap();
                (jacobian_class_fn(&theta, &g).unwrap(), j1, j3)
            })
            .collect();
        let (t0, a0, b0) = samples[0];
        let (t1, a1, b1) = samples[1];
        let det = a0 * b1 - a1 * b0;
        let r1 = (t0 * b1 - t1 * b0) / det;
        let r3 = (a0 * t1 - a1 * t0) / det;
        assert!(r1 > 0.0 && r3 > 0.0);
        assert!((r1 - 0.75).abs() < 1e-8 && (r3 - 0.75).abs() < 1e-8);
        let (t2, a2, b2) = samples[2];
        assert!((t2 - r1 * a2 - r3 * b2).abs() < 1e-8);
    }

    #[test]
    fn proximality_examples() {
        let l2 = 2f64.ln();
        let g = ge(diag_real(&[2.0, 1.0, 0.5]));
        let v = is_theta_proximal(&g, &ThetaSet::full(3), DEFAULT_PROXIMAL_TOL).unwrap();
        assert!(v.proximal);
        assert!(close(&v.margins.iter().map(|m| m.1).collect::<Vec<_>>(), &[l2, l2], 1e-14));
        let g = ge(diag_real(&[2.0, 2.0, 0.25]));
        assert!(!is_theta_proximal(&g, &ThetaSet::new(3, [1]).unwrap(), DEFAULT_PROXIMAL_TOL).unwrap().proximal);
        let id = GroupElement::identity(3, Field::Real);
        assert!(!is_theta_proximal(&id, &ThetaSet::full(3), DEFAULT_PROXIMAL_TOL).unwrap().proximal);
    }

    #[test]
    fn flags_of_diagonal_element() {
        let g = ge(diag_real(&[4.0, 1.0, 0.25]));
        let (p, m) = attracting_repelling_flags(&g, &[1, 2], DEFAULT_PROXIMAL_TOL).unwrap();
        let e1 = from_rows(&[&[1.0], &[0.0], &[0.0]]);
        let e23 = from_rows(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert!(subspace_distance(&p.subspace(1), &e1) < 1e-12);
        assert!(subspace_distance(&m.subspace(1), &e23) < 1e-12);
        assert_eq!(m.flag_type().dvec(), &[2, 1]);
    }

    #[test]
    fn flags_are_fixed_and_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for field in [Field::Real, Field::Complex] {
            for d in 2..5 {
                let logs = random::generic_logs(d, 0.2, 1.0, &mut rng);
                let g = GroupElement::new(random::conjugated_diagonal(&logs, field, 100.0, &mut rng), field).unwrap();
                let dvec = vec![1; d];
                let (p, m) = attracting_repelling_flags(&g, &dvec, DEFAULT_PROXIMAL_TOL).unwrap();
                let dist = p.act(&g).distance(&p);
                assert!(dist < 1e-8, "{field:?} d={d} dist={dist}");
                assert!(m.act(&g).distance(&m) < 1e-8);
                assert!(crate::flags::is_transverse(&p, &m, crate::flags::TRANSVERSE_TOL).unwrap());
                let h = GroupElement::new(random::conditioned(d, field, 10.0, &mut rng), field).unwrap();
                let (p2, m2) = attracting_repelling_flags(&g.conjugate_by(&h), &dvec, DEFAULT_PROXIMAL_TOL).unwrap();
                assert!(p2.distance(&p.act(&h)) < 1e-8);
                assert!(m2.distance(&m.act(&h)) < 1e-8);
            }
        }
    }

    #[test]
    fn non_proximal_is_reported() {
        let g = ge(diag_real(&[2.0, 2.0, 0.25]));
        assert!(matches!(
            attracting_repelling_flags(&g, &[1, 2], DEFAULT_PROXIMAL_TOL),
            Err(JordanError::NotProximal { boundary: 1, .. })
        ));
        assert!(attracting_repelling_flags(&g, &[2, 1], DEFAULT_PROXIMAL_TOL).is_ok());
    }

    #[test]
    fn rejects_non_special_linear() {
        assert!(matches!(GroupElement::new(diag_real(&[2.0, 1.0]), Field::Real), Err(JordanError::NotSpecialLinear(_))));
    }
}

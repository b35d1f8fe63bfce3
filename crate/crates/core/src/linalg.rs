//! Dense complex linear algebra shared by every module.
//!
//! Matrices over `R` and `C` are both stored as `DMatrix<Complex64>`; the
//! [`Field`] marker records whether imaginary parts must vanish. Subspaces are
//! carried by orthonormal column frames.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

/// Ground field of the matrix group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R", alias = "real", alias = "r")]
    Real,
    #[serde(rename = "C", alias = "complex", alias = "c")]
    Complex,
}

impl Field {
    /// `dim_R k`.
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
        }
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" | "r" | "real" => Ok(Field::Real),
            "C" | "c" | "complex" => Ok(Field::Complex),
            other => Err(format!("unknown field `{other}` (expected R or C)")),
        }
    }
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn from_real(m: &DMatrix<f64>) -> CMat {
    m.map(c)
}

pub fn from_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| c(rows[i][j]))
}

pub fn diag_real(entries: &[f64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { c(entries[i]) } else { C64::new(0.0, 0.0) })
}

pub fn max_imag(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

pub fn real_part(m: &CMat) -> CMat {
    m.map(|z| c(z.re))
}

/// Determinant through LU with partial pivoting.
pub fn det(m: &CMat) -> C64 {
    m.clone().lu().determinant()
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}

/// `|det_R|` of a `k`-linear map, i.e. `|det|^{dim_R k}`.
pub fn real_abs_det(m: &CMat, field: Field) -> f64 {
    det(m).norm().powi(field.real_dim() as i32)
}

/// One-sided Jacobi SVD of a matrix with `rows >= cols`: returns `A V` (the
/// columns are mutually orthogonal, norms are the singular values) and the
/// unitary `V`.
fn jacobi_columns(a: &CMat) -> (CMat, CMat) {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = CMat::identity(n, n);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate column q by the phase of gamma so the 2x2 Gram block is real
                let ph = gamma.conj() / g;
                for i in 0..w.nrows() {
                    w[(i, q)] *= ph;
                }
                for i in 0..n {
                    v[(i, q)] *= ph;
                }
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..w.nrows() {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = x * cs - y * sn;
                    w[(i, q)] = x * sn + y * cs;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = x * cs - y * sn;
                    v[(i, q)] = x * sn + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

/// Complete orthonormal columns `u` (`m x k`) to an `m x m` unitary matrix.
fn complete_basis(u: &CMat) -> CMat {
    let m = u.nrows();
    let mut cols: Vec<nalgebra::DVector<C64>> = (0..u.ncols()).map(|j| u.column(j).into_owned()).collect();
    let mut candidate = 0;
    while cols.len() < m && candidate < m {
        let mut e = nalgebra::DVector::<C64>::zeros(m);
        e[candidate] = c(1.0);
        candidate += 1;
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dotc(&e);
                e -= q * proj;
            }
        }
        let nrm = e.norm();
        if nrm > 0.5 / (m as f64).sqrt() {
            cols.push(e / c(nrm));
        }
    }
    CMat::from_columns(&cols)
}

/// Left singular vectors (a full `m x m` unitary) sorted by decreasing
/// singular value, and the singular values.
fn sorted_left_svd(m: &CMat) -> (CMat, Vec<f64>) {
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows < cols {
        // left vectors of m are the right vectors of m^*
        let (w, v) = jacobi_columns(&m.adjoint());
        let sv: Vec<f64> = (0..rows).map(|j| w.column(j).norm()).collect();
        let mut idx: Vec<usize> = (0..rows).collect();
        idx.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
        let ucols: Vec<_> = idx.iter().map(|&i| v.column(i).into_owned()).collect();
        return (CMat::from_columns(&ucols), idx.iter().map(|&i| sv[i]).collect());
    }
    let (w, _) = jacobi_columns(m);
    let sv: Vec<f64> = (0..cols).map(|j| w.column(j).norm()).collect();
    let mut idx: Vec<usize> = (0..cols).collect();
    idx.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let mut ucols = Vec::new();
    for &i in &idx {
        if sv[i] > 1e-300 && sv[i] > 1e-30 * smax {
            ucols.push(w.column(i) / c(sv[i]));
        }
    }
    let u = if ucols.is_empty() { CMat::zeros(rows, 0) } else { CMat::from_columns(&ucols) };
    (complete_basis(&u), idx.iter().map(|&i| sv[i]).collect())
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let a = if m.nrows() >= m.ncols() { m.clone() } else { m.adjoint() };
    let (w, _) = jacobi_columns(&a);
    let mut sv: Vec<f64> = (0..w.ncols()).map(|j| w.column(j).norm()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn min_singular_value(m: &CMat) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Orthonormal basis of the column span, keeping singular values above
/// `rel_tol * sigma_max`.
pub fn orthonormal_basis(m: &CMat, rel_tol: f64) -> CMat {
    let d = m.nrows();
    if m.ncols() == 0 {
        return CMat::zeros(d, 0);
    }
    let (u, sv) = sorted_left_svd(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > rel_tol * smax && s > 0.0).count();
    u.columns(0, rank).into_owned()
}

/// Orthonormal basis of the span with a prescribed dimension.
pub fn orthonormal_basis_dim(m: &CMat, dim: usize) -> CMat {
    let d = m.nrows();
    if dim == 0 {
        return CMat::zeros(d, 0);
    }
    let (u, _) = sorted_left_svd(m);
    u.columns(0, dim).into_owned()
}

/// Real orthonormal frame of a subspace spanned by complex vectors whose span
/// is closed under conjugation.
pub fn realify(frame: &CMat) -> CMat {
    let k = frame.ncols();
    let re = frame.map(|z| c(z.re));
    let im = frame.map(|z| c(z.im));
    let mut stacked = CMat::zeros(frame.nrows(), 2 * k);
    stacked.columns_mut(0, k).copy_from(&re);
    stacked.columns_mut(k, k).copy_from(&im);
    real_part(&orthonormal_basis_dim(&stacked, k))
}

/// Null space of `m` (right kernel) with relative singular value threshold.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    // kernel of m = orthogonal complement of the row space
    let mh = m.adjoint();
    let (u, sv) = sorted_left_svd(&pad_columns(&mh, n));
    let smax = sv.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let rank = sv.iter().filter(|&&s| s > rel_tol * smax).count();
    u.columns(rank, n - rank).into_owned()
}

fn pad_columns(m: &CMat, min_cols: usize) -> CMat {
    if m.ncols() >= min_cols {
        return m.clone();
    }
    let mut out = CMat::zeros(m.nrows(), min_cols);
    out.columns_mut(0, m.ncols()).copy_from(m);
    out
}

/// Right kernel of `m` with prescribed dimension: the right singular vectors of
/// the `dim` smallest singular values.
pub fn null_space_dim(m: &CMat, dim: usize) -> CMat {
    let n = m.ncols();
    if dim == 0 {
        return CMat::zeros(n, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n).columns(0, dim).into_owned();
    }
    let (u, _) = sorted_left_svd(&pad_columns(&m.adjoint(), n));
    u.columns(n - dim, dim).into_owned()
}

/// Concatenate column blocks.
pub fn hcat(blocks: &[&CMat]) -> CMat {
    let d = blocks.first().map_or(0, |b| b.nrows());
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(d, total);
    let mut at = 0;
    for b in blocks {
        out.columns_mut(at, b.ncols()).copy_from(*b);
        at += b.ncols();
    }
    out
}

/// Sine of the largest principal angle between two subspaces of equal
/// dimension given by orthonormal frames.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() != b.ncols() {
        return 1.0;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let resid = b - a * (a.adjoint() * b);
    singular_values(&resid).first().copied().unwrap_or(0.0)
}

/// Intersection of two column spans.
pub fn intersection(a: &CMat, b: &CMat, rel_tol: f64) -> CMat {
    let stacked = hcat(&[a, &(-b)]);
    let kernel = null_space(&stacked, rel_tol);
    let coeff_a = kernel.rows(0, a.ncols()).into_owned();
    let vectors = a * coeff_a;
    orthonormal_basis(&vectors, rel_tol)
}

/// Extend orthonormal columns `u` by an orthonormal basis of the part of
/// `span` orthogonal to `u`, `extra` new columns in total.
pub fn extend_frame(u: &CMat, span: &CMat, extra: usize) -> CMat {
    let d = span.nrows();
    let projected = if u.ncols() == 0 {
        span.clone()
    } else {
        span - u * (u.adjoint() * span)
    };
    let new = orthonormal_basis_dim(&projected, extra);
    let mut out = CMat::zeros(d, u.ncols() + extra);
    if u.ncols() > 0 {
        out.columns_mut(0, u.ncols()).copy_from(u);
    }
    out.columns_mut(u.ncols(), extra).copy_from(&new);
    // one re-orthonormalisation pass against u
    let tail = out.columns(u.ncols(), extra).into_owned();
    let cleaned = if u.ncols() == 0 {
        tail
    } else {
        &tail - u * (u.adjoint() * &tail)
    };
    let cleaned = cleaned.qr().q();
    out.columns_mut(u.ncols(), extra).copy_from(&cleaned.columns(0, extra));
    out
}

/// Upper triangular Schur form `m = q t q^*` with the diagonal sorted so that
/// `key` is non-increasing.
pub struct SortedSchur {
    pub q: CMat,
    pub t: CMat,
}

impl SortedSchur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }
}

pub fn schur(m: &CMat) -> Option<(CMat, CMat)> {
    let n = m.nrows();
    let s = nalgebra::Schur::try_new(m.clone(), 1e-15, 10_000)?;
    let (q, mut t) = s.unpack();
    for j in 0..n {
        for i in (j + 1)..n {
            t[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Some((q, t))
}

/// Swap the adjacent diagonal entries `k`, `k+1` of an upper triangular `t`
/// by a unitary rotation, updating `q`.
fn swap_adjacent(q: &mut CMat, t: &mut CMat, k: usize) {
    let n = t.nrows();
    let a = t[(k, k)];
    let b = t[(k, k + 1)];
    let cc = t[(k + 1, k + 1)];
    // eigenvector of the 2x2 block for eigenvalue cc
    let v0 = b;
    let v1 = cc - a;
    let nv = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    if nv == 0.0 {
        return;
    }
    let (g00, g10) = (v0 / nv, v1 / nv);
    let (g01, g11) = (-g10.conj(), g00.conj());
    // t <- g^* t g on rows/cols k, k+1
    for j in 0..n {
        let x = t[(k, j)];
        let y = t[(k + 1, j)];
        t[(k, j)] = g00.conj() * x + g10.conj() * y;
        t[(k + 1, j)] = g01.conj() * x + g11.conj() * y;
    }
    for i in 0..n {
        let x = t[(i, k)];
        let y = t[(i, k + 1)];
        t[(i, k)] = x * g00 + y * g10;
        t[(i, k + 1)] = x * g01 + y * g11;
    }
    for i in 0..n {
        let x = q[(i, k)];
        let y = q[(i, k + 1)];
        q[(i, k)] = x * g00 + y * g10;
        q[(i, k + 1)] = x * g01 + y * g11;
    }
    t[(k + 1, k)] = C64::new(0.0, 0.0);
    t[(k, k)] = cc;
    t[(k + 1, k + 1)] = a;
}

/// Complex Schur form reordered so that `key(eigenvalue)` is non-increasing.
pub fn sorted_schur<F: Fn(C64) -> f64>(m: &CMat, key: F) -> Option<SortedSchur> {
    let (mut q, mut t) = schur(m)?;
    let n = t.nrows();
    // bubble sort, stable for ties
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1 + pass) {
            if key(t[(k, k)]) < key(t[(k + 1, k + 1)]) {
                swap_adjacent(&mut q, &mut t, k);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    Some(SortedSchur { q, t })
}

pub fn eigenvalues(m: &CMat) -> Option<Vec<C64>> {
    let (_, t) = schur(m)?;
    Some((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Numerical rank with threshold `rel_tol * sigma_max`.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Matrix entry in the JSON exchange format: a real number or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

/// Row-major matrix as it appears in JSON files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRows(pub Vec<Vec<Entry>>);

impl MatrixRows {
    pub fn from_matrix(m: &CMat, field: Field) -> Self {
        let rows = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| {
                        let z = m[(i, j)];
                        match field {
                            Field::Real => Entry::Real(z.re),
                            Field::Complex => Entry::Complex([z.re, z.im]),
                        }
                    })
                    .collect()
            })
            .collect();
        MatrixRows(rows)
    }

    pub fn to_matrix(&self) -> Result<CMat, String> {
        let n = self.0.len();
        let m = self.0.first().map_or(0, |r| r.len());
        if let Some(i) = self.0.iter().position(|r| r.len() != m) {
            return Err(format!("row {i} has {} entries, expected {m}", self.0[i].len()));
        }
        Ok(CMat::from_fn(n, m, |i, j| match self.0[i][j] {
            Entry::Real(x) => c(x),
            Entry::Complex([re, im]) => C64::new(re, im),
        }))
    }
}

/// Random matrices for property checks.
pub mod random {
    use super::*;

    pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, field: Field, rng: &mut R) -> CMat {
        CMat::from_fn(rows, cols, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = match field {
                Field::Real => 0.0,
                Field::Complex => rng.sample(StandardNormal),
            };
            C64::new(re, im)
        })
    }

    /// Haar-ish random element of `O(d)` / `U(d)` via QR.
    pub fn unitary<R: Rng + ?Sized>(d: usize, field: Field, rng: &mut R) -> CMat {
        let g = gaussian(d, d, field, rng);
        let qr = g.qr();
        let q = qr.q();
        let r = qr.r();
        let phases: Vec<C64> = (0..d)
            .map(|i| {
                let z = r[(i, i)];
                if z.norm() == 0.0 {
                    c(1.0)
                } else {
                    z / z.norm()
                }
            })
            .collect();
        CMat::from_fn(d, d, |i, j| q[(i, j)] * phases[j])
    }

    /// Random element of `SL(d, k)` with entries of order one.
    pub fn special_linear<R: Rng + ?Sized>(d: usize, field: Field, rng: &mut R) -> CMat {
        loop {
            let g = gaussian(d, d, field, rng) + CMat::identity(d, d) * c(1.5);
            let det = super::det(&g);
            if det.norm() < 0.2 {
                continue;
            }
            let root = match field {
                Field::Real => {
                    if det.re > 0.0 {
                        c(det.re.powf(1.0 / d as f64))
                    } else {
                        // flip a column so the determinant becomes positive
                        let mut h = g.clone();
                        h.column_mut(0).neg_mut();
                        let det2 = super::det(&h);
                        return h / c(det2.re.powf(1.0 / d as f64));
                    }
                }
                Field::Complex => det.powf(1.0 / d as f64),
            };
            return g / root;
        }
    }

    /// `h diag(exp(logs)) h^{-1}` with a random conditioned `h`; `logs` must sum to 0.
    pub fn conjugated_diagonal<R: Rng + ?Sized>(logs: &[f64], field: Field, max_cond: f64, rng: &mut R) -> CMat {
        let d = logs.len();
        let h = conditioned(d, field, max_cond, rng);
        let hinv = h.clone().try_inverse().expect("conditioned matrix is invertible");
        let dg = diag_real(&logs.iter().map(|l| l.exp()).collect::<Vec<_>>());
        let g = &h * dg * hinv;
        if field == Field::Real {
            real_part(&g)
        } else {
            g
        }
    }

    /// Zero-sum strictly decreasing log-moduli with consecutive gaps in `[min_gap, max_gap]`.
    pub fn generic_logs<R: Rng + ?Sized>(d: usize, min_gap: f64, max_gap: f64, rng: &mut R) -> Vec<f64> {
        let mut logs = vec![0.0];
        for i in 1..d {
            let gap = rng.random_range(min_gap..max_gap);
            logs.push(logs[i - 1] - gap);
        }
        let mean = logs.iter().sum::<f64>() / d as f64;
        logs.iter().map(|l| l - mean).collect()
    }

    /// Random `SL(d,k)` element with condition number bounded by roughly `max_cond`.
    pub fn conditioned<R: Rng + ?Sized>(d: usize, field: Field, max_cond: f64, rng: &mut R) -> CMat {
        let mut u = unitary(d, field, rng);
        let v = unitary(d, field, rng);
        if field == Field::Real && (super::det(&u) * super::det(&v)).re < 0.0 {
            u.column_mut(0).neg_mut();
        }
        let spread = max_cond.ln();
        let mut logs: Vec<f64> = (0..d).map(|_| rng.random_range(-0.5..0.5) * spread).collect();
        let mean = logs.iter().sum::<f64>() / d as f64;
        for l in &mut logs {
            *l -= mean;
        }
        let maxl = logs.iter().cloned().fold(f64::MIN, f64::max);
        let minl = logs.iter().cloned().fold(f64::MAX, f64::min);
        if maxl - minl > spread {
            let scale = spread / (maxl - minl);
            for l in &mut logs {
                *l *= scale;
            }
        }
        let s = diag_real(&logs.iter().map(|l| l.exp()).collect::<Vec<_>>());
        let mut g = u * s * v.adjoint();
        let dt = super::det(&g);
        let fix = dt.powf(1.0 / d as f64);
        g /= fix;
        if field == Field::Real {
            g = real_part(&g);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sorted_schur_orders_by_modulus() {
        let m = from_rows(&[&[0.5, 1.0, 0.0], &[0.0, 3.0, 2.0], &[0.0, 0.0, -2.0]]);
        let s = sorted_schur(&m, |z| z.norm()).unwrap();
        let ev: Vec<f64> = s.eigenvalues().iter().map(|z| z.norm()).collect();
        assert!((ev[0] - 3.0).abs() < 1e-12);
        assert!((ev[1] - 2.0).abs() < 1e-12);
        assert!((ev[2] - 0.5).abs() < 1e-12);
        let rec = &s.q * &s.t * s.q.adjoint();
        assert!((rec - m).norm() < 1e-12);
    }

    #[test]
    fn sorted_schur_random_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random::gaussian(5, 5, Field::Complex, &mut rng);
            let s = sorted_schur(&m, |z| z.norm()).unwrap();
            let rec = &s.q * &s.t * s.q.adjoint();
            assert!((rec - &m).norm() < 1e-10 * m.norm());
            let ev = s.eigenvalues();
            for w in ev.windows(2) {
                assert!(w[0].norm() >= w[1].norm() - 1e-12);
            }
        }
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let a = from_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let b = from_rows(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let i = intersection(&a, &b, 1e-10);
        assert_eq!(i.ncols(), 1);
        let e2 = from_rows(&[&[0.0], &[1.0], &[0.0]]);
        assert!(subspace_distance(&i, &e2) < 1e-12);
    }

    #[test]
    fn realify_recovers_real_plane() {
        // span of (1, i, 0) and (1, -i, 0) is the real xy-plane
        let f = CMat::from_row_slice(3, 2, &[c(1.0), c(1.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), c(0.0), c(0.0)]);
        let r = realify(&f);
        assert!(max_imag(&r) == 0.0);
        let xy = from_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        assert!(subspace_distance(&r, &xy) < 1e-12);
    }

    #[test]
    fn random_special_linear_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for field in [Field::Real, Field::Complex] {
            for d in 2..5 {
                let g = random::special_linear(d, field, &mut rng);
                assert!((det(&g) - c(1.0)).norm() < 1e-10);
                let h = random::conditioned(d, field, 1e3, &mut rng);
                assert!((det(&h) - c(1.0)).norm() < 1e-9);
            }
        }
    }
}

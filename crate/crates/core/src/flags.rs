//! Flags of type `d` in `k^d`, gradings, transversality and nilradicals.
//!
//! A flag is stored as a unitary `d x d` frame whose first `d_1 + ... + d_i`
//! columns span `V_i`. Subspaces are compared by the sine of the largest
//! principal angle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jordan::GroupElement;
use crate::linalg::{self, c, CMat, Field, MatrixRows, C64};
use crate::rootdata::ThetaSet;

/// Smallest singular value of a stacked pair of frames above which the pair
/// counts as transverse.
pub const TRANSVERSE_TOL: f64 = 1e-8;
/// Relative residual allowed when an element is asserted to stabilise a flag.
pub const STABILIZE_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlagError {
    #[error("invalid flag type {0:?}: parts must be positive")]
    BadType(Vec<usize>),
    #[error("flag types {0:?} and {1:?} are not opposite")]
    TypeMismatch(Vec<usize>, Vec<usize>),
    #[error("flags are not transverse (margin {0:e})")]
    NotTransverse(f64),
    #[error("block index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("element does not stabilise the flag (residual {0:e})")]
    NotStabilizing(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("grading is degenerate (condition number {0:e})")]
    DegenerateGrading(f64),
}

/// Dimension vector `(d_1, ..., d_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FlagType(Vec<usize>);

impl TryFrom<Vec<usize>> for FlagType {
    type Error = FlagError;
    fn try_from(v: Vec<usize>) -> Result<Self, FlagError> {
        FlagType::new(v)
    }
}

impl From<FlagType> for Vec<usize> {
    fn from(t: FlagType) -> Self {
        t.0
    }
}

impl FlagType {
    pub fn new(dvec: Vec<usize>) -> Result<Self, FlagError> {
        if dvec.is_empty() || dvec.contains(&0) {
            return Err(FlagError::BadType(dvec));
        }
        Ok(FlagType(dvec))
    }

    pub fn from_theta(d: usize, theta: &ThetaSet) -> Self {
        FlagType(theta.dvec(d))
    }

    pub fn full(d: usize) -> Self {
        FlagType(vec![1; d])
    }

    pub fn dvec(&self) -> &[usize] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of parts `r`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Partial sums `dim V_1, ..., dim V_{r-1}`.
    pub fn boundaries(&self) -> Vec<usize> {
        ThetaSet::from_dvec(&self.0).indices().to_vec()
    }

    pub fn theta(&self) -> ThetaSet {
        ThetaSet::from_dvec(&self.0)
    }

    pub fn reverse(&self) -> Self {
        FlagType(self.0.iter().rev().copied().collect())
    }

    /// Block index of each coordinate.
    pub fn blocks(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(b, &n)| std::iter::repeat_n(b, n)).collect()
    }
}

/// Point of the flag manifold of type `d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FlagJson", into = "FlagJson")]
pub struct Flag {
    ftype: FlagType,
    frame: CMat,
    field: Field,
}

#[derive(Serialize, Deserialize)]
struct FlagJson {
    #[serde(rename = "type")]
    ftype: FlagType,
    field: Field,
    subspaces: Vec<MatrixRows>,
}

impl From<Flag> for FlagJson {
    fn from(f: Flag) -> Self {
        let subspaces = (1..f.ftype.len()).map(|i| MatrixRows::from_matrix(&f.subspace(i), f.field)).collect();
        FlagJson { ftype: f.ftype, field: f.field, subspaces }
    }
}

impl TryFrom<FlagJson> for Flag {
    type Error = String;
    fn try_from(j: FlagJson) -> Result<Self, String> {
        let subs: Vec<CMat> = j.subspaces.iter().map(|m| m.to_matrix()).collect::<Result<_, _>>()?;
        let dims = j.ftype.boundaries();
        if subs.len() != dims.len() {
            return Err(format!("expected {} subspaces, got {}", dims.len(), subs.len()));
        }
        for (s, &k) in subs.iter().zip(&dims) {
            if s.nrows() != j.ftype.d() || s.ncols() != k {
                return Err(format!("subspace frame is {}x{}, expected {}x{k}", s.nrows(), s.ncols(), j.ftype.d()));
            }
        }
        Ok(Flag::from_subspaces(j.ftype, &subs, j.field))
    }
}

fn orthonormalize(frame: &CMat, field: Field) -> CMat {
    let frame = match field {
        Field::Real => linalg::real_part(frame),
        Field::Complex => frame.clone(),
    };
    let q = frame.qr().q();
    match field {
        Field::Real => linalg::real_part(&q),
        Field::Complex => q,
    }
}

impl Flag {
    /// Nested flag from (approximately nested) spanning frames of
    /// `V_1, ..., V_{r-1}`.
    pub fn from_subspaces(ftype: FlagType, subspaces: &[CMat], field: Field) -> Self {
        let d = ftype.d();
        let mut frame = CMat::zeros(d, 0);
        for (s, &k) in subspaces.iter().zip(ftype.boundaries().iter()) {
            frame = linalg::extend_frame(&frame, s, k - frame.ncols());
        }
        let rest = d - frame.ncols();
        frame = linalg::extend_frame(&frame, &CMat::identity(d, d), rest);
        Flag { ftype, frame: orthonormalize(&frame, field), field }
    }

    /// Flag whose `V_i` is spanned by the first columns of an invertible matrix.
    pub fn from_frame(ftype: FlagType, frame: &CMat, field: Field) -> Self {
        Flag { ftype, frame: orthonormalize(frame, field), field }
    }

    /// `V_i = span(e_1, ..., e_{d_1 + ... + d_i})`.
    pub fn standard(ftype: FlagType, field: Field) -> Self {
        let d = ftype.d();
        Flag { ftype, frame: CMat::identity(d, d), field }
    }

    /// `W_i = span(e_d, ..., e_{d - dim W_i + 1})`.
    pub fn reversed_standard(ftype: FlagType, field: Field) -> Self {
        let d = ftype.d();
        let frame = CMat::from_fn(d, d, |i, j| if i + j == d - 1 { c(1.0) } else { c(0.0) });
        Flag { ftype, frame, field }
    }

    pub fn flag_type(&self) -> &FlagType {
        &self.ftype
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn d(&self) -> usize {
        self.frame.nrows()
    }

    /// Adapted unitary frame.
    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    /// Orthonormal frame of `V_i`, `0 <= i <= r` (with `V_0 = 0`, `V_r = k^d`).
    pub fn subspace(&self, i: usize) -> CMat {
        let dim: usize = self.ftype.dvec()[..i.min(self.ftype.len())].iter().sum();
        self.frame.columns(0, dim).into_owned()
    }

    /// Orthonormal frame of `V_i^perp`.
    pub fn complement(&self, i: usize) -> CMat {
        let dim: usize = self.ftype.dvec()[..i.min(self.ftype.len())].iter().sum();
        self.frame.columns(dim, self.d() - dim).into_owned()
    }

    pub fn act(&self, g: &GroupElement) -> Flag {
        Flag { ftype: self.ftype.clone(), frame: orthonormalize(&(g.matrix() * &self.frame), self.field), field: self.field }
    }

    /// Largest principal-angle distance over the subspaces `V_1, ..., V_{r-1}`.
    pub fn distance(&self, other: &Flag) -> f64 {
        if self.ftype != other.ftype {
            return 1.0;
        }
        (1..self.ftype.len())
            .map(|i| linalg::subspace_distance(&self.subspace(i), &other.subspace(i)))
            .fold(0.0, f64::max)
    }
}

/// Direct sum decomposition `E_1 + ... + E_r = k^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GradingJson", into = "GradingJson")]
pub struct Grading {
    subspaces: Vec<CMat>,
    field: Field,
}

#[derive(Serialize, Deserialize)]
struct GradingJson {
    field: Field,
    subspaces: Vec<MatrixRows>,
}

impl From<Grading> for GradingJson {
    fn from(g: Grading) -> Self {
        GradingJson { field: g.field, subspaces: g.subspaces.iter().map(|m| MatrixRows::from_matrix(m, g.field)).collect() }
    }
}

impl TryFrom<GradingJson> for Grading {
    type Error = String;
    fn try_from(j: GradingJson) -> Result<Self, String> {
        let subs: Vec<CMat> = j.subspaces.iter().map(|m| m.to_matrix()).collect::<Result<_, _>>()?;
        Grading::new(subs, j.field).map_err(|e| e.to_string())
    }
}

impl Grading {
    pub fn new(subspaces: Vec<CMat>, field: Field) -> Result<Self, FlagError> {
        let d = subspaces.first().map_or(0, |s| s.nrows());
        let total: usize = subspaces.iter().map(|s| s.ncols()).sum();
        if total != d || subspaces.iter().any(|s| s.nrows() != d) {
            return Err(FlagError::DimensionMismatch(format!("graded pieces of total dimension {total} in k^{d}")));
        }
        let subspaces: Vec<CMat> = subspaces.iter().map(|s| orthonormalize(s, field)).collect();
        let refs: Vec<&CMat> = subspaces.iter().collect();
        let sv = linalg::singular_values(&linalg::hcat(&refs));
        let cond = sv.first().copied().unwrap_or(0.0) / sv.last().copied().unwrap_or(0.0);
        if !(cond < 1e8) {
            return Err(FlagError::DegenerateGrading(cond));
        }
        Ok(Grading { subspaces, field })
    }

    pub fn pieces(&self) -> &[CMat] {
        &self.subspaces
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dvec(&self) -> Vec<usize> {
        self.subspaces.iter().map(|s| s.ncols()).collect()
    }

    pub fn act(&self, g: &GroupElement) -> Grading {
        let subspaces = self.subspaces.iter().map(|s| orthonormalize(&(g.matrix() * s), self.field)).collect();
        Grading { subspaces, field: self.field }
    }

    /// Largest distance between corresponding pieces.
    pub fn distance(&self, other: &Grading) -> f64 {
        if self.dvec() != other.dvec() {
            return 1.0;
        }
        self.subspaces
            .iter()
            .zip(&other.subspaces)
            .map(|(a, b)| linalg::subspace_distance(a, b))
            .fold(0.0, f64::max)
    }
}

fn check_opposite(plus: &Flag, minus: &Flag) -> Result<(), FlagError> {
    if plus.ftype.reverse() != minus.ftype || plus.d() != minus.d() {
        return Err(FlagError::TypeMismatch(plus.ftype.dvec().to_vec(), minus.ftype.dvec().to_vec()));
    }
    Ok(())
}

/// Smallest singular value over the stacked frames `[V_i | W_{r-i}]`.
pub fn transversality_margin(plus: &Flag, minus: &Flag) -> Result<f64, FlagError> {
    check_opposite(plus, minus)?;
    let r = plus.ftype.len();
    let mut margin = f64::INFINITY;
    for i in 1..r {
        let stacked = linalg::hcat(&[&plus.subspace(i), &minus.subspace(r - i)]);
        margin = margin.min(linalg::min_singular_value(&stacked));
    }
    Ok(margin)
}

/// `V_i + W_{r-i} = k^d` for all `i`.
pub fn is_transverse(plus: &Flag, minus: &Flag, tol: f64) -> Result<bool, FlagError> {
    Ok(transversality_margin(plus, minus)? > tol)
}

/// `E_i = V_i ∩ W_{r+1-i}`.
pub fn grading_from_pair(plus: &Flag, minus: &Flag) -> Result<Grading, FlagError> {
    let margin = transversality_margin(plus, minus)?;
    if !(margin > TRANSVERSE_TOL) {
        return Err(FlagError::NotTransverse(margin));
    }
    let r = plus.ftype.len();
    let dvec = plus.ftype.dvec();
    let field = plus.field;
    let mut pieces = Vec::with_capacity(r);
    for i in 1..=r {
        let v = plus.subspace(i);
        // W_{r+1-i}^perp, of dimension dim V_{i-1}
        let wperp = minus.complement(r + 1 - i);
        let m = wperp.adjoint() * &v;
        let kernel = linalg::null_space_dim(&m, dvec[i - 1]);
        let e = &v * kernel;
        pieces.push(match field {
            Field::Real => linalg::realify(&e),
            Field::Complex => e,
        });
    }
    Grading::new(pieces, field)
}

/// Inverse of [`grading_from_pair`].
pub fn pair_from_grading(grading: &Grading) -> (Flag, Flag) {
    let field = grading.field;
    let refs: Vec<&CMat> = grading.subspaces.iter().collect();
    let rev: Vec<&CMat> = grading.subspaces.iter().rev().collect();
    let ftype = FlagType(grading.dvec());
    let plus = Flag::from_frame(ftype.clone(), &linalg::hcat(&refs), field);
    let minus = Flag::from_frame(ftype.reverse(), &linalg::hcat(&rev), field);
    (plus, minus)
}

/// `V_j` as a point of the Grassmannian.
pub fn project_flag(flag: &Flag, j: usize) -> Result<CMat, FlagError> {
    let max = flag.ftype.len() - 1;
    if j == 0 || j > max {
        return Err(FlagError::IndexOutOfRange { index: j, max });
    }
    Ok(flag.subspace(j))
}

/// Positions `(k, l)` with `block(k) < block(l)`.
pub(crate) fn nilradical_indices(ftype: &FlagType) -> Vec<(usize, usize)> {
    let blocks = ftype.blocks();
    let d = blocks.len();
    let mut out = Vec::new();
    for k in 0..d {
        for l in 0..d {
            if blocks[k] < blocks[l] {
                out.push((k, l));
            }
        }
    }
    out
}

/// Real basis of the nilradical `n` of the stabiliser of `F`: matrices mapping
/// each `V_i` into `V_{i-1}`.
pub fn nilradical_basis(flag: &Flag) -> Vec<CMat> {
    let p = &flag.frame;
    let d = flag.d();
    let mut out = Vec::new();
    let scalars: &[C64] = match flag.field {
        Field::Real => &[C64::new(1.0, 0.0)],
        Field::Complex => &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
    };
    for (k, l) in nilradical_indices(&flag.ftype) {
        for &z in scalars {
            let mut e = CMat::zeros(d, d);
            e[(k, l)] = z;
            out.push(p * e * p.adjoint());
        }
    }
    out
}

/// `k`-linear matrix of `X -> g X g^{-1}` on `n` in the adapted basis `E_kl`.
pub fn adjoint_on_nilradical(g: &GroupElement, flag: &Flag) -> Result<CMat, FlagError> {
    if g.dim() != flag.d() {
        return Err(FlagError::DimensionMismatch(format!("element of size {} on flag in k^{}", g.dim(), flag.d())));
    }
    let p = &flag.frame;
    let h = p.adjoint() * g.matrix() * p;
    let hinv = p.adjoint() * g.inverse_matrix() * p;
    let idx = nilradical_indices(&flag.ftype);
    let blocks = flag.ftype.blocks();
    let d = flag.d();
    let n = idx.len();
    let mut a = CMat::zeros(n, n);
    let mut residual: f64 = 0.0;
    for (col, &(k, l)) in idx.iter().enumerate() {
        let hk = h.column(k);
        let hl = hinv.row(l);
        let scale = hk.norm() * hl.norm();
        for (row, &(i, j)) in idx.iter().enumerate() {
            a[(row, col)] = hk[i] * hl[j];
        }
        for i in 0..d {
            for j in 0..d {
                if blocks[i] >= blocks[j] {
                    residual = residual.max((hk[i] * hl[j]).norm() / scale);
                }
            }
        }
    }
    if residual > STABILIZE_TOL {
        return Err(FlagError::NotStabilizing(residual));
    }
    Ok(a)
}

/// `|det(Ad(g)|_n)|` as a real linear map.
pub fn adjoint_det_on_nilradical(g: &GroupElement, flag: &Flag) -> Result<f64, FlagError> {
    let a = adjoint_on_nilradical(g, flag)?;
    Ok(linalg::real_abs_det(&a, flag.field))
}

/// Spectral radius of `Ad(g)|_n`.
pub fn adjoint_spectral_radius_on_nilradical(g: &GroupElement, flag: &Flag) -> Result<f64, FlagError> {
    let a = adjoint_on_nilradical(g, flag)?;
    let ev = linalg::eigenvalues(&a).unwrap_or_default();
    Ok(ev.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

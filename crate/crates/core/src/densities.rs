//! Densities on subspaces, multidensities, the flow space over transverse
//! flag pairs, cocycles of sections, multiflows and the Lagrangian pairing.
//!
//! Model: for every `alpha = alpha_b` in `Theta` the attracting side carries a
//! density on `V_b` and the repelling side a density on the complementary
//! `W_{d-b}`, both of weight `t_alpha = d s_alpha` with respect to `|det_R|`.
//! The pairing divides by the determinant volume of `k^d`. With this weight the
//! period at a fixed pair of `gamma` is `sum_alpha s_alpha m_alpha w_alpha(lambda(gamma))`.
//!
//! Density values are stored as logarithms so long flows and large group
//! elements cannot overflow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flags::{self, Flag, FlagError, FlagType};
use crate::jordan::GroupElement;
use crate::linalg::{self, c, CMat, Field, MatrixRows};
use crate::rootdata::{ThetaSet, WeightVector};

/// Relative residual for "frame lies in the subspace".
pub const SUBSPACE_TOL: f64 = 1e-8;
/// Residual of `g x = x` accepted at a fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("frame is not contained in the density's subspace (residual {0:e})")]
    NotInSubspace(f64),
    #[error("subspaces are not transverse (margin {0:e})")]
    NotTransverse(f64),
    #[error("subspace is not Lagrangian (residual {0:e})")]
    NotLagrangian(f64),
    #[error("point leaves the transverse locus (margin {0:e})")]
    NotInDomain(f64),
    #[error("point is not fixed by the element (residual {0:e})")]
    NotFixed(f64),
    #[error("weights differ across the pairing: {0} vs {1}")]
    WeightMismatch(f64, f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("density value must be positive and finite")]
    BadValue,
    #[error(transparent)]
    Flag(#[from] FlagError),
}

/// `|det|^weight`-density on a subspace, stored by its value on an
/// orthonormal frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityJson", into = "DensityJson")]
pub struct Density {
    frame: CMat,
    weight: f64,
    log_value: f64,
    field: Field,
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    field: Field,
    frame: MatrixRows,
    weight: f64,
    log_value: f64,
}

impl From<Density> for DensityJson {
    fn from(d: Density) -> Self {
        DensityJson { field: d.field, frame: MatrixRows::from_matrix(&d.frame, d.field), weight: d.weight, log_value: d.log_value }
    }
}

impl TryFrom<DensityJson> for Density {
    type Error = String;
    fn try_from(j: DensityJson) -> Result<Self, String> {
        let frame = j.frame.to_matrix()?;
        Density::from_log(&frame, j.weight, j.log_value, j.field).map_err(|e| e.to_string())
    }
}

/// Thin QR with the log of `|det_R R|`.
fn orthonormal_with_volume(frame: &CMat, field: Field) -> (CMat, f64) {
    let k = frame.ncols();
    if k == 0 {
        return (frame.clone(), 0.0);
    }
    let qr = frame.clone().qr();
    let q = qr.q().columns(0, k).into_owned();
    let r = qr.r();
    let logdet: f64 = (0..k).map(|i| r[(i, i)].norm().ln()).sum();
    let q = match field {
        Field::Real => linalg::real_part(&q),
        Field::Complex => q,
    };
    (q, logdet * field.real_dim() as f64)
}

impl Density {
    pub fn new(frame: &CMat, weight: f64, value: f64, field: Field) -> Result<Self, DensityError> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(DensityError::BadValue);
        }
        Density::from_log(frame, weight, value.ln(), field)
    }

    /// Density taking the value `exp(log_value)` on `frame`.
    pub fn from_log(frame: &CMat, weight: f64, log_value: f64, field: Field) -> Result<Self, DensityError> {
        if !log_value.is_finite() || !weight.is_finite() {
            return Err(DensityError::BadValue);
        }
        let (q, logvol) = orthonormal_with_volume(frame, field);
        if !logvol.is_finite() {
            return Err(DensityError::DimensionMismatch("frame is rank deficient".into()));
        }
        Ok(Density { frame: q, weight, log_value: log_value - weight * logvol, field })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `log nu(frame)`.
    pub fn log_eval(&self, frame: &CMat) -> Result<f64, DensityError> {
        if frame.nrows() != self.frame.nrows() || frame.ncols() != self.frame.ncols() {
            return Err(DensityError::DimensionMismatch(format!(
                "frame {}x{} for a density on a {}-dimensional subspace",
                frame.nrows(),
                frame.ncols(),
                self.frame.ncols()
            )));
        }
        let coeff = self.frame.adjoint() * frame;
        let resid = (frame - &self.frame * &coeff).norm();
        if resid > SUBSPACE_TOL * frame.norm().max(f64::MIN_POSITIVE) {
            return Err(DensityError::NotInSubspace(resid / frame.norm()));
        }
        let logdet = linalg::det(&coeff).norm().ln() * self.field.real_dim() as f64;
        Ok(self.log_value + self.weight * logdet)
    }

    pub fn eval(&self, frame: &CMat) -> Result<f64, DensityError> {
        Ok(self.log_eval(frame)?.exp())
    }

    /// Multiply by `exp(log_t)`.
    pub fn shifted(&self, log_t: f64) -> Density {
        Density { log_value: self.log_value + log_t, ..self.clone() }
    }

    /// `nu^p`, a density of weight `p * weight`.
    pub fn powf(&self, p: f64) -> Density {
        Density { weight: self.weight * p, log_value: self.log_value * p, ..self.clone() }
    }

    /// Push-forward `(g nu)(g e) = nu(e)`.
    pub fn act(&self, g: &GroupElement) -> Density {
        let moved = g.matrix() * &self.frame;
        let (q, logvol) = orthonormal_with_volume(&moved, self.field);
        Density { frame: q, weight: self.weight, log_value: self.log_value - self.weight * logvol, field: self.field }
    }

    /// `log(self / other)` for two densities of equal weight on the same subspace.
    pub fn log_ratio(&self, other: &Density) -> Result<f64, DensityError> {
        if (self.weight - other.weight).abs() > 1e-12 * (1.0 + self.weight.abs()) {
            return Err(DensityError::WeightMismatch(self.weight, other.weight));
        }
        Ok(self.log_value - other.log_eval(&self.frame)?)
    }
}

/// Product `prod_alpha nu_alpha` of densities indexed by simple roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multidensity {
    pub components: Vec<(usize, Density)>,
}

impl Multidensity {
    /// Multiply by `exp(log_t)` (absorbed into the first factor).
    pub fn shifted(&self, log_t: f64) -> Multidensity {
        let mut out = self.clone();
        if let Some(first) = out.components.first_mut() {
            first.1 = first.1.shifted(log_t);
        }
        out
    }

    pub fn act(&self, g: &GroupElement) -> Multidensity {
        Multidensity { components: self.components.iter().map(|(a, d)| (*a, d.act(g))).collect() }
    }

    /// `log(self / other)` for multidensities on the same graded family.
    pub fn log_ratio(&self, other: &Multidensity) -> Result<f64, DensityError> {
        if self.components.len() != other.components.len() {
            return Err(DensityError::DimensionMismatch("different numbers of factors".into()));
        }
        let mut total = 0.0;
        for ((a, x), (b, y)) in self.components.iter().zip(&other.components) {
            if a != b {
                return Err(DensityError::DimensionMismatch(format!("factor {a} vs {b}")));
            }
            total += x.log_ratio(y)?;
        }
        Ok(total)
    }
}

/// `log |det_R [P | Q]|`.
fn log_volume(p: &CMat, q: &CMat, field: Field) -> Result<f64, DensityError> {
    let m = linalg::hcat(&[p, q]);
    if m.nrows() != m.ncols() {
        return Err(DensityError::DimensionMismatch(format!("{} + {} columns in dimension {}", p.ncols(), q.ncols(), m.nrows())));
    }
    let margin = linalg::min_singular_value(&m);
    if !(margin > flags::TRANSVERSE_TOL * m.norm()) {
        return Err(DensityError::NotTransverse(margin));
    }
    Ok(linalg::det(&m).norm().ln() * field.real_dim() as f64)
}

/// `log(mu+ . mu-)`.
pub fn log_pair(plus: &Multidensity, minus: &Multidensity) -> Result<f64, DensityError> {
    if plus.components.len() != minus.components.len() {
        return Err(DensityError::DimensionMismatch("different numbers of factors".into()));
    }
    let mut total = 0.0;
    for ((a, p), (b, m)) in plus.components.iter().zip(&minus.components) {
        if a != b {
            return Err(DensityError::DimensionMismatch(format!("factor {a} vs {b}")));
        }
        if (p.weight - m.weight).abs() > 1e-12 * (1.0 + p.weight.abs()) {
            return Err(DensityError::WeightMismatch(p.weight, m.weight));
        }
        total += p.log_value + m.log_value - p.weight * log_volume(&p.frame, &m.frame, p.field)?;
    }
    Ok(total)
}

/// `log(mu+ . mu-)` evaluated on caller-supplied frames `(E+_alpha, E-_alpha)`:
/// `sum_alpha log mu+(E+) + log mu-(E-) - t_alpha log |det_R [E+ E-]|`.
pub fn log_pair_on_frames(plus: &Multidensity, minus: &Multidensity, frames: &[(CMat, CMat)]) -> Result<f64, DensityError> {
    if frames.len() != plus.components.len() || frames.len() != minus.components.len() {
        return Err(DensityError::DimensionMismatch("one frame pair per factor".into()));
    }
    let mut total = 0.0;
    for (((_, p), (_, m)), (ep, em)) in plus.components.iter().zip(&minus.components).zip(frames) {
        total += p.log_eval(ep)? + m.log_eval(em)? - p.weight * log_volume(ep, em, p.field)?;
    }
    Ok(total)
}

/// Pairing `mu+ . mu-`, independent of the frames used to evaluate it.
pub fn pair(plus: &Multidensity, minus: &Multidensity) -> Result<f64, DensityError> {
    Ok(log_pair(plus, minus)?.exp())
}

/// Transverse pair of flags of opposite types `(F+, F-)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasePoint {
    pub plus: Flag,
    pub minus: Flag,
}

impl BasePoint {
    pub fn new(plus: Flag, minus: Flag) -> Result<Self, DensityError> {
        let margin = flags::transversality_margin(&plus, &minus)?;
        if !(margin > flags::TRANSVERSE_TOL) {
            return Err(DensityError::NotTransverse(margin));
        }
        Ok(BasePoint { plus, minus })
    }

    /// Standard pair `(span(e_1, ...), span(e_d, ...))` of type `Theta`.
    pub fn standard(d: usize, theta: &ThetaSet, field: Field) -> Self {
        let t = FlagType::from_theta(d, theta);
        BasePoint { plus: Flag::standard(t.clone(), field), minus: Flag::reversed_standard(t.reverse(), field) }
    }

    pub fn d(&self) -> usize {
        self.plus.d()
    }

    pub fn field(&self) -> Field {
        self.plus.field()
    }

    pub fn theta(&self) -> ThetaSet {
        self.plus.flag_type().theta()
    }

    /// Frames of `(V_alpha, W_alpha)` for `alpha = alpha_b`.
    pub fn factor(&self, b: usize) -> Option<(CMat, CMat)> {
        let bounds = self.plus.flag_type().boundaries();
        let i = bounds.iter().position(|&x| x == b)?;
        let r = self.plus.flag_type().len();
        Some((self.plus.subspace(i + 1), self.minus.subspace(r - 1 - i)))
    }

    pub fn act(&self, g: &GroupElement) -> BasePoint {
        BasePoint { plus: self.plus.act(g), minus: self.minus.act(g) }
    }

    /// Fixed-point residual of both flags.
    pub fn fixed_residual(&self, g: &GroupElement) -> f64 {
        let mut worst: f64 = 0.0;
        for flag in [&self.plus, &self.minus] {
            for i in 1..flag.flag_type().len() {
                worst = worst.max(invariance_residual(g, &flag.subspace(i), &flag.complement(i)));
            }
        }
        worst
    }
}

/// Residual of `g V = V`, the best of four equivalent measurements: `V` under
/// `g` and `g^{-1}`, and `V^perp` under `g^{-*}` and `g^*`.
fn invariance_residual(g: &GroupElement, v: &CMat, vperp: &CMat) -> f64 {
    let moved = |m: &CMat, frame: &CMat| linalg::orthonormal_basis_dim(&(m * frame), frame.ncols());
    let gi_adj = g.inverse_matrix().adjoint();
    let g_adj = g.matrix().adjoint();
    [
        linalg::subspace_distance(&moved(g.matrix(), v), v),
        linalg::subspace_distance(&moved(g.inverse_matrix(), v), v),
        linalg::subspace_distance(&moved(&gi_adj, vperp), vperp),
        linalg::subspace_distance(&moved(&g_adj, vperp), vperp),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

/// Point `(mu+, mu-)` of the flow space over a transverse pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowPoint {
    pub base: BasePoint,
    pub plus: Multidensity,
    pub minus: Multidensity,
}

impl FlowPoint {
    /// `phi^t (mu+, mu-) = (e^{-t} mu+, e^{t} mu-)`.
    pub fn flow(&self, t: f64) -> FlowPoint {
        FlowPoint { base: self.base.clone(), plus: self.plus.shifted(-t), minus: self.minus.shifted(t) }
    }

    pub fn act(&self, g: &GroupElement) -> FlowPoint {
        FlowPoint { base: self.base.act(g), plus: self.plus.act(g), minus: self.minus.act(g) }
    }

    pub fn log_pairing(&self) -> Result<f64, DensityError> {
        log_pair(&self.plus, &self.minus)
    }

    /// The `t` with `self = phi^t(other)`, for two points over the same base.
    pub fn flow_offset(&self, other: &FlowPoint) -> Result<f64, DensityError> {
        Ok(-self.plus.log_ratio(&other.plus)?)
    }
}

/// `t_alpha = d s_alpha`, the weight of the `alpha` factor.
fn factor_weight(d: usize, s: f64) -> f64 {
    d as f64 * s
}

/// Section of the flow space over the transverse locus.
pub trait Section {
    fn at(&self, x: &BasePoint) -> Result<FlowPoint, DensityError>;
}

/// Per factor, both sides take the value `|vol(Q+, Q-)|^{t/2}` on orthonormal
/// frames, so the pairing is 1 and the section commutes with `K`.
#[derive(Clone, Debug)]
pub struct CanonicalSection {
    pub s: WeightVector,
}

impl Section for CanonicalSection {
    fn at(&self, x: &BasePoint) -> Result<FlowPoint, DensityError> {
        canonical_section(x, &self.s)
    }
}

pub fn canonical_section(x: &BasePoint, s: &WeightVector) -> Result<FlowPoint, DensityError> {
    let d = x.d();
    let field = x.field();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (b, sb) in s.iter() {
        let (vp, vm) = x.factor(b).ok_or_else(|| DensityError::DimensionMismatch(format!("root {b} is not a boundary of the flag type")))?;
        let t = factor_weight(d, sb);
        let half = 0.5 * t * log_volume(&vp, &vm, field)?;
        plus.push((b, Density::from_log(&vp, t, half, field)?));
        minus.push((b, Density::from_log(&vm, t, half, field)?));
    }
    Ok(FlowPoint { base: x.clone(), plus: Multidensity { components: plus }, minus: Multidensity { components: minus } })
}

/// `sigma'(x) = phi^{tau(x)} sigma(x)` for a smooth function `tau`.
pub struct TwistedSection<S: Section> {
    pub base: S,
    pub tau: Box<dyn Fn(&BasePoint) -> f64 + Send + Sync>,
}

impl<S: Section> Section for TwistedSection<S> {
    fn at(&self, x: &BasePoint) -> Result<FlowPoint, DensityError> {
        Ok(self.base.at(x)?.flow((self.tau)(x)))
    }
}

/// Section whose repelling side is the unit density on orthonormal frames of
/// each `W_alpha`; the attracting side is fixed by the pairing.
#[derive(Clone, Debug)]
pub struct RepellingGramSection {
    pub s: WeightVector,
}

impl Section for RepellingGramSection {
    fn at(&self, x: &BasePoint) -> Result<FlowPoint, DensityError> {
        let d = x.d();
        let field = x.field();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (b, sb) in self.s.iter() {
            let (vp, vm) = x.factor(b).ok_or_else(|| DensityError::DimensionMismatch(format!("root {b} is not a boundary of the flag type")))?;
            let t = factor_weight(d, sb);
            let vol = log_volume(&vp, &vm, field)?;
            plus.push((b, Density::from_log(&vp, t, t * vol, field)?));
            minus.push((b, Density::from_log(&vm, t, 0.0, field)?));
        }
        Ok(FlowPoint { base: x.clone(), plus: Multidensity { components: plus }, minus: Multidensity { components: minus } })
    }
}

/// `C_sigma(x, g)`: the real number with `g sigma(x) = phi^C(sigma(g x))`.
pub fn cocycle<S: Section + ?Sized>(sigma: &S, x: &BasePoint, g: &GroupElement) -> Result<f64, DensityError> {
    let gx = x.act(g);
    let margin = flags::transversality_margin(&gx.plus, &gx.minus)?;
    if !(margin > flags::TRANSVERSE_TOL) {
        return Err(DensityError::NotInDomain(margin));
    }
    let moved = sigma.at(x)?.act(g);
    let target = sigma.at(&gx)?;
    moved.flow_offset(&target)
}

/// Repelling-side version of [`cocycle`]: compares the `mu-` components.
pub fn cocycle_minus<S: Section + ?Sized>(sigma: &S, x: &BasePoint, g: &GroupElement) -> Result<f64, DensityError> {
    let gx = x.act(g);
    let margin = flags::transversality_margin(&gx.plus, &gx.minus)?;
    if !(margin > flags::TRANSVERSE_TOL) {
        return Err(DensityError::NotInDomain(margin));
    }
    let moved = sigma.at(x)?.act(g);
    let target = sigma.at(&gx)?;
    moved.minus.log_ratio(&target.minus)
}

/// Cocycle of [`RepellingGramSection`] read off the repelling side:
/// `-sum_alpha t_alpha log vol_R(g|W_alpha)`. It only involves `W_alpha`, so it
/// stays defined when `g x` leaves the transverse locus.
pub fn repelling_gram_cocycle(x: &BasePoint, s: &WeightVector, g: &GroupElement) -> Result<f64, DensityError> {
    let d = x.d();
    let mut total = 0.0;
    for (b, sb) in s.iter() {
        let (_, w) = x.factor(b).ok_or_else(|| DensityError::DimensionMismatch(format!("root {b} is not a boundary of the flag type")))?;
        let (_, logvol) = orthonormal_with_volume(&(g.matrix() * &w), x.field());
        total -= factor_weight(d, sb) * logvol;
    }
    Ok(total)
}

/// Cocycle at a point fixed by `g`, where `g x = x` is used exactly instead of
/// being recomputed (pushing the repelling flag forward is unstable for long
/// words).
pub fn cocycle_at_fixed_point<S: Section + ?Sized>(sigma: &S, x: &BasePoint, g: &GroupElement) -> Result<f64, DensityError> {
    let resid = x.fixed_residual(g);
    if resid > FIXED_POINT_TOL {
        return Err(DensityError::NotFixed(resid));
    }
    let p = sigma.at(x)?;
    let mut total = 0.0;
    for (_, mu) in &p.plus.components {
        // (g mu)(g Q) = mu(Q), compared with mu(g Q) on the same subspace
        let moved_frame = g.matrix() * mu.frame();
        total += mu.log_value - mu.log_eval(&moved_frame)?;
    }
    Ok(-total)
}

/// Point of the multiflow space: one rank-one flow point (weight `d`) per root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiflowPoint {
    pub base: BasePoint,
    pub factors: Vec<(usize, Density, Density)>,
}

impl MultiflowPoint {
    /// Unit-weight canonical point over `x`, shifted factorwise by `offsets`.
    pub fn canonical(x: &BasePoint, offsets: &[(usize, f64)]) -> Result<Self, DensityError> {
        let theta = x.theta();
        let p = canonical_section(x, &WeightVector::constant(&theta, 1.0))?;
        let factors = p
            .plus
            .components
            .iter()
            .zip(&p.minus.components)
            .map(|((a, dp), (_, dm))| {
                let o = offsets.iter().find(|(b, _)| b == a).map_or(0.0, |x| x.1);
                (*a, dp.shifted(-o), dm.shifted(o))
            })
            .collect();
        Ok(MultiflowPoint { base: x.clone(), factors })
    }

    /// Action of `t in R^Theta`: `phi^{t_alpha}` on each factor.
    pub fn act_torus(&self, t: &WeightVector) -> MultiflowPoint {
        let factors = self.factors.iter().map(|(a, p, m)| (*a, p.shifted(-t.get(*a)), m.shifted(t.get(*a)))).collect();
        MultiflowPoint { base: self.base.clone(), factors }
    }

    pub fn factor_log_pairings(&self) -> Result<Vec<f64>, DensityError> {
        self.factors
            .iter()
            .map(|(a, p, m)| log_pair(&Multidensity { components: vec![(*a, p.clone())] }, &Multidensity { components: vec![(*a, m.clone())] }))
            .collect()
    }
}

/// `Pi_s(nu)`: raise the `alpha` factor to the power `s_alpha`.
pub fn multiflow_project(nu: &MultiflowPoint, s: &WeightVector) -> FlowPoint {
    let plus = nu.factors.iter().map(|(a, p, _)| (*a, p.powf(s.get(*a)))).collect();
    let minus = nu.factors.iter().map(|(a, _, m)| (*a, m.powf(s.get(*a)))).collect();
    FlowPoint { base: nu.base.clone(), plus: Multidensity { components: plus }, minus: Multidensity { components: minus } }
}

/// Standard symplectic form `[[0, I], [-I, 0]]` on `R^{2n}`.
pub fn standard_symplectic(n: usize) -> CMat {
    CMat::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            c(1.0)
        } else if i == j + n {
            c(-1.0)
        } else {
            c(0.0)
        }
    })
}

/// `mu1(e1) mu2(e2) / |vol_omega(e1, e2)|` for densities of weight 1 on
/// transverse Lagrangians. On a Lagrangian splitting `vol_omega = Pf(E^T omega E)`
/// reduces to `det(E1^T omega E2)` up to sign.
pub fn lagrangian_pair(mu1: &Density, mu2: &Density, omega: &CMat) -> Result<f64, DensityError> {
    let (e1, e2) = (mu1.frame(), mu2.frame());
    let n2 = omega.nrows();
    if e1.nrows() != n2 || e2.nrows() != n2 || e1.ncols() + e2.ncols() != n2 || e1.ncols() != e2.ncols() {
        return Err(DensityError::DimensionMismatch("Lagrangian frames must be n-dimensional in a 2n-dimensional space".into()));
    }
    let scale = omega.norm();
    for e in [e1, e2] {
        let r = (e.transpose() * omega * e).norm();
        if r > 1e-9 * scale {
            return Err(DensityError::NotLagrangian(r / scale));
        }
    }
    let b = e1.transpose() * omega * e2;
    let vol = linalg::det(&b).norm();
    if !(vol > 1e-12) {
        return Err(DensityError::NotTransverse(vol));
    }
    let w1 = mu1.weight();
    let w2 = mu2.weight();
    if (w1 - 1.0).abs() > 1e-12 || (w2 - 1.0).abs() > 1e-12 {
        return Err(DensityError::WeightMismatch(w1, w2));
    }
    Ok((mu1.log_value + mu2.log_value - vol.ln()).exp())
}

pub mod random {
    //! Random data for property checks.
    use super::*;
    use crate::linalg::random as lr;
    use rand::Rng;

    /// Random transverse pair of type `Theta`: `h` applied to the standard pair.
    pub fn base_point<R: Rng + ?Sized>(d: usize, theta: &ThetaSet, field: Field, max_cond: f64, rng: &mut R) -> BasePoint {
        let h = GroupElement::new(lr::conditioned(d, field, max_cond, rng), field).expect("conditioned element is in SL");
        BasePoint::standard(d, theta, field).act(&h)
    }

    /// Smooth `tau(x) = sum_alpha Re tr(A_alpha P_{V_alpha}) + Re tr(B_alpha P_{W_alpha})`.
    pub fn smooth_tau<R: Rng + ?Sized>(d: usize, theta: &ThetaSet, field: Field, rng: &mut R) -> Box<dyn Fn(&BasePoint) -> f64 + Send + Sync> {
        let mats: Vec<(usize, CMat, CMat)> =
            theta.indices().iter().map(|&b| (b, lr::gaussian(d, d, field, rng), lr::gaussian(d, d, field, rng))).collect();
        Box::new(move |x: &BasePoint| {
            let mut total = 0.0;
            for (b, a, bm) in &mats {
                if let Some((vp, vm)) = x.factor(*b) {
                    total += (a * &vp * vp.adjoint()).trace().re + (bm * &vm * vm.adjoint()).trace().re;
                }
            }
            total
        })
    }

    /// Random symplectic matrix `[[A, 0], [0, A^{-T}]] [[I, B], [0, I]]` with `B` symmetric.
    pub fn symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
        let a = lr::special_linear(n, Field::Real, rng);
        let ait = a.clone().try_inverse().expect("special linear").transpose();
        let g = lr::gaussian(n, n, Field::Real, rng);
        let b = (&g + g.transpose()) * c(0.5);
        let mut p = CMat::zeros(2 * n, 2 * n);
        p.view_mut((0, 0), (n, n)).copy_from(&a);
        p.view_mut((n, n), (n, n)).copy_from(&ait);
        let mut u = CMat::identity(2 * n, 2 * n);
        u.view_mut((0, n), (n, n)).copy_from(&b);
        p * u
    }
}

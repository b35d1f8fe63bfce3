//! Restricted root data of `sl(d, R)` and `sl(d, C)` on the diagonal Cartan
//! subspace.
//!
//! Roots, weights and `rho_Theta` are evaluated on raw `d`-vectors with zero
//! sum. The Killing form is `B(X, Y) = c * Re tr(XY)` with `c = 2d` over `R`
//! and `c = 4d` for `sl(d, C)` regarded as a real Lie algebra.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{CMat, Field};

const ZERO_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootDataError {
    #[error("root index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("vector of length {got} does not match d = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entries sum to {0:e}, expected 0")]
    NotZeroSum(f64),
    #[error("matrix has trace {0:e}, expected 0")]
    NotTraceless(f64),
    #[error("2 rho / w ratio {0} is not a positive integer")]
    NonIntegerRatio(f64),
    #[error("weight given for root {0} outside Theta")]
    WeightOutsideTheta(usize),
}

/// Root system of `sl(d, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub d: usize,
    pub field: Field,
}

/// Element of the diagonal Cartan subspace, stored as a zero-sum `d`-vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CartanVector(Vec<f64>);

impl CartanVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, RootDataError> {
        let scale = entries.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let sum: f64 = entries.iter().sum();
        if sum.abs() > ZERO_SUM_TOL * scale {
            return Err(RootDataError::NotZeroSum(sum));
        }
        Ok(CartanVector(entries))
    }

    /// Subtract the mean; used for numerically computed log-spectra.
    pub fn recentered(mut entries: Vec<f64>) -> Self {
        let mean = entries.iter().sum::<f64>() / entries.len().max(1) as f64;
        for x in &mut entries {
            *x -= mean;
        }
        CartanVector(entries)
    }

    pub fn zero(d: usize) -> Self {
        CartanVector(vec![0.0; d])
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `-w_0 X`: reverse the entries and negate. Realises the opposition
    /// involution on `a`.
    pub fn opposite(&self) -> Self {
        CartanVector(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, t: f64) -> Self {
        CartanVector(self.0.iter().map(|x| x * t).collect())
    }
}

/// Subset of the simple roots `{1, ..., d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaSet(Vec<usize>);

impl ThetaSet {
    pub fn new(d: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self, RootDataError> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        for &j in &v {
            if j == 0 || j >= d {
                return Err(RootDataError::IndexOutOfRange { index: j, max: d - 1 });
            }
        }
        Ok(ThetaSet(v))
    }

    pub fn full(d: usize) -> Self {
        ThetaSet((1..d).collect())
    }

    /// `Theta_d` for a dimension vector: the partial sums `d_1, d_1+d_2, ...`.
    pub fn from_dvec(dvec: &[usize]) -> Self {
        let mut acc = 0;
        let mut out = Vec::new();
        for &di in &dvec[..dvec.len().saturating_sub(1)] {
            acc += di;
            out.push(acc);
        }
        ThetaSet(out)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    /// `iota_o(Theta)`: `j -> d - j`.
    pub fn opposite(&self, d: usize) -> Self {
        let mut v: Vec<usize> = self.0.iter().map(|&j| d - j).collect();
        v.sort_unstable();
        ThetaSet(v)
    }

    /// Dimension vector of the flag type attached to `Theta`.
    pub fn dvec(&self, d: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        let mut prev = 0;
        for &j in &self.0 {
            out.push(j - prev);
            prev = j;
        }
        out.push(d - prev);
        out
    }

    /// Block index of every coordinate `0..d` in the partition cut at `Theta`.
    pub fn blocks(&self, d: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(d);
        let mut b = 0;
        for i in 0..d {
            if i > 0 && self.contains(i) {
                b += 1;
            }
            out.push(b);
        }
        out
    }
}

impl std::fmt::Display for ThetaSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Weight vector `s: Theta -> R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(BTreeMap<usize, f64>);

impl WeightVector {
    pub fn new(theta: &ThetaSet, values: &[f64]) -> Result<Self, RootDataError> {
        if values.len() != theta.len() {
            return Err(RootDataError::DimensionMismatch { expected: theta.len(), got: values.len() });
        }
        Ok(WeightVector(theta.indices().iter().copied().zip(values.iter().copied()).collect()))
    }

    pub fn constant(theta: &ThetaSet, value: f64) -> Self {
        WeightVector(theta.indices().iter().map(|&j| (j, value)).collect())
    }

    pub fn from_map(theta: &ThetaSet, map: BTreeMap<usize, f64>) -> Result<Self, RootDataError> {
        if let Some(&j) = map.keys().find(|j| !theta.contains(**j)) {
            return Err(RootDataError::WeightOutsideTheta(j));
        }
        let full = theta.indices().iter().map(|&j| (j, map.get(&j).copied().unwrap_or(0.0))).collect();
        Ok(WeightVector(full))
    }

    pub fn get(&self, j: usize) -> f64 {
        self.0.get(&j).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().map(|(&j, &s)| (j, s))
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.values().copied().collect()
    }

    pub fn theta(&self) -> ThetaSet {
        ThetaSet(self.0.keys().copied().collect())
    }

    pub fn scaled(&self, t: f64) -> Self {
        WeightVector(self.0.iter().map(|(&j, &s)| (j, s * t)).collect())
    }

    /// `iota(s)`, a weight on `iota_o(Theta)`.
    pub fn opposite(&self, d: usize) -> Self {
        WeightVector(self.0.iter().map(|(&j, &s)| (d - j, s)).collect())
    }
}

impl RootSystem {
    pub fn new(d: usize, field: Field) -> Result<Self, RootDataError> {
        if d < 2 {
            return Err(RootDataError::BadDimension(d));
        }
        Ok(RootSystem { d, field })
    }

    /// Coefficient `c` in `B(X, Y) = c Re tr(XY)`.
    pub fn killing_scale(&self) -> f64 {
        (2 * self.d * self.field.real_dim()) as f64
    }

    /// `dim_R g_beta` for every restricted root.
    pub fn root_multiplicity(&self) -> usize {
        self.field.real_dim()
    }

    fn check_index(&self, j: usize) -> Result<(), RootDataError> {
        if j == 0 || j >= self.d {
            return Err(RootDataError::IndexOutOfRange { index: j, max: self.d - 1 });
        }
        Ok(())
    }

    fn check_vector(&self, x: &CartanVector) -> Result<(), RootDataError> {
        if x.dim() != self.d {
            return Err(RootDataError::DimensionMismatch { expected: self.d, got: x.dim() });
        }
        Ok(())
    }

    /// `alpha_j(X) = x_j - x_{j+1}`.
    pub fn simple_root(&self, j: usize, x: &CartanVector) -> Result<f64, RootDataError> {
        self.check_index(j)?;
        self.check_vector(x)?;
        Ok(x.0[j - 1] - x.0[j])
    }

    /// `w_{alpha_j}(X) = x_1 + ... + x_j`.
    pub fn fundamental_weight(&self, j: usize, x: &CartanVector) -> Result<f64, RootDataError> {
        self.check_index(j)?;
        self.check_vector(x)?;
        Ok(x.0[..j].iter().sum())
    }

    /// `rho_Theta(X)`: half the sum, with multiplicity, of the positive roots
    /// `e_i - e_j` whose endpoints lie in different `Theta`-blocks.
    pub fn rho_theta(&self, theta: &ThetaSet, x: &CartanVector) -> Result<f64, RootDataError> {
        self.check_vector(x)?;
        let blocks = theta.blocks(self.d);
        let mult = self.root_multiplicity() as f64;
        let mut sum = 0.0;
        for i in 0..self.d {
            for j in (i + 1)..self.d {
                if blocks[i] != blocks[j] {
                    sum += mult * (x.0[i] - x.0[j]);
                }
            }
        }
        Ok(0.5 * sum)
    }

    /// The integer `m_alpha` with `2 rho_{alpha} = m_alpha w_alpha`, computed
    /// from the root enumeration and checked to be integral.
    pub fn m_alpha(&self, j: usize) -> Result<u32, RootDataError> {
        self.check_index(j)?;
        let theta = ThetaSet(vec![j]);
        // a vector with w_j(X) = j(d-j)/d
        let probe: Vec<f64> = (0..self.d).map(|i| if i < j { 1.0 } else { 0.0 }).collect();
        let x = CartanVector::recentered(probe);
        let ratio = 2.0 * self.rho_theta(&theta, &x)? / self.fundamental_weight(j, &x)?;
        let rounded = ratio.round();
        if (ratio - rounded).abs() > 1e-10 || rounded < 1.0 {
            return Err(RootDataError::NonIntegerRatio(ratio));
        }
        Ok(rounded as u32)
    }

    /// `B(X, Y)` for traceless `d x d` matrices.
    pub fn killing_form(&self, x: &CMat, y: &CMat) -> Result<f64, RootDataError> {
        for m in [x, y] {
            if m.nrows() != self.d || m.ncols() != self.d {
                return Err(RootDataError::DimensionMismatch { expected: self.d, got: m.nrows() });
            }
            let tr = m.trace();
            if tr.norm() > 1e-10 * (1.0 + m.norm()) {
                return Err(RootDataError::NotTraceless(tr.norm()));
            }
        }
        Ok(self.killing_scale() * (x * y).trace().re)
    }

    /// Killing-orthogonal projection onto `a_Theta`: average within blocks.
    pub fn project_to_a_theta(&self, x: &CartanVector, theta: &ThetaSet) -> Result<CartanVector, RootDataError> {
        self.check_vector(x)?;
        let blocks = theta.blocks(self.d);
        let nblocks = theta.len() + 1;
        let mut sums = vec![0.0; nblocks];
        let mut counts = vec![0usize; nblocks];
        for (i, &b) in blocks.iter().enumerate() {
            sums[b] += x.0[i];
            counts[b] += 1;
        }
        Ok(CartanVector(blocks.iter().map(|&b| sums[b] / counts[b] as f64).collect()))
    }

    /// `w^s_Theta(X) = sum_alpha s_alpha m_alpha w_alpha(X)`.
    pub fn weighted_weight(&self, s: &WeightVector, x: &CartanVector) -> Result<f64, RootDataError> {
        let mut total = 0.0;
        for (j, sj) in s.iter() {
            total += sj * self.m_alpha(j)? as f64 * self.fundamental_weight(j, x)?;
        }
        Ok(total)
    }

    /// Coefficient vector of `w^s_Theta` in the coordinate basis.
    pub fn weighted_weight_coefficients(&self, s: &WeightVector) -> Result<Vec<f64>, RootDataError> {
        let mut coef = vec![0.0; self.d];
        for (j, sj) in s.iter() {
            let m = self.m_alpha(j)? as f64;
            for c in coef.iter_mut().take(j) {
                *c += sj * m;
            }
        }
        Ok(coef)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::diag_real;
    use proptest::prelude::*;

    fn sys(d: usize) -> RootSystem {
        RootSystem::new(d, Field::Real).unwrap()
    }

    fn cv(v: &[f64]) -> CartanVector {
        CartanVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn simple_root_examples() {
        assert_eq!(sys(3).simple_root(1, &cv(&[1.0, 0.0, -1.0])).unwrap(), 1.0);
        assert_eq!(sys(3).simple_root(2, &cv(&[0.0, 0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(sys(3).simple_root(2, &cv(&[3.0, 1.0, -4.0])).unwrap(), 5.0);
        assert!(matches!(
            sys(3).simple_root(3, &cv(&[0.0, 0.0, 0.0])),
            Err(RootDataError::IndexOutOfRange { .. })
        ));
        assert!(sys(3).simple_root(0, &cv(&[0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn fundamental_weight_examples() {
        assert_eq!(sys(3).fundamental_weight(2, &cv(&[1.0, 0.0, -1.0])).unwrap(), 1.0);
        for j in 1..4 {
            assert_eq!(sys(4).fundamental_weight(j, &CartanVector::zero(4)).unwrap(), 0.0);
        }
        let l2 = 2f64.ln();
        assert_eq!(sys(3).fundamental_weight(1, &cv(&[l2, 0.0, -l2])).unwrap(), l2);
    }

    #[test]
    fn rho_theta_hand_computed() {
        let (a, b) = (0.7, -0.2);
        let x = cv(&[a, b, -a - b]);
        let c = -a - b;
        let full = ThetaSet::full(3);
        assert!((2.0 * sys(3).rho_theta(&full, &x).unwrap() - (2.0 * a - 2.0 * c)).abs() < 1e-15);
        let one = ThetaSet::new(3, [1]).unwrap();
        assert!((2.0 * sys(3).rho_theta(&one, &x).unwrap() - (2.0 * a - b - c)).abs() < 1e-15);
        assert_eq!(sys(3).rho_theta(&full, &CartanVector::zero(3)).unwrap(), 0.0);
    }

    #[test]
    fn m_alpha_matches_known_values() {
        assert_eq!(RootSystem::new(4, Field::Real).unwrap().m_alpha(2).unwrap(), 4);
        assert_eq!(RootSystem::new(3, Field::Complex).unwrap().m_alpha(1).unwrap(), 6);
        assert_eq!(RootSystem::new(2, Field::Real).unwrap().m_alpha(1).unwrap(), 2);
    }

    #[test]
    fn killing_form_examples() {
        let s2 = sys(2);
        let h = diag_real(&[1.0, -1.0]);
        assert_eq!(s2.killing_form(&h, &h).unwrap(), 8.0);
        let z = CMat::zeros(2, 2);
        assert_eq!(s2.killing_form(&z, &h).unwrap(), 0.0);
        let x = diag_real(&[1.0, 0.0, -1.0]);
        let y = diag_real(&[0.0, 1.0, -1.0]);
        assert_eq!(sys(3).killing_form(&x, &y).unwrap(), 6.0);
        let bad = diag_real(&[1.0, 1.0]);
        assert!(matches!(s2.killing_form(&bad, &h), Err(RootDataError::NotTraceless(_))));
    }

    #[test]
    fn projection_examples() {
        let x = cv(&[0.9, 0.4, -1.3]);
        let p = sys(3).project_to_a_theta(&x, &ThetaSet::new(3, [1]).unwrap()).unwrap();
        assert_eq!(p.entries()[0], 0.9);
        assert!((p.entries()[1] - (0.4 - 1.3) / 2.0).abs() < 1e-15);
        assert_eq!(p.entries()[1], p.entries()[2]);
        let q = sys(3).project_to_a_theta(&x, &ThetaSet::full(3)).unwrap();
        assert_eq!(q, x);
    }

    #[test]
    fn zero_sum_is_enforced() {
        assert!(matches!(CartanVector::new(vec![1.0, 0.0]), Err(RootDataError::NotZeroSum(_))));
    }

    #[test]
    fn theta_blocks_and_dvec() {
        let t = ThetaSet::new(5, [2, 3]).unwrap();
        assert_eq!(t.dvec(5), vec![2, 1, 2]);
        assert_eq!(t.blocks(5), vec![0, 0, 1, 2, 2]);
        assert_eq!(ThetaSet::from_dvec(&[2, 1, 2]), t);
        assert_eq!(t.opposite(5).indices(), &[2, 3]);
        assert_eq!(ThetaSet::new(5, [1]).unwrap().opposite(5).indices(), &[4]);
    }

    fn zero_sum_vec(d: usize) -> impl Strategy<Value = CartanVector> {
        prop::collection::vec(-5.0f64..5.0, d).prop_map(CartanVector::recentered)
    }

    proptest! {
        #[test]
        fn rho_is_multiple_of_weight(d in 2usize..7, seed in any::<u64>(), x in zero_sum_vec(6), complex in any::<bool>()) {
            let field = if complex { Field::Complex } else { Field::Real };
            let s = RootSystem::new(d, field).unwrap();
            let x = CartanVector::recentered(x.entries()[..d].to_vec());
            let j = 1 + (seed as usize) % (d - 1);
            let m = s.m_alpha(j).unwrap() as f64;
            let lhs = 2.0 * s.rho_theta(&ThetaSet::new(d, [j]).unwrap(), &x).unwrap();
            let rhs = m * s.fundamental_weight(j, &x).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
            prop_assert_eq!(m as usize, d * field.real_dim());
        }

        #[test]
        fn opposition_swaps_simple_roots(x in zero_sum_vec(5), j in 1usize..5) {
            let s = sys(5);
            let a = s.simple_root(j, &x.opposite()).unwrap();
            let b = s.simple_root(5 - j, &x).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn projection_is_idempotent_and_preserves_weights(x in zero_sum_vec(5), mask in 1u8..16) {
            let s = sys(5);
            let theta = ThetaSet::new(5, (1..5).filter(|j| mask & (1 << (j - 1)) != 0)).unwrap();
            let p = s.project_to_a_theta(&x, &theta).unwrap();
            let pp = s.project_to_a_theta(&p, &theta).unwrap();
            for (a, b) in p.entries().iter().zip(pp.entries()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            for &j in theta.indices() {
                let w1 = s.fundamental_weight(j, &x).unwrap();
                let w2 = s.fundamental_weight(j, &p).unwrap();
                prop_assert!((w1 - w2).abs() < 1e-12);
            }
            // projection lands in the kernel of roots outside Theta
            for j in (1..5).filter(|j| !theta.contains(*j)) {
                prop_assert!(s.simple_root(j, &p).unwrap().abs() < 1e-12);
            }
        }
    }
}

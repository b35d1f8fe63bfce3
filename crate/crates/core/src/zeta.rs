//! Truncated twisted Ruelle zeta functions over primitive conjugacy classes,
//! by Euler product and by trace series.
//!
//! Classes `[gamma]` and `[gamma^{-1}]` are distinct in a free group and both
//! contribute. Summation runs in a fixed order (period, then word) so results
//! do not depend on the number of worker threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anosov::{self, AnosovError, CyclicWord, GroupSpec, SpectrumOptions};
use crate::linalg::{self, CMat, C64};
use crate::par;
use crate::rootdata::{ThetaSet, WeightVector};

/// Series terms below this magnitude end the expansion.
pub const TERM_CUTOFF: f64 = 1e-16;
/// Tail bound above which the series is reported as slowly convergent.
pub const TAIL_LIMIT: f64 = 1e-8;
/// Euler factors with `|det| <` this are too close to a pole.
pub const NEAR_ZERO_DET: f64 = 1e-12;
const MAX_SERIES_TERMS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZetaError {
    #[error("weight is not admissible on the sampled classes (minimum period {0:e})")]
    AdmissibilityWarning(f64),
    #[error("Euler factor of class {word} has |det| = {value:e}")]
    NearZeroDeterminant { word: String, value: f64 },
    #[error("trace series tail {tail:e} exceeds {TAIL_LIMIT:e} for class {word}")]
    SlowConvergence { word: String, tail: f64 },
    #[error("representation: {0}")]
    BadRepresentation(String),
    #[error(transparent)]
    Anosov(#[from] AnosovError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaMode {
    Product,
    TraceSeries,
}

/// `rho`: one `k x k` invertible complex matrix per generator.
#[derive(Clone, Debug)]
pub struct Representation {
    images: Vec<CMat>,
    inverses: Vec<CMat>,
}

impl Representation {
    pub fn new(images: Vec<CMat>) -> Result<Self, ZetaError> {
        let k = images.first().map(|m| m.nrows()).ok_or_else(|| ZetaError::BadRepresentation("no images".into()))?;
        let mut inverses = Vec::with_capacity(images.len());
        for m in &images {
            if m.nrows() != k || m.ncols() != k {
                return Err(ZetaError::BadRepresentation("images must all be k x k".into()));
            }
            inverses.push(linalg::inverse(m).ok_or_else(|| ZetaError::BadRepresentation("singular image".into()))?);
        }
        Ok(Representation { images, inverses })
    }

    pub fn trivial(rank: usize, k: usize) -> Self {
        Representation { images: vec![CMat::identity(k, k); rank], inverses: vec![CMat::identity(k, k); rank] }
    }

    pub fn dim(&self) -> usize {
        self.images[0].nrows()
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// `h rho h^{-1}`.
    pub fn conjugated(&self, h: &CMat) -> Result<Self, ZetaError> {
        let hinv = linalg::inverse(h).ok_or_else(|| ZetaError::BadRepresentation("singular conjugator".into()))?;
        Representation::new(self.images.iter().map(|m| h * m * &hinv).collect())
    }

    pub fn evaluate(&self, w: &CyclicWord) -> CMat {
        let k = self.dim();
        w.letters().iter().fold(CMat::identity(k, k), |acc, &l| {
            let i = (l / 2) as usize;
            acc * if l % 2 == 0 { &self.images[i] } else { &self.inverses[i] }
        })
    }
}

#[derive(Clone, Debug)]
pub struct ZetaJob<'a> {
    pub spec: &'a GroupSpec,
    pub theta: ThetaSet,
    pub s: WeightVector,
    pub z: C64,
    pub rho: Representation,
    pub max_len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaDiagnostics {
    pub n_classes: usize,
    pub min_period: f64,
    /// `|sum of log-factors of length L|` for `L = 1..=max_len`.
    pub shell_increments: Vec<f64>,
    pub last_shell_increment: f64,
    /// Geometric decay rate of the shell increments, when they decay.
    pub decay_rate: Option<f64>,
    /// Estimate of the omitted contribution of classes longer than `max_len`.
    pub tail_estimate: f64,
    /// Empirical convergence abscissa from class counts versus periods.
    pub abscissa: f64,
    pub below_abscissa: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaValue {
    pub log_zeta: C64,
    pub zeta: C64,
    pub diagnostics: ZetaDiagnostics,
}

struct ClassData {
    label: String,
    len: usize,
    period: f64,
    rho: CMat,
}

fn collect_classes(job: &ZetaJob) -> Result<Vec<ClassData>, ZetaError> {
    if job.rho.rank() != job.spec.rank() {
        return Err(ZetaError::BadRepresentation(format!("{} images for {} generators", job.rho.rank(), job.spec.rank())));
    }
    let opts = SpectrumOptions { cross_check_every: 0, ..Default::default() };
    let records = anosov::period_spectrum(job.spec, &job.theta, &job.s, job.max_len, &opts)?;
    if let Some(r) = records.first() {
        if r.period <= 0.0 {
            return Err(ZetaError::AdmissibilityWarning(r.period));
        }
    }
    Ok(records
        .into_iter()
        .map(|r| ClassData { rho: job.rho.evaluate(&r.word), label: r.label, len: r.len, period: r.period })
        .collect())
}

/// `-log det(1 - A)` as `-sum_j log(1 - mu_j)` over the eigenvalues of `A`,
/// principal branch; this is the analytic branch while `|mu_j| < 1`.
fn neg_log_det_one_minus(a: &CMat, label: &str) -> Result<C64, ZetaError> {
    let k = a.nrows();
    let det = linalg::det(&(CMat::identity(k, k) - a)).norm();
    if det < NEAR_ZERO_DET {
        return Err(ZetaError::NearZeroDeterminant { word: label.to_string(), value: det });
    }
    let mu = linalg::eigenvalues(a).ok_or_else(|| ZetaError::BadRepresentation("eigenvalue failure".into()))?;
    Ok(-mu.iter().map(|m| ln_1p(-m)).sum::<C64>())
}

/// `log(1 + w)` on the principal branch, accurate for small `|w|`.
fn ln_1p(w: C64) -> C64 {
    C64::new(0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p(), w.im.atan2(1.0 + w.re))
}

/// `sum_m tr(A^m) / m` until a term drops below the cutoff.
fn trace_series(a: &CMat, label: &str) -> Result<C64, ZetaError> {
    let k = a.nrows();
    let radius = linalg::eigenvalues(a).ok_or_else(|| ZetaError::BadRepresentation("eigenvalue failure".into()))?.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut power = a.clone();
    let mut total = C64::new(0.0, 0.0);
    let mut m = 1usize;
    loop {
        let term = power.trace() / m as f64;
        total += term;
        let bound = power.norm() / m as f64;
        if bound < TERM_CUTOFF || m >= MAX_SERIES_TERMS {
            let tail = if radius < 1.0 { k as f64 * radius.powi(m as i32 + 1) / ((m + 1) as f64 * (1.0 - radius)) } else { f64::INFINITY };
            if tail > TAIL_LIMIT {
                return Err(ZetaError::SlowConvergence { word: label.to_string(), tail });
            }
            return Ok(total);
        }
        power = &power * a;
        m += 1;
    }
}

fn evaluate(job: &ZetaJob, mode: ZetaMode) -> Result<ZetaValue, ZetaError> {
    let classes = collect_classes(job)?;
    let z = job.z;
    let factors = par::map_ordered(&classes, |cl| {
        let a = &cl.rho * (-z * cl.period).exp();
        match mode {
            ZetaMode::Product => neg_log_det_one_minus(&a, &cl.label),
            ZetaMode::TraceSeries => trace_series(&a, &cl.label),
        }
    });
    let mut log_zeta = C64::new(0.0, 0.0);
    let mut shells = vec![C64::new(0.0, 0.0); job.max_len];
    for (cl, f) in classes.iter().zip(factors) {
        let f = f?;
        log_zeta += f;
        shells[cl.len - 1] += f;
    }
    let diagnostics = diagnostics(job, &classes, &shells);
    Ok(ZetaValue { log_zeta, zeta: log_zeta.exp(), diagnostics })
}

fn diagnostics(job: &ZetaJob, classes: &[ClassData], shells: &[C64]) -> ZetaDiagnostics {
    let shell_increments: Vec<f64> = shells.iter().map(|s| s.norm()).collect();
    let last = shell_increments.last().copied().unwrap_or(0.0);
    let ratios: Vec<f64> = shell_increments.windows(2).filter(|w| w[0] > 0.0 && w[1] > 0.0).map(|w| w[1] / w[0]).collect();
    let tail_ratios = &ratios[ratios.len().saturating_sub(3)..];
    let decay_rate = (!tail_ratios.is_empty())
        .then(|| tail_ratios.iter().map(|r| r.ln()).sum::<f64>() / tail_ratios.len() as f64)
        .map(f64::exp)
        .filter(|r| *r < 1.0);
    let tail_estimate = match decay_rate {
        Some(r) => last * r / (1.0 - r),
        None => last,
    };
    let min_period = classes.iter().map(|c| c.period).fold(f64::INFINITY, f64::min);
    let abscissa = empirical_abscissa(classes, job.max_len);
    ZetaDiagnostics {
        n_classes: classes.len(),
        min_period,
        shell_increments,
        last_shell_increment: last,
        decay_rate,
        tail_estimate,
        abscissa,
        below_abscissa: job.z.re <= abscissa,
    }
}

/// Largest `log(#classes of length L) / (min period at length L)`; the series
/// `sum_gamma e^{-x period}` is dominated by these shells.
fn empirical_abscissa(classes: &[ClassData], max_len: usize) -> f64 {
    let mut best: f64 = 0.0;
    for len in 1..=max_len {
        let periods: Vec<f64> = classes.iter().filter(|c| c.len == len).map(|c| c.period).collect();
        if periods.len() < 2 {
            continue;
        }
        let pmin = periods.iter().copied().fold(f64::INFINITY, f64::min);
        if pmin > 0.0 {
            best = best.max((periods.len() as f64).ln() / pmin);
        }
    }
    best
}

/// Euler product `prod det(1 - e^{-z period} rho(gamma))^{-1}` over primitive
/// classes up to `max_len`, accumulated in log space.
pub fn zeta_truncated(job: &ZetaJob) -> Result<ZetaValue, ZetaError> {
    evaluate(job, ZetaMode::Product)
}

/// `sum_gamma sum_m tr(rho(gamma)^m) e^{-m z period} / m`.
pub fn log_zeta_series(job: &ZetaJob) -> Result<ZetaValue, ZetaError> {
    evaluate(job, ZetaMode::TraceSeries)
}

pub fn zeta(job: &ZetaJob, mode: ZetaMode) -> Result<ZetaValue, ZetaError> {
    evaluate(job, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anosov::builtin_spec;
    use crate::linalg::{random as lr, Field};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn job<'a>(spec: &'a GroupSpec, theta: ThetaSet, z: C64, rho: Representation, max_len: usize) -> ZetaJob<'a> {
        let s = WeightVector::constant(&theta, 1.0);
        ZetaJob { spec, theta, s, z, rho, max_len }
    }

    #[test]
    fn empty_product() {
        let spec = builtin_spec("diagonal-one-generator-sl3").unwrap();
        let j = job(&spec, ThetaSet::new(3, [1]).unwrap(), C64::new(1.0, 0.0), Representation::trivial(1, 1), 0);
        let v = zeta_truncated(&j).unwrap();
        assert_eq!(v.zeta, C64::new(1.0, 0.0));
    }

    #[test]
    fn one_generator_closed_form() {
        let spec = builtin_spec("diagonal-one-generator-sl3").unwrap();
        for z in [C64::new(0.7, 0.0), C64::new(0.3, 2.1), C64::new(1.5, -0.4)] {
            for n in 1..=4 {
                let j = job(&spec, ThetaSet::new(3, [1]).unwrap(), z, Representation::trivial(1, 1), n);
                let expected = -2.0 * (C64::new(1.0, 0.0) - (-z * 3.0 * 4f64.ln()).exp()).ln();
                assert!((zeta_truncated(&j).unwrap().log_zeta - expected).norm() < 1e-12);
                assert!((log_zeta_series(&j).unwrap().log_zeta - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn modes_agree_and_conjugation_invariance() {
        let spec = builtin_spec("sym2-fuchsian-schottky-sl3").unwrap();
        let theta = ThetaSet::full(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = Representation::new(vec![lr::unitary(2, Field::Complex, &mut rng), lr::unitary(2, Field::Complex, &mut rng)]).unwrap();
        let base = job(&spec, theta.clone(), C64::new(0.3, 1.0), rho.clone(), 4);
        let p = zeta_truncated(&base).unwrap();
        let t = log_zeta_series(&base).unwrap();
        assert!((p.log_zeta - t.log_zeta).norm() < 1e-10);
        let h = lr::conditioned(2, Field::Complex, 5.0, &mut rng);
        let conj = ZetaJob { rho: rho.conjugated(&h).unwrap(), ..base.clone() };
        assert!((zeta_truncated(&conj).unwrap().log_zeta - p.log_zeta).norm() < 1e-10);
        // real z and the trivial character give a real value
        let real = job(&spec, theta, C64::new(0.3, 0.0), Representation::trivial(2, 1), 4);
        assert!(zeta_truncated(&real).unwrap().log_zeta.im.abs() < 1e-14);
    }

    #[test]
    fn truncation_stability() {
        let spec = builtin_spec("sym2-fuchsian-schottky-sl3").unwrap();
        let j = job(&spec, ThetaSet::full(3), C64::new(1.0, 0.0), Representation::trivial(2, 1), 6);
        let v = zeta_truncated(&j).unwrap();
        let d = &v.diagnostics;
        assert!(d.decay_rate.unwrap() < 0.5, "{:?}", d.shell_increments);
        assert!(!d.below_abscissa);
        assert!(d.tail_estimate < d.last_shell_increment, "{d:?}");
    }

    #[test]
    fn errors() {
        let spec = builtin_spec("diagonal-one-generator-sl3").unwrap();
        let theta = ThetaSet::new(3, [1]).unwrap();
        let neg = ZetaJob { s: WeightVector::constant(&theta, -1.0), ..job(&spec, theta.clone(), C64::new(1.0, 0.0), Representation::trivial(1, 1), 2) };
        assert!(matches!(zeta_truncated(&neg), Err(ZetaError::AdmissibilityWarning(_))));
        // e^{-z period} = 1 exactly on the pole
        let pole = job(&spec, theta.clone(), C64::new(0.0, 0.0), Representation::trivial(1, 1), 1);
        assert!(matches!(zeta_truncated(&pole), Err(ZetaError::NearZeroDeterminant { .. })));
        let slow = job(&spec, theta, C64::new(1e-4, 0.0), Representation::trivial(1, 1), 1);
        assert!(matches!(log_zeta_series(&slow), Err(ZetaError::SlowConvergence { .. })));
    }
}

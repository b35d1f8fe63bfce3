//! Seeded numerical verification suites. Reports are plain text and
//! byte-identical for a fixed seed, whatever the number of worker threads.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::anosov::{self, builtin_spec, builtin_specs, GroupSpec, SpectrumOptions};
use crate::densities::{self, random as drand, BasePoint, CanonicalSection, MultiflowPoint, TwistedSection};
use crate::flags;
use crate::geometry;
use crate::jordan::{self, GroupElement, DEFAULT_PROXIMAL_TOL};
use crate::linalg::{self, c, random as lr, CMat, Field, C64};
use crate::par;
use crate::rootdata::{CartanVector, RootSystem, ThetaSet, WeightVector};
use crate::zeta::{self, Representation, ZetaJob};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Rootdata,
    Jordan,
    Pairing,
    PeriodIdentity,
    Geometry,
    Zeta,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Rootdata, Suite::Jordan, Suite::Pairing, Suite::PeriodIdentity, Suite::Geometry, Suite::Zeta];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rootdata => "rootdata",
            Suite::Jordan => "jordan",
            Suite::Pairing => "pairing",
            Suite::PeriodIdentity => "period-identity",
            Suite::Geometry => "geometry",
            Suite::Zeta => "zeta",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite {s:?}; expected rootdata, jordan, pairing, period-identity, geometry, zeta or all"))
    }
}

/// Outcome of one named invariant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: String,
}

impl CheckResult {
    fn new(suite: Suite, name: &'static str, samples: usize, max_error: f64, tolerance: f64) -> Self {
        CheckResult { suite: suite.name(), name, samples, max_error, tolerance, passed: max_error <= tolerance, note: String::new() }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn failed(suite: Suite, name: &'static str, note: impl Into<String>) -> Self {
        CheckResult { suite: suite.name(), name, samples: 0, max_error: f64::INFINITY, tolerance: 0.0, passed: false, note: note.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// One line per check, then a summary line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let _ = write!(
                out,
                "{:<4} {:<16} {:<36} samples={:<5} max_error={:.3e} tol={:.1e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.suite,
                r.name,
                r.samples,
                r.max_error,
                r.tolerance
            );
            if !r.note.is_empty() {
                let _ = write!(out, "  # {}", r.note);
            }
            out.push('\n');
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        let _ = writeln!(out, "summary: {passed}/{} passed", self.results.len());
        out
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> CheckReport {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut results = Vec::new();
    for s in suites {
        results.extend(match s {
            Suite::Rootdata => rootdata_suite(seed),
            Suite::Jordan => jordan_suite(seed),
            Suite::Pairing => pairing_suite(seed),
            Suite::PeriodIdentity => period_suite(seed),
            Suite::Geometry => geometry_suite(seed),
            Suite::Zeta => zeta_suite(seed),
            Suite::All => unreachable!(),
        });
    }
    CheckReport { suite, seed, results }
}

/// Independent stream per (check, sample).
fn rng_for(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r.set_word_pos(index as u128 * 1024);
    r
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn random_cartan<R: Rng>(d: usize, rng: &mut R) -> CartanVector {
    CartanVector::recentered((0..d).map(|_| rng.random_range(-3.0..3.0)).collect())
}

fn random_theta<R: Rng>(d: usize, rng: &mut R) -> ThetaSet {
    loop {
        let picked: Vec<usize> = (1..d).filter(|_| rng.random_bool(0.5)).collect();
        if !picked.is_empty() {
            return ThetaSet::new(d, picked).expect("indices in range");
        }
    }
}

fn random_weights<R: Rng>(theta: &ThetaSet, rng: &mut R) -> WeightVector {
    let v: Vec<f64> = theta.indices().iter().map(|_| rng.random_range(-2.0..2.0)).collect();
    WeightVector::new(theta, &v).expect("one value per root")
}

fn element(m: CMat, field: Field) -> GroupElement {
    GroupElement::new(m, field).expect("random element is special linear")
}

// ---------------------------------------------------------------- rootdata

/// Real basis of `sl(d, k)`: off-diagonal units, `E_ii - E_{i+1,i+1}`, and
/// their multiples by `i` over `C`.
fn sl_basis(d: usize, field: Field) -> Vec<CMat> {
    let scalars: &[C64] = match field {
        Field::Real => &[C64::new(1.0, 0.0)],
        Field::Complex => &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
    };
    let mut out = Vec::new();
    for &z in scalars {
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    let mut m = CMat::zeros(d, d);
                    m[(i, j)] = z;
                    out.push(m);
                }
            }
        }
        for i in 0..d - 1 {
            let mut m = CMat::zeros(d, d);
            m[(i, i)] = z;
            m[(i + 1, i + 1)] = -z;
            out.push(m);
        }
    }
    out
}

/// Coordinates of a traceless matrix in [`sl_basis`].
fn sl_coordinates(m: &CMat, field: Field) -> Vec<f64> {
    let d = m.nrows();
    let parts: Vec<fn(C64) -> f64> = match field {
        Field::Real => vec![|z: C64| z.re],
        Field::Complex => vec![|z: C64| z.re, |z: C64| z.im],
    };
    let mut out = Vec::new();
    for part in parts {
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    out.push(part(m[(i, j)]));
                }
            }
        }
        let mut acc = 0.0;
        for i in 0..d - 1 {
            acc += part(m[(i, i)]);
            out.push(acc);
        }
    }
    out
}

/// `tr(ad X ad Y)` over the real Lie algebra, by brute force.
pub fn ad_trace_killing(x: &CMat, y: &CMat, field: Field) -> f64 {
    let basis = sl_basis(x.nrows(), field);
    let mut tr = 0.0;
    for (k, e) in basis.iter().enumerate() {
        let ye = y * e - e * y;
        let xye = x * &ye - &ye * x;
        tr += sl_coordinates(&xye, field)[k];
    }
    tr
}

fn random_traceless<R: Rng>(d: usize, field: Field, rng: &mut R) -> CMat {
    let mut m = lr::gaussian(d, d, field, rng);
    let t = m.trace() / d as f64;
    for i in 0..d {
        m[(i, i)] -= t;
    }
    m
}

fn rootdata_suite(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Rootdata;
    let mut out = Vec::new();

    let mut err: f64 = 0.0;
    let mut n = 0;
    let mut rng = rng_for(seed, 1, 0);
    for d in 2..=6 {
        for field in [Field::Real, Field::Complex] {
            let sys = RootSystem::new(d, field).expect("d >= 2");
            for j in 1..d {
                let theta = ThetaSet::new(d, [j]).expect("j in range");
                let m = sys.m_alpha(j).expect("integer ratio") as f64;
                let expected_m = (d * field.real_dim()) as f64;
                err = err.max((m - expected_m).abs());
                for _ in 0..4 {
                    let x = random_cartan(d, &mut rng);
                    let lhs = 2.0 * sys.rho_theta(&theta, &x).expect("valid");
                    let rhs = m * sys.fundamental_weight(j, &x).expect("valid");
                    err = err.max((lhs - rhs).abs());
                    n += 1;
                }
            }
        }
    }
    out.push(CheckResult::new(s, "rho-weight-identity", n, err, 1e-10));

    let pairs: Vec<(usize, Field, u64)> = (2..=4).flat_map(|d| [Field::Real, Field::Complex].into_iter().flat_map(move |f| (0..50).map(move |i| (d, f, i)))).collect();
    let errs = par::map_ordered(&pairs, |&(d, field, i)| {
        let mut rng = rng_for(seed, 2, i + 100 * d as u64 + if field == Field::Complex { 10_000 } else { 0 });
        let x = random_traceless(d, field, &mut rng);
        let y = random_traceless(d, field, &mut rng);
        let lib = RootSystem::new(d, field).expect("d >= 2").killing_form(&x, &y).expect("traceless");
        let oracle = ad_trace_killing(&x, &y, field);
        (lib - oracle).abs() / oracle.abs().max(1e-300).max(x.norm() * y.norm())
    });
    out.push(CheckResult::new(s, "killing-form-vs-ad-trace", errs.len(), max_of(errs), 1e-9));

    let mut err: f64 = 0.0;
    let mut rng = rng_for(seed, 3, 0);
    for d in 2..=6 {
        let sys = RootSystem::new(d, Field::Real).expect("d >= 2");
        for _ in 0..10 {
            let x = random_cartan(d, &mut rng);
            for j in 1..d {
                let a = sys.simple_root(j, &x.opposite()).expect("valid");
                let b = sys.simple_root(d - j, &x).expect("valid");
                err = err.max((a - b).abs());
            }
        }
    }
    out.push(CheckResult::new(s, "opposition-involution", 50, err, 1e-12));
    out
}

// ---------------------------------------------------------------- jordan

struct ProximalSample {
    g: GroupElement,
    theta: ThetaSet,
}

fn proximal_population(seed: u64, stream: u64, per_dim: usize) -> Vec<ProximalSample> {
    let mut out = Vec::new();
    for d in [3usize, 4] {
        for i in 0..per_dim {
            let mut rng = rng_for(seed, stream, (d * 1000 + i) as u64);
            let logs = lr::generic_logs(d, 0.3, 1.5, &mut rng);
            let g = element(lr::conjugated_diagonal(&logs, Field::Real, 20.0, &mut rng), Field::Real);
            let theta = random_theta(d, &mut rng);
            out.push(ProximalSample { g, theta });
        }
    }
    out
}

/// `|e^{J_F(g)} / |det Ad(g)|_n| - 1|` at the attracting flag.
pub fn jacobian_identity_errors(seed: u64, per_dim: usize) -> Vec<f64> {
    let pop = proximal_population(seed, 10, per_dim);
    par::map_ordered(&pop, |p| {
        let dvec = p.theta.dvec(p.g.dim());
        let (flag, _) = match jordan::attracting_repelling_flags(&p.g, &dvec, DEFAULT_PROXIMAL_TOL) {
            Ok(f) => f,
            Err(_) => return f64::INFINITY,
        };
        let j = jordan::jacobian_class_fn(&p.theta, &p.g).unwrap_or(f64::NAN);
        match flags::adjoint_det_on_nilradical(&p.g, &flag) {
            Ok(det) => (j - det.ln()).exp_m1().abs(),
            Err(_) => f64::INFINITY,
        }
    })
}

/// `|min_{alpha in Theta} alpha(lambda(g)) + log rho(Ad(g^{-1})|_n)|`.
pub fn proximality_identity_errors(seed: u64, per_dim: usize) -> Vec<f64> {
    let pop = proximal_population(seed, 10, per_dim);
    par::map_ordered(&pop, |p| {
        let dvec = p.theta.dvec(p.g.dim());
        let (flag, _) = match jordan::attracting_repelling_flags(&p.g, &dvec, DEFAULT_PROXIMAL_TOL) {
            Ok(f) => f,
            Err(_) => return f64::INFINITY,
        };
        let margin = p.theta.indices().iter().map(|&j| jordan::proximality_fn(j, &p.g).unwrap_or(f64::NAN)).fold(f64::INFINITY, f64::min);
        match flags::adjoint_spectral_radius_on_nilradical(&p.g.inv(), &flag) {
            Ok(r) => (margin + r.ln()).abs(),
            Err(_) => f64::INFINITY,
        }
    })
}

fn jordan_suite(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Jordan;
    let mut out = Vec::new();
    let errs = jacobian_identity_errors(seed, 100);
    out.push(CheckResult::new(s, "jacobian-determinant-identity", errs.len(), max_of(errs), 1e-7));
    let errs = proximality_identity_errors(seed, 100);
    out.push(CheckResult::new(s, "proximality-spectral-radius", errs.len(), max_of(errs), 1e-7));

    let idx: Vec<u64> = (0..60).collect();
    let errs = par::map_ordered(&idx, |&i| {
        let mut rng = rng_for(seed, 11, i);
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 2 + (i as usize % 3);
        let g = element(lr::special_linear(d, field, &mut rng), field);
        let h = element(lr::conditioned(d, field, 10.0, &mut rng), field);
        let a = jordan::jordan_projection(&g).expect("eigenvalues");
        let b = jordan::jordan_projection(&g.conjugate_by(&h)).expect("eigenvalues");
        let inv = jordan::jordan_projection(&g.inv()).expect("eigenvalues");
        let e1 = max_of(a.entries().iter().zip(b.entries()).map(|(x, y)| (x - y).abs()));
        let e2 = max_of(a.opposite().entries().iter().zip(inv.entries()).map(|(x, y)| (x - y).abs()));
        e1.max(e2)
    });
    out.push(CheckResult::new(s, "jordan-projection-invariance", errs.len(), max_of(errs), 1e-8));

    let errs = par::map_ordered(&idx, |&i| {
        let mut rng = rng_for(seed, 12, i);
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 3 + (i as usize % 2);
        let g = element(lr::special_linear(d, field, &mut rng), field);
        match jordan::jordan_decomposition(&g) {
            Ok(j) => {
                let prod = j.elliptic_part.matrix() * j.hyperbolic_part.matrix() * j.unipotent_part.matrix();
                let comm = (j.elliptic_part.matrix() * j.hyperbolic_part.matrix() - j.hyperbolic_part.matrix() * j.elliptic_part.matrix()).norm();
                ((prod - g.matrix()).norm() / g.matrix().norm()).max(comm / g.matrix().norm())
            }
            Err(_) => f64::INFINITY,
        }
    });
    out.push(CheckResult::new(s, "jordan-decomposition-reconstruction", errs.len(), max_of(errs), 1e-7));
    out
}

// ---------------------------------------------------------------- pairing

struct PairingErrors {
    basis_spread: f64,
    invariance: f64,
    homogeneity: f64,
}

pub fn pairing_law_errors(seed: u64, samples: usize) -> (f64, f64, f64) {
    let idx: Vec<u64> = (0..samples as u64).collect();
    let errs = par::map_ordered(&idx, |&i| {
        let mut rng = rng_for(seed, 20, i);
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 2 + (i as usize % 3);
        let theta = random_theta(d, &mut rng);
        let x = drand::base_point(d, &theta, field, 10.0, &mut rng);
        let sw = random_weights(&theta, &mut rng);
        let p = densities::canonical_section(&x, &sw).expect("transverse").flow(rng.random_range(-2.0..2.0));
        let p = FlowPointShift::apply(&p, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let base = p.log_pairing().expect("transverse");
        let mut spread: f64 = 0.0;
        for _ in 0..4 {
            let frames: Vec<(CMat, CMat)> = p
                .plus
                .components
                .iter()
                .zip(&p.minus.components)
                .map(|((_, a), (_, b))| (a.frame() * random_gl(a.frame().ncols(), field, &mut rng), b.frame() * random_gl(b.frame().ncols(), field, &mut rng)))
                .collect();
            let v = densities::log_pair_on_frames(&p.plus, &p.minus, &frames).expect("frames span the subspaces");
            spread = spread.max((v - base).abs());
        }
        let g = element(lr::special_linear(d, field, &mut rng), field);
        let invariance = (p.act(&g).log_pairing().expect("transverse") - base).abs();
        let (tp, tm) = (rng.random_range(0.1..10.0f64), rng.random_range(0.1..10.0f64));
        let scaled = densities::pair(&p.plus.shifted(tp.ln()), &p.minus.shifted(tm.ln())).expect("transverse");
        let homogeneity = (scaled / (tp * tm * base.exp()) - 1.0).abs();
        PairingErrors { basis_spread: spread.exp_m1().abs(), invariance: invariance.exp_m1().abs(), homogeneity }
    });
    (max_of(errs.iter().map(|e| e.basis_spread)), max_of(errs.iter().map(|e| e.invariance)), max_of(errs.iter().map(|e| e.homogeneity)))
}

/// Moves a flow point off the pairing-one locus.
struct FlowPointShift;

impl FlowPointShift {
    fn apply(p: &densities::FlowPoint, a: f64, b: f64) -> densities::FlowPoint {
        densities::FlowPoint { base: p.base.clone(), plus: p.plus.shifted(a), minus: p.minus.shifted(b) }
    }
}

fn random_gl<R: Rng>(k: usize, field: Field, rng: &mut R) -> CMat {
    let mut m = lr::conditioned(k.max(2), field, 5.0, rng).view((0, 0), (k, k)).into_owned();
    if linalg::min_singular_value(&m) < 0.05 {
        m += CMat::identity(k, k);
    }
    m * c(rng.random_range(0.5..2.0))
}

/// Cocycle relation and section independence at fixed points, `(relation, independence)`.
pub fn cocycle_errors(seed: u64, samples: usize) -> (Vec<f64>, Vec<f64>) {
    let idx: Vec<u64> = (0..samples as u64).collect();
    let errs = par::map_ordered(&idx, |&i| {
        let mut rng = rng_for(seed, 21, i);
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 2 + (i as usize % 3);
        let theta = random_theta(d, &mut rng);
        let sw = random_weights(&theta, &mut rng);
        let sigma = CanonicalSection { s: sw.clone() };
        let x = drand::base_point(d, &theta, field, 10.0, &mut rng);
        let g1 = element(lr::conditioned(d, field, 10.0, &mut rng), field);
        let g2 = element(lr::conditioned(d, field, 10.0, &mut rng), field);
        let relation = (|| -> Result<f64, densities::DensityError> {
            let lhs = densities::cocycle(&sigma, &x, &g2.mul(&g1))?;
            let rhs = densities::cocycle(&sigma, &x.act(&g1), &g2)? + densities::cocycle(&sigma, &x, &g1)?;
            Ok((lhs - rhs).abs())
        })()
        .unwrap_or(f64::INFINITY);
        let logs = lr::generic_logs(d, 0.3, 1.5, &mut rng);
        let gamma = element(lr::conjugated_diagonal(&logs, field, 10.0, &mut rng), field);
        let twisted = TwistedSection { base: CanonicalSection { s: sw.clone() }, tau: drand::smooth_tau(d, &theta, field, &mut rng) };
        let independence = (|| -> Result<f64, String> {
            let (fp, fm) = jordan::attracting_repelling_flags(&gamma, &theta.dvec(d), DEFAULT_PROXIMAL_TOL).map_err(|e| e.to_string())?;
            let fixed = BasePoint::new(fp, fm).map_err(|e| e.to_string())?;
            let a = densities::cocycle(&sigma, &fixed, &gamma).map_err(|e| e.to_string())?;
            let b = densities::cocycle(&twisted, &fixed, &gamma).map_err(|e| e.to_string())?;
            Ok((a - b).abs())
        })()
        .unwrap_or(f64::INFINITY);
        (relation, independence)
    });
    errs.into_iter().unzip()
}

/// `Pi_s(nu . t)` against `phi^{t.s}(Pi_s(nu))`.
pub fn multiflow_errors(seed: u64, samples: usize) -> Vec<f64> {
    let idx: Vec<u64> = (0..samples as u64).collect();
    par::map_ordered(&idx, |&i| {
        let mut rng = rng_for(seed, 22, i);
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 2 + (i as usize % 3);
        let theta = random_theta(d, &mut rng);
        let x = drand::base_point(d, &theta, field, 10.0, &mut rng);
        let offsets: Vec<(usize, f64)> = theta.indices().iter().map(|&a| (a, rng.random_range(-2.0..2.0))).collect();
        let nu = MultiflowPoint::canonical(&x, &offsets).expect("transverse");
        let t = random_weights(&theta, &mut rng);
        let sw = random_weights(&theta, &mut rng);
        let ts: f64 = theta.indices().iter().map(|&a| t.get(a) * sw.get(a)).sum();
        let lhs = densities::multiflow_project(&nu.act_torus(&t), &sw);
        let rhs = densities::multiflow_project(&nu, &sw).flow(ts);
        lhs.flow_offset(&rhs).map(f64::abs).unwrap_or(f64::INFINITY)
    })
}

fn pairing_suite(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Pairing;
    let (spread, inv, hom) = pairing_law_errors(seed, 100);
    let (rel, ind) = cocycle_errors(seed, 200);
    let mf = multiflow_errors(seed, 100);
    vec![
        CheckResult::new(s, "pairing-basis-independence", 100, spread, 1e-10),
        CheckResult::new(s, "pairing-sl-invariance", 100, inv, 1e-10),
        CheckResult::new(s, "pairing-homogeneity", 100, hom, 1e-14),
        CheckResult::new(s, "cocycle-relation", rel.len(), max_of(rel), 1e-9),
        CheckResult::new(s, "cocycle-section-independence", ind.len(), max_of(ind), 1e-9),
        CheckResult::new(s, "multiflow-equivariance", mf.len(), max_of(mf), 1e-12),
    ]
}

// ---------------------------------------------------------------- periods

/// Worst relative difference between cocycle and formula periods, and the
/// number of classes, over all primitive classes up to `max_len`.
pub fn period_identity_error(spec: &GroupSpec, s: &WeightVector, max_len: usize) -> Result<(usize, f64), String> {
    let theta = s.theta();
    let opts = SpectrumOptions { cross_check_every: 1, ..Default::default() };
    let recs = anosov::period_spectrum(spec, &theta, s, max_len, &opts).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for r in &recs {
        if let Some(f) = &r.failure {
            return Err(format!("{}: {f}", r.label));
        }
        worst = worst.max(r.cocycle_error.unwrap_or(f64::INFINITY));
    }
    Ok((recs.len(), worst))
}

/// The two specs and weights used by the period identity check.
pub fn period_identity_cases() -> Vec<(&'static str, GroupSpec, WeightVector)> {
    let sym = builtin_spec("sym2-fuchsian-schottky-sl3").expect("shipped");
    let sl4 = builtin_spec("diagonal-schottky-sl4").expect("shipped");
    let t3 = ThetaSet::full(3);
    let t4 = ThetaSet::full(4);
    vec![
        ("sym2-fuchsian-schottky-sl3", sym, WeightVector::constant(&t3, 1.0)),
        ("diagonal-schottky-sl4", sl4, WeightVector::new(&t4, &[0.5, 1.0, 2.0]).expect("three roots")),
    ]
}

/// Minimum of `w^1_Theta` over limit-cone samples of every shipped spec.
pub fn admissibility_margins(max_len: usize) -> Vec<(&'static str, f64)> {
    builtin_specs()
        .into_iter()
        .map(|(name, spec)| {
            let theta = spec.theta.clone();
            let margin = anosov::limit_cone_sample(&spec, &theta, max_len)
                .map_err(|e| e.to_string())
                .and_then(|sample| anosov::is_admissible(&spec.root_system(), &WeightVector::constant(&theta, 1.0), &sample, 0.0).map_err(|e| e.to_string()))
                .map(|v| v.min_value)
                .unwrap_or(f64::NEG_INFINITY);
            (name, margin)
        })
        .collect()
}

/// Consecutive differences of `C^-(W, a^k b) + J^s(b^{-1} a^{-k})`.
fn boundedness_sequence(seed: u64, kmax: usize) -> Result<Vec<f64>, String> {
    let spec = builtin_spec("sym2-fuchsian-schottky-sl3").expect("shipped");
    let theta = ThetaSet::full(3);
    let sw = WeightVector::constant(&theta, 1.0);
    let mut rng = rng_for(seed, 31, 0);
    let x = drand::base_point(3, &theta, Field::Real, 10.0, &mut rng);
    let (a, b) = (&spec.generators[0], &spec.generators[1]);
    let mut g = b.clone();
    let mut values = Vec::new();
    for _ in 0..kmax {
        g = a.mul(&g);
        let cm = densities::repelling_gram_cocycle(&x, &sw, &g).map_err(|e| e.to_string())?;
        let j = jordan::weighted_jacobian(&sw, &g.inv()).map_err(|e| e.to_string())?;
        values.push(cm + j);
    }
    Ok(values)
}

fn period_suite(seed: u64) -> Vec<CheckResult> {
    let s = Suite::PeriodIdentity;
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut notes = Vec::new();
    for (name, spec, sw) in period_identity_cases() {
        match period_identity_error(&spec, &sw, 6) {
            Ok((n, e)) => {
                worst = worst.max(e);
                count += n;
            }
            Err(e) => {
                worst = f64::INFINITY;
                notes.push(format!("{name}: {e}"));
            }
        }
    }
    out.push(CheckResult::new(s, "period-equals-cocycle-at-fixed-pair", count, worst, 1e-7).with_note(notes.join("; ")));

    let mut rng = rng_for(seed, 30, 0);
    let opts = SpectrumOptions { cross_check_every: 0, ..Default::default() };
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for (_, spec, sw) in period_identity_cases() {
        let theta = sw.theta();
        let h = element(lr::conditioned(spec.d, spec.field, 10.0, &mut rng), spec.field);
        let base = anosov::period_spectrum(&spec, &theta, &sw, 4, &opts);
        let conj = anosov::period_spectrum(&spec.conjugated(&h), &theta, &sw, 4, &opts);
        let opp = anosov::period_spectrum(&spec, &theta.opposite(spec.d), &sw.opposite(spec.d), 4, &opts);
        match (base, conj, opp) {
            (Ok(base), Ok(conj), Ok(opp)) => {
                for r in &base {
                    let scale = r.period.abs().max(1.0);
                    if let Some(c) = conj.iter().find(|x| x.word == r.word) {
                        worst = worst.max((c.period - r.period).abs() / scale);
                    }
                    let inv = r.word.inverse();
                    if let Some(o) = opp.iter().find(|x| x.word == inv) {
                        worst = worst.max((o.period - r.period).abs() / scale);
                    }
                    n += 1;
                }
            }
            _ => worst = f64::INFINITY,
        }
    }
    out.push(CheckResult::new(s, "period-conjugation-and-opposition", n, worst, 1e-8));

    let margins = admissibility_margins(4);
    let min_margin = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    let note = margins.iter().map(|(n, m)| format!("{n}={m:.4}")).collect::<Vec<_>>().join(" ");
    out.push(CheckResult {
        suite: s.name(),
        name: "constant-weight-admissible",
        samples: margins.len(),
        max_error: (-min_margin).max(0.0),
        tolerance: 0.0,
        passed: min_margin > 0.0,
        note,
    });

    // minimum period per length trends upward: positive least-squares slope
    // and the longest shell above the shortest
    let mut dips = 0usize;
    let mut lengths = 0usize;
    let mut worst_slope = f64::INFINITY;
    let mut rising = true;
    for (_, spec, sw) in period_identity_cases() {
        let recs = anosov::period_spectrum(&spec, &sw.theta(), &sw, 6, &opts).unwrap_or_default();
        let mins: Vec<f64> = (1..=6).map(|l| recs.iter().filter(|r| r.len == l).map(|r| r.period).fold(f64::INFINITY, f64::min)).collect();
        lengths += mins.len();
        dips += mins.windows(2).filter(|w| !(w[1] > w[0])).count();
        worst_slope = worst_slope.min(trend_slope(&mins));
        rising &= mins[mins.len() - 1] > mins[0];
    }
    out.push(CheckResult {
        suite: s.name(),
        name: "min-period-per-length-trend",
        samples: lengths,
        max_error: (-worst_slope).max(0.0),
        tolerance: 0.0,
        passed: worst_slope > 0.0 && rising,
        note: format!("smallest slope {worst_slope:.4}, {dips} local dips"),
    });

    match boundedness_sequence(seed, 10) {
        Ok(values) => {
            let last_step = (values[values.len() - 1] - values[values.len() - 2]).abs();
            let first_step = (values[1] - values[0]).abs();
            out.push(
                CheckResult::new(s, "cocycle-plus-jacobian-converges", values.len(), last_step, 1e-6)
                    .with_note(format!("first step {first_step:.3e}, limit {:.6}", values[values.len() - 1])),
            );
        }
        Err(e) => out.push(CheckResult::failed(s, "cocycle-plus-jacobian-converges", e)),
    }
    out
}

/// Least-squares slope of `ys` against `1, 2, ...`.
fn trend_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let mx = (n + 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 + 1.0 - mx;
        num += dx * (y - my);
        den += dx * dx;
    }
    num / den
}

// ---------------------------------------------------------------- geometry

/// `(failures, cases)` for full rank of omega iff every `s_alpha != 0`, over
/// all zero patterns with same-sign nonzero values, `d <= 4`, both fields.
pub fn regularity_pattern_results(seed: u64) -> (usize, usize, Vec<String>) {
    let mut rng = rng_for(seed, 40, 0);
    let mut cases = 0;
    let mut failures = Vec::new();
    for d in 2..=4 {
        for field in [Field::Real, Field::Complex] {
            let sys = RootSystem::new(d, field).expect("d >= 2");
            let theta = ThetaSet::full(d);
            let r = theta.len();
            for sign in [1.0, -1.0] {
                for mask in 0..(1u32 << r) {
                    let vals: Vec<f64> = (0..r).map(|i| if mask & (1 << i) != 0 { sign * rng.random_range(0.2..3.0) } else { 0.0 }).collect();
                    let s = WeightVector::new(&theta, &vals).expect("one value per root");
                    cases += 1;
                    match geometry::is_regular(&sys, &s, &theta) {
                        Ok(_) => {}
                        Err(e) => failures.push(format!("d={d} {} mask={mask:b}: {e}", field.symbol())),
                    }
                }
            }
        }
    }
    (failures.len(), cases, failures)
}

/// Eigenvalue signature defects `|pos - n| + |neg - n|` over random transverse pairs.
pub fn signature_defects(seed: u64, samples: usize) -> Vec<f64> {
    let idx: Vec<u64> = (0..samples as u64).collect();
    par::map_ordered(&idx, |&i| {
        let mut rng = rng_for(seed, 41, i);
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 2 + (i as usize % 3);
        let theta = random_theta(d, &mut rng);
        let x = drand::base_point(d, &theta, field, 10.0, &mut rng);
        match geometry::killing_metric_matrix(&x) {
            Ok(g) => {
                let n = g.nrows() / 2;
                let (p, q, z) = geometry::signature(&g);
                (p.abs_diff(n) + q.abs_diff(n) + z) as f64
            }
            Err(_) => f64::INFINITY,
        }
    })
}

fn geometry_suite(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Geometry;
    let mut out = Vec::new();
    let defects = signature_defects(seed, 50);
    out.push(CheckResult::new(s, "killing-metric-signature", defects.len(), max_of(defects), 0.0));

    let (fails, cases, notes) = regularity_pattern_results(seed);
    out.push(CheckResult::new(s, "regularity-zero-patterns", cases, fails as f64, 0.0).with_note(notes.join("; ")));

    let idx: Vec<u64> = (0..12).collect();
    let errs = par::map_ordered(&idx, |&i| {
        let mut rng = rng_for(seed, 42, i);
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 2 + (i as usize % 3);
        let theta = random_theta(d, &mut rng);
        let x = drand::base_point(d, &theta, field, 10.0, &mut rng);
        let s1 = random_weights(&theta, &mut rng);
        let s2 = random_weights(&theta, &mut rng);
        let sum = WeightVector::new(&theta, &theta.indices().iter().map(|&a| s1.get(a) + s2.get(a)).collect::<Vec<_>>()).expect("same roots");
        let w1 = geometry::omega_ell_matrix(&x, &s1).expect("transverse");
        let w2 = geometry::omega_ell_matrix(&x, &s2).expect("transverse");
        let w12 = geometry::omega_ell_matrix(&x, &sum).expect("transverse");
        let scale = w1.norm().max(1e-300);
        let n = w1.nrows() / 2;
        let linear = (w12 - (&w1 + w2)).norm() / scale;
        let lagrangian = w1.view((0, 0), (n, n)).norm().max(w1.view((n, n), (n, n)).norm()) / scale;
        let closed = geometry::closedness_defect(&x, &s1).expect("transverse") / scale;
        (linear, lagrangian, closed)
    });
    out.push(CheckResult::new(s, "omega-linear-in-weights", errs.len(), max_of(errs.iter().map(|e| e.0)), 1e-9));
    out.push(CheckResult::new(s, "omega-lagrangian-halves", errs.len(), max_of(errs.iter().map(|e| e.1)), 1e-9));
    out.push(CheckResult::new(s, "omega-jacobi-closedness", errs.len(), max_of(errs.iter().map(|e| e.2)), 1e-9));

    // contact pairings against the closed form (min(a,b) - ab/d) m / c
    let mut err: f64 = 0.0;
    let mut agree = 0;
    let mut total = 0;
    for d in 2..=6 {
        for field in [Field::Real, Field::Complex] {
            let sys = RootSystem::new(d, field).expect("d >= 2");
            let theta = ThetaSet::full(d);
            for b in 1..d {
                let mut vals = vec![0.0; d - 1];
                vals[b - 1] = 1.0;
                let sw = WeightVector::new(&theta, &vals).expect("one value per root");
                let rep = geometry::contact_test(&sys, &sw, &theta).expect("valid");
                for (a, v) in &rep.pairings {
                    let m = sys.m_alpha(b).expect("valid") as f64;
                    let expected = m * ((*a).min(b) as f64 - (*a * b) as f64 / d as f64) / sys.killing_scale();
                    err = err.max((v - expected).abs());
                }
                total += 1;
                agree += rep.agrees as usize;
            }
        }
    }
    out.push(
        CheckResult::new(s, "contact-pairing-closed-form", total, err, 1e-12)
            .with_note(format!("one-hot weights agreeing with the nonvanishing criterion: {agree}/{total}")),
    );
    out
}

// ---------------------------------------------------------------- zeta

/// `(product vs series, closed form, conjugation invariance)` errors.
pub fn zeta_errors(seed: u64) -> Result<(f64, f64, f64), String> {
    let mut rng = rng_for(seed, 50, 0);
    let spec = builtin_spec("sym2-fuchsian-schottky-sl3").expect("shipped");
    let theta = ThetaSet::full(3);
    let sw = WeightVector::constant(&theta, 1.0);
    let opts = SpectrumOptions { cross_check_every: 0, ..Default::default() };
    let min_period = anosov::period_spectrum(&spec, &theta, &sw, 1, &opts).map_err(|e| e.to_string())?[0].period;
    let rho = Representation::new(vec![lr::unitary(2, Field::Complex, &mut rng), lr::unitary(2, Field::Complex, &mut rng)]).map_err(|e| e.to_string())?;
    let job = ZetaJob { spec: &spec, theta: theta.clone(), s: sw.clone(), z: C64::new(2.0 / min_period, 0.7), rho: rho.clone(), max_len: 8 };
    let p = zeta::zeta_truncated(&job).map_err(|e| e.to_string())?;
    let t = zeta::log_zeta_series(&job).map_err(|e| e.to_string())?;
    let modes = (p.log_zeta - t.log_zeta).norm();

    let one = builtin_spec("diagonal-one-generator-sl3").expect("shipped");
    let t1 = ThetaSet::new(3, [1]).expect("valid");
    let mut closed: f64 = 0.0;
    for z in [C64::new(0.5, 0.0), C64::new(0.2, 3.0), C64::new(1.1, -0.8)] {
        let j = ZetaJob { spec: &one, theta: t1.clone(), s: WeightVector::constant(&t1, 1.0), z, rho: Representation::trivial(1, 1), max_len: 5 };
        let expected = -2.0 * (C64::new(1.0, 0.0) - (-z * 3.0 * 4f64.ln()).exp()).ln();
        closed = closed.max((zeta::zeta_truncated(&j).map_err(|e| e.to_string())?.log_zeta - expected).norm());
    }

    let h = lr::conditioned(2, Field::Complex, 10.0, &mut rng);
    let conj = ZetaJob { rho: rho.conjugated(&h).map_err(|e| e.to_string())?, max_len: 6, ..job.clone() };
    let plain = ZetaJob { max_len: 6, ..job };
    let a = zeta::zeta_truncated(&plain).map_err(|e| e.to_string())?.log_zeta;
    let b = zeta::zeta_truncated(&conj).map_err(|e| e.to_string())?.log_zeta;
    Ok((modes, closed, (a - b).norm()))
}

fn zeta_suite(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Zeta;
    match zeta_errors(seed) {
        Ok((modes, closed, conj)) => vec![
            CheckResult::new(s, "product-vs-trace-series", 1, modes, 1e-8),
            CheckResult::new(s, "one-generator-closed-form", 3, closed, 1e-10),
            CheckResult::new(s, "representation-conjugation", 1, conj, 1e-10),
        ],
        Err(e) => vec![CheckResult::failed(s, "zeta-evaluation", e)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ad_trace_matches_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for field in [Field::Real, Field::Complex] {
            let x = random_traceless(3, field, &mut rng);
            let y = random_traceless(3, field, &mut rng);
            let lib = RootSystem::new(3, field).unwrap().killing_form(&x, &y).unwrap();
            assert!((ad_trace_killing(&x, &y, field) - lib).abs() < 1e-10 * (1.0 + lib.abs()));
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().chain(&[Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), *s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn rootdata_suite_passes() {
        let r = run_suite(Suite::Rootdata, 1);
        assert!(r.all_passed(), "{}", r.render_text());
    }
}

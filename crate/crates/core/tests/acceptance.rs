//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines appear in order; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flagflow::check::{self, Suite};
use flagflow::geometry;
use flagflow::linalg::random as lr;
use flagflow::{CMat, CartanVector, Field, RootSystem, ThetaSet, WeightVector, C64};

const SEED: u64 = 2024;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn criterion(n: usize, title: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        if elapsed > b {
            o.passed = false;
            o.detail.push_str(&format!(" (over budget {:.0?})", b));
        }
    }
    println!("criterion {n:>2}: {} {title}: {} [{:.2?}]", if o.passed { "PASS" } else { "FAIL" }, o.detail, elapsed);
    o.passed
}

/// Real coordinates of a complex matrix in the standard basis of `gl(d, k)`.
fn real_coords(m: &CMat, field: Field) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len() * 2);
    for z in m.iter() {
        out.push(z.re);
        if field == Field::Complex {
            out.push(z.im);
        }
    }
    out
}

/// `tr(ad X ad Y)` on `gl(d, k)` seen as a real vector space. The centre adds
/// nothing, so this is the Killing form of `sl(d, k)`.
fn brute_force_killing(x: &CMat, y: &CMat, field: Field) -> f64 {
    let d = x.nrows();
    let scalars: Vec<C64> = match field {
        Field::Real => vec![C64::new(1.0, 0.0)],
        Field::Complex => vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
    };
    let n = d * d * scalars.len();
    let mut op = DMatrix::<f64>::zeros(n, n);
    let mut col = 0;
    for j in 0..d {
        for i in 0..d {
            for z in &scalars {
                let mut e = CMat::zeros(d, d);
                e[(i, j)] = *z;
                let ye = y * &e - &e * y;
                let xye = x * &ye - &ye * x;
                for (r, v) in real_coords(&xye, field).into_iter().enumerate() {
                    op[(r, col)] = v;
                }
                col += 1;
            }
        }
    }
    op.trace()
}

fn traceless(d: usize, field: Field, rng: &mut ChaCha8Rng) -> CMat {
    let mut m = lr::gaussian(d, d, field, rng);
    let t = m.trace() / d as f64;
    for i in 0..d {
        m[(i, i)] -= t;
    }
    m
}

fn c1_weight_rho() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut err: f64 = 0.0;
    let mut exact = true;
    for d in 2..=6 {
        for field in [Field::Real, Field::Complex] {
            let sys = RootSystem::new(d, field).unwrap();
            for j in 1..d {
                let m = sys.m_alpha(j).unwrap() as usize;
                exact &= m == if field == Field::Real { d } else { 2 * d };
                let theta = ThetaSet::new(d, [j]).unwrap();
                for _ in 0..8 {
                    let x = CartanVector::recentered((0..d).map(|_| rng.random_range(-5.0..5.0)).collect());
                    let lhs = 2.0 * sys.rho_theta(&theta, &x).unwrap();
                    let rhs = m as f64 * sys.fundamental_weight(j, &x).unwrap();
                    err = err.max((lhs - rhs).abs());
                }
            }
        }
    }
    outcome(exact && err < 1e-10, format!("m_alpha exact={exact}, max error {err:.3e}"))
}

fn c2_killing_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for d in 2..=4 {
        for field in [Field::Real, Field::Complex] {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + d as u64 + 10 * field.real_dim() as u64);
            let sys = RootSystem::new(d, field).unwrap();
            for _ in 0..50 {
                let x = traceless(d, field, &mut rng);
                let y = traceless(d, field, &mut rng);
                let lib = sys.killing_form(&x, &y).unwrap();
                let oracle = brute_force_killing(&x, &y, field);
                worst = worst.max((lib - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE));
                n += 1;
            }
        }
    }
    outcome(worst < 1e-9, format!("{n} pairs, max relative error {worst:.3e}"))
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn c3_jacobian() -> Outcome {
    let errs = check::jacobian_identity_errors(SEED, 100);
    let e = max_of(&errs);
    outcome(errs.len() == 200 && e < 1e-7, format!("{} elements, max relative error {e:.3e}", errs.len()))
}

fn c4_proximality() -> Outcome {
    let errs = check::proximality_identity_errors(SEED, 100);
    let e = max_of(&errs);
    outcome(errs.len() == 200 && e < 1e-7, format!("{} elements, max error {e:.3e}", errs.len()))
}

fn c5_cocycle() -> Outcome {
    let (rel, ind) = check::cocycle_errors(SEED, 200);
    let (a, b) = (max_of(&rel), max_of(&ind));
    outcome(a < 1e-9 && b < 1e-9, format!("relation {a:.3e}, section independence {b:.3e} over {} triples", rel.len()))
}

fn c6_period_identity() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, spec, s) in check::period_identity_cases() {
        match check::period_identity_error(&spec, &s, 6) {
            Ok((n, e)) => {
                // two-generator free group: 198 primitive classes up to length 6
                ok &= n == 198 && e < 1e-7;
                parts.push(format!("{name}: {n} classes, {e:.3e}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(ok, parts.join("; "))
}

fn c7_pairing() -> Outcome {
    let (spread, inv, hom) = check::pairing_law_errors(SEED, 100);
    outcome(spread < 1e-10 && inv < 1e-10 && hom < 1e-14, format!("basis spread {spread:.3e}, invariance {inv:.3e}, homogeneity {hom:.3e}"))
}

fn c8_multiflow() -> Outcome {
    let errs = check::multiflow_errors(SEED, 100);
    let e = max_of(&errs);
    outcome(errs.len() == 100 && e < 1e-12, format!("max error {e:.3e}"))
}

fn c9_regularity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut cases = 0;
    let mut bad = Vec::new();
    for d in 2..=4 {
        for field in [Field::Real, Field::Complex] {
            let sys = RootSystem::new(d, field).unwrap();
            for tmask in 1..(1u32 << (d - 1)) {
                let theta = ThetaSet::new(d, (1..d).filter(|j| tmask & (1 << (j - 1)) != 0)).unwrap();
                let r = theta.len();
                for zmask in 0..(1u32 << r) {
                    let vals: Vec<f64> = (0..r).map(|i| if zmask & (1 << i) != 0 { rng.random_range(0.2..3.0) } else { 0.0 }).collect();
                    let s = WeightVector::new(&theta, &vals).unwrap();
                    cases += 1;
                    match geometry::regularity_report(&sys, &s, &theta) {
                        Ok(rep) => {
                            let expected = zmask == (1 << r) - 1;
                            if rep.combinatorial != expected || rep.numerical != expected {
                                bad.push(format!("d={d} {} theta={:?} s={vals:?}", field.symbol(), theta.indices()));
                            }
                        }
                        Err(e) => bad.push(format!("d={d} {} theta={:?}: {e}", field.symbol(), theta.indices())),
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{cases} zero patterns, {} disagreements{}", bad.len(), bad.first().map(|b| format!(", first {b}")).unwrap_or_default()))
}

fn c10_signature() -> Outcome {
    let defects = check::signature_defects(SEED, 50);
    let bad = defects.iter().filter(|&&x| x != 0.0).count();
    outcome(defects.len() == 50 && bad == 0, format!("{} pairs, {bad} with wrong signature", defects.len()))
}

fn c11_admissibility() -> Outcome {
    let margins = check::admissibility_margins(5);
    let ok = !margins.is_empty() && margins.iter().all(|m| m.1 > 0.0);
    outcome(ok, margins.iter().map(|(n, m)| format!("{n} {m:.4}")).collect::<Vec<_>>().join(", "))
}

fn c12_zeta() -> Outcome {
    match check::zeta_errors(SEED) {
        Ok((modes, closed, conj)) => outcome(
            modes < 1e-8 && closed < 1e-10 && conj < 1e-10,
            format!("product vs series {modes:.3e}, closed form {closed:.3e}, conjugation {conj:.3e}"),
        ),
        Err(e) => outcome(false, e),
    }
}

fn c13_determinism() -> Outcome {
    let a = check::run_suite(Suite::All, 7);
    let b = check::run_suite(Suite::All, 7);
    let same = a.render_text() == b.render_text();
    let failing: Vec<&str> = a.results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    outcome(same && a.all_passed() && b.all_passed(), format!("{} checks, identical={same}, failing={failing:?}", a.results.len()))
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "weight/rho identity", Some(s(1)), c1_weight_rho),
        criterion(2, "Killing form oracle", None, c2_killing_oracle),
        criterion(3, "Jacobian-determinant identity", Some(s(5)), c3_jacobian),
        criterion(4, "proximality-spectral radius identity", None, c4_proximality),
        criterion(5, "cocycle algebra", None, c5_cocycle),
        criterion(6, "period identity", Some(s(30)), c6_period_identity),
        criterion(7, "pairing laws", None, c7_pairing),
        criterion(8, "multiflow equivariance", None, c8_multiflow),
        criterion(9, "regularity verdicts", None, c9_regularity),
        criterion(10, "Killing metric signature", None, c10_signature),
        criterion(11, "admissibility baseline", None, c11_admissibility),
        criterion(12, "zeta consistency", Some(s(30)), c12_zeta),
        criterion(13, "end-to-end determinism", Some(s(60)), c13_determinism),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

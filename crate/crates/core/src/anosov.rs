//! Free group specifications, cyclic words, limit-cone samples, admissibility
//! and period spectra.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::densities::{self, BasePoint, CanonicalSection, DensityError};
use crate::jordan::{self, GroupElement, JordanError};
use crate::linalg::{c, CMat, Field, MatrixRows};
use crate::par;
use crate::rootdata::{CartanVector, RootDataError, RootSystem, ThetaSet, WeightVector};

/// Partial products beyond `10^MAX_LOG10_NORM` abort evaluation.
pub const MAX_LOG10_NORM: f64 = 150.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnosovError {
    #[error("spec parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("partial product norm exceeds 1e{MAX_LOG10_NORM} (log10 norm {0:.1})")]
    MagnitudeOverflow(f64),
    #[error("limit cone sample is empty")]
    EmptySample,
    #[error("letter {0} is out of range for this spec")]
    BadLetter(u8),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}

#[derive(Serialize, Deserialize)]
struct GeneratorJson {
    label: String,
    matrix: MatrixRows,
}

#[derive(Serialize, Deserialize)]
struct GroupSpecJson {
    d: usize,
    field: Field,
    generators: Vec<GeneratorJson>,
    theta: Vec<usize>,
    #[serde(default)]
    notes: String,
}

/// Free generators of a (Schottky) subgroup of `SL(d, k)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecJson", into = "GroupSpecJson")]
pub struct GroupSpec {
    pub d: usize,
    pub field: Field,
    pub labels: Vec<String>,
    pub generators: Vec<GroupElement>,
    pub theta: ThetaSet,
    pub notes: String,
}

impl From<GroupSpec> for GroupSpecJson {
    fn from(s: GroupSpec) -> Self {
        GroupSpecJson {
            d: s.d,
            field: s.field,
            generators: s
                .labels
                .iter()
                .zip(&s.generators)
                .map(|(l, g)| GeneratorJson { label: l.clone(), matrix: MatrixRows::from_matrix(g.matrix(), s.field) })
                .collect(),
            theta: s.theta.indices().to_vec(),
            notes: s.notes,
        }
    }
}

impl TryFrom<GroupSpecJson> for GroupSpec {
    type Error = String;
    fn try_from(j: GroupSpecJson) -> Result<Self, String> {
        let mut labels = Vec::new();
        let mut generators = Vec::new();
        for g in j.generators {
            let m = g.matrix.to_matrix()?;
            if m.nrows() != j.d || m.ncols() != j.d {
                return Err(format!("generator {} is {}x{}, expected {}x{}", g.label, m.nrows(), m.ncols(), j.d, j.d));
            }
            let e = GroupElement::new(m, j.field).map_err(|e| format!("generator {}: {e}", g.label))?;
            labels.push(g.label);
            generators.push(e);
        }
        let theta = ThetaSet::new(j.d, j.theta).map_err(|e| e.to_string())?;
        GroupSpec::new(j.d, j.field, labels, generators, theta, j.notes).map_err(|e| e.to_string())
    }
}

impl GroupSpec {
    pub fn new(d: usize, field: Field, labels: Vec<String>, generators: Vec<GroupElement>, theta: ThetaSet, notes: String) -> Result<Self, AnosovError> {
        if generators.is_empty() {
            return Err(AnosovError::InvalidSpec("at least one generator is required".into()));
        }
        if labels.len() != generators.len() {
            return Err(AnosovError::InvalidSpec("one label per generator".into()));
        }
        if generators.len() > 64 {
            return Err(AnosovError::InvalidSpec("at most 64 generators".into()));
        }
        for (l, g) in labels.iter().zip(&generators) {
            if g.dim() != d || g.field() != field {
                return Err(AnosovError::InvalidSpec(format!("generator {l} has the wrong dimension or field")));
            }
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(AnosovError::InvalidSpec("generator labels must be distinct".into()));
        }
        Ok(GroupSpec { d, field, labels, generators, theta, notes })
    }

    pub fn from_json_str(s: &str) -> Result<Self, AnosovError> {
        serde_json::from_str(s).map_err(|e| AnosovError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Same group conjugated by `h`.
    pub fn conjugated(&self, h: &GroupElement) -> GroupSpec {
        GroupSpec { generators: self.generators.iter().map(|g| g.conjugate_by(h)).collect(), ..self.clone() }
    }

    pub fn root_system(&self) -> RootSystem {
        RootSystem::new(self.d, self.field).expect("spec dimension is at least 2")
    }
}

/// Specs shipped with the library, by name.
pub fn builtin_specs() -> Vec<(&'static str, GroupSpec)> {
    const RAW: [(&str, &str); 5] = [
        ("diagonal-one-generator-sl3", include_str!("../data/specs/diagonal-one-generator-sl3.json")),
        ("schottky-sl2r", include_str!("../data/specs/schottky-sl2r.json")),
        ("loxodromic-schottky-sl2c", include_str!("../data/specs/loxodromic-schottky-sl2c.json")),
        ("sym2-fuchsian-schottky-sl3", include_str!("../data/specs/sym2-fuchsian-schottky-sl3.json")),
        ("diagonal-schottky-sl4", include_str!("../data/specs/diagonal-schottky-sl4.json")),
    ];
    RAW.iter().map(|(n, s)| (*n, GroupSpec::from_json_str(s).expect("shipped spec parses"))).collect()
}

pub fn builtin_spec(name: &str) -> Option<GroupSpec> {
    builtin_specs().into_iter().find(|(n, _)| *n == name).map(|x| x.1)
}

/// Letter `2i` is generator `i`, letter `2i + 1` its inverse.
pub type Letter = u8;

fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

/// Reduced, cyclically reduced word stored as its lexicographically least rotation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CyclicWord(Vec<Letter>);

fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    (0..w.len()).map(|r| [&w[r..], &w[..r]].concat()).min().unwrap_or_default()
}

impl CyclicWord {
    /// Canonical representative; `None` unless `letters` is cyclically reduced.
    pub fn new(letters: Vec<Letter>) -> Option<Self> {
        let n = letters.len();
        for i in 0..n {
            if n > 1 && letters[(i + 1) % n] == inverse_letter(letters[i]) {
                return None;
            }
        }
        Some(CyclicWord(least_rotation(&letters)))
    }

    pub fn empty() -> Self {
        CyclicWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord(least_rotation(&self.0.iter().rev().map(|&l| inverse_letter(l)).collect::<Vec<_>>()))
    }

    /// Not a proper power.
    pub fn is_primitive(&self) -> bool {
        let n = self.0.len();
        n > 0 && (1..n).filter(|&p| n.is_multiple_of(p)).all(|p| (p..n).any(|i| self.0[i] != self.0[i - p]))
    }

    pub fn display(&self, labels: &[String]) -> String {
        let short = labels.iter().all(|l| l.chars().count() == 1);
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| {
                let name = labels.get((l / 2) as usize).cloned().unwrap_or_else(|| format!("g{}", l / 2));
                if l % 2 == 1 {
                    format!("{name}^-1")
                } else {
                    name
                }
            })
            .collect();
        parts.join(if short { "" } else { "." })
    }
}

/// Representatives of the primitive conjugacy classes of length `1..=max_len`
/// in the free group on `rank` generators, ordered by length then letters.
/// A class and its inverse are distinct classes and both appear.
pub fn enumerate_primitive_classes(rank: usize, max_len: usize) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    let letters = (2 * rank) as Letter;
    for len in 1..=max_len {
        let mut word = Vec::with_capacity(len);
        extend_words(&mut word, len, letters, &mut out);
    }
    out
}

fn extend_words(word: &mut Vec<Letter>, len: usize, letters: Letter, out: &mut Vec<CyclicWord>) {
    if word.len() == len {
        if len > 1 && word[0] == inverse_letter(word[len - 1]) {
            return;
        }
        if least_rotation(word) == *word {
            let w = CyclicWord(word.clone());
            if w.is_primitive() {
                out.push(w);
            }
        }
        return;
    }
    for l in 0..letters {
        if let Some(&last) = word.last() {
            if l == inverse_letter(last) {
                continue;
            }
        }
        // canonical words start with their smallest letter
        if let Some(&first) = word.first() {
            if l < first {
                continue;
            }
        }
        word.push(l);
        extend_words(word, len, letters, out);
        word.pop();
    }
}

/// Ordered product of generator matrices along the word.
pub fn evaluate_word(spec: &GroupSpec, w: &CyclicWord) -> Result<GroupElement, AnosovError> {
    let mut acc = GroupElement::identity(spec.d, spec.field);
    for &l in w.letters() {
        let g = spec.generators.get((l / 2) as usize).ok_or(AnosovError::BadLetter(l))?;
        acc = if l % 2 == 0 { acc.mul(g) } else { acc.mul(&g.inv()) };
        let lg = acc.matrix().norm().max(acc.inverse_matrix().norm()).log10();
        if lg > MAX_LOG10_NORM {
            return Err(AnosovError::MagnitudeOverflow(lg));
        }
    }
    Ok(acc)
}

/// Unit vectors `p_Theta(lambda) / |p_Theta(lambda)|`, tagged by word length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitConeSample {
    pub theta: ThetaSet,
    pub points: Vec<(usize, CartanVector)>,
    pub skipped: usize,
}

impl LimitConeSample {
    /// Largest distance between sample directions.
    pub fn spread(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (_, a) in &self.points {
            for (_, b) in &self.points {
                let dist = a.entries().iter().zip(b.entries()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                best = best.max(dist);
            }
        }
        best
    }
}

/// Below this norm a Jordan projection counts as zero (elliptic or parabolic).
const ZERO_LAMBDA: f64 = 1e-9;

pub fn limit_cone_sample(spec: &GroupSpec, theta: &ThetaSet, max_len: usize) -> Result<LimitConeSample, AnosovError> {
    let sys = spec.root_system();
    let words = enumerate_primitive_classes(spec.rank(), max_len);
    let projected = par::map_ordered(&words, |w| -> Result<Option<CartanVector>, AnosovError> {
        let g = evaluate_word(spec, w)?;
        let p = sys.project_to_a_theta(&jordan::jordan_projection(&g)?, theta)?;
        let n = p.norm();
        Ok((n > ZERO_LAMBDA).then(|| p.scaled(1.0 / n)))
    });
    let mut points = Vec::new();
    let mut skipped = 0;
    for (w, p) in words.iter().zip(projected) {
        match p? {
            Some(v) => points.push((w.len(), v)),
            None => skipped += 1,
        }
    }
    Ok(LimitConeSample { theta: theta.clone(), points, skipped })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    /// Minimum of `w^s_Theta` over the sample.
    pub min_value: f64,
    pub argmin: usize,
}

/// Sampled certificate that `w^s_Theta > margin` on the limit cone. The
/// functional is linear, so its minimum over the convex hull of the sample is
/// attained at a sample point and the vertex check reduces to the point check.
pub fn is_admissible(sys: &RootSystem, s: &WeightVector, sample: &LimitConeSample, margin: f64) -> Result<AdmissibilityVerdict, AnosovError> {
    if sample.points.is_empty() {
        return Err(AnosovError::EmptySample);
    }
    let mut min_value = f64::INFINITY;
    let mut argmin = 0;
    for (i, (_, p)) in sample.points.iter().enumerate() {
        let v = sys.weighted_weight(s, p)?;
        if v < min_value {
            min_value = v;
            argmin = i;
        }
    }
    Ok(AdmissibilityVerdict { admissible: min_value > margin, min_value, argmin })
}

/// One conjugacy class in a period spectrum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRecord {
    pub word: CyclicWord,
    pub label: String,
    pub len: usize,
    pub lambda: CartanVector,
    pub margins: Vec<(usize, f64)>,
    pub period: f64,
    pub proximal: bool,
    /// Relative difference between the cocycle at the fixed pair and the period.
    pub cocycle_error: Option<f64>,
    pub failure: Option<String>,
}

impl SpectrumRecord {
    pub fn margin_min(&self) -> f64 {
        self.margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    /// Cross-check every `n`-th record against the cocycle (0 disables).
    pub cross_check_every: usize,
    pub proximal_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { cross_check_every: 1, proximal_tol: jordan::DEFAULT_PROXIMAL_TOL }
    }
}

/// Period of `gamma` at its fixed pair computed through the canonical section.
pub fn cocycle_period(g: &GroupElement, theta: &ThetaSet, s: &WeightVector, tol: f64) -> Result<f64, String> {
    let dvec = theta.dvec(g.dim());
    let (fp, fm) = jordan::attracting_repelling_flags(g, &dvec, tol).map_err(|e| e.to_string())?;
    let x = BasePoint::new(fp, fm).map_err(|e: DensityError| e.to_string())?;
    densities::cocycle_at_fixed_point(&CanonicalSection { s: s.clone() }, &x, g).map_err(|e| e.to_string())
}

/// Periods `sum_alpha s_alpha m_alpha w_alpha(lambda(gamma))` over primitive
/// classes up to `max_len`, sorted by period then word. Per-word failures are
/// recorded in the record rather than aborting.
pub fn period_spectrum(spec: &GroupSpec, theta: &ThetaSet, s: &WeightVector, max_len: usize, opts: &SpectrumOptions) -> Result<Vec<SpectrumRecord>, AnosovError> {
    let sys = spec.root_system();
    for (a, _) in s.iter() {
        if !theta.contains(a) {
            return Err(AnosovError::RootData(RootDataError::WeightOutsideTheta(a)));
        }
    }
    let words = enumerate_primitive_classes(spec.rank(), max_len);
    let indexed: Vec<(usize, CyclicWord)> = words.into_iter().enumerate().collect();
    let records = par::map_ordered(&indexed, |(i, w)| -> Result<SpectrumRecord, AnosovError> {
        let g = evaluate_word(spec, w)?;
        let lambda = jordan::jordan_projection(&g)?;
        let verdict = jordan::is_theta_proximal(&g, theta, opts.proximal_tol)?;
        let period = sys.weighted_weight(s, &lambda)?;
        let mut rec = SpectrumRecord {
            label: w.display(&spec.labels),
            len: w.len(),
            word: w.clone(),
            lambda,
            margins: verdict.margins.clone(),
            period,
            proximal: verdict.proximal,
            cocycle_error: None,
            failure: None,
        };
        if !verdict.proximal {
            rec.failure = Some(format!("not proximal (margin {:.3e})", verdict.min_margin()));
        } else if opts.cross_check_every > 0 && i % opts.cross_check_every == 0 {
            match cocycle_period(&g, theta, s, opts.proximal_tol) {
                Ok(c) => rec.cocycle_error = Some((c - period).abs() / period.abs().max(1.0)),
                Err(e) => rec.failure = Some(e),
            }
        }
        Ok(rec)
    });
    let mut out = records.into_iter().collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.period.total_cmp(&b.period).then_with(|| a.len.cmp(&b.len)).then_with(|| a.word.cmp(&b.word)));
    Ok(out)
}

/// Matrix of `g` on binary forms of degree `k` in the basis `x^{k-i} y^i`:
/// column `j` holds the coefficients of `(a x + c y)^{k-j} (b x + d y)^j`.
pub fn sym_power_embed(g: &GroupElement, k: usize) -> Result<GroupElement, AnosovError> {
    if g.dim() != 2 || g.field() != Field::Real {
        return Err(AnosovError::InvalidSpec("symmetric powers take an element of SL(2,R)".into()));
    }
    let m = g.matrix();
    let (a, b, cc, d) = (m[(0, 0)].re, m[(0, 1)].re, m[(1, 0)].re, m[(1, 1)].re);
    let mut out = CMat::zeros(k + 1, k + 1);
    for j in 0..=k {
        let p = poly_pow(&[a, cc], k - j);
        let q = poly_pow(&[b, d], j);
        for (i, v) in poly_mul(&p, &q).into_iter().enumerate() {
            out[(i, j)] = c(v);
        }
    }
    Ok(GroupElement::new(out, Field::Real)?)
}

/// Coefficients in `x^{n-i} y^i` of a binary form; `[p, q]` is `p x + q y`.
fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(p: &[f64], n: usize) -> Vec<f64> {
    (0..n).fold(vec![1.0], |acc, _| poly_mul(&acc, p))
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..26u8).map(|i| ((b'a' + i) as char).to_string()).collect();
        write!(f, "{}", self.display(&labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_rows, random as lr};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn diag_spec() -> GroupSpec {
        builtin_spec("diagonal-one-generator-sl3").unwrap()
    }

    #[test]
    fn enumeration_small() {
        let w1 = enumerate_primitive_classes(2, 1);
        assert_eq!(w1.len(), 4);
        let w2 = enumerate_primitive_classes(2, 2);
        let names: BTreeSet<String> = w2.iter().filter(|w| w.len() == 2).map(|w| w.to_string()).collect();
        let expected: BTreeSet<String> = ["ab", "ab^-1", "a^-1b", "a^-1b^-1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(names, expected);
        assert!(w2.iter().all(|w| w.letters() != [0, 0]));
    }

    /// All words over the alphabet, deduplicated by rotation.
    fn brute_force(rank: usize, len: usize) -> BTreeSet<Vec<u8>> {
        let k = 2 * rank;
        let mut out = BTreeSet::new();
        for code in 0..k.pow(len as u32) {
            let w: Vec<u8> = (0..len).map(|i| ((code / k.pow(i as u32)) % k) as u8).collect();
            let cyc_reduced = (0..len).all(|i| len == 1 || w[(i + 1) % len] != w[i] ^ 1);
            if !cyc_reduced {
                continue;
            }
            let rots: Vec<Vec<u8>> = (0..len).map(|r| [&w[r..], &w[..r]].concat()).collect();
            let power = rots[1..].iter().any(|r| *r == w);
            if !power {
                out.insert(rots.into_iter().min().unwrap());
            }
        }
        out
    }

    fn moebius(n: usize) -> i64 {
        let (mut n, mut k, mut mu) = (n, 2, 1);
        while k * k <= n {
            if n % k == 0 {
                n /= k;
                if n % k == 0 {
                    return 0;
                }
                mu = -mu;
            }
            k += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }

    #[test]
    fn enumeration_matches_oracles() {
        for rank in 1..=2 {
            let all = enumerate_primitive_classes(rank, 6);
            for len in 1..=6 {
                let ours: BTreeSet<Vec<u8>> = all.iter().filter(|w| w.len() == len).map(|w| w.letters().to_vec()).collect();
                assert_eq!(ours, brute_force(rank, len), "rank {rank} len {len}");
                // necklace count from cyclically reduced word counts
                let q = 2 * rank as i64 - 1;
                let cr = |m: usize| q.pow(m as u32) + 1 + (rank as i64 - 1) * (1 + if m % 2 == 0 { 1 } else { -1 });
                let total: i64 = (1..=len).filter(|m| len % m == 0).map(|m| moebius(len / m) * cr(m)).sum();
                assert_eq!(ours.len() as i64, total / len as i64, "rank {rank} len {len}");
            }
        }
    }

    #[test]
    fn word_evaluation() {
        let spec = builtin_spec("sym2-fuchsian-schottky-sl3").unwrap();
        let id = evaluate_word(&spec, &CyclicWord::empty()).unwrap();
        assert!((id.matrix() - CMat::identity(3, 3)).norm() < 1e-15);
        let w = CyclicWord::new(vec![0, 2, 2, 1, 3]).unwrap_or_else(|| CyclicWord::new(vec![0, 2, 0, 3]).unwrap());
        let g = evaluate_word(&spec, &w).unwrap();
        let gi = evaluate_word(&spec, &w.inverse()).unwrap();
        // the inverse class is conjugate to g^{-1}
        let l1 = jordan::jordan_projection(&g.inv()).unwrap();
        let l2 = jordan::jordan_projection(&gi).unwrap();
        assert!(l1.entries().iter().zip(l2.entries()).all(|(a, b)| (a - b).abs() < 1e-9));
        let letters = w.letters().to_vec();
        let mut raw = GroupElement::identity(3, Field::Real);
        for &l in &letters {
            raw = raw.mul(&if l % 2 == 0 { spec.generators[(l / 2) as usize].clone() } else { spec.generators[(l / 2) as usize].inv() });
        }
        let short = [0u8, 2];
        let mut back = GroupElement::identity(3, Field::Real);
        for &l in &short {
            back = back.mul(&spec.generators[(l / 2) as usize]);
        }
        for &l in short.iter().rev() {
            back = back.mul(&if l % 2 == 0 { spec.generators[(l / 2) as usize].inv() } else { spec.generators[(l / 2) as usize].clone() });
        }
        assert!((back.matrix() - CMat::identity(3, 3)).norm() < 1e-10);
        let rotated: Vec<u8> = [&letters[2..], &letters[..2]].concat();
        let mut rg = GroupElement::identity(3, Field::Real);
        for &l in &rotated {
            rg = rg.mul(&if l % 2 == 0 { spec.generators[(l / 2) as usize].clone() } else { spec.generators[(l / 2) as usize].inv() });
        }
        let a = jordan::jordan_projection(&rg).unwrap();
        let b = jordan::jordan_projection(&g).unwrap();
        assert!(a.entries().iter().zip(b.entries()).all(|(x, y)| (x - y).abs() < 1e-9));
    }

    #[test]
    fn overflow_guard() {
        let big = GroupElement::new(from_rows(&[&[1e20, 0.0], &[0.0, 1e-20]]), Field::Real).unwrap();
        let spec = GroupSpec::new(2, Field::Real, vec!["a".into()], vec![big], ThetaSet::full(2), String::new()).unwrap();
        let w = CyclicWord::new(vec![0; 8]).unwrap();
        assert!(matches!(evaluate_word(&spec, &w), Err(AnosovError::MagnitudeOverflow(_))));
    }

    #[test]
    fn limit_cones() {
        let spec = builtin_spec("schottky-sl2r").unwrap();
        let one = GroupSpec::new(2, Field::Real, vec!["a".into()], vec![spec.generators[0].clone()], ThetaSet::full(2), String::new()).unwrap();
        let s1 = limit_cone_sample(&one, &ThetaSet::full(2), 4).unwrap();
        assert_eq!(s1.points.len(), 2);
        assert!(s1.spread() < 1e-12);

        let sym = builtin_spec("sym2-fuchsian-schottky-sl3").unwrap();
        let theta = ThetaSet::full(3);
        let sample = limit_cone_sample(&sym, &theta, 4).unwrap();
        let ray = [1.0 / 2f64.sqrt(), 0.0, -1.0 / 2f64.sqrt()];
        for (_, p) in &sample.points {
            assert!(p.entries().iter().zip(ray).all(|(a, b)| (a - b).abs() < 1e-9));
        }
        let generic = builtin_spec("diagonal-schottky-sl4").unwrap();
        assert!(limit_cone_sample(&generic, &ThetaSet::full(4), 3).unwrap().spread() > 1e-2);
    }

    #[test]
    fn admissibility() {
        let sym = builtin_spec("sym2-fuchsian-schottky-sl3").unwrap();
        let sys = sym.root_system();
        let theta = ThetaSet::full(3);
        let sample = limit_cone_sample(&sym, &theta, 3).unwrap();
        assert!(is_admissible(&sys, &WeightVector::constant(&theta, 1.0), &sample, 0.0).unwrap().admissible);
        assert!(!is_admissible(&sys, &WeightVector::constant(&theta, 0.0), &sample, 0.0).unwrap().admissible);
        // single ray: admissible iff 3 (s_1 w_1 + s_2 w_2)(1, 0, -1) = 3 (s_1 + s_2) > 0
        for (s1, s2) in [(1.0, -0.5), (-1.0, 0.5), (2.0, -2.0)] {
            let s = WeightVector::new(&theta, &[s1, s2]).unwrap();
            let v = is_admissible(&sys, &s, &sample, 0.0).unwrap();
            assert_eq!(v.admissible, s1 + s2 > 1e-12, "{s1} {s2}");
            assert!((v.min_value - 3.0 * (s1 + s2) / 2f64.sqrt()).abs() < 1e-9);
        }
        let empty = LimitConeSample { theta: theta.clone(), points: vec![], skipped: 0 };
        assert!(matches!(is_admissible(&sys, &WeightVector::constant(&theta, 1.0), &empty, 0.0), Err(AnosovError::EmptySample)));
    }

    #[test]
    fn period_examples() {
        let spec = diag_spec();
        let theta = ThetaSet::new(3, [1]).unwrap();
        let s = WeightVector::constant(&theta, 1.0);
        let recs = period_spectrum(&spec, &theta, &s, 3, &SpectrumOptions::default()).unwrap();
        assert_eq!(recs.len(), 2);
        for r in &recs {
            assert!((r.period - 3.0 * 4f64.ln()).abs() < 1e-12);
            assert!(r.cocycle_error.unwrap() < 1e-10);
        }
        let doubled = period_spectrum(&spec, &theta, &s.scaled(2.0), 3, &SpectrumOptions::default()).unwrap();
        assert!((doubled[0].period - 2.0 * recs[0].period).abs() < 1e-12);

        let sl4 = builtin_spec("diagonal-schottky-sl4").unwrap();
        let theta = ThetaSet::new(4, [1, 3]).unwrap();
        let s = WeightVector::new(&theta, &[0.7, 1.3]).unwrap();
        let opts = SpectrumOptions { cross_check_every: 0, ..Default::default() };
        let fwd = period_spectrum(&sl4, &theta, &s, 3, &opts).unwrap();
        let opp = period_spectrum(&sl4, &theta.opposite(4), &s.opposite(4), 3, &opts).unwrap();
        for r in &fwd {
            let inv = r.word.inverse();
            let o = opp.iter().find(|x| x.word == inv).unwrap();
            assert!((o.period - r.period).abs() < 1e-9 * r.period.abs());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = GroupElement::new(lr::conditioned(4, Field::Real, 5.0, &mut rng), Field::Real).unwrap();
        let conj = period_spectrum(&sl4.conjugated(&h), &theta, &s, 3, &opts).unwrap();
        for (a, b) in fwd.iter().zip(&conj) {
            assert_eq!(a.word, b.word);
            assert!((a.period - b.period).abs() < 1e-8 * a.period.abs().max(1.0));
        }
    }

    #[test]
    fn sym_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = GroupElement::new(lr::special_linear(2, Field::Real, &mut rng), Field::Real).unwrap();
        assert!((sym_power_embed(&g, 1).unwrap().matrix() - g.matrix()).norm() < 1e-14);
        let t = 1.7;
        let d = GroupElement::new(from_rows(&[&[t, 0.0], &[0.0, 1.0 / t]]), Field::Real).unwrap();
        let e = sym_power_embed(&d, 2).unwrap();
        assert!((e.matrix() - crate::linalg::diag_real(&[t * t, 1.0, 1.0 / (t * t)])).norm() < 1e-12);
        for k in 2..=4 {
            for _ in 0..10 {
                let a = GroupElement::new(lr::special_linear(2, Field::Real, &mut rng), Field::Real).unwrap();
                let b = GroupElement::new(lr::special_linear(2, Field::Real, &mut rng), Field::Real).unwrap();
                let lhs = sym_power_embed(&a.mul(&b), k).unwrap();
                let rhs = sym_power_embed(&a, k).unwrap().mul(&sym_power_embed(&b, k).unwrap());
                assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-9 * lhs.matrix().norm());
            }
        }
    }

    #[test]
    fn spec_json_round_trip_and_errors() {
        for (name, spec) in builtin_specs() {
            let back = GroupSpec::from_json_str(&spec.to_json_string()).unwrap();
            assert_eq!(back.labels, spec.labels, "{name}");
            for (a, b) in back.generators.iter().zip(&spec.generators) {
                assert!((a.matrix() - b.matrix()).norm() == 0.0);
            }
        }
        let err = GroupSpec::from_json_str("{\n  \"d\": 2,\n  \"field\": \"R\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, AnosovError::Parse { line: 4, .. }), "{err:?}");
        let not_sl = r#"{"d":2,"field":"R","generators":[{"label":"a","matrix":[[2,0],[0,1]]}],"theta":[1]}"#;
        assert!(GroupSpec::from_json_str(not_sl).is_err());
    }
}

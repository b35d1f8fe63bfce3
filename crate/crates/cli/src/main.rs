use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use flagflow::anosov::{self, GroupSpec, SpectrumOptions};
use flagflow::check::{self, Suite};
use flagflow::densities::BasePoint;
use flagflow::flags;
use flagflow::geometry;
use flagflow::jordan::{self, DEFAULT_PROXIMAL_TOL};
use flagflow::linalg::MatrixRows;
use flagflow::zeta::{self, Representation, ZetaJob, ZetaMode};
use flagflow::{Field, RootSystem, ThetaSet, WeightVector, C64, VERSION};

mod output;

use output::{emit, num, Format, Table};

#[derive(Parser)]
#[command(name = "flagflow", version, about = "Invariants of Anosov subgroups of SL(d,R) and SL(d,C)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Proximality and fixed-point tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_PROXIMAL_TOL)]
    tol: f64,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Group spec JSON file, or the name of a shipped spec.
    #[arg(long)]
    spec: String,
    /// Comma-separated simple root indices; defaults to the spec's theta.
    #[arg(long, value_delimiter = ',')]
    theta: Option<Vec<usize>>,
    /// Comma-separated weights, one per root of theta; defaults to all ones.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    s: Option<Vec<f64>>,
    /// Longest cyclic word to enumerate.
    #[arg(long, default_value_t = 4)]
    max_len: usize,
}

#[derive(Args, Clone)]
struct RootArgs {
    #[arg(long)]
    d: usize,
    /// R or C.
    #[arg(long, default_value = "R")]
    field: Field,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Product,
    Series,
}

#[derive(Subcommand)]
enum Command {
    /// Simple roots, fundamental weights, multiplicities and the opposition involution.
    Roots(RootArgs),
    /// Jordan projections, proximality margins and Jacobian class functions of primitive classes.
    Jordan(SpecArgs),
    /// Attracting and repelling flags of primitive classes.
    Flags(SpecArgs),
    /// Period spectrum: word,len,lambda_1..lambda_d,period,margin_min.
    Periods {
        #[command(flatten)]
        spec: SpecArgs,
        /// Cross-check every n-th class against the cocycle (0 disables).
        #[arg(long, default_value_t = 1)]
        cross_check: usize,
    },
    /// Normalised Jordan projections sampling the limit cone.
    Cone(SpecArgs),
    /// Sampled admissibility of the weight on the limit cone.
    Admissible {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 0.0)]
        margin: f64,
    },
    /// Truncated twisted zeta function.
    Zeta {
        #[command(flatten)]
        spec: SpecArgs,
        /// Complex arguments such as 0.5 or 0.5+2i; repeatable.
        #[arg(long, required = true, allow_hyphen_values = true)]
        z: Vec<String>,
        /// Representation JSON file; defaults to the trivial character.
        #[arg(long)]
        rho: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "product")]
        mode: ModeArg,
    },
    /// Contact pairings and regularity of the period 2-form.
    Contact {
        #[command(flatten)]
        root: RootArgs,
        #[arg(long, value_delimiter = ',')]
        theta: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Option<Vec<f64>>,
    },
    /// Run the numerical verification suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

struct Ctx {
    format: Format,
    out: Option<PathBuf>,
    tol: f64,
    seed: u64,
}

impl Ctx {
    fn table(&self, command: &str, columns: Vec<String>) -> Table {
        let mut t = Table::new(columns);
        t.meta("flagflow", VERSION);
        t.meta("command", command);
        t.meta("seed", self.seed);
        t.meta("tol", format!("{:e}", self.tol));
        t
    }

    fn write(&self, t: &Table) -> Result<()> {
        emit(&t.render(self.format)?, self.out.as_deref())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("FLAGFLOW_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                flagflow::set_thread_limit(n);
            }
            _ => eprintln!("warning: ignoring FLAGFLOW_THREADS={n:?}"),
        }
    }
    let ctx = Ctx { format: cli.format, out: cli.out.clone(), tol: cli.tol, seed: cli.seed };
    match run(cli.command, &ctx) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns `Ok(false)` when the command ran but its verdict is negative.
fn run(command: Command, ctx: &Ctx) -> Result<bool> {
    if !(ctx.tol > 0.0) {
        bail!("--tol must be positive");
    }
    match command {
        Command::Roots(a) => cmd_roots(ctx, &a),
        Command::Jordan(a) => cmd_jordan(ctx, &a),
        Command::Flags(a) => cmd_flags(ctx, &a),
        Command::Periods { spec, cross_check } => cmd_periods(ctx, &spec, cross_check),
        Command::Cone(a) => cmd_cone(ctx, &a),
        Command::Admissible { spec, margin } => cmd_admissible(ctx, &spec, margin),
        Command::Zeta { spec, z, rho, mode } => cmd_zeta(ctx, &spec, &z, rho.as_deref(), mode),
        Command::Contact { root, theta, s } => cmd_contact(ctx, &root, theta, s),
        Command::Check { suite } => cmd_check(ctx, suite),
    }
}

fn load_spec(arg: &str) -> Result<GroupSpec> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return GroupSpec::from_json_str(&text).with_context(|| format!("in {}", path.display()));
    }
    anosov::builtin_spec(arg).ok_or_else(|| {
        let names: Vec<&str> = anosov::builtin_specs().into_iter().map(|(n, _)| n).collect();
        anyhow!("no file {arg:?} and no shipped spec of that name (shipped: {})", names.join(", "))
    })
}

struct Resolved {
    spec: GroupSpec,
    theta: ThetaSet,
    s: WeightVector,
}

fn resolve(a: &SpecArgs) -> Result<Resolved> {
    let spec = load_spec(&a.spec)?;
    let theta = match &a.theta {
        Some(t) => ThetaSet::new(spec.d, t.iter().copied())?,
        None => spec.theta.clone(),
    };
    let s = weights(&theta, a.s.as_deref())?;
    Ok(Resolved { spec, theta, s })
}

fn weights(theta: &ThetaSet, s: Option<&[f64]>) -> Result<WeightVector> {
    match s {
        Some(v) => {
            if v.len() != theta.len() {
                bail!("--s has {} values but theta {:?} has {} roots", v.len(), theta.indices(), theta.len());
            }
            Ok(WeightVector::new(theta, v)?)
        }
        None => Ok(WeightVector::constant(theta, 1.0)),
    }
}

fn list(v: &[impl ToString]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn spec_meta(t: &mut Table, a: &SpecArgs, r: &Resolved) {
    t.meta("spec", &a.spec);
    t.meta("d", r.spec.d);
    t.meta("field", r.spec.field.symbol());
    t.meta("theta", list(r.theta.indices()));
    t.meta("s", list(&r.s.values()));
    t.meta("max_len", a.max_len);
}

fn lambda_columns(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("lambda_{i}")).collect()
}

fn cmd_roots(ctx: &Ctx, a: &RootArgs) -> Result<bool> {
    let sys = RootSystem::new(a.d, a.field)?;
    let d = a.d;
    let mut cols = vec!["j".to_string()];
    cols.extend((1..=d).map(|i| format!("alpha_x{i}")));
    cols.extend((1..=d).map(|i| format!("w_x{i}")));
    cols.extend(["m_alpha".into(), "iota_o".into()]);
    let mut t = ctx.table("roots", cols);
    t.meta("d", d);
    t.meta("field", a.field.symbol());
    t.meta("killing_scale", sys.killing_scale());
    t.meta("check", "2 rho_{alpha_j} = m_alpha w_{alpha_j}");
    for j in 1..d {
        let mut row = vec![Value::from(j)];
        row.extend((1..=d).map(|i| Value::from(if i == j { 1 } else if i == j + 1 { -1 } else { 0 })));
        row.extend((1..=d).map(|i| Value::from(u8::from(i <= j))));
        row.push(Value::from(sys.m_alpha(j)?));
        row.push(Value::from(d - j));
        t.push(row);
    }
    ctx.write(&t)?;
    Ok(true)
}

fn cmd_jordan(ctx: &Ctx, a: &SpecArgs) -> Result<bool> {
    let r = resolve(a)?;
    let mut cols = vec!["word".to_string(), "len".into()];
    cols.extend(lambda_columns(r.spec.d));
    cols.extend(["margin_min".into(), "proximal".into(), "jacobian".into(), "weighted_jacobian".into()]);
    let mut t = ctx.table("jordan", cols);
    spec_meta(&mut t, a, &r);
    t.meta("check", "jacobian = log |det Ad(g)| on the nilradical at the attracting flag");
    for w in anosov::enumerate_primitive_classes(r.spec.rank(), a.max_len) {
        let g = anosov::evaluate_word(&r.spec, &w)?;
        let lambda = jordan::jordan_projection(&g)?;
        let verdict = jordan::is_theta_proximal(&g, &r.theta, ctx.tol)?;
        let mut row = vec![Value::from(w.display(&r.spec.labels)), Value::from(w.len())];
        row.extend(lambda.entries().iter().map(|&x| num(x)));
        row.push(num(verdict.min_margin()));
        row.push(Value::from(verdict.proximal));
        row.push(num(jordan::jacobian_class_fn(&r.theta, &g)?));
        row.push(num(jordan::weighted_jacobian(&r.s, &g)?));
        t.push(row);
    }
    ctx.write(&t)?;
    Ok(true)
}

fn cmd_flags(ctx: &Ctx, a: &SpecArgs) -> Result<bool> {
    let r = resolve(a)?;
    let dvec = r.theta.dvec(r.spec.d);
    let cols = ["word", "len", "transversality", "attracting_residual", "repelling_residual", "fixed_residual", "failure"];
    let mut t = ctx.table("flags", cols.iter().map(|s| s.to_string()).collect());
    spec_meta(&mut t, a, &r);
    t.meta("flag_type", list(&dvec));
    t.meta("check", "g fixes its attracting and repelling flags, which are transverse");
    for w in anosov::enumerate_primitive_classes(r.spec.rank(), a.max_len) {
        let g = anosov::evaluate_word(&r.spec, &w)?;
        let mut row = vec![Value::from(w.display(&r.spec.labels)), Value::from(w.len())];
        let res = jordan::attracting_repelling_flags(&g, &dvec, ctx.tol).map_err(|e| e.to_string()).and_then(|(fp, fm)| {
            let margin = flags::transversality_margin(&fp, &fm).map_err(|e| e.to_string())?;
            let ra = fp.act(&g).distance(&fp);
            let rr = fm.act(&g).distance(&fm);
            let fixed = BasePoint::new(fp, fm).map_err(|e| e.to_string())?.fixed_residual(&g);
            Ok((margin, ra, rr, fixed))
        });
        match res {
            Ok((m, ra, rr, fx)) => row.extend([num(m), num(ra), num(rr), num(fx), Value::Null]),
            Err(e) => row.extend([Value::Null, Value::Null, Value::Null, Value::Null, Value::from(e)]),
        }
        t.push(row);
    }
    ctx.write(&t)?;
    Ok(true)
}

fn admissibility(r: &Resolved, max_len: usize, margin: f64) -> Result<(anosov::AdmissibilityVerdict, anosov::LimitConeSample)> {
    let sample = anosov::limit_cone_sample(&r.spec, &r.theta, max_len)?;
    let verdict = anosov::is_admissible(&r.spec.root_system(), &r.s, &sample, margin)?;
    Ok((verdict, sample))
}

fn cmd_periods(ctx: &Ctx, a: &SpecArgs, cross_check: usize) -> Result<bool> {
    let r = resolve(a)?;
    let (verdict, _) = admissibility(&r, a.max_len, 0.0)?;
    let opts = SpectrumOptions { cross_check_every: cross_check, proximal_tol: ctx.tol };
    let recs = anosov::period_spectrum(&r.spec, &r.theta, &r.s, a.max_len, &opts)?;
    let mut cols = vec!["word".to_string(), "len".into()];
    cols.extend(lambda_columns(r.spec.d));
    cols.extend(["period".into(), "margin_min".into()]);
    let mut t = ctx.table("periods", cols);
    spec_meta(&mut t, a, &r);
    t.meta("cross_check_every", cross_check);
    t.meta("admissibility_margin", verdict.min_value);
    let worst = recs.iter().filter_map(|x| x.cocycle_error).fold(0.0f64, f64::max);
    let failures = recs.iter().filter(|x| x.failure.is_some()).count();
    t.meta("check", format!("period = cocycle at the fixed pair; worst relative error {worst:.3e}, failures {failures}"));
    for rec in &recs {
        let mut row = vec![Value::from(rec.label.clone()), Value::from(rec.len)];
        row.extend(rec.lambda.entries().iter().map(|&x| num(x)));
        row.push(num(rec.period));
        row.push(num(rec.margin_min()));
        t.push(row);
    }
    ctx.write(&t)?;
    for rec in recs.iter().filter(|x| x.failure.is_some()) {
        eprintln!("warning: {}: {}", rec.label, rec.failure.as_deref().unwrap_or_default());
    }
    if !verdict.admissible {
        eprintln!("error: weight is not admissible on the sampled cone (margin {:e})", verdict.min_value);
    }
    Ok(verdict.admissible)
}

fn cmd_cone(ctx: &Ctx, a: &SpecArgs) -> Result<bool> {
    let r = resolve(a)?;
    let sample = anosov::limit_cone_sample(&r.spec, &r.theta, a.max_len)?;
    let words = anosov::enumerate_primitive_classes(r.spec.rank(), a.max_len);
    let mut cols = vec!["len".to_string()];
    cols.extend((1..=r.spec.d).map(|i| format!("p_{i}")));
    let mut t = ctx.table("cone", cols);
    spec_meta(&mut t, a, &r);
    t.meta("classes", words.len());
    t.meta("skipped", sample.skipped);
    t.meta("spread", sample.spread());
    t.meta("check", "unit projections of Jordan projections to a_theta");
    for (len, p) in &sample.points {
        let mut row = vec![Value::from(*len)];
        row.extend(p.entries().iter().map(|&x| num(x)));
        t.push(row);
    }
    ctx.write(&t)?;
    Ok(true)
}

fn cmd_admissible(ctx: &Ctx, a: &SpecArgs, margin: f64) -> Result<bool> {
    let r = resolve(a)?;
    let (verdict, sample) = admissibility(&r, a.max_len, margin)?;
    let mut t = ctx.table("admissible", ["admissible", "min_value", "argmin_len", "margin", "samples"].map(String::from).to_vec());
    spec_meta(&mut t, a, &r);
    t.meta("check", "w^s_theta positive on the sampled limit cone");
    t.push(vec![
        Value::from(verdict.admissible),
        num(verdict.min_value),
        Value::from(sample.points[verdict.argmin].0),
        num(margin),
        Value::from(sample.points.len()),
    ]);
    ctx.write(&t)?;
    Ok(verdict.admissible)
}

#[derive(Deserialize)]
struct RhoImage {
    label: String,
    matrix: MatrixRows,
}

#[derive(Deserialize)]
struct RhoJson {
    images: Vec<RhoImage>,
}

fn load_rho(path: &Path, spec: &GroupSpec) -> Result<Representation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed: RhoJson = serde_json::from_str(&text).map_err(|e| anyhow!("{}: parse error at line {}, column {}: {e}", path.display(), e.line(), e.column()))?;
    let mut images = Vec::new();
    for label in &spec.labels {
        let img = parsed.images.iter().find(|i| &i.label == label).ok_or_else(|| anyhow!("representation has no image for generator {label}"))?;
        images.push(img.matrix.to_matrix().map_err(|e| anyhow!("image of {label}: {e}"))?);
    }
    Ok(Representation::new(images)?)
}

fn parse_complex(s: &str) -> Result<C64> {
    s.trim().parse::<C64>().map_err(|_| anyhow!("cannot parse complex number {s:?} (try 0.5 or 0.5+2i)"))
}

fn cmd_zeta(ctx: &Ctx, a: &SpecArgs, zs: &[String], rho: Option<&Path>, mode: ModeArg) -> Result<bool> {
    let r = resolve(a)?;
    let rho = match rho {
        Some(p) => load_rho(p, &r.spec)?,
        None => Representation::trivial(r.spec.rank(), 1),
    };
    let mode = match mode {
        ModeArg::Product => ZetaMode::Product,
        ModeArg::Series => ZetaMode::TraceSeries,
    };
    let cols = ["z_re", "z_im", "log_zeta_re", "log_zeta_im", "n_classes", "maxLen", "tail_estimate"];
    let mut t = ctx.table("zeta", cols.iter().map(|s| s.to_string()).collect());
    spec_meta(&mut t, a, &r);
    t.meta("mode", if mode == ZetaMode::Product { "product" } else { "trace-series" });
    t.meta("rho_dim", rho.dim());
    t.meta("check", "-log det(1 - A) = sum_m tr(A^m)/m across modes");
    for zs in zs {
        let z = parse_complex(zs)?;
        let job = ZetaJob { spec: &r.spec, theta: r.theta.clone(), s: r.s.clone(), z, rho: rho.clone(), max_len: a.max_len };
        let v = zeta::zeta(&job, mode)?;
        if v.diagnostics.below_abscissa {
            eprintln!("warning: Re z = {} is at or below the empirical abscissa {:.4}", z.re, v.diagnostics.abscissa);
        }
        t.push(vec![
            num(z.re),
            num(z.im),
            num(v.log_zeta.re),
            num(v.log_zeta.im),
            Value::from(v.diagnostics.n_classes),
            Value::from(a.max_len),
            num(v.diagnostics.tail_estimate),
        ]);
    }
    ctx.write(&t)?;
    Ok(true)
}

fn cmd_contact(ctx: &Ctx, a: &RootArgs, theta: Option<Vec<usize>>, s: Option<Vec<f64>>) -> Result<bool> {
    let sys = RootSystem::new(a.d, a.field)?;
    let theta = match theta {
        Some(t) => ThetaSet::new(a.d, t)?,
        None => ThetaSet::full(a.d),
    };
    let s = weights(&theta, s.as_deref())?;
    let contact = geometry::contact_test(&sys, &s, &theta)?;
    let regular = geometry::regularity_report(&sys, &s, &theta);
    let mut t = ctx.table("contact", ["alpha", "s_alpha", "pairing", "pairing_nonzero", "s_nonzero"].map(String::from).to_vec());
    t.meta("d", a.d);
    t.meta("field", a.field.symbol());
    t.meta("theta", list(theta.indices()));
    t.meta("s", list(&s.values()));
    t.meta("agrees", contact.agrees);
    match &regular {
        Ok(rep) => {
            t.meta("regular_combinatorial", rep.combinatorial);
            t.meta("regular_numerical", rep.numerical);
            t.meta("omega_rank", format!("{}/{}", rep.rank, rep.dimension));
        }
        Err(e) => t.meta("regularity_error", e),
    }
    t.meta("check", "omega has full rank iff every s_alpha is nonzero");
    for ((alpha, p), ((_, v), (_, nz))) in contact.pairings.iter().zip(contact.verdicts.iter().zip(&contact.nonvanishing)) {
        t.push(vec![Value::from(*alpha), num(s.get(*alpha)), num(*p), Value::from(*v), Value::from(*nz)]);
    }
    ctx.write(&t)?;
    Ok(regular.is_ok())
}

fn check_anchor(name: &str) -> &'static str {
    match name {
        "rho-weight-identity" => "2 rho_theta = m_alpha w_alpha on a",
        "killing-form-vs-ad-trace" => "B(X,Y) = tr(ad X ad Y)",
        "opposition-involution" => "alpha_j(-X) = alpha_{d-j}(X) after reversal",
        "jacobian-determinant-identity" => "e^J_F(g) = |det Ad(g)| on n at the attracting flag",
        "proximality-spectral-radius" => "min alpha(lambda) = -log rho(Ad(g^-1)|n)",
        "pairing-basis-independence" | "pairing-sl-invariance" | "pairing-homogeneity" => "density pairing laws",
        "cocycle-relation" => "C(x, g2 g1) = C(g1 x, g2) + C(x, g1)",
        "cocycle-section-independence" => "cocycle at fixed points is section independent",
        "multiflow-equivariance" => "Pi(nu . t) = phi^{t.s}(Pi(nu))",
        "period-equals-cocycle-at-fixed-pair" => "cocycle at the fixed pair = sum s_alpha m_alpha w_alpha(lambda)",
        "period-conjugation-and-opposition" => "periods invariant under conjugation and (gamma, theta, s) -> (gamma^-1, iota theta, iota s)",
        "constant-weight-admissible" => "positive weights are admissible",
        "min-period-per-length-trend" => "periods diverge along longer classes",
        "cocycle-plus-jacobian-converges" => "repelling cocycle plus J^s(gamma^-1) stays bounded",
        "killing-metric-signature" => "Killing metric on n- + n+ has signature (n, n)",
        "regularity-zero-patterns" => "omega nondegenerate iff all s_alpha nonzero",
        "omega-linear-in-weights" | "omega-lagrangian-halves" | "omega-jacobi-closedness" => "omega is linear, closed, n+- Lagrangian",
        "contact-pairing-closed-form" => "B(X_s, w_alpha) closed form",
        _ => "zeta: Euler product identities",
    }
}

fn cmd_check(ctx: &Ctx, suite: Suite) -> Result<bool> {
    let report = check::run_suite(suite, ctx.seed);
    let mut t = ctx.table("check", ["status", "suite", "name", "samples", "max_error", "tolerance", "note"].map(String::from).to_vec());
    t.meta("suite", suite);
    for r in &report.results {
        t.meta(&format!("anchor {}", r.name), check_anchor(r.name));
    }
    for r in &report.results {
        t.push(vec![
            Value::from(if r.passed { "PASS" } else { "FAIL" }),
            Value::from(r.suite),
            Value::from(r.name),
            Value::from(r.samples),
            Value::from(format!("{:.3e}", r.max_error)),
            Value::from(format!("{:.1e}", r.tolerance)),
            Value::from(r.note.clone()),
        ]);
    }
    ctx.write(&t)?;
    if ctx.out.is_some() || ctx.format == Format::Json {
        eprint!("{}", report.render_text().lines().last().map(|l| format!("{l}\n")).unwrap_or_default());
    }
    Ok(report.all_passed())
}

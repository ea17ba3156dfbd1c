//! Command-line front end.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use qsplit_core::cyclic::{
    bgamma_cohomology, bgamma_cup, bgamma_restrict, tensor_power_class, BGammaCochain, Level,
};
use qsplit_core::newton::{check_log_decay, newton_polygon, slope_floor, DecayVerdict, NewtonPolygonReport, SlopeVerdict};
use qsplit_core::reference::{reference_series, ReferenceSeries};
use qsplit_core::ring::validate_ring;
use qsplit_core::scalar::valuation;
use qsplit_core::splitting::{
    block_split_with, extend_endomorphism, mod_p_reduction_degree, verify_divisibility, DiagonalNormalization, ModPDegree,
    ResonanceStatus,
};
use qsplit_core::{Matrix, PrimeContext, Scalar, SeriesMatrix, TruncatedSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::{self, ConnectionFile, FormatError};
use crate::plot::newton_svg;
use crate::report::{list, Check, Report};

pub const DEFAULT_ORDER: usize = 64;
pub const DEFAULT_PRIME: u64 = 3;

/// Directory for SVG plots; the working directory when unset.
pub const OUT_DIR_VAR: &str = "QSPLIT_OUT_DIR";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qsplit", version, about = "Exact splittings of connections with a double pole and p-adic checks")]
struct Cli {
    /// Write the report to FILE instead of standard output
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Append wall-clock timing after the digest
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum ring files
    #[command(subcommand)]
    Ring(RingCommand),
    /// Degree-slice connections
    #[command(subcommand)]
    Conn(ConnCommand),
    /// Split a connection along the eigenspaces of its leading term
    Split(SplitArgs),
    /// Extend an endomorphism across a simple pole
    Extend(ExtendArgs),
    /// Newton polygon and decay checks for one series
    Verify(VerifyArgs),
    /// Cochains of B(Z/p^m)
    #[command(subcommand)]
    Bgamma(BgammaCommand),
    /// Tensor-power class of a cocycle and its invariance under coboundaries
    DiagClass(DiagClassArgs),
    /// Closed-form reference series
    Reference(ReferenceArgs),
}

#[derive(Subcommand, Debug)]
enum RingCommand {
    /// Check grading, unit, commutativity, associativity and declared idempotents
    Validate { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ConnCommand {
    /// Build the connection on one degree slice of a ring
    Build {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        /// Also write the connection in connection-file format
        #[arg(long, value_name = "FILE")]
        write: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct Precision {
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Truncation order; a connection file's own truncation is used when absent
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Decay {
    #[arg(long, requires = "beta")]
    alpha: Option<Scalar>,
    #[arg(long, requires = "alpha")]
    beta: Option<Scalar>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Normalization {
    Zero,
    Alternative,
}

#[derive(Args, Debug)]
struct SplitArgs {
    #[arg(long, value_name = "FILE")]
    conn: PathBuf,
    #[command(flatten)]
    precision: Precision,
    #[command(flatten)]
    decay: Decay,
    #[arg(long, value_enum, default_value_t = Normalization::Zero)]
    normalization: Normalization,
}

#[derive(Args, Debug)]
struct ExtendArgs {
    #[arg(long, value_name = "FILE")]
    conn: PathBuf,
    #[arg(long, value_name = "FILE")]
    e0: PathBuf,
    #[command(flatten)]
    precision: Precision,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["series", "reference"])))]
struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    series: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    reference: Option<ReferenceSeries>,
    #[command(flatten)]
    precision: Precision,
    #[command(flatten)]
    decay: Decay,
    /// Check val(c_k) >= slope k - gamma for k >= k-min
    #[arg(long, requires = "gamma")]
    slope: Option<Scalar>,
    #[arg(long, requires = "slope")]
    gamma: Option<Scalar>,
    #[arg(long, default_value_t = 1)]
    k_min: usize,
    /// Write the Newton polygon as SVG
    #[arg(long)]
    plot: bool,
}

#[derive(Args, Debug, Clone, Copy)]
struct LevelArgs {
    #[arg(long = "p")]
    p: u64,
    #[arg(long = "m")]
    m: u32,
}

#[derive(Subcommand, Debug)]
enum BgammaCommand {
    /// H^n(B(Z/p^m)) for n in a range
    Cohomology {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 8)]
        to: i64,
    },
    /// Cup product of two monomial cochains
    Cup {
        #[command(flatten)]
        level: LevelArgs,
        /// Degree of the left factor
        #[arg(long)]
        a: i64,
        /// Degree of the right factor
        #[arg(long)]
        b: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        ca: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        cb: i64,
    },
    /// Restriction of a monomial from level m+1 down to level m
    Restrict {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        degree: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        coeff: i64,
    },
}

#[derive(Args, Debug)]
struct DiagClassArgs {
    /// Complex file with a `[cocycle]` section
    #[arg(long, value_name = "FILE")]
    complex: PathBuf,
    #[command(flatten)]
    level: LevelArgs,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ReferenceArgs {
    name: ReferenceSeries,
    #[command(flatten)]
    precision: Precision,
    /// Also write the series in series-file format
    #[arg(long, value_name = "FILE")]
    write: Option<PathBuf>,
    #[arg(long)]
    plot: bool,
}

/// Output of one command: the report and any plots named after its digest.
struct Outcome {
    report: Report,
    plots: Vec<(String, String)>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, plots: Vec::new() }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    let command = echo(&argv);
    let start = Instant::now();
    match execute(&cli, command) {
        Ok(outcome) => match emit(&cli, outcome, start) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("qsplit: error: {e:#}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            eprintln!("qsplit: error: {e:#}");
            EXIT_INPUT
        }
    }
}

/// The arguments minus `--timing` and `--out`, which only affect presentation.
fn echo(argv: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut args = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = args.next() {
        match a.as_str() {
            "--timing" => {}
            "--out" => {
                args.next();
            }
            _ if a.starts_with("--out=") => {}
            _ => out.push(a),
        }
    }
    out
}

fn emit(cli: &Cli, outcome: Outcome, start: Instant) -> anyhow::Result<i32> {
    let Outcome { report, plots } = outcome;
    let mut trailer = Vec::new();
    if !plots.is_empty() {
        let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        let stem = &report.digest()[..16];
        for (name, svg) in &plots {
            let path = dir.join(format!("{stem}-{name}.svg"));
            std::fs::write(&path, svg).with_context(|| format!("{}: cannot write plot", path.display()))?;
            trailer.push(("plot".to_string(), path.display().to_string()));
        }
    }
    if cli.timing {
        trailer.push(("elapsed_ms".to_string(), start.elapsed().as_millis().to_string()));
    }
    let text = report.render(&trailer);
    match &cli.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("{}: cannot write report", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn execute(cli: &Cli, command: Vec<String>) -> anyhow::Result<Outcome> {
    let mut report = Report::new(command);
    match &cli.command {
        Command::Ring(RingCommand::Validate { file }) => ring_validate(&mut report, file).map(|()| report.into()),
        Command::Conn(ConnCommand::Build { file, degree, write }) => {
            conn_build(&mut report, file, *degree, write.as_deref()).map(|()| report.into())
        }
        Command::Split(args) => split(&mut report, args).map(|()| report.into()),
        Command::Extend(args) => extend(&mut report, args).map(|()| report.into()),
        Command::Verify(args) => verify(report, args),
        Command::Bgamma(cmd) => bgamma(&mut report, cmd).map(|()| report.into()),
        Command::DiagClass(args) => diag_class(&mut report, args).map(|()| report.into()),
        Command::Reference(args) => reference(report, args),
    }
}

/// Reads an input file and records its digest.
fn read_input(report: &mut Report, path: &Path) -> anyhow::Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("{}: cannot read", path.display()))?;
    report.input(&path.display().to_string(), &bytes);
    String::from_utf8(bytes).map_err(|_| anyhow!("{}: not UTF-8 text", path.display()))
}

fn located(path: &Path, e: FormatError) -> anyhow::Error {
    match e {
        FormatError::At { line, message } => anyhow!("{}:{line}: {message}", path.display()),
        FormatError::Invalid(message) => anyhow!("{}: {message}", path.display()),
    }
}

fn load<T>(report: &mut Report, path: &Path, parse: impl Fn(&str) -> Result<T, FormatError>) -> anyhow::Result<T> {
    let text = read_input(report, path)?;
    parse(&text).map_err(|e| located(path, e))
}

fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("{}: cannot write", path.display()))
}

fn prime_context(report: &mut Report, p: u64) -> anyhow::Result<PrimeContext> {
    report.param("prime", p);
    Ok(PrimeContext::new(p)?)
}

fn matrix_text(m: &Matrix) -> String {
    list(m.to_rows().iter().map(|r| list(r.iter())))
}

fn series_entries(report: &mut Report, section: &str, name: &str, s: &SeriesMatrix) {
    for i in 0..s.size() {
        for j in 0..s.size() {
            let e = s.entry(i, j);
            if !e.is_zero() {
                report.entry(section, format!("{name}[{i},{j}]"), list(e.coeffs()));
            }
        }
    }
}

fn ring_validate(report: &mut Report, file: &Path) -> anyhow::Result<()> {
    let data = load(report, file, format::parse_ring)?;
    report.entry("ring", "name", &data.name);
    report.entry("ring", "dim_c", data.dim_c);
    report.entry("ring", "basis", list(data.basis.iter().map(|b| format!("{} (degree {})", b.label, b.degree))));
    let declared = data.idempotents.clone();
    match validate_ring(data) {
        Ok(ring) => {
            report.check(Check::pass("validation"));
            report.entry("ring", "rank", ring.rank());
            if !declared.is_empty() {
                let labels = ring.labels();
                let set = ring.check_idempotent_set(&declared);
                for (n, (x, c)) in declared.iter().zip(&set.each).enumerate() {
                    report.entry("idempotents", format!("e{n}"), x.display_with(&labels));
                    report.entry("idempotents", format!("e{n}.idempotent"), c.is_idempotent);
                    report.entry("idempotents", format!("e{n}.pole_order"), c.alpha);
                }
                report.entry("idempotents", "sums_to_unit", set.sums_to_unit);
                report.entry("idempotents", "orthogonal", set.orthogonal);
                report.check(Check::from_bool("idempotents", set.is_full_set(), "declared set is not a full orthogonal set"));
            }
        }
        Err(e) => report.check(Check::fail("validation", e.to_string())),
    }
    Ok(())
}

fn conn_build(report: &mut Report, file: &Path, degree: i64, write: Option<&Path>) -> anyhow::Result<()> {
    let data = load(report, file, format::parse_ring)?;
    report.param("degree", degree);
    let ring = validate_ring(data).map_err(|e| anyhow!("{}: {e}", file.display()))?;
    let slice = ring.build_connection(degree)?;
    for (n, label) in slice.labels.iter().enumerate() {
        report.entry("slice", n, label);
    }
    let conn = &slice.connection;
    report.entry("connection", "convention", conn.convention().name());
    for (k, m) in conn.displayed_coeffs().iter().enumerate() {
        report.entry("connection", format!("A{k}"), matrix_text(m));
    }
    report.check(Check::pass("slice"));
    if let Some(path) = write {
        write_output(path, &format::write_connection(&ConnectionFile { connection: conn.clone(), truncation: None }))?;
    }
    Ok(())
}

fn split(report: &mut Report, args: &SplitArgs) -> anyhow::Result<()> {
    let file = load(report, &args.conn, format::parse_connection)?;
    let order = args.precision.order.or(file.truncation).unwrap_or(DEFAULT_ORDER);
    report.param("order", order);
    let ctx = prime_context(report, args.precision.prime)?;
    let normalization = match args.normalization {
        Normalization::Zero => DiagonalNormalization::Zero,
        Normalization::Alternative => DiagonalNormalization::Alternative,
    };
    report.param("normalization", format!("{normalization:?}").to_lowercase());
    let decay = decay_params(report, &args.decay);

    let result = block_split_with(&file.connection, &ctx, order, normalization)?;
    let eigen = &result.eigen;
    for i in 0..eigen.len() {
        report.entry("spectrum", format!("eigenvalue {i}"), result.displayed_eigenvalue(i));
        report.entry("spectrum", format!("multiplicity {i}"), eigen.multiplicities[i]);
    }
    for d in &eigen.differences {
        let unit = if d.is_unit() { "unit" } else { "non-unit" };
        report.entry("differences", format!("{}-{}", d.i, d.j), format!("{} val {} {unit}", d.difference, d.valuation));
    }
    report.check(Check::from_bool(
        "splitting",
        result.residual >= order,
        format!("invariants hold only through order {}", result.residual),
    ));
    report.entry("splitting", "verified_up_to", result.residual);
    for (n, e) in result.projector_series.iter().enumerate() {
        series_entries(report, "projectors", &format!("E{n}"), e);
    }
    if let Some((alpha, beta)) = decay {
        let mut failure = None;
        for (n, e) in result.projector_series.iter().enumerate() {
            let cert = verify_divisibility(e, &ctx, &alpha, &beta)?;
            if let (None, Some(f)) = (&failure, cert.first_failure()) {
                failure = Some(format!(
                    "E{n}[{},{}] k = {} needs val >= {} has {}",
                    f.row, f.col, f.k, f.m, f.valuation
                ));
            }
        }
        report.entry("divisibility", "verified_up_to", order);
        report.check(match failure {
            None => Check::pass("divisibility"),
            Some(loc) => Check::fail("divisibility", loc),
        });
    }
    Ok(())
}

fn decay_params(report: &mut Report, d: &Decay) -> Option<(Scalar, Scalar)> {
    let (alpha, beta) = (d.alpha.clone()?, d.beta.clone()?);
    report.param("alpha", &alpha);
    report.param("beta", &beta);
    Some((alpha, beta))
}

fn extend(report: &mut Report, args: &ExtendArgs) -> anyhow::Result<()> {
    let file = load(report, &args.conn, format::parse_connection)?;
    let e0 = load(report, &args.e0, format::parse_matrix)?;
    let order = args.precision.order.or(file.truncation).unwrap_or(DEFAULT_ORDER);
    report.param("order", order);
    prime_context(report, args.precision.prime)?;

    let (series, resonance) = extend_endomorphism(&file.connection, &e0, order)?;
    report.entry("extension", "E0", matrix_text(&e0));
    report.entry("extension", "solved_through", series.order());
    match &resonance.status {
        ResonanceStatus::Unique => report.check(Check::pass("extension")),
        ResonanceStatus::NonUnique { order: k, kernel_dimension } => {
            report.check(Check::pass("extension").with_verdict(format!(
                "pass, non-unique at order {k} (kernel dimension {kernel_dimension})"
            )));
        }
        ResonanceStatus::Obstructed { order: k, obstruction } => {
            report.entry("extension", "obstruction", matrix_text(obstruction));
            report.check(
                Check::fail("extension", format!("order {k}")).with_verdict(format!("obstructed at order {k}")),
            );
        }
    }
    for (k, basis) in &resonance.kernels {
        report.entry("kernels", format!("order {k}"), list(basis.iter().map(matrix_text)));
    }
    if !matches!(resonance.status, ResonanceStatus::Obstructed { .. }) {
        let flat = file.connection.covariant_derivative(&series)?;
        let first = flat.coeffs().iter().position(|m| !m.is_zero());
        report.check(Check::from_bool("flatness", first.is_none(), format!("order {}", first.unwrap_or(0))));
        if e0.mul(&e0) == e0 {
            let sq = series.mul(&series)?.sub(&series)?;
            let first = sq.coeffs().iter().position(|m| !m.is_zero());
            report.check(Check::from_bool("idempotent", first.is_none(), format!("order {}", first.unwrap_or(0))));
        }
    }
    series_entries(report, "series", "E", &series);
    Ok(())
}

fn newton_entries(report: &mut Report, poly: &NewtonPolygonReport) {
    report.entry("newton", "points", list(poly.points.iter().map(|(k, v)| format!("({k}, {v})"))));
    report.entry("newton", "hull", list(poly.hull.iter().map(|(k, v)| format!("({k}, {v})"))));
    report.entry("newton", "slopes", list(poly.slopes()));
    report.entry("newton", "window_start", poly.window_start);
    match &poly.min_slope_tail {
        Some(s) => report.entry("newton", "min_slope_tail", s),
        None => report.entry("newton", "min_slope_tail", "none"),
    }
}

fn mod_p_text(d: ModPDegree) -> String {
    match d {
        ModPDegree::Zero => "zero".into(),
        ModPDegree::Degree(d) => d.to_string(),
        ModPDegree::ExceedsOrder => "exceeds order".into(),
    }
}

fn series_report(report: &mut Report, s: &TruncatedSeries, ctx: &PrimeContext) -> anyhow::Result<NewtonPolygonReport> {
    report.entry("series", "coefficients", list(s.coeffs()));
    report.entry("series", "valuations", list(s.coeffs().iter().map(|c| valuation(c, ctx))));
    if s.coeffs().iter().all(|c| valuation(c, ctx).at_least(0)) {
        report.entry("series", "mod_p_degree", mod_p_text(mod_p_reduction_degree(s, ctx)?));
    }
    let poly = newton_polygon(s, ctx)?;
    newton_entries(report, &poly);
    Ok(poly)
}

fn verify(mut report: Report, args: &VerifyArgs) -> anyhow::Result<Outcome> {
    let order = args.precision.order.unwrap_or(DEFAULT_ORDER);
    let (series, name) = match (&args.series, args.reference) {
        (Some(path), _) => {
            let s = load(&mut report, path, format::parse_series)?;
            let order = args.precision.order.unwrap_or(s.order());
            (s.with_order(order), "series".to_string())
        }
        (None, Some(r)) => (reference_series(r, order), r.name().to_string()),
        (None, None) => bail!("give --series or --reference"),
    };
    report.param("order", series.order());
    let ctx = prime_context(&mut report, args.precision.prime)?;
    let decay = decay_params(&mut report, &args.decay);
    let poly = series_report(&mut report, &series, &ctx)?;
    if let Some((alpha, beta)) = decay {
        let cert = check_log_decay(&series, &ctx, &alpha, &beta)?;
        report.entry("log_decay", "verified_up_to", cert.verified_up_to);
        report.check(match cert.verdict {
            DecayVerdict::Pass => Check::pass("log_decay"),
            DecayVerdict::Fail { k, m, valuation } => {
                Check::fail("log_decay", format!("k = {k} needs val >= {m} has {valuation}"))
            }
        });
    }
    if let (Some(slope), Some(gamma)) = (&args.slope, &args.gamma) {
        report.param("slope", slope);
        report.param("gamma", gamma);
        report.param("k_min", args.k_min);
        report.check(match slope_floor(&series, &ctx, args.k_min, slope, gamma)? {
            SlopeVerdict::Pass => Check::pass("slope_floor"),
            SlopeVerdict::Fail { k, valuation, bound } => {
                Check::fail("slope_floor", format!("k = {k} has val {valuation} below {bound}"))
            }
        });
    }
    let plots = if args.plot { vec![(name.clone(), newton_svg(&name, &poly))] } else { Vec::new() };
    Ok(Outcome { report, plots })
}

fn reference(mut report: Report, args: &ReferenceArgs) -> anyhow::Result<Outcome> {
    let order = args.precision.order.unwrap_or(DEFAULT_ORDER);
    report.param("name", args.name);
    report.param("order", order);
    let ctx = prime_context(&mut report, args.precision.prime)?;
    let s = reference_series(args.name, order);
    let poly = series_report(&mut report, &s, &ctx)?;
    if let Some(path) = &args.write {
        write_output(path, &format::write_series(&s))?;
    }
    let name = args.name.name().to_string();
    let plots = if args.plot { vec![(name.clone(), newton_svg(&name, &poly))] } else { Vec::new() };
    Ok(Outcome { report, plots })
}

fn level(report: &mut Report, args: LevelArgs) -> anyhow::Result<Level> {
    report.param("p", args.p);
    report.param("m", args.m);
    Ok(Level::new(args.p, args.m)?)
}

fn cochain_text(x: &BGammaCochain) -> String {
    let terms: Vec<String> = x
        .terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| if d % 2 == 0 { format!("{c} t^{}", d / 2) } else { format!("{c} t^{} theta", d / 2) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn class_text(x: &BGammaCochain) -> String {
    match x.class() {
        Ok(class) if class.is_empty() => "0".into(),
        Ok(class) => list(class.iter().map(|(d, c)| format!("degree {d}: {c}"))),
        Err(_) => "not a cocycle".into(),
    }
}

fn bgamma(report: &mut Report, cmd: &BgammaCommand) -> anyhow::Result<()> {
    match cmd {
        BgammaCommand::Cohomology { level: l, from, to } => {
            let l = level(report, *l)?;
            report.param("from", from);
            report.param("to", to);
            if from > to {
                bail!("empty degree range {from}..{to}");
            }
            for (n, module) in bgamma_cohomology(l, *from..=*to) {
                report.entry("cohomology", format!("H^{n}"), module);
            }
            report.check(Check::pass("cohomology"));
        }
        BgammaCommand::Cup { level: l, a, b, ca, cb } => {
            let l = level(report, *l)?;
            report.param("a", a);
            report.param("b", b);
            let x = BGammaCochain::monomial(l, *a, *ca)?;
            let y = BGammaCochain::monomial(l, *b, *cb)?;
            let xy = bgamma_cup(&x, &y)?;
            report.entry("cup", "left", cochain_text(&x));
            report.entry("cup", "right", cochain_text(&y));
            report.entry("cup", "product", cochain_text(&xy));
            report.entry("cup", "class", class_text(&xy));
            let sign = if a % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let rhs = bgamma_cup(&x.differential(), &y)?.add(&bgamma_cup(&x, &y.differential())?.scale(&sign))?;
            report.check(Check::from_bool("leibniz", xy.differential() == rhs, "d(a b) differs from da b + (-1)^|a| a db"));
        }
        BgammaCommand::Restrict { level: l, degree, coeff } => {
            let below = level(report, *l)?;
            report.param("degree", degree);
            let x = BGammaCochain::monomial(below.above(), *degree, *coeff)?;
            let r = bgamma_restrict(&x)?;
            report.entry("restrict", "source", format!("{} over {}", cochain_text(&x), below.above()));
            report.entry("restrict", "image", format!("{} over {below}", cochain_text(&r)));
            report.entry("restrict", "source_class", class_text(&x));
            report.entry("restrict", "image_class", class_text(&r));
            let chain_map = bgamma_restrict(&x.differential())? == r.differential();
            report.check(Check::from_bool("chain_map", chain_map, "restriction does not commute with d"));
        }
    }
    Ok(())
}

fn diag_class(report: &mut Report, args: &DiagClassArgs) -> anyhow::Result<()> {
    let file = load(report, &args.complex, format::parse_complex)?;
    let l = level(report, args.level)?;
    report.param("trials", args.trials);
    report.param("seed", args.seed);
    let (degree, b) = file
        .cocycle
        .clone()
        .ok_or_else(|| anyhow!("{}: no [cocycle] section", args.complex.display()))?;
    let complex = &file.complex;
    let (v, class) = tensor_power_class(complex, &b, degree, l)?;
    report.entry("class", "degree", class.degree());
    report.entry("class", "dimension", v.complex().total_dim());
    for (c, part) in class.parts() {
        if part.iter().any(|x| !x.is_zero()) {
            let name = format!("t^{}{} q={}", c.i, if c.theta { " theta" } else { "" }, c.q);
            report.entry("class", name, list(part.iter()));
        }
    }
    report.check(Check::from_bool("cocycle", class.is_cocycle(&v), "the class representative is not a cocycle"));

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let below = complex.dim(degree - 1);
    let d = complex.differential(degree - 1);
    let (mut changed, mut failed) = (0usize, None);
    for trial in 0..args.trials {
        let beta: Vec<BigInt> = (0..below).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
        let db = d.mul_vec(&beta);
        if db.iter().any(|x| !x.is_zero()) {
            changed += 1;
        }
        let moved: Vec<BigInt> = b.iter().zip(&db).map(|(x, y)| x + y).collect();
        let (_, other) = tensor_power_class(complex, &moved, degree, l)?;
        if !class.cohomologous(&other, &v)? && failed.is_none() {
            failed = Some(trial);
        }
    }
    report.entry("invariance", "trials", args.trials);
    report.entry("invariance", "representatives_changed", changed);
    report.check(match failed {
        None => Check::pass("invariance"),
        Some(t) => Check::fail("invariance", format!("trial {t}")),
    });
    Ok(())
}

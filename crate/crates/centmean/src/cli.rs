//! Argument parsing, dispatch and the exit-code contract.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; every checked case passed |
//! | 1 | at least one case failed |
//! | 2 | invalid parameters, labels, flags or paths; hypothesis violated |
//! | 3 | divergent or unresolvable integral or series |

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use centmean_core::cmo::{cmo_norm_upper, cmo_p_norm, DEFAULT_GRID, DEFAULT_R_RANGE};
use centmean_core::commutators::{bracket_commutator, commutator_mean, CommutatorParams};
use centmean_core::constants::{c0, c1, c2, shell_series, theorem2_constant, DEFAULT_SERIES_TOL};
use centmean_core::dyadic::{decompose_i_with_depth, shell_inequalities, Direction, DEFAULT_DEPTH};
use centmean_core::harness::{Grid, HarnessConfig, InequalityReport, SRule, Verdict};
use centmean_core::means::{mean, OuterParams};
use centmean_core::profiles::parse_label;
use centmean_core::{MeanParams, QuadratureSpec, RadialProfile, Side};
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::json;

use crate::grid_file::{parse_theorem, GridFile, QuadratureOverrides};
use crate::report::{write_csv, Summary};
use crate::run::{default_threads, run_cases};
use crate::{format_number, AppError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_DIVERGENT: u8 = 3;

/// Environment variable naming the default directory for sweep reports.
pub const OUT_DIR_ENV: &str = "CENTMEAN_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "centmean", version, about = "Central integral means, commutators and inequality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate M_r(f,α)(R), or the companion mean with --companion.
    EvalMean(EvalMean),
    /// Evaluate the commutator mean M_{r,b}(f,α)(R), or the bracket with --bracket.
    EvalCommutator(EvalCommutator),
    /// Estimate the CMO norm of a symbol.
    CmoNorm(CmoNorm),
    /// Print one of the explicit constants.
    Constants(Constants),
    /// Shell decomposition of the commutator mean as JSON.
    ProofPath(ProofPath),
    /// Check one theorem on the default grid, optionally narrowed by flags.
    Check(Check),
    /// Run a grid and write CSV and JSON reports.
    Sweep(Sweep),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Quadrature {
    /// Relative tolerance of every integral.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Absolute tolerance of every integral.
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Panel budget per integral.
    #[arg(long)]
    pub max_panels: Option<usize>,
}

impl Quadrature {
    fn spec(&self) -> Result<QuadratureSpec, AppError> {
        let mut q = QuadratureSpec::default();
        if let Some(t) = self.rel_tol {
            q.rel_tol = t;
        }
        if let Some(t) = self.abs_tol {
            q.abs_tol = t;
        }
        if let Some(m) = self.max_panels {
            q.max_panels = m;
        }
        q.validate()?;
        Ok(q)
    }

    fn overrides(&self, commutator_rel_tol: Option<f64>) -> QuadratureOverrides {
        QuadratureOverrides {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            commutator_rel_tol,
            max_panels: self.max_panels,
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Digits {
    /// Significant digits of printed numbers.
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalMean {
    /// Profile label, e.g. "power:beta=1:a=0:b=inf".
    #[arg(long)]
    pub f: String,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Radius R.
    #[arg(long = "R", value_name = "R")]
    pub radius: f64,
    #[arg(long)]
    pub companion: bool,
    #[command(flatten)]
    pub quadrature: Quadrature,
    #[command(flatten)]
    pub digits: Digits,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalCommutator {
    #[arg(long)]
    pub f: String,
    /// Symbol label, e.g. "osc:amp=1:phase=0".
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long = "R", value_name = "R")]
    pub radius: f64,
    #[arg(long)]
    pub companion: bool,
    /// Print |M_r(bf,α)(R) - b(R)M_r(f,α)(R)| instead.
    #[arg(long)]
    pub bracket: bool,
    #[command(flatten)]
    pub quadrature: Quadrature,
    #[command(flatten)]
    pub digits: Digits,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CmoNorm {
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Also report the grid lower estimate of the CMO^p norm.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_R_RANGE.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = DEFAULT_R_RANGE.1)]
    pub r_max: f64,
    /// Radii in the lower-estimate grid.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[command(flatten)]
    pub quadrature: Quadrature,
    #[command(flatten)]
    pub digits: Digits,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
#[command(group(ArgGroup::new("which").required(true).args(["c1", "c2", "c0", "series", "theorem2"])))]
pub struct Constants {
    /// The constant of the pointwise commutator inequality.
    #[arg(long)]
    pub c1: bool,
    /// The constant of the weighted commutator inequality (needs --s, --gamma).
    #[arg(long)]
    pub c2: bool,
    /// The shell-inequality constant (needs --s).
    #[arg(long)]
    pub c0: bool,
    /// The sum over k ≥ 0 of 2^{-kn|α-1|} k^r.
    #[arg(long)]
    pub series: bool,
    /// The weighted-norm constant (needs --s, --gamma; --companion for the exterior).
    #[arg(long)]
    pub theorem2: bool,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub companion: bool,
    /// Tail bound of the series.
    #[arg(long, default_value_t = DEFAULT_SERIES_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub digits: Digits,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ProofPath {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub b: String,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub alpha: f64,
    /// The point |x|.
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub companion: bool,
    /// Radius whose dyadic partition locates x; defaults to |x|.
    #[arg(long)]
    pub partition_radius: Option<f64>,
    /// CMO norm bound; defaults to the upper estimate.
    #[arg(long)]
    pub cmo_bound: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// With --gamma, also check the shell inequality on the partition of |x|.
    #[arg(long, requires = "gamma")]
    pub s: Option<f64>,
    #[arg(long, requires = "s")]
    pub gamma: Option<f64>,
    /// Relative slack when judging the chain inequalities.
    #[arg(long, default_value_t = 1e-9)]
    pub slack: f64,
    #[command(flatten)]
    pub quadrature: Quadrature,
}

#[derive(Debug, Args)]
pub struct Check {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub theorem: u8,
    /// Check the exterior (companion) inequality.
    #[arg(long)]
    pub companion: bool,
    /// Comma-separated values replacing the default grid axis.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub n: Vec<u32>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Vec<f64>,
    /// Values or rules such as "r+0.5" and "2r".
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub s: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gamma: Vec<f64>,
    #[arg(long = "R", value_name = "R", value_delimiter = ',', allow_hyphen_values = true)]
    pub radius: Vec<f64>,
    /// Profile labels (repeat the flag for several).
    #[arg(long)]
    pub f: Vec<String>,
    /// Symbol labels (repeat the flag for several).
    #[arg(long)]
    pub b: Vec<String>,
    /// Print the JSON summary instead of CSV rows.
    #[arg(long)]
    pub summary: bool,
    /// List failing and degenerate cases on stderr.
    #[arg(short, long)]
    pub verbose: bool,
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub quadrature: Quadrature,
    /// Relative tolerance of commutator means.
    #[arg(long)]
    pub commutator_rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Sweep {
    /// TOML grid file; missing keys take default values.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Report directory; defaults to $CENTMEAN_OUT_DIR, then ".".
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Report file stem: writes <name>.csv and <name>.json.
    #[arg(long, default_value = "sweep")]
    pub name: String,
    #[arg(short, long)]
    pub verbose: bool,
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub quadrature: Quadrature,
    #[arg(long)]
    pub commutator_rel_tol: Option<f64>,
}

fn profile(label: &str) -> Result<RadialProfile, AppError> {
    Ok(parse_label(label)?.profile)
}

fn side(companion: bool) -> Side {
    if companion {
        Side::Companion
    } else {
        Side::Central
    }
}

fn io_err(e: std::io::Error) -> AppError {
    AppError::Io(format!("cannot write output: {e}"))
}

fn eval_mean(a: &EvalMean, out: &mut dyn Write) -> Result<u8, AppError> {
    let q = a.quadrature.spec()?;
    let f = profile(&a.f)?;
    let p = MeanParams::new(a.n, a.r, a.alpha)?;
    let v = mean(&f, &p, a.radius, side(a.companion), &q)?;
    writeln!(out, "{}", format_number(v, a.digits.digits.into())).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn eval_commutator(a: &EvalCommutator, out: &mut dyn Write) -> Result<u8, AppError> {
    let q = a.quadrature.spec()?;
    let f = profile(&a.f)?;
    let cp = CommutatorParams::new(MeanParams::new(a.n, a.r, a.alpha)?, profile(&a.b)?)?;
    let s = side(a.companion);
    let v = if a.bracket {
        bracket_commutator(&f, &cp, a.radius, &q, s)?
    } else {
        match s {
            Side::Central => commutator_mean(&f, &cp, a.radius, &q)?,
            Side::Companion => centmean_core::commutators::companion_commutator_mean(&f, &cp, a.radius, &q)?,
        }
    };
    writeln!(out, "{}", format_number(v, a.digits.digits.into())).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmo_norm(a: &CmoNorm, out: &mut dyn Write) -> Result<u8, AppError> {
    let q = a.quadrature.spec()?;
    let b = profile(&a.b)?;
    let range = (a.r_min, a.r_max);
    if !(range.0 > 0.0 && range.0 < range.1 && range.1.is_finite()) {
        return Err(AppError::Invalid("need 0 < r-min < r-max < inf".into()));
    }
    let d = usize::from(a.digits.digits);
    if let Some(p) = a.p {
        if a.grid < 2 {
            return Err(AppError::Invalid("grid needs at least 2 radii".into()));
        }
        let low = cmo_p_norm(&b, p, a.n, range, a.grid, &q)?;
        writeln!(
            out,
            "lower p={} value={} argmax_R={}",
            format_number(p, d),
            format_number(low.value, d),
            format_number(low.argmax_r, d)
        )
        .map_err(io_err)?;
    }
    let up = cmo_norm_upper(&b, a.n, range, &q)?;
    writeln!(out, "upper value={} argmax_R={}", format_number(up.value, d), format_number(up.argmax_r, d))
        .map_err(io_err)?;
    Ok(EXIT_OK)
}

fn constants(a: &Constants, out: &mut dyn Write) -> Result<u8, AppError> {
    let need = |x: Option<f64>, name: &str| x.ok_or_else(|| AppError::Invalid(format!("--{name} is required here")));
    let v = if a.c1 {
        c1(a.n, a.alpha, a.r, a.tol)?
    } else if a.c2 {
        c2(a.n, a.alpha, a.r, need(a.s, "s")?, need(a.gamma, "gamma")?, a.tol)?
    } else if a.c0 {
        c0(a.n, a.alpha, a.r, need(a.s, "s")?, a.tol)?
    } else if a.series {
        shell_series(a.n, a.alpha, a.r, a.tol)?.value
    } else {
        theorem2_constant(a.alpha, need(a.gamma, "gamma")?, a.r, need(a.s, "s")?, side(a.companion))?
    };
    writeln!(out, "{}", format_number(v, a.digits.digits.into())).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn proof_path(a: &ProofPath, out: &mut dyn Write) -> Result<u8, AppError> {
    let q = a.quadrature.spec()?;
    let f = profile(&a.f)?;
    let b = profile(&a.b)?;
    let cp = CommutatorParams::new(MeanParams::new(a.n, a.r, a.alpha)?, b.clone())?;
    let s = side(a.companion);
    let cmo = match a.cmo_bound {
        Some(v) => v,
        None => cmo_norm_upper(&b, a.n, DEFAULT_R_RANGE, &q)?.value,
    };
    let rep = decompose_i_with_depth(a.x, &f, &cp, s, cmo, a.partition_radius, a.depth, &q)?;
    let mut violations = rep.violations(a.slack);
    let direction = match rep.direction {
        Direction::Inward => "inward",
        Direction::Outward => "outward",
    };
    let mut doc = json!({
        "x": rep.x,
        "direction": direction,
        "partition_radius": rep.partition_radius,
        "shell_index": rep.shell_index,
        "shell_count": rep.shell_count,
        "h": rep.h_value,
        "direct": rep.direct_value,
        "equivalence_error": rep.equivalence_error(),
        "remainder": rep.remainder,
        "I1": rep.i1,
        "I2": rep.i2,
        "I3": rep.i3,
        "bound_constant": rep.bound_constant,
        "bound": rep.bound_value,
        "g_r": rep.g_r,
        "cmo_bound": rep.cmo_bound,
        "I1_bound": rep.i1_bound,
        "I2_bound": rep.i2_bound,
        "I3_bound": rep.i3_bound,
        "gap_checks": rep.gap_checks.iter().map(|g| json!({"j": g.j, "lhs": g.lhs, "bound": g.bound})).collect::<Vec<_>>(),
        "holder_checks": rep.holder_checks.iter().map(|h| json!({"j": h.j, "lhs": h.lhs, "rhs": h.rhs})).collect::<Vec<_>>(),
        "quadrature_error": rep.quadrature_error,
    });
    if let (Some(s_val), Some(gamma)) = (a.s, a.gamma) {
        let outer = OuterParams::new(s_val, gamma)?;
        let rows = shell_inequalities(&f, &cp, &outer, a.x, s, cmo, a.depth, &q)?;
        for r in rows.iter().filter(|r| !r.holds(a.slack)) {
            violations.push(format!("shell inequality i={}: {:e} > {:e}", r.index, r.lhs, r.rhs));
        }
        doc["shell_inequalities"] = rows
            .iter()
            .map(|r| json!({"i": r.index, "lhs": r.lhs, "rhs": r.rhs, "quadrature_error": r.quadrature_error}))
            .collect();
    }
    let ok = violations.is_empty();
    doc["violations"] = json!(violations);
    let text = serde_json::to_string_pretty(&doc).map_err(|e| AppError::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn ids(grid: &Grid) -> Vec<String> {
    let mut v: Vec<String> = grid.theorems.iter().flat_map(|t| grid.sides.iter().map(move |s| t.id(*s))).collect();
    v.sort();
    v
}

fn outcome(reports: &[InequalityReport]) -> u8 {
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    if count(Verdict::Fail) > 0 {
        EXIT_FAIL
    } else if count(Verdict::Pass) == 0 && count(Verdict::Degenerate) > 0 {
        EXIT_DIVERGENT
    } else {
        EXIT_OK
    }
}

fn list_unusual(reports: &[InequalityReport], err: &mut dyn Write) {
    for r in reports.iter().filter(|r| r.verdict != Verdict::Pass) {
        let c = &r.case;
        let _ = writeln!(
            err,
            "{} {} n={} r={} s={} alpha={} gamma={} R={} f={} b={}: {}",
            r.verdict,
            c.id(),
            c.n,
            c.r,
            c.s,
            c.alpha,
            c.gamma,
            c.radius.map_or("-".into(), |x| x.to_string()),
            c.f_label,
            c.b_label.as_deref().unwrap_or("-"),
            r.diagnostic.as_deref().unwrap_or("")
        );
    }
}

fn summary_lines(summary: &Summary, out: &mut dyn Write) -> Result<(), AppError> {
    for (id, c) in &summary.theorems {
        writeln!(
            out,
            "{id}: cases={} pass={} fail={} degenerate={} max_ratio={}",
            c.cases,
            c.pass,
            c.fail,
            c.degenerate,
            c.max_ratio.map_or("-".into(), |m| format_number(m, 7))
        )
        .map_err(io_err)?;
    }
    Ok(())
}

fn check(a: &Check, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, AppError> {
    let theorem = parse_theorem(a.theorem)?;
    let config = a.quadrature.overrides(a.commutator_rel_tol).apply(HarnessConfig::default())?;
    let mut grid = Grid::default().only(&[theorem]);
    grid.sides = vec![side(a.companion)];
    macro_rules! narrow {
        ($($flag:ident => $field:ident),*) => {$(
            if !a.$flag.is_empty() {
                grid.$field = a.$flag.clone();
            }
        )*};
    }
    narrow!(n => n, r => r, alpha => alpha, gamma => gamma, radius => radius);
    if !a.s.is_empty() {
        grid.s = a.s.iter().map(|t| SRule::parse(t)).collect::<Result<_, _>>()?;
    }
    if !a.f.is_empty() {
        grid.profiles = a.f.clone();
        grid.commutator_profiles = a.f.clone();
    }
    if !a.b.is_empty() {
        grid.symbols = a.b.clone();
    }
    let cases = grid.cases()?;
    if cases.is_empty() {
        let rejected = grid.rejected()?;
        return Err(AppError::Invalid(match rejected.first() {
            Some((c, why)) => {
                format!("hypothesis violated for every {} case ({} rejected), e.g. {why}", c.id(), rejected.len())
            }
            None => format!("no admissible {} case on this grid", theorem.id(side(a.companion))),
        }));
    }
    let reports = run_cases(&cases, config, a.threads.unwrap_or_else(default_threads));
    let summary = Summary::new(&ids(&grid), &reports);
    if a.summary {
        out.write_all(summary.to_json().as_bytes()).map_err(io_err)?;
    } else {
        write_csv(&reports, &mut *out)?;
    }
    if a.verbose {
        list_unusual(&reports, err);
    }
    summary_lines(&summary, err)?;
    Ok(outcome(&reports))
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, AppError> {
    File::create(path).map(BufWriter::new).map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))
}

fn sweep(a: &Sweep, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, AppError> {
    let file = match &a.grid {
        Some(p) => GridFile::load(p)?,
        None => GridFile::default(),
    };
    let grid = file.grid()?;
    let mut overrides = file.quadrature.clone();
    let cli = a.quadrature.overrides(a.commutator_rel_tol);
    overrides.rel_tol = cli.rel_tol.or(overrides.rel_tol);
    overrides.abs_tol = cli.abs_tol.or(overrides.abs_tol);
    overrides.commutator_rel_tol = cli.commutator_rel_tol.or(overrides.commutator_rel_tol);
    overrides.max_panels = cli.max_panels.or(overrides.max_panels);
    let config = overrides.apply(HarnessConfig::default())?;
    let cases = grid.cases()?;

    let dir = a
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let csv_path = dir.join(format!("{}.csv", a.name));
    let json_path = dir.join(format!("{}.json", a.name));
    // Open both files before computing so that a bad path fails fast.
    let mut csv_out = create(&csv_path)?;
    let mut json_out = create(&json_path)?;

    let reports = run_cases(&cases, config, a.threads.unwrap_or_else(default_threads));
    let summary = Summary::new(&ids(&grid), &reports);
    write_csv(&reports, &mut csv_out)?;
    json_out
        .write_all(summary.to_json().as_bytes())
        .and_then(|_| json_out.flush())
        .map_err(|e| AppError::Io(format!("cannot write {}: {e}", json_path.display())))?;
    if a.verbose {
        list_unusual(&reports, err);
    }
    summary_lines(&summary, out)?;
    writeln!(out, "wrote {} and {}", csv_path.display(), json_path.display()).map_err(io_err)?;
    Ok(if reports.iter().any(|r| r.verdict == Verdict::Fail) { EXIT_FAIL } else { EXIT_OK })
}

/// Dispatches a parsed command.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, AppError> {
    match &cli.command {
        Command::EvalMean(a) => eval_mean(a, out),
        Command::EvalCommutator(a) => eval_commutator(a, out),
        Command::CmoNorm(a) => cmo_norm(a, out),
        Command::Constants(a) => constants(a, out),
        Command::ProofPath(a) => proof_path(a, out),
        Command::Check(a) => check(a, out, err),
        Command::Sweep(a) => sweep(a, out, err),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn parse_and_dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

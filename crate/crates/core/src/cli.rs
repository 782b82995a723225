//! Batch command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 a
//! request exceeds a documented size cap.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{self, BoundResult, REFERENCE_LP_ALPHA, REFERENCE_POSITIVE_ALPHA};
use crate::coefficients::{self, CoefficientTable, Route};
use crate::error::{Error, Result};
use crate::graph::MAX_TREE_N;
use crate::models::WeightModel;
use crate::penrose;
use crate::series::{identity_suite_with, int, t1_series};
use crate::splitting::{non_splittable_expected, splittability_counts};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "penrose-virial", version, about = "Penrose tree-partition combinatorics and virial bounds")]
pub struct Cli {
    /// Use data-parallel enumeration; output is identical to a serial run.
    #[arg(long, global = true)]
    pub parallel: bool,

    /// Corrupt one input of the requested check so that it must fail.
    #[arg(long, global = true)]
    pub self_test_negative: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that the Penrose intervals partition the connected graphs on [n].
    VerifyPartition {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Count trees on [n] by maximal faithful splitting size.
    CountSplittable {
        #[arg(long)]
        n: usize,
        /// Write the (n, l, count) CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the tree generating-function identities.
    Identities {
        #[arg(long, default_value_t = 12)]
        order: usize,
    },
    /// Cluster and virial coefficients of a model.
    Coeffs {
        /// onepoint | lattice:a=<int>
        #[arg(long, default_value = "onepoint")]
        model: String,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = RouteArg::All)]
        route: RouteArg,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radius bound at one value of u.
    Bounds {
        #[arg(long, default_value_t = 1.0)]
        u: f64,
        #[arg(long, default_value_t = bounds::DEFAULT_TOL)]
        tol: f64,
        /// Also list the virial coefficient bounds for n = 1..=nmax.
        #[arg(long, default_value_t = 0)]
        nmax: usize,
        /// Temperedness constant used for the coefficient bounds.
        #[arg(long, default_value_t = 1.0)]
        temperedness: f64,
    },
    /// Radius coefficient over a log-spaced range of u.
    Curve {
        #[arg(long, default_value_t = 0.1)]
        u_min: f64,
        #[arg(long, default_value_t = 10.0)]
        u_max: f64,
        #[arg(long, default_value_t = 25)]
        steps: usize,
        #[arg(long, default_value_t = bounds::DEFAULT_TOL)]
        tol: f64,
        /// Figure CSV: u, groeneveld_bound, lp_bound.
        #[arg(long)]
        out: PathBuf,
        /// Full solver CSV: u, t, c, alpha, radius_coeff, residuals.
        #[arg(long)]
        bounds_out: Option<PathBuf>,
        /// CSV of (u, lp_bound) rows to overlay on the lp_bound column.
        #[arg(long)]
        lp_table: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteArg {
    Bell,
    Reversion,
    Trees,
    All,
}

impl RouteArg {
    fn routes(self) -> Vec<Route> {
        match self {
            RouteArg::Bell => vec![Route::GraphBell],
            RouteArg::Reversion => vec![Route::GraphReversion],
            RouteArg::Trees => vec![Route::PenroseTrees],
            RouteArg::All => Route::ALL.to_vec(),
        }
    }
}

/// Outcome of a subcommand: what to print and whether its checks passed.
struct Outcome {
    stdout: String,
    stderr: String,
    passed: bool,
}

impl Outcome {
    fn new(stdout: String, passed: bool) -> Self {
        Outcome { stdout, stderr: String::new(), passed }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stderr.write_all(outcome.stderr.as_bytes());
            if outcome.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::SizeOutOfRange { .. } => EXIT_CAP,
        Error::Parse(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and an atomic rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let negative = cli.self_test_negative;
    match &cli.command {
        Command::VerifyPartition { n, format } => verify_partition(*n, *format, cli.parallel, negative),
        Command::CountSplittable { n, out } => count_splittable(*n, out.as_deref(), cli.parallel, negative),
        Command::Identities { order } => identities(*order, negative),
        Command::Coeffs { model, nmax, route, format, out } => {
            let model: WeightModel = model.parse()?;
            coeffs(&model, *nmax, route.routes(), *format, out.as_deref(), cli.parallel, negative)
        }
        Command::Bounds { u, tol, nmax, temperedness } => bound_at(*u, *tol, *nmax, *temperedness, negative),
        Command::Curve { u_min, u_max, steps, tol, out, bounds_out, lp_table } => curve(
            CurveArgs { u_min: *u_min, u_max: *u_max, steps: *steps, tol: *tol },
            out,
            bounds_out.as_deref(),
            lp_table.as_deref(),
            cli.parallel,
            negative,
        ),
    }
}

fn verify_partition(n: usize, format: ReportFormat, parallel: bool, negative: bool) -> Result<Outcome> {
    let report = if negative {
        penrose::verify_partition_dropping(n, parallel, 0)?
    } else {
        penrose::verify_partition(n, parallel)?
    };
    let text = match format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => serde_json::to_string_pretty(&report).expect("plain data serializes") + "\n",
    };
    Ok(Outcome::new(text, report.passed()))
}

fn count_splittable(n: usize, out: Option<&Path>, parallel: bool, negative: bool) -> Result<Outcome> {
    if n < 2 || n > MAX_TREE_N {
        return Err(Error::SizeOutOfRange { what: "splittability classification", n, max: MAX_TREE_N });
    }
    let counts = splittability_counts(n, parallel)?;
    let mut csv = String::from("n,l,count\n");
    for (l, c) in counts.iter().enumerate().skip(1) {
        writeln!(csv, "{n},{l},{c}").unwrap();
    }
    let mut expected_one = non_splittable_expected(n);
    if negative {
        expected_one += 1;
    }
    let total: u64 = counts.iter().sum();
    let cayley = (n as u64).pow(n as u32 - 2);
    let one_ok = counts[1] == expected_one;
    let total_ok = total == cayley;
    let mut report = String::new();
    writeln!(
        report,
        "non-splittable: {} (expected (n-2)^(n-2) = {expected_one}) {}",
        counts[1],
        verdict(one_ok)
    )
    .unwrap();
    writeln!(report, "total: {total} (expected n^(n-2) = {cayley}) {}", verdict(total_ok)).unwrap();
    let stdout = match out {
        Some(path) => {
            write_atomic(path, &csv)?;
            report
        }
        None => csv + &report,
    };
    Ok(Outcome::new(stdout, one_ok && total_ok))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn identities(order: usize, negative: bool) -> Result<Outcome> {
    if order == 0 {
        return Err(Error::InvalidArgument("identity order must be at least 1".into()));
    }
    let mut t1 = t1_series(order + 1);
    if negative {
        let k = order.min(3);
        let bumped = t1.coeff(k) + int(1);
        t1.set_coeff(k, bumped);
    }
    let suite = identity_suite_with(order, &t1);
    let mut text = String::new();
    for check in &suite {
        match check.first_failure {
            None => writeln!(text, "{}: pass through degree {}", check.name, check.max_degree),
            Some(d) => writeln!(text, "{}: FAIL at degree {d}", check.name),
        }
        .unwrap();
    }
    let passed = suite.iter().all(|c| c.passed);
    writeln!(text, "identities: {}/{} pass", suite.iter().filter(|c| c.passed).count(), suite.len()).unwrap();
    Ok(Outcome::new(text, passed))
}

fn coeffs(
    model: &WeightModel,
    nmax: usize,
    routes: Vec<Route>,
    format: TableFormat,
    out: Option<&Path>,
    parallel: bool,
    negative: bool,
) -> Result<Outcome> {
    let tables = coefficients::coefficient_tables(model, nmax, &routes, parallel)?;
    let mut compared = tables.clone();
    if negative {
        let mut bad = tables[0].clone();
        let last = bad.beta.len() - 1;
        bad.beta[last] += int(1);
        compared.push(bad);
    }
    let agree = coefficients::routes_agree(&compared);
    let verdict_line = if tables.len() + usize::from(negative) > 1 {
        format!("routes agree: {}\n", if agree { "yes" } else { "no" })
    } else {
        String::new()
    };
    let body = match format {
        TableFormat::Text => coefficient_text(&tables),
        TableFormat::Json => coefficients::tables_to_json(&tables) + "\n",
        TableFormat::Csv => coefficients::tables_to_csv(&tables),
    };
    let mut outcome = match (out, format) {
        (Some(path), _) => {
            write_atomic(path, &body)?;
            Outcome::new(verdict_line, agree)
        }
        (None, TableFormat::Text) => Outcome::new(body + &verdict_line, agree),
        (None, _) => Outcome { stdout: body, stderr: verdict_line, passed: agree },
    };
    if !agree {
        outcome.stderr.push_str("coefficient routes disagree\n");
    }
    Ok(outcome)
}

fn coefficient_text(tables: &[CoefficientTable]) -> String {
    let mut text = String::new();
    let first = &tables[0];
    writeln!(text, "model: {}", first.model).unwrap();
    write!(text, "{:>3} {:>14}", "n", "b_n").unwrap();
    for t in tables {
        write!(text, " {:>18}", format!("beta_n[{}]", t.route.name())).unwrap();
    }
    text.push('\n');
    for n in 1..=first.nmax {
        write!(text, "{n:>3} {:>14}", first.b[n - 1].to_string()).unwrap();
        for t in tables {
            write!(text, " {:>18}", t.beta[n - 1].to_string()).unwrap();
        }
        text.push('\n');
    }
    text
}

fn bound_at(u: f64, tol: f64, nmax: usize, temperedness: f64, negative: bool) -> Result<Outcome> {
    let mut result = bounds::radius_bound(u, tol)?;
    if negative {
        result.radius_coeff += 1e-6;
    }
    let gap = result.equivalence_gap();
    let passed = gap <= 10.0 * tol && result.residual_c.abs() <= tol;
    let mut text = String::new();
    writeln!(text, "{}", BoundResult::CSV_HEADER).unwrap();
    writeln!(text, "{}", result.csv_row()).unwrap();
    writeln!(
        text,
        "equivalence |radius_coeff - alpha| = {} (limit {}): {}",
        bounds::sci(gap),
        bounds::sci(10.0 * tol),
        if passed { "pass" } else { "FAIL" }
    )
    .unwrap();
    if u == 1.0 {
        writeln!(
            text,
            "reference values at u = 1: positive potentials {REFERENCE_POSITIVE_ALPHA}, Lebowitz-Penrose {REFERENCE_LP_ALPHA}; \
             computed alpha(1) = {:.12} (the reference value is reported, not used as the pass criterion)",
            result.alpha
        )
        .unwrap();
    }
    if nmax > 0 {
        writeln!(text, "n,bound").unwrap();
        for row in bounds::virial_bound_table(u, temperedness, nmax, tol)? {
            writeln!(text, "{},{}", row.n, bounds::sci(row.bound)).unwrap();
        }
    }
    Ok(Outcome::new(text, passed))
}

struct CurveArgs {
    u_min: f64,
    u_max: f64,
    steps: usize,
    tol: f64,
}

fn read_lp_table(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (k == 0 && line.starts_with('u')) {
            continue;
        }
        let (u, v) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("{}:{}: expected u,lp_bound", path.display(), k + 1)))?;
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("{}:{}: bad number {s:?}", path.display(), k + 1)))
        };
        rows.push((parse(u)?, parse(v)?));
    }
    Ok(rows)
}

fn curve(
    args: CurveArgs,
    out: &Path,
    bounds_out: Option<&Path>,
    lp_table: Option<&Path>,
    parallel: bool,
    negative: bool,
) -> Result<Outcome> {
    let us = bounds::log_grid(args.u_min, args.u_max, args.steps)?;
    let mut results = bounds::bounds_grid(&us, args.tol, parallel)?;
    if negative {
        results[0].radius_coeff += 1e-6;
    }
    let overlay = lp_table.map(read_lp_table).transpose()?.unwrap_or_default();
    let mut figure = String::from("u,groeneveld_bound,lp_bound\n");
    for r in &results {
        let lp = overlay
            .iter()
            .find(|(u, _)| (u - r.u).abs() <= 1e-12 * r.u)
            .map(|&(_, v)| bounds::sci(v))
            .or_else(|| (r.u == 1.0).then(|| bounds::sci(REFERENCE_LP_ALPHA)))
            .unwrap_or_default();
        writeln!(figure, "{},{},{lp}", bounds::sci(r.u), bounds::sci(r.radius_coeff)).unwrap();
    }
    write_atomic(out, &figure)?;
    if let Some(path) = bounds_out {
        let mut csv = format!("{}\n", BoundResult::CSV_HEADER);
        for r in &results {
            writeln!(csv, "{}", r.csv_row()).unwrap();
        }
        write_atomic(path, &csv)?;
    }
    let worst = results.iter().map(BoundResult::equivalence_gap).fold(0.0, f64::max);
    let passed = worst <= 10.0 * args.tol;
    let text = format!(
        "{} points, max |radius_coeff - alpha| = {}: {}\n",
        results.len(),
        bounds::sci(worst),
        if passed { "pass" } else { "FAIL" }
    );
    Ok(Outcome::new(text, passed))
}

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use szeta_core::checks::{check_identity, CheckContext};
use szeta_core::pair_correlation::{pcf_curve, TailModel};
use szeta_core::primes::build_prime_table;
use szeta_core::report::{fmt_sig12, Params};
use szeta_core::s_of_t::{SEvaluator, ZERO_WINDOW};
use szeta_core::theorem::{full_report, FSource, ReportOptions};
use szeta_core::zeros::{find_zeros, import_zeros, ZeroSet};
use szeta_core::{Error, QuadratureSpec};

const THREADS_ENV: &str = "SZETA_THREADS";

/// S(t), zeta zero pair correlation and the second moment of S(t).
#[derive(Parser, Debug)]
#[command(name = "szeta", version)]
struct Cli {
    /// Worker threads (default: all cores; SZETA_THREADS overrides)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute zeta zero ordinates, or validate a zeros file
    Zeros(ZerosArgs),
    /// Evaluate S(t) at a point or on a grid, as CSV "t,S"
    S(SArgs),
    /// Sample the pair correlation function F(alpha) at height T, as CSV "alpha,F"
    Pcf(PcfArgs),
    /// Run a named identity check and write its JSON report
    Check(CheckArgs),
    /// Compare the second moment of S(t) with its predicted main terms
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct ZerosArgs {
    /// Compute all zeros with 0 < t <= T_MAX (15 <= T_MAX <= 100000)
    #[arg(long, conflicts_with = "import")]
    t_max: Option<f64>,
    /// Write the zeros file here (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read a zeros file instead of computing
    #[arg(long)]
    import: Option<PathBuf>,
    /// With --import: fail unless the file passes the zero-count check
    #[arg(long, requires = "import")]
    validate: bool,
}

#[derive(Args, Debug)]
struct SArgs {
    /// Single point
    #[arg(long, conflicts_with_all = ["from", "to"])]
    t: Option<f64>,
    /// Grid start
    #[arg(long, requires = "to")]
    from: Option<f64>,
    /// Grid end (inclusive)
    #[arg(long, requires = "from")]
    to: Option<f64>,
    /// Grid spacing
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// Use the explicit formula truncated at primes <= X instead of zero counting
    #[arg(long)]
    x: Option<f64>,
    /// Zeros file (default: computed)
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Output CSV (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PcfArgs {
    /// Height T
    #[arg(long)]
    t: f64,
    /// Largest alpha sampled
    #[arg(long, default_value_t = 4.0)]
    alpha_max: f64,
    /// Alpha spacing
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Zeros file (default: computed)
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Output CSV (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// One of w_partition, lemma3 .. lemma11, bracket
    #[arg(long)]
    identity: String,
    /// Tolerance for asserted entries (default: per identity)
    #[arg(long)]
    tol: Option<f64>,
    /// Parameters as key=value pairs, lists separated by ':' (e.g. y=0.5:1,qtol=1e-9)
    #[arg(long, default_value = "")]
    params: String,
    /// Zeros file (default: computed when needed)
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Where F comes from in the conditional checks
    #[arg(long, value_enum, default_value_t = FSourceArg::Empirical)]
    f_source: FSourceArg,
    /// F beyond the sampled range in the conditional checks
    #[arg(long, value_enum, default_value_t = TailArg::ConstantOne)]
    tail: TailArg,
    /// Write the JSON report here (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Height T (>= 100)
    #[arg(long)]
    t: f64,
    /// Prime cutoff x (16 <= x < sqrt(T))
    #[arg(long)]
    x: f64,
    /// Zeros file (default: computed)
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Largest alpha sampled for F
    #[arg(long, default_value_t = 4.0)]
    alpha_max: f64,
    /// Alpha spacing for F
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// F beyond the sampled range
    #[arg(long, value_enum, default_value_t = TailArg::ConstantOne)]
    tail: TailArg,
    /// Where the F tail integral comes from
    #[arg(long, value_enum, default_value_t = FSourceArg::Empirical)]
    f_source: FSourceArg,
    /// JSON report path
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// F curve CSV path (default: pcf.csv next to the report)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Skip the squared explicit formula check in the notes
    #[arg(long)]
    no_identity_check: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FSourceArg {
    Empirical,
    Model,
}

impl From<FSourceArg> for FSource {
    fn from(v: FSourceArg) -> Self {
        match v {
            FSourceArg::Empirical => FSource::Empirical,
            FSourceArg::Model => FSource::Model,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TailArg {
    ConstantOne,
    LastValue,
}

impl From<TailArg> for TailModel {
    fn from(v: TailArg) -> Self {
        match v {
            TailArg::ConstantOne => TailModel::ConstantOne,
            TailArg::LastValue => TailModel::LastValue,
        }
    }
}

/// A failure with its exit code: 1 for usage, 2 for validation and coverage.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Domain(_) => Failure::usage(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{line} (see --help)");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message.lines().next().unwrap_or(""));
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let threads = thread_count(cli.threads, std::env::var(THREADS_ENV).ok().as_deref())?;
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("cannot start thread pool: {e}")))?;
    }
    match cli.command {
        Command::Zeros(a) => cmd_zeros(a),
        Command::S(a) => cmd_s(a),
        Command::Pcf(a) => cmd_pcf(a),
        Command::Check(a) => cmd_check(a),
        Command::Report(a) => cmd_report(a),
    }
}

/// The environment variable wins over the flag.
fn thread_count(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>, Failure> {
    let n = match env.map(str::trim).filter(|s| !s.is_empty()) {
        Some(text) => Some(
            text.parse::<usize>()
                .map_err(|_| Failure::usage(format!("{THREADS_ENV} must be a positive integer, got '{text}'")))?,
        ),
        None => flag,
    };
    match n {
        Some(0) => Err(Failure::usage("thread count must be at least 1")),
        other => Ok(other),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_zeros(path: &Path) -> Result<ZeroSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    import_zeros(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// A zeros file that passed the count check; anything else cannot be used
/// for computation.
fn read_complete_zeros(path: &Path) -> Result<ZeroSet, Failure> {
    let zeros = read_zeros(path)?;
    if !zeros.claimed_complete() {
        return Err(Failure::invalid(format!(
            "{}: zeros fail the count check, so coverage is not established",
            path.display()
        )));
    }
    Ok(zeros)
}

/// Zeros from the file, or computed up to `height`.
fn load_zeros(path: Option<&Path>, height: f64) -> Result<ZeroSet, Failure> {
    match path {
        Some(p) => read_complete_zeros(p),
        None => Ok(find_zeros(height.max(15.0))?),
    }
}

fn cmd_zeros(a: ZerosArgs) -> Outcome {
    if let Some(path) = a.import {
        let zeros = read_zeros(&path)?;
        if a.validate {
            zeros
                .validate_counts()
                .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
        }
        eprintln!(
            "{}: {} ordinates up to {}{}",
            path.display(),
            zeros.len(),
            zeros.t_max(),
            if zeros.claimed_complete() { ", complete" } else { ", completeness not established" }
        );
        if let Some(out) = a.out {
            write_output(Some(&out), &zeros.export())?;
        }
        return Ok(0);
    }
    let t_max = a
        .t_max
        .ok_or_else(|| Failure::usage("zeros needs --t-max or --import"))?;
    let zeros = find_zeros(t_max)?;
    write_output(a.out.as_deref(), &zeros.export())?;
    Ok(0)
}

fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, Failure> {
    if !(step > 0.0) || !(to >= from) {
        return Err(Failure::usage("need --to >= --from and --step > 0"));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| from + i as f64 * step).collect())
}

fn cmd_s(a: SArgs) -> Outcome {
    let points = match (a.t, a.from, a.to) {
        (Some(t), _, _) => vec![t],
        (None, Some(from), Some(to)) => grid(from, to, a.step)?,
        _ => return Err(Failure::usage("s needs --t or --from/--to")),
    };
    let top = points.iter().copied().fold(0.0, f64::max);
    let height = match a.x {
        Some(x) if x > 1.0 => top + ZERO_WINDOW / x.ln() + 1.0,
        Some(x) => return Err(Failure::usage(format!("--x must exceed 1, got {x}"))),
        None => top,
    };
    let zeros = load_zeros(a.zeros.as_deref(), height)?;
    let primes = build_prime_table(a.x.unwrap_or(4.0).max(4.0).ceil() as u64)?;
    let ev = SEvaluator::new(&zeros, &primes);
    let spec = QuadratureSpec::default();
    let mut out = String::from("t,S\n");
    for t in points {
        let s = match a.x {
            Some(x) => ev.s_explicit(t, x, &spec)?.0,
            None => ev.s_value(t)?,
        };
        let _ = writeln!(out, "{},{}", fmt_sig12(t), fmt_sig12(s));
    }
    write_output(a.out.as_deref(), &out)?;
    Ok(0)
}

fn cmd_pcf(a: PcfArgs) -> Outcome {
    let zeros = load_zeros(a.zeros.as_deref(), a.t)?;
    let curve = pcf_curve(&zeros, a.t, a.alpha_max, a.step)?;
    write_output(a.out.as_deref(), &curve.to_csv())?;
    Ok(0)
}

fn cmd_check(a: CheckArgs) -> Outcome {
    let params = Params::parse(&a.params)?;
    let zeros = match &a.zeros {
        Some(p) => Some(read_complete_zeros(p)?),
        None => None,
    };
    let ctx = CheckContext {
        zeros: zeros.as_ref(),
        f_source: a.f_source.into(),
        tail_model: a.tail.into(),
        tolerance: a.tol,
        ..CheckContext::default()
    };
    let report = check_identity(&a.identity, &params, &ctx)?;
    let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n";
    write_output(a.out.as_deref(), &text)?;
    if report.passed() {
        Ok(0)
    } else {
        eprintln!(
            "{}: failed, max relative discrepancy {}",
            report.identity,
            fmt_sig12(report.max_rel_discrepancy())
        );
        Ok(2)
    }
}

fn cmd_report(a: ReportArgs) -> Outcome {
    let zeros = load_zeros(a.zeros.as_deref(), a.t)?;
    let primes = build_prime_table(a.x.max(4.0).ceil() as u64)?;
    let opts = ReportOptions {
        alpha_max: a.alpha_max,
        alpha_step: a.step,
        tail_model: a.tail.into(),
        f_tail_source: a.f_source.into(),
        identity_check: !a.no_identity_check,
    };
    let report = full_report(a.t, a.x, &zeros, &primes, &QuadratureSpec::default(), &opts)?;
    let csv = a.csv.unwrap_or_else(|| a.out.with_file_name("pcf.csv"));
    let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n";
    write_output(Some(&a.out), &text)?;
    write_output(Some(&csv), &report.curve.to_csv())?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn environment_overrides_flag() {
        assert_eq!(thread_count(Some(2), None).unwrap(), Some(2));
        assert_eq!(thread_count(Some(2), Some("3")).unwrap(), Some(3));
        assert_eq!(thread_count(None, Some(" ")).unwrap(), None);
        assert_eq!(thread_count(Some(0), None).unwrap_err().code, 1);
        assert_eq!(thread_count(None, Some("many")).unwrap_err().code, 1);
    }

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(grid(1.0, 2.0, 0.5).unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(grid(1.0, 1.0, 0.5).unwrap(), vec![1.0]);
        assert!(grid(2.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(Failure::from(Error::Usage("x".into())).code, 1);
        assert_eq!(Failure::from(Error::Domain("x".into())).code, 1);
        let cov = Error::Coverage { needed: 2.0, available: 1.0 };
        assert_eq!(Failure::from(cov).code, 2);
        let parse = Error::Parse { line: 3, message: "m".into() };
        assert_eq!(Failure::from(parse).code, 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

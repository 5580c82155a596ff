//! Command-line front end: `nodes`, `integrate`, `verify`, `converge`.
//!
//! Exit codes are 0 on success, 1 when a verification check fails and 2 on
//! usage errors.

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{ConvergenceReport, ConvergenceStatus, ConvergenceStudy};
use crate::gauss::{gauss_rule, QuadratureRule, RuleKind};
use crate::integrand::IntegrandSpec;
use crate::jacobi::JacobiExponents;
use crate::lobatto::lobatto_rule;
use crate::{Error, ReferenceValue};

use output::{fmt_f64, with_schema, write_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "jlq",
    version,
    about = "Gauss-Jacobi-Lobatto quadrature toolkit"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the nodes and weights of a rule.
    Nodes(NodesArgs),
    /// Integrate a built-in function against the Jacobi weight.
    Integrate(IntegrateArgs),
    /// Run the invariant suite and print PASS/FAIL per check.
    Verify(VerifyArgs),
    /// Error sweep over n for a built-in integrand.
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Gauss,
    Lobatto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct WeightArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
}

impl WeightArgs {
    fn exponents(&self) -> Result<JacobiExponents, String> {
        JacobiExponents::new(self.alpha, self.beta).map_err(|_| {
            format!(
                "invalid exponents alpha={} beta={}: require alpha > -1 and beta > -1 (finite)",
                self.alpha, self.beta
            )
        })
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct NodesArgs {
    #[command(flatten)]
    weight: WeightArgs,
    /// Gauss: number of nodes. Lobatto: number of interior nodes.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "lobatto")]
    kind: Kind,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct IntegrandArgs {
    #[arg(long)]
    integrand: String,
    /// `key=value`, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl IntegrandArgs {
    fn spec(&self) -> Result<IntegrandSpec, String> {
        let params = self
            .params
            .iter()
            .map(|p| {
                p.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                    .ok_or_else(|| format!("--param '{p}' is not of the form key=value"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntegrandSpec::parse(&self.integrand, &params, self.seed).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Args)]
struct IntegrateArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "lobatto")]
    kind: Kind,
    #[command(flatten)]
    integrand: IntegrandArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long = "n-max", alias = "n", default_value_t = 64)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    integrand: IntegrandArgs,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long = "q-pred", allow_hyphen_values = true)]
    q_pred: f64,
    #[arg(
        long = "n-list",
        value_delimiter = ',',
        default_value = "8,16,32,64,128,256,512"
    )]
    n_list: Vec<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = write!(stdout, "{}", err.render());
                return EXIT_OK;
            }
            let rendered = err.render().to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{first}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAILED
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidExponents { .. } | Error::InvalidArgument(_) | Error::Precondition(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn open_sink<'a>(
    out: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, Failure> {
    match out {
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(stdout)),
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Nodes(a) => cmd_nodes(a, stdout),
        Command::Integrate(a) => cmd_integrate(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Converge(a) => cmd_converge(a, stdout),
    }
}

fn build_rule(e: JacobiExponents, n: usize, kind: Kind) -> Result<QuadratureRule, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    Ok(match kind {
        Kind::Gauss => gauss_rule(e, n)?,
        Kind::Lobatto => lobatto_rule(e, n)?.into_rule(),
    })
}

#[derive(Serialize)]
struct NodesJson<'a> {
    alpha: f64,
    beta: f64,
    n: usize,
    kind: RuleKind,
    exactness_degree: usize,
    nodes: &'a [f64],
    weights: &'a [f64],
}

fn cmd_nodes(a: NodesArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let e = a.weight.exponents().map_err(Failure::Usage)?;
    let rule = build_rule(e, a.n, a.kind)?;
    let mut sink = open_sink(&a.output.out, stdout)?;
    match a.output.format {
        Format::Csv => {
            writeln!(sink, "index,node,weight")?;
            for (i, (x, w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
                writeln!(sink, "{i},{},{}", fmt_f64(*x), fmt_f64(*w))?;
            }
        }
        Format::Json => {
            let doc = NodesJson {
                alpha: e.alpha(),
                beta: e.beta(),
                n: a.n,
                kind: rule.kind(),
                exactness_degree: rule.exactness_degree(),
                nodes: rule.nodes(),
                weights: rule.weights(),
            };
            write_json(&mut sink, &with_schema(&doc)?)?;
        }
    }
    sink.flush()?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IntegrateJson {
    alpha: f64,
    beta: f64,
    n: usize,
    kind: RuleKind,
    integrand: String,
    quadrature: f64,
    reference: ReferenceValue,
    abs_error: f64,
}

fn cmd_integrate(a: IntegrateArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let e = a.weight.exponents().map_err(Failure::Usage)?;
    let spec = a.integrand.spec().map_err(Failure::Usage)?;
    let rule = build_rule(e, a.n, a.kind)?;
    let f = spec.instantiate(e, a.n)?;
    let q = rule.integrate(|t| f.eval_t(t))?;
    let reference = f.reference(e)?;
    let abs_error = (q - reference.value).abs();
    let mut sink = open_sink(&a.output.out, stdout)?;
    match a.output.format {
        Format::Csv => {
            writeln!(
                sink,
                "kind,n,quadrature,reference,reference_accuracy,abs_error"
            )?;
            writeln!(
                sink,
                "{},{},{},{},{},{}",
                rule.kind().as_str(),
                a.n,
                fmt_f64(q),
                fmt_f64(reference.value),
                fmt_f64(reference.estimated_accuracy),
                fmt_f64(abs_error)
            )?;
        }
        Format::Json => {
            let doc = IntegrateJson {
                alpha: e.alpha(),
                beta: e.beta(),
                n: a.n,
                kind: rule.kind(),
                integrand: spec.id(),
                quadrature: q,
                reference,
                abs_error,
            };
            write_json(&mut sink, &with_schema(&doc)?)?;
        }
    }
    sink.flush()?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let e = a.weight.exponents().map_err(Failure::Usage)?;
    if a.n_max == 0 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    let checks = verify::run_checks(e, a.n_max, a.seed)?;
    let mut sink = open_sink(&a.out, stdout)?;
    writeln!(
        sink,
        "verify alpha={} beta={} n_max={} seed={}",
        fmt_f64(e.alpha()),
        fmt_f64(e.beta()),
        a.n_max,
        a.seed
    )?;
    let mut failed = 0;
    for c in &checks {
        writeln!(sink, "{}", c.line())?;
        failed += usize::from(!c.passed);
    }
    writeln!(
        sink,
        "summary: {} passed, {} failed",
        checks.len() - failed,
        failed
    )?;
    sink.flush()?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

/// Whether a finished study passes: fitted sweeps must not inflate the
/// scaled error; exact sweeps pass trivially.
pub fn converge_passes(report: &ConvergenceReport) -> bool {
    match report.status {
        ConvergenceStatus::Exact => true,
        _ => report.bound_non_inflating(),
    }
}

#[derive(Serialize)]
struct ConvergeJson<'a> {
    #[serde(flatten)]
    report: &'a ConvergenceReport,
    non_inflating: bool,
}

fn cmd_converge(a: ConvergeArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let e = a.weight.exponents().map_err(Failure::Usage)?;
    let spec = a.integrand.spec().map_err(Failure::Usage)?;
    if !a.q_pred.is_finite() {
        return Err(Failure::Usage("--q-pred must be finite".into()));
    }
    let mut n_list = a.n_list.clone();
    n_list.sort_unstable();
    n_list.dedup();
    let study = ConvergenceStudy {
        exponents: e,
        integrand: spec,
        n_values: n_list,
        smoothness_r: a.r,
        predicted_exponent: a.q_pred,
    };
    let report = study.run()?;
    let pass = converge_passes(&report);
    let mut sink = open_sink(&a.output.out, stdout)?;
    match a.output.format {
        Format::Csv => write_converge_csv(&mut sink, &report, pass)?,
        Format::Json => {
            let doc = ConvergeJson {
                report: &report,
                non_inflating: pass,
            };
            write_json(&mut sink, &with_schema(&doc)?)?;
        }
    }
    sink.flush()?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILED })
}

fn write_converge_csv(
    sink: &mut dyn Write,
    report: &ConvergenceReport,
    pass: bool,
) -> io::Result<()> {
    writeln!(sink, "n,abs_error,scaled_error")?;
    for ((n, err), scaled) in report
        .n_values
        .iter()
        .zip(&report.abs_errors)
        .zip(&report.scaled_errors)
    {
        writeln!(sink, "{n},{},{}", fmt_f64(*err), fmt_f64(*scaled))?;
    }
    let status = match report.status {
        ConvergenceStatus::Exact => "EXACT",
        ConvergenceStatus::Fitted => "FITTED",
        ConvergenceStatus::Unfitted => "UNFITTED",
    };
    let fitted = report
        .fitted_exponent
        .map(fmt_f64)
        .unwrap_or_else(|| "none".into());
    writeln!(
        sink,
        "# status={status} fitted_exponent={fitted} bound_constant={} non_inflating={pass}",
        fmt_f64(report.bound_constant)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("jlq").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn nodes_csv_legendre_lobatto() {
        let (code, out, _) = run_capture(&[
            "nodes", "--alpha", "0", "--beta", "0", "--n", "1", "--kind", "lobatto", "--format",
            "csv",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "index,node,weight");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,-1.0000000000000000e0,3.33333333333333"));
        assert!(lines[2].starts_with("1,0.0000000000000000e0,1.33333333333333"));
        assert!(lines[3].starts_with("2,1.0000000000000000e0,3.33333333333333"));
    }

    #[test]
    fn invalid_alpha_is_usage_error() {
        let (code, _, err) = run_capture(&["nodes", "--alpha", "-1", "--beta", "0", "--n", "3"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        assert!(err.contains("alpha > -1"), "{err}");
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn bad_param_syntax_is_usage_error() {
        let (code, _, _) = run_capture(&[
            "integrate",
            "--alpha",
            "0",
            "--beta",
            "0",
            "--n",
            "4",
            "--integrand",
            "abs_pow",
            "--param",
            "s0.5",
        ]);
        assert_eq!(code, 2);
    }
}

//! `lefschetz` command-line verifier.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on
//! malformed arguments or input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use lefschetz::json::{form_from_str, operator_matrix_to_value};
use lefschetz::lefschetz::{op_lambda, operator_matrix, Operator};
use lefschetz::linalg::Matrix;
use lefschetz::metric::CompatibleTriple;
use lefschetz::report::reports_to_string;
use lefschetz::scalar::{format_scalar, parse_scalar, sign_power};
use lefschetz::suite::{run_suite, Suite, SuiteConfig, DEFAULT_BUDGET, DEFAULT_MAX_N};
use lefschetz::symplectic::weight_decompose;
use lefschetz::Scalar;

const MAX_N_VAR: &str = "LEFSCHETZ_MAX_N";

#[derive(Parser)]
#[command(
    name = "lefschetz",
    version,
    about = "Exact checks of Lefschetz and Kähler identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a JSON array of reports.
    Verify {
        /// kahler, injectivity, orbit-span, large-family, counterexample or all
        suite: String,
        /// Comma-separated dimensions n (R^{2n}).
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Comma-separated degrees k.
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<usize>>,
        /// Comma-separated rational scales, e.g. 2,3/2.
        #[arg(long, value_delimiter = ',')]
        scale: Option<Vec<String>>,
        /// Maximum generator word length.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Report file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; output order does not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Summarise a form stored as JSON.
    Describe { path: PathBuf },
    /// Write the matrix of L, Lambda, H, star or Lpow:i on one degree.
    Export {
        op: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Matrix file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Distinguishes failing checks (exit 1) from bad input (exit 2).
enum Outcome {
    Pass,
    Fail,
}

fn max_n() -> Result<usize> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| anyhow!("{MAX_N_VAR} must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(
    suite: &str,
    n: Option<Vec<usize>>,
    k: Option<Vec<usize>>,
    scale: Option<Vec<String>>,
    budget: usize,
    out: Option<PathBuf>,
    jobs: usize,
) -> Result<Outcome> {
    let mut config = SuiteConfig::new(suite.parse::<Suite>()?);
    config.n_values = n;
    config.k_values = k;
    config.scales = scale
        .map(|ss| {
            ss.iter()
                .map(|s| parse_scalar(s))
                .collect::<lefschetz::Result<Vec<Scalar>>>()
        })
        .transpose()?;
    config.budget = budget;
    config.jobs = jobs;
    config.max_n = max_n()?;
    let outcome = run_suite(&config)?;
    for r in &outcome.reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        eprintln!("{status} {} {}", r.check, r.params);
    }
    emit(out.as_ref(), &reports_to_string(&outcome.reports))?;
    Ok(if outcome.all_passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn describe(path: &PathBuf) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let form = form_from_str(&text)?;
    let n = form.n();
    let mut parts = vec![
        format!("degree {}", form.degree()),
        format!("{} term{}", form.len(), if form.len() == 1 { "" } else { "s" }),
    ];
    if form.degree() == 2 {
        let classes = weight_decompose(&form)?.classes();
        parts.push(match classes.as_slice() {
            [] => "no weights".to_string(),
            [one] => format!("{one}-weights only"),
            many => format!("{}-weights", many.join(", ")),
        });
        let degenerate = form.power(n).is_zero();
        parts.push(if degenerate { "degenerate" } else { "non-degenerate" }.to_string());
    }
    let triple = CompatibleTriple::standard(n)?;
    let primitive = op_lambda(&form, &triple)?.is_zero();
    parts.push(if primitive { "primitive" } else { "not primitive" }.to_string());
    println!("{} (n = {n})", parts.join(", "));
    Ok(Outcome::Pass)
}

fn export(op: &str, n: usize, k: usize, out: Option<PathBuf>) -> Result<Outcome> {
    let op = Operator::parse(op)?;
    let limit = max_n()?;
    if n == 0 || n > limit {
        bail!("n = {n} outside 1..={limit}");
    }
    let triple = CompatibleTriple::standard(n)?;
    let matrix = operator_matrix(&op, k, &triple)?;
    let mut outcome = Outcome::Pass;
    if op == Operator::Star {
        let square = operator_matrix(&Operator::compose(Operator::Star, Operator::Star), k, &triple)?;
        let expected = Matrix::identity(matrix.cols()).scale(&sign_power(k));
        if square.matrix != expected {
            eprintln!("star∘star ≠ {} on degree {k}", format_scalar(&sign_power(k)));
            outcome = Outcome::Fail;
        }
    }
    let text = serde_json::to_string(&operator_matrix_to_value(&matrix))? + "\n";
    emit(out.as_ref(), &text)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            suite,
            n,
            k,
            scale,
            budget,
            out,
            jobs,
        } => verify(&suite, n, k, scale, budget, out, jobs),
        Command::Describe { path } => describe(&path),
        Command::Export { op, n, k, out } => export(&op, n, k, out),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

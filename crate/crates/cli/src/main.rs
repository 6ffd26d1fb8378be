mod args;
mod report;
mod svg;

use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use flatnewt::concave::{midpoint_concavity_violation, HullFunction, OscillatingField};
use flatnewt::decide::{classify_hessian, decide_flat, hessian_at_zero, DecideError, DEFAULT_EIGEN_TOL, HESSIAN_STEP};
use flatnewt::functional::grid_quadrature;
use flatnewt::geom2d::Domain;
use flatnewt::kbound::{divergence_certificate, estimate_k, KboundError};

use args::{BudgetArgs, Cli, Command, Common, Config};
use report::{function_summary, to_value, Report};

/// Exit status for malformed or invalid input.
const EXIT_INPUT: u8 = 3;
/// Exit status for failures inside an analysis.
const EXIT_INTERNAL: u8 = 4;

/// Random pairs tried when looking for a midpoint concavity violation.
const CONCAVITY_PAIRS: usize = 10_000;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Internal(m) => write!(f, "analysis failed: {m}"),
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

/// A finished command: the report, an optional figure witness and the
/// exit status.
struct Outcome {
    report: Report,
    figure: Option<HullFunction>,
    code: u8,
}

struct Setup {
    config: Config,
    domain: Domain,
    source: String,
    seed: u64,
}

fn setup(common: &Common) -> Result<Setup, CliError> {
    let config = args::load_config(common)?;
    let (domain, source) = args::load_domain(common, &config)?;
    let seed = common.seed.or(config.seed).unwrap_or(0);
    Ok(Setup {
        config,
        domain,
        source,
        seed,
    })
}

fn domain_info(s: Setup) -> Outcome {
    Outcome {
        report: Report::new("domain-info", &s.domain, &s.source, s.seed),
        figure: None,
        code: 0,
    }
}

fn k_estimate(s: Setup, budget: &BudgetArgs) -> Result<Outcome, CliError> {
    let budget = args::budget(budget, &s.config)?;
    let est = estimate_k(&s.domain, &budget, s.seed);
    let mut report = Report::new("k-estimate", &s.domain, &s.source, s.seed);
    report.provenance("budget", to_value(&budget));
    report.set("k_estimate", to_value(&est));
    report.set("witness_summary", function_summary(&est.witness));
    if !est.upper.is_finite() {
        report.set(
            "upper_note",
            json!("unbounded: a vertical support line is not angular, so the ratio has no finite supremum"),
        );
    }
    Ok(Outcome {
        report,
        figure: Some(est.witness),
        code: 0,
    })
}

fn witness(s: Setup, threshold: Option<f64>) -> Result<Outcome, CliError> {
    let threshold = threshold.or(s.config.threshold).unwrap_or(args::DEFAULT_THRESHOLD);
    let mut report = Report::new("witness", &s.domain, &s.source, s.seed);
    report.provenance("threshold", json!(threshold));
    let (status, figure, code) = match divergence_certificate(&s.domain, threshold) {
        Ok(cert) => {
            report.set("witness_summary", function_summary(&cert.witness));
            report.push("certificates", to_value(&cert));
            (json!({"status": "certificate", "best_ratio": cert.achieved_ratio}), Some(cert.witness), 0)
        }
        Err(KboundError::HypothesisFailed { best_ratio }) => (
            json!({"status": "hypothesis_failed", "best_ratio": best_ratio,
                   "reason": "both vertical support lines are angular, so the ratio is bounded"}),
            None,
            1,
        ),
        Err(KboundError::BudgetExhausted { best_ratio }) => {
            (json!({"status": "budget_exhausted", "best_ratio": best_ratio}), None, 2)
        }
        Err(e @ KboundError::BadThreshold(_)) => return Err(CliError::Input(e.to_string())),
        Err(e) => return Err(internal(e)),
    };
    report.set("outcome", status);
    Ok(Outcome { report, figure, code })
}

fn decide(s: Setup, budget: &BudgetArgs, integrand: Option<String>) -> Result<Outcome, CliError> {
    let budget = args::budget(budget, &s.config)?;
    let text = integrand.or(s.config.integrand.clone()).unwrap_or_else(|| "newtonian".into());
    let f = args::parse_integrand(&text)?;
    let decide_err = |e: DecideError| match e {
        DecideError::Geom(g) => internal(g),
        e => CliError::Input(e.to_string()),
    };
    let h = hessian_at_zero(&f, HESSIAN_STEP).map_err(decide_err)?;
    let class = classify_hessian(&h, DEFAULT_EIGEN_TOL).map_err(decide_err)?;
    let verdict = decide_flat(&s.domain, &class, &budget, s.seed).map_err(decide_err)?;
    let mut report = Report::new("decide", &s.domain, &s.source, s.seed);
    report.provenance("budget", to_value(&budget));
    report.provenance("integrand", json!(f.label()));
    report.set("hessian", to_value(&h));
    let figure = verdict.evidence.k_estimate.as_ref().map(|e| e.witness.clone());
    let code = verdict.kind.exit_code() as u8;
    report.push("verdicts", to_value(&verdict));
    Ok(Outcome { report, figure, code })
}

fn oscillation(s: Setup, n: Option<Vec<u32>>, grid: Option<usize>) -> Result<Outcome, CliError> {
    let frequencies = n.or(s.config.n.clone()).unwrap_or(args::DEFAULT_FREQUENCIES.to_vec());
    let grid = grid.or(s.config.grid).unwrap_or(args::DEFAULT_GRID);
    if frequencies.is_empty() || grid == 0 {
        return Err(CliError::Input("oscillation needs at least one frequency and a positive grid".into()));
    }
    let rows: Vec<Value> = frequencies
        .iter()
        .map(|&k| {
            let field = OscillatingField::new(&s.domain, k);
            let i_x = grid_quadrature(|p| field.gradient(p).x.powi(2), &s.domain, grid);
            let i_y = grid_quadrature(|p| field.gradient(p).y.powi(2), &s.domain, grid);
            let degenerate = !(i_y > 0.0);
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let violation = midpoint_concavity_violation(|p| field.value(p), &s.domain, CONCAVITY_PAIRS, 1e-12, &mut rng);
            json!({
                "N": k,
                "I_x": i_x,
                "I_y": i_y,
                "ratio": if degenerate { None } else { Some(i_x / i_y) },
                "degenerate": degenerate,
                "concavity": if violation.is_some() { "non-concave" } else { "no violation found" },
            })
        })
        .collect();
    let mut report = Report::new("oscillation", &s.domain, &s.source, s.seed);
    report.provenance("grid", json!(grid));
    report.set("oscillation", Value::Array(rows));
    Ok(Outcome {
        report,
        figure: None,
        code: 0,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let common = match &cli.command {
        Command::DomainInfo(common)
        | Command::KEstimate { common, .. }
        | Command::Witness { common, .. }
        | Command::Decide { common, .. }
        | Command::Oscillation { common, .. } => common,
    };
    let s = setup(common)?;
    let domain = s.domain.clone();
    let outcome = match cli.command {
        Command::DomainInfo(_) => domain_info(s),
        Command::KEstimate { ref budget, .. } => k_estimate(s, budget)?,
        Command::Witness { threshold, .. } => witness(s, threshold)?,
        Command::Decide {
            ref budget,
            ref integrand,
            ..
        } => decide(s, budget, integrand.clone())?,
        Command::Oscillation { ref n, grid, .. } => oscillation(s, n.clone(), grid)?,
    };
    let text = outcome.report.render();
    match &common.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &common.svg {
        write_file(path, &svg::figure(&domain, outcome.figure.as_ref()))?;
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

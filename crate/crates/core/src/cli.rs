//! Command line interface.
//!
//! Exit codes: 0 success (and, where an oracle ran, agreement), 1 oracle
//! disagreement or selftest failure, 2 usage or input errors.

use clap::{Args, Parser, Subcommand};

use crate::analyzer::{analyze, AnalyzeOptions};
use crate::error::Result;
use crate::fixtures;
use crate::oracle::{numerical_index, singular_sweep, uniformization_residual};
use crate::report::{OracleAgreement, Report};
use crate::scenario::{scenario_hash, Scenario};
use crate::symbol::{GammaSymbolData, PullbackConvention};

#[derive(Parser)]
#[command(
    name = "gfred",
    version,
    about = "Fredholm analysis of finite-group shift operators on circle unions"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SourceArg {
    /// Scenario file path, or `fixture:NAME` for a built-in scenario
    source: String,
}

#[derive(Args)]
struct AnalyzeFlags {
    /// Covector samples per copy and direction
    #[arg(long)]
    samples: Option<usize>,
    /// Sample jitter seed
    #[arg(long)]
    seed: Option<u64>,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleFlags {
    /// Comma-separated grid sizes (powers of two)
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Near-null threshold for the finite sections
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic Fredholm analysis of a scenario
    Analyze {
        #[command(flatten)]
        source: SourceArg,
        #[command(flatten)]
        flags: AnalyzeFlags,
    },
    /// Finite-section sweep (singular values, near-null counts, lift residual)
    Oracle {
        #[command(flatten)]
        source: SourceArg,
        #[command(flatten)]
        flags: OracleFlags,
        /// Also estimate the index (requires an invertible-looking sweep)
        #[arg(long)]
        index: bool,
        /// Emit the sweep as CSV
        #[arg(long)]
        csv: bool,
    },
    /// Run both and check they agree
    Compare {
        #[command(flatten)]
        source: SourceArg,
        #[command(flatten)]
        flags: AnalyzeFlags,
        #[command(flatten)]
        oracle: OracleFlags,
    },
    /// Analyze and cross-check every built-in fixture
    Selftest,
}

fn load(source: &str) -> Result<(Scenario, String)> {
    if let Some(name) = source.strip_prefix("fixture:") {
        let text = fixtures::fixture_json(name)?;
        Ok((Scenario::from_json(text)?, scenario_hash(text.as_bytes())))
    } else {
        let bytes = std::fs::read(source)?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|e| crate::error::Error::Parse(e.to_string()))?;
        Ok((Scenario::from_json(&text)?, scenario_hash(&bytes)))
    }
}

fn options_for(sc: &Scenario, flags: &AnalyzeFlags) -> AnalyzeOptions {
    AnalyzeOptions {
        samples: flags.samples.unwrap_or(sc.options.samples),
        seed: flags.seed.unwrap_or(sc.options.seed),
        eps_inv: sc.options.eps_inv,
    }
}

fn run_compare(
    sc: &Scenario,
    data: &GammaSymbolData,
    hash: &str,
    opts: &AnalyzeOptions,
    sizes: &[usize],
    eps: f64,
) -> Result<Report> {
    let verdict = analyze(data, opts)?;
    let mut report = Report::from_verdict(&verdict, hash);
    report.attach_sweep(&singular_sweep(data, sizes, eps)?);
    if let Some(&n) = sizes.first() {
        report.residuals.push((n, uniformization_residual(data, n, PullbackConvention::Inverse)?));
    }
    report.judge_agreement();
    let _ = sc;
    Ok(report)
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze { source, flags } => {
            let (sc, hash) = load(&source.source)?;
            let data = sc.build()?;
            let opts = options_for(&sc, &flags);
            let verdict = analyze(&data, &opts)?;
            let report = Report::from_verdict(&verdict, &hash);
            print!("{}", if flags.json { report.to_json() } else { report.to_text() });
            Ok(0)
        }
        Command::Oracle { source, flags, index, csv } => {
            let (sc, hash) = load(&source.source)?;
            let data = sc.build()?;
            let sizes = flags.sizes.unwrap_or_else(|| sc.options.oracle_sizes.clone());
            let eps = flags.eps.unwrap_or(sc.options.eps_oracle);
            let verdict = analyze(&data, &AnalyzeOptions::default())?;
            let mut report = Report::from_verdict(&verdict, &hash);
            report.attach_sweep(&singular_sweep(&data, &sizes, eps)?);
            if let Some(&n) = sizes.first() {
                report
                    .residuals
                    .push((n, uniformization_residual(&data, n, PullbackConvention::Inverse)?));
            }
            if index {
                if let Some(&n) = sizes.last() {
                    report.attach_index(&numerical_index(&data, n, eps)?);
                }
            }
            print!("{}", if csv { report.to_csv() } else { report.to_text() });
            Ok(0)
        }
        Command::Compare { source, flags, oracle } => {
            let (sc, hash) = load(&source.source)?;
            let data = sc.build()?;
            let opts = options_for(&sc, &flags);
            let sizes = oracle.sizes.unwrap_or_else(|| sc.options.oracle_sizes.clone());
            let eps = oracle.eps.unwrap_or(sc.options.eps_oracle);
            let report = run_compare(&sc, &data, &hash, &opts, &sizes, eps)?;
            print!("{}", if flags.json { report.to_json() } else { report.to_text() });
            Ok(if report.oracle_agreement == OracleAgreement::Disagree { 1 } else { 0 })
        }
        Command::Selftest => {
            let sizes = [32usize, 64, 128];
            let mut failures = 0;
            for name in fixtures::fixture_names() {
                let text = fixtures::fixture_json(name)?;
                let sc = Scenario::from_json(text)?;
                let data = sc.build()?;
                let opts = AnalyzeOptions { samples: 64, ..Default::default() };
                let report = run_compare(
                    &sc,
                    &data,
                    &scenario_hash(text.as_bytes()),
                    &opts,
                    &sizes,
                    sc.options.eps_oracle,
                )?;
                let ok = report.oracle_agreement == OracleAgreement::Agree
                    && report.residuals.iter().all(|&(_, r)| r < 1e-10);
                if !ok {
                    failures += 1;
                }
                println!(
                    "{:<28} {:<22} oracle {:<8} residual {:.2e}  [{}]",
                    name,
                    report.classification,
                    match report.oracle_agreement {
                        OracleAgreement::Agree => "agree",
                        OracleAgreement::Disagree => "DISAGREE",
                        OracleAgreement::NotRun => "not-run",
                    },
                    report.residuals.first().map(|&(_, r)| r).unwrap_or(f64::NAN),
                    if ok { "ok" } else { "FAIL" },
                );
            }
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}

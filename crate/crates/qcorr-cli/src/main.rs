//! `qcorr` binary: quantile correlation and partial correlation between CSV
//! columns, the identification → estimation → adequacy-check workflow for
//! quantile autoregressions, and the seeded Monte Carlo harness.
//!
//! Exit codes: 0 success, 2 invalid input or flags, 3 numerical failure
//! inside an estimator.

mod io;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qcorr::{
    backward_eliminate, box_pierce, fit_qar, fit_qar_subset, qacf_residuals, qcor,
    qpacf, qpcor, run_experiment, BandwidthRule, ExperimentId, QuantileLevel, Result,
    Series,
};

use crate::io::{read_series, write_atomic, ColumnSpec, Transform};
use crate::report::DiagnoseSection;

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Quantile correlation, quantile autoregression, and their diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quantile correlation between a response column and a covariate column
    Qcor(PairArgs),
    /// Quantile partial correlation given one or more control columns
    Qpcor(QpcorArgs),
    /// Quantile partial autocorrelation function of one series
    Qpacf(QpacfArgs),
    /// Fit a quantile autoregression (full order or an explicit lag subset)
    Fit(FitArgs),
    /// Identification, backward elimination, and residual adequacy in one run
    Diagnose(DiagnoseArgs),
    /// Seeded Monte Carlo experiments over the built-in data generators
    Simulate(SimArgs),
}

/// Flags shared by every estimator command.
#[derive(Args)]
struct EstFlags {
    /// Quantile level in (0,1); repeat the flag to evaluate several
    #[arg(long = "tau", required = true)]
    tau: Vec<f64>,
    /// Bandwidth rule for the plug-in variance: hs, b, 3hs or 0.6b
    #[arg(long, default_value = "hs")]
    bandwidth: BandwidthRule,
    /// Tail parameter of the Hall–Sheather bandwidth
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Two-sided level used for significance flags
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// Also write the table as CSV (atomically; no partial file on failure)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A single-series input file.
#[derive(Args)]
struct InputArgs {
    /// CSV file (comma-separated, '.' decimal; header auto-detected)
    file: PathBuf,
    /// Column holding the series: a name (needs a header) or 0-based index
    #[arg(long, default_value = "0")]
    column: String,
    /// Transform applied to every column this command reads
    #[arg(long, value_enum, default_value_t = Transform::None)]
    transform: Transform,
}

impl InputArgs {
    fn series(&self) -> Result<Series> {
        read_series(&ColumnSpec {
            path: self.file.clone(),
            column: self.column.clone(),
            transform: self.transform,
        })
    }
}

#[derive(Args)]
struct PairArgs {
    /// CSV file (comma-separated, '.' decimal; header auto-detected)
    file: PathBuf,
    /// Response column Y: a name (needs a header) or 0-based index
    #[arg(long = "y", default_value = "0")]
    y: String,
    /// Covariate column X
    #[arg(long = "x", default_value = "1")]
    x: String,
    /// Transform applied to every column this command reads
    #[arg(long, value_enum, default_value_t = Transform::None)]
    transform: Transform,
    #[command(flatten)]
    est: EstFlags,
}

impl PairArgs {
    fn col(&self, column: &str) -> Result<Series> {
        read_series(&ColumnSpec {
            path: self.file.clone(),
            column: column.to_string(),
            transform: self.transform,
        })
    }
}

#[derive(Args)]
struct QpcorArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Control column Z; repeat the flag for a control vector
    #[arg(long = "z", required = true)]
    z: Vec<String>,
}

#[derive(Args)]
struct QpacfArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of lags to compute
    #[arg(long = "max-lag", default_value_t = 12)]
    max_lag: usize,
    #[command(flatten)]
    est: EstFlags,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Autoregression order (lags 1..=p; 0 fits the intercept only)
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Explicit comma-separated lag subset, e.g. --lags 1,3 (overrides --p)
    #[arg(long, value_delimiter = ',')]
    lags: Option<Vec<usize>>,
    #[command(flatten)]
    est: EstFlags,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Backward elimination starts from lags 1..=p (0 skips elimination and
    /// fits the intercept-only model)
    #[arg(long, default_value_t = 5)]
    p: usize,
    /// Residual-correlogram length entering the portmanteau statistic
    #[arg(long = "K", default_value_t = 18)]
    k: usize,
    /// Lags shown by the identification stage (default: the value of --K)
    #[arg(long = "max-lag")]
    max_lag: Option<usize>,
    #[command(flatten)]
    est: EstFlags,
}

#[derive(Args)]
struct SimArgs {
    /// Which experiment to run: 1, 2, 3, 4, 5 or figure1
    #[arg(long)]
    experiment: ExperimentId,
    /// Sample size; repeat the flag to override the default grid
    #[arg(long = "n")]
    n: Vec<usize>,
    /// Quantile level; repeat the flag to override the default grid
    #[arg(long = "tau")]
    tau: Vec<f64>,
    /// Replications per cell (default: the experiment's standard count)
    #[arg(long)]
    reps: Option<usize>,
    /// RNG seed; identical seeds give bitwise-identical reports
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bandwidth rule; repeat the flag to evaluate several
    #[arg(long = "bandwidth")]
    bandwidth: Vec<BandwidthRule>,
    /// Worker threads for the replication loop (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Write the report CSV here (atomically)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let res = match cli.command {
        Cmd::Qcor(a) => cmd_qcor(a),
        Cmd::Qpcor(a) => cmd_qpcor(a),
        Cmd::Qpacf(a) => cmd_qpacf(a),
        Cmd::Fit(a) => cmd_fit(a),
        Cmd::Diagnose(a) => cmd_diagnose(a),
        Cmd::Simulate(a) => cmd_simulate(a),
    };
    if let Err(e) = res {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn levels(taus: &[f64]) -> Result<Vec<QuantileLevel>> {
    taus.iter().map(|&t| QuantileLevel::new(t)).collect()
}

fn cmd_qcor(a: PairArgs) -> Result<()> {
    let y = a.col(&a.y)?;
    let x = a.col(&a.x)?;
    let mut ests = Vec::new();
    for tau in levels(&a.est.tau)? {
        ests.push(qcor(&y, &x, tau, a.est.bandwidth, a.est.alpha)?);
    }
    print!(
        "{}",
        report::estimates_text("quantile correlation", a.est.bandwidth.as_str(), &ests)
    );
    if let Some(out) = &a.est.out {
        write_atomic(out, &report::estimates_csv(&ests))?;
    }
    Ok(())
}

fn cmd_qpcor(a: QpcorArgs) -> Result<()> {
    let y = a.pair.col(&a.pair.y)?;
    let x = a.pair.col(&a.pair.x)?;
    let z: Vec<Series> = a
        .z
        .iter()
        .map(|sel| a.pair.col(sel))
        .collect::<Result<_>>()?;
    let mut ests = Vec::new();
    for tau in levels(&a.pair.est.tau)? {
        ests.push(qpcor(&y, &x, &z, tau, a.pair.est.bandwidth, a.pair.est.alpha)?);
    }
    print!(
        "{}",
        report::estimates_text(
            "quantile partial correlation",
            a.pair.est.bandwidth.as_str(),
            &ests
        )
    );
    if let Some(out) = &a.pair.est.out {
        write_atomic(out, &report::estimates_csv(&ests))?;
    }
    Ok(())
}

fn cmd_qpacf(a: QpacfArgs) -> Result<()> {
    let y = a.input.series()?;
    let mut cgs = Vec::new();
    for tau in levels(&a.est.tau)? {
        let cg = qpacf(&y, tau, a.max_lag, a.est.bandwidth, a.est.alpha)?;
        print!(
            "{}",
            report::correlogram_text("quantile partial autocorrelations", &cg, a.est.level)
        );
        cgs.push(cg);
    }
    if let Some(out) = &a.est.out {
        write_atomic(out, &report::correlograms_csv(&cgs, a.est.level))?;
    }
    Ok(())
}

fn cmd_fit(a: FitArgs) -> Result<()> {
    let y = a.input.series()?;
    let mut fits = Vec::new();
    for tau in levels(&a.est.tau)? {
        let fit = match &a.lags {
            Some(lags) => fit_qar_subset(&y, tau, lags, a.est.bandwidth, a.est.alpha)?,
            None => fit_qar(&y, tau, a.p, a.est.bandwidth, a.est.alpha)?,
        };
        print!("{}", report::fit_text(&fit));
        fits.push(fit);
    }
    if let Some(out) = &a.est.out {
        write_atomic(out, &report::fits_csv(&fits))?;
    }
    Ok(())
}

fn cmd_diagnose(a: DiagnoseArgs) -> Result<()> {
    let y = a.input.series()?;
    let max_lag = a.max_lag.unwrap_or(a.k);
    let mut sections = Vec::new();
    for tau in levels(&a.est.tau)? {
        let cg = qpacf(&y, tau, max_lag, a.est.bandwidth, a.est.alpha)?;
        let fit = if a.p == 0 {
            fit_qar(&y, tau, 0, a.est.bandwidth, a.est.alpha)?
        } else {
            backward_eliminate(&y, tau, a.p, a.est.bandwidth, a.est.alpha, a.est.level)?
        };
        let racf = qacf_residuals(&fit, a.k)?;
        let bp = box_pierce(&racf, fit.included_lags.len())?;
        sections.push(DiagnoseSection {
            qpacf: cg,
            fit,
            racf,
            bp,
            p_max: a.p,
            level: a.est.level,
        });
    }
    print!("{}", report::diagnose_text(&sections));
    if let Some(out) = &a.est.out {
        write_atomic(out, &report::diagnose_csv(&sections))?;
    }
    Ok(())
}

fn cmd_simulate(a: SimArgs) -> Result<()> {
    let (def_n, def_tau, def_reps) = a.experiment.default_config();
    let n = if a.n.is_empty() { def_n } else { a.n.clone() };
    let tau = if a.tau.is_empty() { def_tau } else { a.tau.clone() };
    let reps = a.reps.unwrap_or(def_reps);
    let rules = if a.bandwidth.is_empty() {
        None
    } else {
        Some(a.bandwidth.as_slice())
    };
    let rep = run_experiment(a.experiment, &n, &tau, reps, rules, a.seed, a.workers)?;
    print!("{}", rep.to_text());
    if let Some(out) = &a.out {
        write_atomic(out, &rep.to_csv())?;
    }
    Ok(())
}

//! Subcommands. Each returns the one-line summary printed on success.

use std::fs::File;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hawkinar_core::approx::{SweepPlan, DEFAULT_REPS, DEFAULT_WINDOWS};
use hawkinar_core::estimate::estimate_kernel;
use hawkinar_core::hawkes::{simulate_hawkes_cluster, simulate_hawkes_thinning};
use hawkinar_core::inar::{
    autocovariance, beta_expansion, inar_mean, simulate_family, simulate_inar, simulate_inar_branching,
};

use crate::config::RunConfig;
use crate::error::AppError;
use crate::{io, parallel};

type Result<T> = std::result::Result<T, AppError>;

const DEFAULT_DELTAS: [f64; 3] = [0.2, 0.1, 0.05];
const DEFAULT_HAWKES_WINDOW: (f64, f64) = (0.0, 100.0);
const DEFAULT_STEPS: usize = 1000;
const DEFAULT_MAX_LAG: usize = 5;
const DEFAULT_ORDER: usize = 10;
const THEORY_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "hawkinar",
    version,
    about = "Hawkes and INAR(∞) simulation, moments and convergence checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub reps: Option<usize>,
    /// Output file (a directory for multi-replicate Hawkes runs).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Simulate a Hawkes process on a window.
    SimulateHawkes,
    /// Simulate an INAR(∞) series or a single family.
    SimulateInar,
    /// Closed-form mean and autocovariances; no simulation.
    Theory,
    /// Hawkes vs approximating INAR across a sweep of grid widths.
    Converge,
    /// Least-squares kernel estimate from a bin-count CSV.
    Estimate,
}

impl Cli {
    pub fn run(&self) -> Result<String> {
        let config = match &self.config {
            Some(path) => RunConfig::from_path(path)?,
            None => RunConfig::default(),
        }
        .with_overrides(self.seed, self.reps, self.out.clone());
        run(self.command, &config)
    }
}

pub fn run(command: Command, config: &RunConfig) -> Result<String> {
    match command {
        Command::SimulateHawkes => simulate_hawkes(config),
        Command::SimulateInar => simulate_inar_cmd(config),
        Command::Theory => theory(config),
        Command::Converge => converge(config),
        Command::Estimate => estimate(config),
    }
}

fn simulate_hawkes(config: &RunConfig) -> Result<String> {
    let model = config.hawkes_model()?;
    let window = config.window.unwrap_or(DEFAULT_HAWKES_WINDOW);
    let reps = config.reps_or(1)?;
    let out = config.out()?;
    let thinning = match config.method.as_deref() {
        None | Some("cluster") => false,
        Some("thinning") => true,
        Some(other) => return Err(AppError::Config(format!("unknown Hawkes method `{other}`"))),
    };
    let stream = config.stream();
    let lookback = config.lookback;
    let runs = parallel::try_replicate(reps, |i| {
        let mut rng = stream.substream(i as u64).rng();
        if thinning {
            simulate_hawkes_thinning(&model, window, lookback, &mut rng).map(Realization::Plain)
        } else {
            simulate_hawkes_cluster(&model, window, lookback, &mut rng).map(Realization::Cluster)
        }
    })?;
    let target = |i: usize| -> Result<PathBuf> {
        if reps == 1 {
            return Ok(out.to_path_buf());
        }
        std::fs::create_dir_all(out).map_err(|e| AppError::io(out, e))?;
        Ok(out.join(format!("rep_{i:05}.csv")))
    };
    let mut total = 0usize;
    for (i, r) in runs.iter().enumerate() {
        let path = target(i)?;
        match r {
            Realization::Cluster(c) => io::write_atomic(&path, |w| io::write_cluster(c, w))?,
            Realization::Plain(p) => io::write_atomic(&path, |w| io::write_point_pattern(p, w))?,
        }
        total += r.len();
    }
    let len = window.1 - window.0;
    let rate = total as f64 / (reps as f64 * len);
    Ok(format!(
        "simulate-hawkes: reps={reps} events={total} rate={rate:.6} target_rate={:.6}",
        model.mean_rate()
    ))
}

enum Realization {
    Cluster(hawkinar_core::ClusterRealization),
    Plain(hawkinar_core::PointPattern),
}

impl Realization {
    fn len(&self) -> usize {
        match self {
            Realization::Cluster(c) => c.pattern().len(),
            Realization::Plain(p) => p.len(),
        }
    }
}

fn simulate_inar_cmd(config: &RunConfig) -> Result<String> {
    let params = config.inar_params()?;
    let n = config.n_steps.unwrap_or(DEFAULT_STEPS);
    let out = config.out()?;
    let mut rng = config.stream().rng();
    match config.method.as_deref() {
        Some("family") => {
            let f = simulate_family(&params, n, &mut rng);
            io::write_atomic(out, |w| io::write_family(&f, w))?;
            Ok(format!(
                "simulate-inar: family horizon={n} total_size={} generations={}",
                f.total_size(),
                f.per_generation().len()
            ))
        }
        method => {
            let series = match method {
                None | Some("recursion") => simulate_inar(&params, n, config.burn_in, &mut rng),
                Some("branching") => simulate_inar_branching(&params, n, config.burn_in, &mut rng)?,
                Some(other) => return Err(AppError::Config(format!("unknown INAR method `{other}`"))),
            };
            io::write_atomic(out, |w| io::write_count_series(&series, w))?;
            let mean = series.total() as f64 / n.max(1) as f64;
            Ok(format!(
                "simulate-inar: steps={n} mean={mean:.6} target_mean={:.6}",
                inar_mean(&params)
            ))
        }
    }
}

fn theory(config: &RunConfig) -> Result<String> {
    let params = config.inar_params()?;
    let max_lag = config.max_lag.unwrap_or(DEFAULT_MAX_LAG);
    let r = autocovariance(&params, max_lag, THEORY_TOL)?;
    let beta_total = beta_expansion(&params, 1e-9)?.total;
    if let Some(out) = &config.out {
        io::write_atomic(out, |w| write_autocovariance(&r, w))?;
    }
    let lags: Vec<String> = r.iter().enumerate().map(|(j, v)| format!("R({j})={v:.6}")).collect();
    Ok(format!(
        "theory: K={:.6} mean={} beta_sum={:.6} {}",
        params.reproduction_mean(),
        fmt_short(inar_mean(&params)),
        beta_total,
        lags.join(" ")
    ))
}

/// Up to six decimals without trailing zeros: `2`, `2.5`, `2.666667`.
fn fmt_short(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn write_autocovariance(r: &[f64], w: &mut dyn std::io::Write) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(["lag", "autocovariance"])?;
    for (j, v) in r.iter().enumerate() {
        out.write_record([j.to_string(), v.to_string()])?;
    }
    out.flush().map_err(|e| AppError::io("<csv>", e))
}

fn converge(config: &RunConfig) -> Result<String> {
    let model = config.hawkes_model()?;
    let deltas = config.deltas.clone().unwrap_or_else(|| DEFAULT_DELTAS.to_vec());
    let windows = config.windows.unwrap_or(DEFAULT_WINDOWS);
    let reps = config.reps_or(DEFAULT_REPS)?;
    let out = config.out()?;
    let plan = SweepPlan::new(&model, &deltas, windows, reps)?;
    let report = parallel::convergence_sweep(&plan, config.stream())?;
    io::write_atomic(out, |w| io::write_report_csv(&report, w))?;
    io::write_atomic(&json_sibling(out), |w| io::write_report_json(&report, w))?;
    let rows: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("delta={} w1={:.4}±{:.4}", r.delta, r.w1_window1, r.w1_window1_se))
        .collect();
    Ok(format!("converge: reps={reps} {}", rows.join(" ")))
}

fn estimate(config: &RunConfig) -> Result<String> {
    let input = config
        .input
        .as_deref()
        .ok_or_else(|| AppError::Config("missing field `input`".into()))?;
    let delta = config.delta()?;
    let p = config.p.unwrap_or(DEFAULT_ORDER);
    let out = config.out()?;
    let file = File::open(input).map_err(|e| AppError::io(input, e))?;
    let series = io::read_count_series(file, delta)?;
    let est = estimate_kernel(&series, p)?;
    io::write_atomic(out, |w| io::write_kernel_estimate_csv(&est, w))?;
    io::write_atomic(&json_sibling(out), |w| io::write_kernel_estimate_header(&est, w))?;
    Ok(format!(
        "estimate: n={} p={p} eta_hat={:.6} implied_rate={:.6} negative_h={}",
        series.len(),
        est.eta_hat,
        est.implied_rate(),
        est.negative_count()
    ))
}

/// `report.csv` → `report.json`.
pub fn json_sibling(path: &Path) -> PathBuf {
    path.with_extension("json")
}

//! One scenario end to end: initialise, integrate, sample, verify, persist.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use vortbound::bounds::{continuation_schedule, verify_with, BoundReport, VerifyOptions};
use vortbound::diagnostics::{
    balance_residual_series, max_interior_residual, sample_trajectory, NormSeries,
};
use vortbound::solver::{run_simulation, Trajectory};

use crate::config::ScenarioConfig;
use crate::error::{io_err, HarnessError, Result};
use crate::output::{emit_plotdata, emit_report, emit_timeseries, PLOTDATA_HEADER};
use crate::scenario::init_scenario;

pub const NORMS_FILE: &str = "norms.csv";
pub const REPORT_FILE: &str = "report.json";
pub const PLOTDATA_FILE: &str = "plotdata.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub role: String,
    pub path: PathBuf,
    pub bytes: u64,
}

/// Steps of the local-existence continuation for this run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSummary {
    pub c_loc: f64,
    pub sup0: f64,
    pub sup_delta: f64,
    pub first_step: f64,
    pub subsequent_step: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub verification_interval: Option<[f64; 2]>,
    pub bounds_total: usize,
    pub bounds_satisfied: usize,
    pub unsatisfied: Vec<String>,
    pub balance_max_residual: Option<f64>,
    pub balance_tolerance: f64,
    pub blow_up: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ScenarioConfig,
    pub config_hash: String,
    pub code_version: String,
    pub started_unix_seconds: u64,
    pub wall_clock_seconds: f64,
    pub recorded_states: usize,
    pub schedule: Option<ScheduleSummary>,
    pub files: Vec<FileEntry>,
    pub summary: RunSummary,
}

/// In-memory results of a run, alongside the manifest written to disk.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub series: NormSeries,
    pub reports: Vec<BoundReport>,
    pub residuals: Vec<f64>,
    pub output_dir: PathBuf,
}

/// `[t1, t2]` from the configuration, defaulting to the first recorded time
/// after the start and the final time.
pub fn verification_interval(config: &ScenarioConfig, series: &NormSeries) -> Result<[f64; 2]> {
    let first_after_start = series
        .samples()
        .iter()
        .map(|s| s.t)
        .find(|&t| t > 0.0);
    let t1 = config.t1.or(first_after_start).unwrap_or(0.0);
    let t2 = config.t2.unwrap_or(config.t_end);
    if t2 <= t1 {
        return Err(HarnessError::Config(format!(
            "verification interval [{t1}, {t2}] is degenerate; the bounds need t2 > t1, \
             so t_end must exceed the first recorded time"
        )));
    }
    Ok([t1, t2])
}

fn schedule_summary(config: &ScenarioConfig, series: &NormSeries, t1: f64) -> Option<ScheduleSummary> {
    let sup0 = series.samples().first()?.sup;
    let sup_delta = series.value_at(t1, |s| s.sup).max(std::f64::consts::E.powf(std::f64::consts::E));
    match continuation_schedule(config.t_end, config.nu, config.c_loc, sup0, Some(sup_delta)) {
        Ok(s) => Some(ScheduleSummary {
            c_loc: s.c_loc,
            sup0,
            sup_delta,
            first_step: s.first_step,
            subsequent_step: s.subsequent_step,
            intervals: s.intervals.len(),
        }),
        Err(e) => {
            log::warn!("continuation schedule unavailable: {e}");
            None
        }
    }
}

fn write_manifest(manifest: &RunManifest, dir: &Path) -> Result<()> {
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(manifest).map_err(|source| HarnessError::Json {
        path: path.clone(),
        source,
    })?;
    std::fs::write(&path, text + "\n").map_err(io_err(&path))
}

fn inventory(dir: &Path, roles: &[(&str, &str)]) -> Result<Vec<FileEntry>> {
    roles
        .iter()
        .map(|(role, name)| {
            let path = dir.join(name);
            let bytes = std::fs::metadata(&path).map_err(io_err(&path))?.len();
            Ok(FileEntry {
                role: role.to_string(),
                path,
                bytes,
            })
        })
        .collect()
}

/// Runs `config`, writing every artifact under its output directory (placed
/// below `output_root` when relative).
///
/// A blow-up is not an error: the partial series is written and the summary
/// is marked failed. Invalid configurations and I/O problems are errors.
pub fn run(config: &ScenarioConfig, output_root: Option<&Path>) -> Result<RunOutcome> {
    config.validate()?;
    let started = Instant::now();
    let started_unix_seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let dir = config.resolved_output_dir(output_root);
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;

    let initial = init_scenario(config)?;
    let solver = config.solver();
    let (trajectory, blow_up): (Trajectory, Option<String>) = match run_simulation(&initial, &solver) {
        Ok(t) => (t, None),
        Err(failure) => {
            log::error!("{failure}");
            (failure.partial, Some(failure.error.to_string()))
        }
    };
    let config_hash = trajectory.provenance.config_hash.clone();
    let series = sample_trajectory(&trajectory, config.eps)?;
    emit_timeseries(&series, &dir.join(NORMS_FILE))?;

    let opts = VerifyOptions {
        nu: config.nu,
        eps: config.eps,
        alpha: config.alpha,
        n_convention: config.n_convention,
    };
    let mut reports = Vec::new();
    let mut residuals = Vec::new();
    let mut interval = None;
    let mut schedule = None;
    if blow_up.is_none() {
        let [t1, t2] = verification_interval(config, &series)?;
        interval = Some([t1, t2]);
        reports = verify_with(&series, &opts, t1, t2)?;
        emit_plotdata(&series, &opts, t1, t2, &dir.join(PLOTDATA_FILE))?;
        residuals = balance_residual_series(&series, config.nu)?;
        schedule = schedule_summary(config, &series, t1);
    } else {
        let path = dir.join(PLOTDATA_FILE);
        std::fs::write(&path, format!("{PLOTDATA_HEADER}\n")).map_err(io_err(&path))?;
    }
    emit_report(&reports, &dir.join(REPORT_FILE))?;

    let balance_max_residual = (!residuals.is_empty()).then(|| max_interior_residual(&residuals));
    let unsatisfied: Vec<String> = reports
        .iter()
        .filter(|r| !r.satisfied)
        .map(|r| r.name().to_string())
        .collect();
    let balance_ok = balance_max_residual.is_some_and(|r| r <= config.balance_tolerance);
    let passed = blow_up.is_none() && unsatisfied.is_empty() && balance_ok;
    let summary = RunSummary {
        verification_interval: interval,
        bounds_total: reports.len(),
        bounds_satisfied: reports.len() - unsatisfied.len(),
        unsatisfied,
        balance_max_residual,
        balance_tolerance: config.balance_tolerance,
        blow_up,
        passed,
    };
    let files = inventory(
        &dir,
        &[
            ("norms", NORMS_FILE),
            ("report", REPORT_FILE),
            ("plotdata", PLOTDATA_FILE),
        ],
    )?;
    let manifest = RunManifest {
        config: config.clone(),
        config_hash,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_seconds,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        recorded_states: trajectory.states.len(),
        schedule,
        files,
        summary,
    };
    write_manifest(&manifest, &dir)?;
    Ok(RunOutcome {
        manifest,
        series,
        reports,
        residuals,
        output_dir: dir,
    })
}

/// Runs independent configurations concurrently. Output directories must be
/// distinct.
pub fn run_batch(configs: &[ScenarioConfig], output_root: Option<&Path>) -> Result<Vec<Result<RunOutcome>>> {
    let mut seen = BTreeSet::new();
    for c in configs {
        let dir = c.resolved_output_dir(output_root);
        if !seen.insert(dir.clone()) {
            return Err(HarnessError::Config(format!(
                "two batch entries share the output directory {}",
                dir.display()
            )));
        }
    }
    Ok(std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| scope.spawn(move || run(c, output_root)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    }))
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vortbound::bounds::{continuation_schedule, verify_with, ReportDocument, VerifyOptions};
use vortbound::diagnostics::NConvention;
use vortbound_harness::output::{emit_report, format_report, read_report, read_timeseries};
use vortbound_harness::{
    output_root_from_env, run, run_batch, HarnessError, Overrides, RunOutcome, ScenarioConfig,
    ScenarioName,
};

#[derive(Parser)]
#[command(name = "vortbound", version, about = "Vorticity solver and a priori bound checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a TOML configuration file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run several configurations concurrently.
    Batch { configs: Vec<PathBuf> },
    /// Check a norms CSV against every bound.
    Verify {
        norms: PathBuf,
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value_t = vortbound::bounds::DEFAULT_EPS)]
        eps: f64,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
        #[arg(long, default_value_t = vortbound::bounds::DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, value_parser = parse_convention, default_value = "squared_norm")]
        n_convention: NConvention,
        /// Also write the report document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the continuation schedule as JSON.
    Schedule {
        #[arg(long = "T")]
        horizon: f64,
        #[arg(long)]
        nu: f64,
        #[arg(long = "C-loc")]
        c_loc: f64,
        #[arg(long)]
        sup0: f64,
        /// Sup norm after the first step; defaults to `sup0`.
        #[arg(long)]
        sup_delta: Option<f64>,
    },
    /// Print a report document as a table.
    Report { report: PathBuf },
}

#[derive(Args, Default)]
struct OverrideArgs {
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<ScenarioName>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "L")]
    length: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    record_stride: Option<usize>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long)]
    t2: Option<f64>,
    #[arg(long = "C-loc")]
    c_loc: Option<f64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    dealias: Option<bool>,
    #[arg(long, value_parser = parse_convention)]
    n_convention: Option<NConvention>,
    #[arg(long)]
    balance_tolerance: Option<f64>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Overrides {
            scenario: a.scenario,
            n: a.n,
            length: a.length,
            nu: a.nu,
            dt: a.dt,
            t_end: a.t_end,
            record_stride: a.record_stride,
            amplitude: a.amplitude,
            seed: a.seed,
            t1: a.t1,
            t2: a.t2,
            c_loc: a.c_loc,
            output_dir: a.output_dir,
            eps: a.eps,
            alpha: a.alpha,
            dealias: a.dealias,
            n_convention: a.n_convention,
            balance_tolerance: a.balance_tolerance,
        }
    }
}

fn parse_scenario(s: &str) -> Result<ScenarioName, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

fn parse_convention(s: &str) -> Result<NConvention, String> {
    match s {
        "squared_norm" => Ok(NConvention::SquaredNorm),
        "norm" => Ok(NConvention::Norm),
        _ => Err(format!("expected `squared_norm` or `norm`, got `{s}`")),
    }
}

fn summarize(o: &RunOutcome) {
    let s = &o.manifest.summary;
    println!(
        "{}: {}/{} bounds satisfied, balance residual {}, {}",
        o.manifest.config.scenario,
        s.bounds_satisfied,
        s.bounds_total,
        s.balance_max_residual
            .map_or("n/a".to_string(), |r| format!("{r:.3e}")),
        if s.passed { "PASS" } else { "FAIL" }
    );
    if let Some(b) = &s.blow_up {
        println!("  blow-up: {b}");
    }
    println!("  artifacts in {}", o.output_dir.display());
}

fn load(path: &Path, overrides: Overrides) -> Result<ScenarioConfig, HarnessError> {
    let mut c = ScenarioConfig::load(path)?;
    c.apply(&overrides);
    Ok(c)
}

fn execute(command: Command) -> Result<bool, HarnessError> {
    let root = output_root_from_env();
    match command {
        Command::Run { config, overrides } => {
            let c = load(&config, overrides.into())?;
            let outcome = run(&c, root.as_deref())?;
            summarize(&outcome);
            Ok(outcome.manifest.summary.passed)
        }
        Command::Batch { configs } => {
            let loaded = configs
                .iter()
                .map(|p| load(p, Overrides::default()))
                .collect::<Result<Vec<_>, _>>()?;
            let mut all = true;
            for (path, result) in configs.iter().zip(run_batch(&loaded, root.as_deref())?) {
                match result {
                    Ok(o) => {
                        summarize(&o);
                        all &= o.manifest.summary.passed;
                    }
                    Err(e) => {
                        eprintln!("{}: {e}", path.display());
                        all = false;
                    }
                }
            }
            Ok(all)
        }
        Command::Verify { norms, nu, eps, t1, t2, alpha, n_convention, out } => {
            let series = read_timeseries(&norms)?;
            let opts = VerifyOptions { nu, eps, alpha, n_convention };
            let reports = verify_with(&series, &opts, t1, t2)?;
            if let Some(path) = out {
                emit_report(&reports, &path)?;
            }
            print!("{}", format_report(&ReportDocument::from_reports(&reports)));
            Ok(reports.iter().all(|r| r.satisfied))
        }
        Command::Schedule { horizon, nu, c_loc, sup0, sup_delta } => {
            let s = continuation_schedule(horizon, nu, c_loc, sup0, sup_delta)?;
            let text = serde_json::to_string_pretty(&s).map_err(|source| HarnessError::Json {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
            println!("{text}");
            Ok(true)
        }
        Command::Report { report } => {
            let doc = read_report(&report)?;
            print!("{}", format_report(&doc));
            Ok(doc.reports.iter().all(|r| r.satisfied))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

//! Run configuration: a TOML file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use vortbound::bounds::{DEFAULT_ALPHA, DEFAULT_EPS};
use vortbound::diagnostics::NConvention;
use vortbound::solver::SolverConfig;
use vortbound::GridSpec;

use crate::error::{io_err, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    TaylorGreen,
    BeltramiAbc,
    RandomSolenoidal,
    GaussianVortexPair,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 4] = [
        ScenarioName::TaylorGreen,
        ScenarioName::BeltramiAbc,
        ScenarioName::RandomSolenoidal,
        ScenarioName::GaussianVortexPair,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::TaylorGreen => "taylor_green",
            ScenarioName::BeltramiAbc => "beltrami_abc",
            ScenarioName::RandomSolenoidal => "random_solenoidal",
            ScenarioName::GaussianVortexPair => "gaussian_vortex_pair",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown scenario `{s}`")))
    }
}

/// Everything one run needs. Missing keys take the defaults of
/// [`ScenarioConfig::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioName,
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[serde(rename = "L", default = "defaults::length")]
    pub length: f64,
    #[serde(default = "defaults::nu")]
    pub nu: f64,
    #[serde(default = "defaults::dt")]
    pub dt: f64,
    #[serde(default = "defaults::t_end")]
    pub t_end: f64,
    #[serde(default = "defaults::record_stride")]
    pub record_stride: usize,
    #[serde(default = "defaults::amplitude")]
    pub amplitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Start of the verification interval; defaults to the first recorded
    /// time after the initial one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    /// End of the verification interval; defaults to `t_end`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    #[serde(default = "defaults::c_loc")]
    pub c_loc: f64,
    #[serde(default = "defaults::output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "defaults::eps")]
    pub eps: f64,
    #[serde(default = "defaults::alpha")]
    pub alpha: f64,
    #[serde(default = "defaults::dealias")]
    pub dealias: bool,
    #[serde(default)]
    pub n_convention: NConvention,
    /// Largest accepted interior enstrophy-balance residual.
    #[serde(default = "defaults::balance_tolerance")]
    pub balance_tolerance: f64,
}

mod defaults {
    use std::path::PathBuf;

    pub fn n() -> usize {
        32
    }
    pub fn length() -> f64 {
        2.0 * std::f64::consts::PI
    }
    pub fn nu() -> f64 {
        0.01
    }
    pub fn dt() -> f64 {
        1e-3
    }
    pub fn t_end() -> f64 {
        1.0
    }
    pub fn record_stride() -> usize {
        10
    }
    pub fn amplitude() -> f64 {
        1.0
    }
    pub fn c_loc() -> f64 {
        1.0
    }
    pub fn output_dir() -> PathBuf {
        PathBuf::from("output")
    }
    pub fn eps() -> f64 {
        super::DEFAULT_EPS
    }
    pub fn alpha() -> f64 {
        super::DEFAULT_ALPHA
    }
    pub fn dealias() -> bool {
        true
    }
    pub fn balance_tolerance() -> f64 {
        1e-2
    }
}

/// Command-line values that replace file values when present.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub scenario: Option<ScenarioName>,
    pub n: Option<usize>,
    pub length: Option<f64>,
    pub nu: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub record_stride: Option<usize>,
    pub amplitude: Option<f64>,
    pub seed: Option<u64>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub c_loc: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub eps: Option<f64>,
    pub alpha: Option<f64>,
    pub dealias: Option<bool>,
    pub n_convention: Option<NConvention>,
    pub balance_tolerance: Option<f64>,
}

impl ScenarioConfig {
    /// Defaults for `scenario`; the random scenario gets seed 0.
    pub fn new(scenario: ScenarioName) -> Self {
        Self {
            scenario,
            n: defaults::n(),
            length: defaults::length(),
            nu: defaults::nu(),
            dt: defaults::dt(),
            t_end: defaults::t_end(),
            record_stride: defaults::record_stride(),
            amplitude: defaults::amplitude(),
            seed: (scenario == ScenarioName::RandomSolenoidal).then_some(0),
            t1: None,
            t2: None,
            c_loc: defaults::c_loc(),
            output_dir: defaults::output_dir(),
            eps: defaults::eps(),
            alpha: defaults::alpha(),
            dealias: defaults::dealias(),
            n_convention: NConvention::default(),
            balance_tolerance: defaults::balance_tolerance(),
        }
    }

    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|source| HarnessError::Toml {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml(&text, path)
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if let Some(v) = o.$f.clone() { self.$f = v; })*
            };
        }
        take!(scenario, n, length, nu, dt, t_end, record_stride, amplitude, c_loc);
        take!(output_dir, eps, alpha, dealias, n_convention, balance_tolerance);
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if o.t1.is_some() {
            self.t1 = o.t1;
        }
        if o.t2.is_some() {
            self.t2 = o.t2;
        }
    }

    pub fn grid(&self) -> Result<GridSpec> {
        Ok(vortbound::make_grid(self.n, self.length)?)
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            nu: self.nu,
            dt: self.dt,
            t_end: self.t_end,
            record_stride: self.record_stride,
            dealias_enabled: self.dealias,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        self.grid()?;
        self.solver().validate()?;
        match (self.scenario, self.seed) {
            (ScenarioName::RandomSolenoidal, None) => {
                return bad("random_solenoidal needs a seed".into())
            }
            (s, Some(_)) if s != ScenarioName::RandomSolenoidal => {
                return bad(format!("seed is only meaningful for random_solenoidal, not {s}"))
            }
            _ => {}
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return bad(format!("amplitude must be nonnegative, got {}", self.amplitude));
        }
        if !(self.c_loc.is_finite() && self.c_loc > 0.0) {
            return bad(format!("c_loc must be positive, got {}", self.c_loc));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps must lie in (0, 1), got {}", self.eps));
        }
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (1/2, 1), got {}", self.alpha));
        }
        if self.balance_tolerance.is_nan() || self.balance_tolerance <= 0.0 {
            return bad(format!(
                "balance_tolerance must be positive, got {}",
                self.balance_tolerance
            ));
        }
        for (name, t) in [("t1", self.t1), ("t2", self.t2)] {
            if let Some(t) = t {
                if !(0.0..=self.t_end).contains(&t) {
                    return bad(format!("{name} = {t} lies outside [0, t_end = {}]", self.t_end));
                }
            }
        }
        if let (Some(a), Some(b)) = (self.t1, self.t2) {
            if b < a {
                return bad(format!("verification interval [{a}, {b}] is reversed"));
            }
        }
        Ok(())
    }

    /// `output_dir`, placed under `root` when it is relative.
    pub fn resolved_output_dir(&self, root: Option<&Path>) -> PathBuf {
        match root {
            Some(r) if self.output_dir.is_relative() => r.join(&self.output_dir),
            _ => self.output_dir.clone(),
        }
    }
}

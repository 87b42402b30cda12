//! Command-line front end. A run is described by a TOML file; the flags of
//! the `imb` binary override the output directory, tolerance, grid size and
//! output format. Each verb returns an [`Outcome`] or an [`ImbError`] whose
//! `exit_code` the binary uses.

mod commands;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

pub use commands::{cmd_check, cmd_orbit, cmd_rot, cmd_scan, cmd_trace, reference_values, step_csv_header};

use crate::boundary::{Curve, CurveSpec, FieldDescriptor, ImplicitField};
use crate::error::{ImbError, Result};
use crate::families::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        self != Format::Svg
    }
    pub fn svg(self) -> bool {
        self != Format::Csv
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Format, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            "both" => Ok(Format::Both),
            _ => Err(format!("expected csv, svg or both, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Orbit,
    Scan,
    Trace,
    Check,
    Rot,
}

impl FromStr for Verb {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Verb, String> {
        match s {
            "orbit" => Ok(Verb::Orbit),
            "scan" => Ok(Verb::Scan),
            "trace" => Ok(Verb::Trace),
            "check" => Ok(Verb::Check),
            "rot" => Ok(Verb::Rot),
            _ => Err(format!("unknown verb {s:?}")),
        }
    }
}

/// The boundary as written in a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveConfig {
    Circle { r: f64 },
    Ellipse { a: f64, b: f64 },
    Superellipse { k: u32 },
    Stadium { side: f64, r: f64 },
    /// Star-shaped curve with polar radius r0 (1 + Σ cos·cos nφ + sin·sin nφ).
    Fourier {
        r0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

impl CurveConfig {
    pub fn spec(&self) -> CurveSpec {
        match self.clone() {
            CurveConfig::Circle { r } => CurveSpec::Circle { r },
            CurveConfig::Ellipse { a, b } => CurveSpec::Ellipse { a, b },
            CurveConfig::Superellipse { k } => CurveSpec::Superellipse { k },
            CurveConfig::Stadium { side, r } => CurveSpec::Stadium { side, r },
            CurveConfig::Fourier { r0, cos, sin } => {
                CurveSpec::ImplicitSmooth(ImplicitField::from_descriptor(FieldDescriptor::Fourier { r0, cos, sin }))
            }
        }
    }

    pub fn build(&self) -> Result<Curve> {
        Curve::new(self.spec())
    }
}

/// A family member: `param` is μ or x₀ depending on the family.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitConfig {
    pub param: f64,
    /// Overlay the dual orbit (symmetric 4-periodic families only).
    #[serde(default)]
    pub dual: bool,
}

/// A raw trajectory from one phase point.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    pub mu: f64,
    pub s: f64,
    pub theta: f64,
    #[serde(default = "one")]
    pub steps: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub n: Option<usize>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    pub samples: usize,
    pub jacobian_points: usize,
    pub seed: u64,
    pub det_tol: f64,
    pub jacobian_tol: f64,
    pub trace_tol: f64,
    /// Step of the central differences, relative to max(1, L) in s.
    pub h: f64,
    /// Parameter values per family in the closed-vs-composed sweep.
    pub family_points: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            samples: 1000,
            jacobian_points: 100,
            seed: 7,
            det_tol: 1e-9,
            jacobian_tol: 1e-5,
            trace_tol: crate::stability::TOL_COMPOSED,
            h: 4e-6,
            family_points: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotConfig {
    pub a: f64,
    pub b: f64,
    /// Grid points on each of (0, b²) and (b², a²).
    #[serde(default = "rot_points")]
    pub n: usize,
}

fn rot_points() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub curve: Option<CurveConfig>,
    pub family: Option<Family>,
    pub orbit: Option<OrbitConfig>,
    pub seed: Option<SeedConfig>,
    pub scan: Option<ScanConfig>,
    pub check: Option<CheckConfig>,
    pub rot: Option<RotConfig>,
    /// Classification tolerance on | |Tr| − 2 |.
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ImbError::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|e| ImbError::Io(format!("{}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(c) = &self.curve {
            c.spec().validate()?;
        }
        if let Some(t) = self.tol {
            check_tol(t)?;
        }
        if let Some(s) = &self.scan {
            if s.n == Some(0) {
                return Err(ImbError::Validation("scan grid is empty".into()));
            }
            if s.lo.is_some() != s.hi.is_some() {
                return Err(ImbError::Validation("scan needs both lo and hi, or neither".into()));
            }
        }
        if let Some(s) = &self.seed {
            if s.steps == 0 {
                return Err(ImbError::Validation("seed.steps must be at least 1".into()));
            }
        }
        if let Some(r) = &self.rot {
            if r.n == 0 {
                return Err(ImbError::Validation("rot grid is empty".into()));
            }
        }
        Ok(())
    }
}

fn check_tol(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(ImbError::Validation(format!("tolerance must be finite and non-negative, got {t}")));
    }
    Ok(())
}

/// Flag overrides, applied on top of the config.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub format: Option<Format>,
}

/// Config and flags merged.
#[derive(Debug, Clone)]
pub struct Settings {
    pub out: PathBuf,
    /// Explicit tolerance, from the flag or the config.
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub format: Format,
}

impl Settings {
    pub fn resolve(cfg: &RunConfig, opts: &RunOptions) -> Result<Settings> {
        let tol = opts.tol.or(cfg.tol);
        if let Some(t) = tol {
            check_tol(t)?;
        }
        if opts.grid == Some(0) {
            return Err(ImbError::Validation("grid must be positive".into()));
        }
        Ok(Settings {
            out: opts.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from(".")),
            tol,
            grid: opts.grid,
            format: opts.format.or(cfg.format).unwrap_or(Format::Both),
        })
    }

    pub fn class_tol(&self) -> f64 {
        self.tol.unwrap_or(crate::stability::TOL_CLOSED)
    }

    fn file(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out).map_err(|e| ImbError::Io(format!("{}: {e}", self.out.display())))?;
        Ok(self.out.join(name))
    }
}

/// What a command reports: human-readable lines, the files it wrote, and
/// whether every check passed (only `check` can fail without an error).
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn run(verb: Verb, cfg: &RunConfig, opts: &RunOptions) -> Result<Outcome> {
    let set = Settings::resolve(cfg, opts)?;
    match verb {
        Verb::Orbit => cmd_orbit(cfg, &set),
        Verb::Scan => cmd_scan(cfg, &set),
        Verb::Trace => cmd_trace(cfg, &set),
        Verb::Check => cmd_check(cfg, &set),
        Verb::Rot => cmd_rot(cfg, &set),
    }
}

/// Exit status for a finished run: the outcome's, or the error's.
pub fn exit_status(r: &Result<Outcome>) -> i32 {
    match r {
        Ok(o) => o.exit_code(),
        Err(e) => e.exit_code(),
    }
}

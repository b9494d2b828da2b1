use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use jacobi_spectra::determinant::PolarGrid;
use jacobi_spectra::inequality::FamilySpec;
use jacobi_spectra::JacobiOperator;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Jost,
    DetScan,
    Spectrum,
    LtCheck,
    Enclosure,
    OracleCompare,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Jost => "jost",
            Command::DetScan => "det-scan",
            Command::Spectrum => "spectrum",
            Command::LtCheck => "lt-check",
            Command::Enclosure => "enclosure",
            Command::OracleCompare => "oracle-compare",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `NR,NT,RMIN,RMAX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for GridArg {
    fn default() -> Self {
        GridArg {
            n_r: 32,
            n_theta: 64,
            r_min: 0.01,
            r_max: 0.99,
        }
    }
}

impl fmt::Display for GridArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.n_r, self.n_theta, self.r_min, self.r_max
        )
    }
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [nr, nt, r0, r1] = parts[..] else {
            return Err(format!("expected NR,NT,RMIN,RMAX, got {s:?}"));
        };
        let count = |x: &str, name: &str| {
            x.parse::<usize>()
                .map_err(|_| format!("{name} must be a positive integer, got {x:?}"))
        };
        let radius = |x: &str, name: &str| {
            x.parse::<f64>()
                .map_err(|_| format!("{name} must be a number, got {x:?}"))
        };
        let grid = GridArg {
            n_r: count(nr, "NR")?,
            n_theta: count(nt, "NT")?,
            r_min: radius(r0, "RMIN")?,
            r_max: radius(r1, "RMAX")?,
        };
        if grid.n_r == 0 || grid.n_theta == 0 {
            return Err("NR and NT must be at least 1".into());
        }
        if !(grid.r_min > 0.0 && grid.r_min <= grid.r_max && grid.r_max < 1.0) {
            return Err(format!(
                "grid radii must satisfy 0 < RMIN <= RMAX < 1, got {},{}",
                grid.r_min, grid.r_max
            ));
        }
        Ok(grid)
    }
}

impl GridArg {
    pub fn polar(&self) -> Result<PolarGrid, CliError> {
        PolarGrid::new(self.n_r, self.n_theta, self.r_min, self.r_max)
            .map_err(|e| CliError::Input(e.to_string()))
    }
}

/// A complex number written `RE,IM` or `RE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("expected RE,IM, got {s:?}"))
        };
        let (re, im) = match s.split_once(',') {
            Some((re, im)) => (parse(re)?, parse(im)?),
            None => (parse(s)?, 0.0),
        };
        Ok(ComplexArg(Complex64::new(re, im)))
    }
}

pub fn parse_epsilon(s: &str) -> Result<f64, String> {
    let e: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if e > 0.0 && e < 1.0 {
        Ok(e)
    } else {
        Err(format!("epsilon must lie in (0, 1), got {e}"))
    }
}

/// Family description read by `sweep`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub families: Vec<FamilySpec>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub config_path: PathBuf,
    pub grid: GridArg,
    pub epsilons: Vec<f64>,
    pub section_n: Option<usize>,
    pub seed: u64,
    pub z: Complex64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn json_error(path: &Path, e: serde_json::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

pub fn load_operator(path: &Path) -> Result<JacobiOperator, CliError> {
    let text = read(path)?;
    JacobiOperator::from_json_str(&text).map_err(|e| json_error(path, e))
}

pub fn load_sweep(path: &Path) -> Result<SweepFile, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| json_error(path, e))
}

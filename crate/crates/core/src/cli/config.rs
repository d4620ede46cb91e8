//! Experiment configuration: a flat JSON object merged with command-line
//! overrides.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;

use super::CliError;
use crate::linalg::QState;

/// Relative norm error above which parsed amplitudes trigger a warning.
pub const NORMALIZATION_WARN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleChoice {
    #[default]
    Linear,
    Local,
}

/// One amplitude: a real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    fn value(self) -> Complex64 {
        match self {
            Amplitude::Real(re) => Complex64::new(re, 0.0),
            Amplitude::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Uniform,
    Bell,
    Amplitudes(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum InitialField {
    Name(String),
    Amplitudes { amplitudes: Vec<Amplitude> },
}

/// Command-line flags shared by all subcommands; every flag overrides the
/// matching field of `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Number of qubits.
    #[arg(long)]
    pub n: Option<usize>,
    /// Index of the marked item.
    #[arg(long)]
    pub marked: Option<usize>,
    #[arg(long, value_enum)]
    pub schedule: Option<ScheduleChoice>,
    /// Adiabatic accuracy target.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of uniform s-grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Total evolution time (default 10 T_min).
    #[arg(long = "T")]
    pub total_time: Option<f64>,
    /// Propagation steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// uniform, bell or file:<path> (JSON list of amplitudes).
    #[arg(long)]
    pub initial: Option<String>,
    #[arg(long = "n-min")]
    pub n_min: Option<usize>,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Number of Grover iterations (default 2 k0 + 1).
    #[arg(long = "k-max")]
    pub k_max: Option<usize>,
    /// Angular resolution of the initial-state sweep.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Qubits kept in the reduced state, e.g. 0 or 0,2.
    #[arg(long, value_delimiter = ',')]
    pub cut: Option<Vec<usize>>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    n: Option<usize>,
    marked: Option<usize>,
    schedule: Option<ScheduleChoice>,
    epsilon: Option<f64>,
    #[serde(alias = "grid")]
    grid_points: Option<usize>,
    #[serde(rename = "T", alias = "total_time")]
    total_time: Option<f64>,
    steps: Option<usize>,
    initial: Option<InitialField>,
    n_min: Option<usize>,
    n_max: Option<usize>,
    k_max: Option<usize>,
    resolution: Option<usize>,
    cut: Option<Vec<usize>>,
    states: Option<Vec<Vec<Amplitude>>>,
}

/// Fully resolved experiment settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub marked: usize,
    pub schedule: ScheduleChoice,
    pub epsilon: f64,
    pub grid_points: usize,
    pub total_time: Option<f64>,
    pub steps: Option<usize>,
    pub initial: InitialSpec,
    pub n_min: usize,
    pub n_max: usize,
    pub k_max: Option<usize>,
    pub resolution: usize,
    pub cut: Option<Vec<usize>>,
    /// Explicit initial states for the sweep, replacing the default grid.
    pub states: Option<Vec<Vec<Complex64>>>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 2,
            marked: 0,
            schedule: ScheduleChoice::Linear,
            epsilon: 0.1,
            grid_points: 1001,
            total_time: None,
            steps: None,
            initial: InitialSpec::Uniform,
            n_min: 2,
            n_max: 10,
            k_max: None,
            resolution: 12,
            cut: None,
            states: None,
            out: None,
        }
    }
}

impl ExperimentConfig {
    /// Reads `flags.config` (if any) and applies the flag overrides.
    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    CliError::Config(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => ConfigFile::default(),
        };
        let base_dir = flags
            .config
            .as_deref()
            .and_then(Path::parent)
            .map(Path::to_path_buf);

        let initial = match (&flags.initial, file.initial) {
            (Some(flag), _) => parse_initial_name(flag, None)?,
            (None, Some(InitialField::Name(name))) => parse_initial_name(&name, base_dir.as_deref())?,
            (None, Some(InitialField::Amplitudes { amplitudes })) => {
                InitialSpec::Amplitudes(amplitudes.into_iter().map(Amplitude::value).collect())
            }
            (None, None) => InitialSpec::Uniform,
        };
        let defaults = Self::default();
        let n = match flags.n.or(file.n) {
            Some(n) => n,
            None => match &initial {
                InitialSpec::Amplitudes(a) if a.len().is_power_of_two() && a.len() > 1 => {
                    a.len().trailing_zeros() as usize
                }
                _ => defaults.n,
            },
        };
        let config = Self {
            n,
            marked: flags.marked.or(file.marked).unwrap_or(defaults.marked),
            schedule: flags.schedule.or(file.schedule).unwrap_or_default(),
            epsilon: flags.epsilon.or(file.epsilon).unwrap_or(defaults.epsilon),
            grid_points: flags.grid.or(file.grid_points).unwrap_or(defaults.grid_points),
            total_time: flags.total_time.or(file.total_time),
            steps: flags.steps.or(file.steps),
            initial,
            n_min: flags.n_min.or(file.n_min).unwrap_or(defaults.n_min),
            n_max: flags.n_max.or(file.n_max).unwrap_or(defaults.n_max),
            k_max: flags.k_max.or(file.k_max),
            resolution: flags.resolution.or(file.resolution).unwrap_or(defaults.resolution),
            cut: flags.cut.clone().or(file.cut),
            states: file.states.map(|states| {
                states
                    .into_iter()
                    .map(|s| s.into_iter().map(Amplitude::value).collect())
                    .collect()
            }),
            out: flags.out.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(1..=10).contains(&self.n) {
            return Err(CliError::Config(format!("n must lie in 1..=10, got {}", self.n)));
        }
        if self.marked >= 1 << self.n {
            return Err(CliError::Config(format!(
                "marked index {} out of range for {} qubits",
                self.marked, self.n
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(CliError::Config(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.grid_points < 64 {
            return Err(CliError::Config(format!(
                "grid needs at least 64 points, got {}",
                self.grid_points
            )));
        }
        if let Some(t) = self.total_time {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("T must be positive, got {t}")));
            }
        }
        if self.resolution == 0 {
            return Err(CliError::Config("resolution must be positive".into()));
        }
        Ok(())
    }

    /// The initial state, normalized.
    pub fn initial_state(&self) -> Result<QState, CliError> {
        match &self.initial {
            InitialSpec::Uniform => Ok(QState::uniform(self.n)?),
            InitialSpec::Bell if self.n == 2 => Ok(QState::bell()),
            InitialSpec::Bell => Err(CliError::Config(format!(
                "the Bell state needs n = 2, got n = {}",
                self.n
            ))),
            InitialSpec::Amplitudes(amps) => {
                if amps.len() != 1 << self.n {
                    return Err(CliError::Config(format!(
                        "{} amplitudes given for {} qubits",
                        amps.len(),
                        self.n
                    )));
                }
                normalize_amplitudes(amps.clone())
            }
        }
    }
}

/// Normalizes `amps`, warning on stderr when the norm is off by more than
/// [`NORMALIZATION_WARN_TOL`].
pub fn normalize_amplitudes(amps: Vec<Complex64>) -> Result<QState, CliError> {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return Err(CliError::Config("initial amplitudes have zero norm".into()));
    }
    if (norm - 1.0).abs() > NORMALIZATION_WARN_TOL {
        eprintln!("warning: initial amplitudes had norm {norm}; normalized");
    }
    Ok(QState::normalized(amps)?)
}

fn parse_initial_name(spec: &str, base_dir: Option<&Path>) -> Result<InitialSpec, CliError> {
    match spec {
        "uniform" => Ok(InitialSpec::Uniform),
        "bell" => Ok(InitialSpec::Bell),
        _ => {
            let Some(path) = spec.strip_prefix("file:") else {
                return Err(CliError::Config(format!(
                    "unknown initial state '{spec}' (expected uniform, bell or file:<path>)"
                )));
            };
            let mut path = PathBuf::from(path);
            if let (true, Some(dir)) = (path.is_relative(), base_dir) {
                path = dir.join(path);
            }
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let amps: Vec<Amplitude> = serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("invalid amplitude list in {}: {e}", path.display()))
            })?;
            Ok(InitialSpec::Amplitudes(
                amps.into_iter().map(Amplitude::value).collect(),
            ))
        }
    }
}

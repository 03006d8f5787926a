use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use ringwalk::{Gamma, RingSpec, TimeGrid, WalkKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spectrum,
    Dos,
    DosFit,
    Return,
    Msd,
    Spa,
    Classify,
    Figure1,
    Figure2,
    Figure3,
}

impl Experiment {
    pub fn is_figure(self) -> bool {
        matches!(self, Experiment::Figure1 | Experiment::Figure2 | Experiment::Figure3)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

/// Everything needed to reproduce one run. Embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub spec: RingSpec,
    /// Curves of the figure recipes; `[spec.gamma]` otherwise.
    pub gammas: Vec<Gamma>,
    pub t_min: f64,
    pub t_max: f64,
    /// Points per decade (log spacing) or per unit time (linear spacing).
    pub points_per_decade: usize,
    pub spacing: Spacing,
    /// Step of the oscillating quantum curves in the figure recipes.
    pub dt: f64,
    /// Last time of the quantum panels of `figure2`.
    pub quantum_t_max: f64,
    pub bins: usize,
    pub out: Option<String>,
    pub format: Format,
    pub kind: WalkKind,
    pub diagonalize: bool,
    pub infinite: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<ringwalk::Error> for ConfigError {
    fn from(e: ringwalk::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// Flag values; `None` means "not given on the command line".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub gamma: Option<Gamma>,
    pub gammas: Option<Vec<Gamma>>,
    pub r_max: Option<usize>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub ppd: Option<usize>,
    pub spacing: Option<Spacing>,
    pub dt: Option<f64>,
    pub bins: Option<usize>,
    pub out: Option<String>,
    pub format: Option<Format>,
    pub kind: Option<WalkKind>,
    pub diagonalize: bool,
    pub infinite: bool,
}

impl ExperimentConfig {
    /// Defaults for an experiment before any flag is applied.
    pub fn defaults(experiment: Experiment) -> Self {
        let figure_gammas = vec![Gamma::Finite(2.0), Gamma::Finite(3.0), Gamma::Finite(4.0), Gamma::Infinite];
        let (n, gammas, t_min, t_max, bins) = match experiment {
            Experiment::Figure1 => (10_000, figure_gammas, 0.1, 1000.0, 100),
            Experiment::Figure2 => (10_000, figure_gammas, 0.1, 1000.0, 100),
            Experiment::Figure3 => (10_000, figure_gammas, 1.0, 100.0, 100),
            Experiment::Classify => (10_000, vec![Gamma::Infinite], 10.0, 1000.0, 100),
            _ => (1000, vec![Gamma::Infinite], 0.1, 1000.0, 100),
        };
        let format = match experiment {
            Experiment::DosFit | Experiment::Classify => Format::Json,
            _ => Format::Csv,
        };
        Self {
            experiment,
            spec: RingSpec::new(n, gammas[0]).expect("default ring is valid"),
            gammas,
            t_min,
            t_max,
            points_per_decade: 50,
            spacing: Spacing::Log,
            dt: 0.01,
            quantum_t_max: 100.0,
            bins,
            out: None,
            format,
            kind: WalkKind::Quantum,
            diagonalize: false,
            infinite: false,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))
    }

    pub fn apply(mut self, o: Overrides) -> Result<Self, ConfigError> {
        if let Some(gs) = o.gammas {
            if gs.is_empty() {
                return Err(ConfigError("--gammas needs at least one value".into()));
            }
            self.gammas = gs;
        }
        if let Some(g) = o.gamma {
            if !self.experiment.is_figure() {
                self.gammas = vec![g];
            }
        }
        let n = o.n.unwrap_or(self.spec.n_nodes());
        let gamma = o.gamma.unwrap_or(self.gammas[0]);
        self.spec = match o.r_max {
            Some(r) => RingSpec::with_cutoff(n, gamma, r)?,
            None if o.n.is_some() || o.gamma.is_some() => RingSpec::new(n, gamma)?,
            None => RingSpec::with_cutoff(n, gamma, self.spec.r_max())?,
        };
        if !self.experiment.is_figure() {
            self.gammas = vec![self.spec.gamma()];
        }
        self.t_min = o.t_min.unwrap_or(self.t_min);
        self.t_max = o.t_max.unwrap_or(self.t_max);
        self.points_per_decade = o.ppd.unwrap_or(self.points_per_decade);
        self.spacing = o.spacing.unwrap_or(self.spacing);
        self.dt = o.dt.unwrap_or(self.dt);
        self.bins = o.bins.unwrap_or(self.bins);
        if o.out.is_some() {
            self.out = o.out;
        }
        self.format = o.format.unwrap_or(self.format);
        self.kind = o.kind.unwrap_or(self.kind);
        self.diagonalize |= o.diagonalize;
        self.infinite |= o.infinite;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.t_min < self.t_max) {
            return Err(ConfigError(format!("need t_min < t_max, got {} >= {}", self.t_min, self.t_max)));
        }
        if self.points_per_decade < 1 {
            return Err(ConfigError("points per decade must be at least 1".into()));
        }
        if self.bins < 2 {
            return Err(ConfigError(format!("need at least 2 bins, got {}", self.bins)));
        }
        if !(self.dt > 0.0) {
            return Err(ConfigError(format!("dt must be positive, got {}", self.dt)));
        }
        // Profiles need the eigenvalues in mode order, which diagonalization loses.
        let order_free = matches!(
            self.experiment,
            Experiment::Spectrum | Experiment::Dos | Experiment::DosFit | Experiment::Return
        );
        if self.diagonalize && !order_free {
            return Err(ConfigError(format!("--diagonalize is not supported by `{}`", self.experiment)));
        }
        if self.experiment.is_figure() && self.out.is_none() {
            return Err(ConfigError(format!("`{}` writes several files and needs --out", self.experiment)));
        }
        Ok(())
    }

    /// The grid given by `t_min`, `t_max`, `points_per_decade` and `spacing`.
    pub fn grid(&self) -> Result<TimeGrid, ConfigError> {
        let grid = match self.spacing {
            Spacing::Log => TimeGrid::logarithmic(self.t_min, self.t_max, self.points_per_decade)?,
            Spacing::Linear => TimeGrid::linear(self.t_min, self.t_max, 1.0 / self.points_per_decade as f64)?,
        };
        Ok(grid)
    }

    /// Linear grid with step `dt` on `[t_min, t_end]`.
    pub fn fine_grid(&self, t_end: f64) -> Result<TimeGrid, ConfigError> {
        Ok(TimeGrid::linear(self.t_min, t_end.min(self.t_max), self.dt)?)
    }

    pub fn ring(&self, gamma: Gamma) -> Result<RingSpec, ConfigError> {
        let r_max = self.spec.r_max();
        Ok(RingSpec::with_cutoff(self.spec.n_nodes(), gamma, r_max)?)
    }
}

pub fn parse_gamma(s: &str) -> Result<Gamma, String> {
    s.parse::<Gamma>().map_err(|e| e.to_string())
}

pub fn parse_kind(s: &str) -> Result<WalkKind, String> {
    s.parse::<WalkKind>().map_err(|e| e.to_string())
}

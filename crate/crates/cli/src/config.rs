use std::path::{Path, PathBuf};

use nevbound::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Measure,
    Upper,
    Lower,
    Sandwich,
    Case,
    B38,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Measure => "measure",
            Check::Upper => "upper",
            Check::Lower => "lower",
            Check::Sandwich => "sandwich",
            Check::Case => "case",
            Check::B38 => "b38",
        }
    }

    pub fn needs_data(self) -> bool {
        self != Check::Measure
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Psi {
    Value(f64),
    Word(String),
}

/// Either `spec = "..."` or the four majorants as function expressions.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub spec: Option<String>,
    pub d_l: Option<String>,
    pub d_phi: Option<String>,
    pub c_l: Option<String>,
    pub c_phi: Option<String>,
    pub psi: Option<Psi>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub r_min: f64,
    pub r_max: f64,
    #[serde(default = "default_ppd")]
    pub per_decade: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: String,
    pub data: Option<DataSection>,
    pub grid: Grid,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_angles")]
    pub angles: usize,
    pub checks: Vec<Check>,
    /// Hypotheses are checked on `1 ≤ j, N ≤ n_check`.
    #[serde(default = "default_n_check")]
    pub n_check: usize,
    /// Largest accepted max/min ratio for the `case` and `b38` bands.
    #[serde(default = "default_band")]
    pub band_max: f64,
    /// Smallest accepted `logM / lower bound` ratio.
    #[serde(default)]
    pub lower_floor: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Output,
}

fn default_ppd() -> usize {
    4
}
fn default_eps() -> f64 {
    1e-3
}
fn default_angles() -> usize {
    64
}
fn default_n_check() -> usize {
    2000
}
fn default_band() -> f64 {
    10.0
}

/// A parsed config with its directory, which anchors relative paths.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: ExperimentConfig,
    pub dir: PathBuf,
    pub stem: String,
}

impl Loaded {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let config: ExperimentConfig =
            toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        config.validate()?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
        Ok(Loaded { config, dir, stem })
    }

    pub fn csv_path(&self) -> PathBuf {
        self.resolve(self.config.output.csv.clone(), "bounds.csv")
    }

    pub fn json_path(&self) -> PathBuf {
        self.resolve(self.config.output.json.clone(), "summary.json")
    }

    fn resolve(&self, p: Option<PathBuf>, suffix: &str) -> PathBuf {
        match p {
            Some(p) if p.is_relative() => self.dir.join(p),
            Some(p) => p,
            None => self.dir.join(format!("{}.{suffix}", self.stem)),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if !(g.r_min > 0.0 && g.r_min < g.r_max && g.r_max.is_finite()) {
            return Err(Error::Validation(format!("need 0 < r_min < r_max < inf, got [{}, {}]", g.r_min, g.r_max)));
        }
        if g.per_decade < 4 {
            return Err(Error::Validation(format!("per_decade = {} must be at least 4", g.per_decade)));
        }
        if !(self.eps > 0.0) {
            return Err(Error::Validation(format!("eps = {} must be positive", self.eps)));
        }
        if self.angles < 8 {
            return Err(Error::Validation(format!("angles = {} must be at least 8", self.angles)));
        }
        if self.checks.is_empty() {
            return Err(Error::Validation("no checks requested".into()));
        }
        if self.checks.iter().any(|c| c.needs_data()) && self.data.is_none() {
            return Err(Error::Validation("the requested checks need a [data] section".into()));
        }
        if let Some(d) = &self.data {
            let parts = [&d.d_l, &d.d_phi, &d.c_l, &d.c_phi];
            let given = parts.iter().filter(|p| p.is_some()).count();
            match (&d.spec, given) {
                (Some(_), 0) | (None, 4) => {}
                _ => {
                    return Err(Error::Validation(
                        "[data] needs either spec or all of d_l, d_phi, c_l, c_phi".into(),
                    ))
                }
            }
            if let Some(Psi::Word(w)) = &d.psi {
                if w != "auto" {
                    return Err(Error::Validation(format!("psi must be a number or \"auto\", got '{w}'")));
                }
            }
        }
        Ok(())
    }
}

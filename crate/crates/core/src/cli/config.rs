//! Run configuration: built-in defaults, then a flat `key = value` file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GridKind {
    Linear,
    Log,
}

impl std::str::FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(GridKind::Linear),
            "log" => Ok(GridKind::Log),
            other => Err(Error::Input(format!("unknown grid kind {other:?} (expected linear or log)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: u32,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub grid: GridKind,
    pub tolerances: QuadratureSpec,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    /// Radial table defaults: d = 2 on [2, 200], 200 log-spaced points.
    pub fn table_defaults() -> Self {
        RunConfig {
            dim: 2,
            r_min: 2.0,
            r_max: 200.0,
            points: 200,
            grid: GridKind::Log,
            tolerances: QuadratureSpec::default(),
            output_path: None,
        }
    }

    /// Pointwise defaults: 9 equally spaced radii on [0, 4].
    pub fn pointwise_defaults() -> Self {
        RunConfig {
            r_min: 0.0,
            r_max: 4.0,
            points: 9,
            grid: GridKind::Linear,
            ..RunConfig::table_defaults()
        }
    }

    /// Apply `key = value` lines. Blank lines and `#` comments are ignored.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected key = value, got {line:?}"),
                });
            };
            self.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_file_text(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Input(format!("invalid value {value:?} for {key}")))
        }
        match key {
            "dim" => self.dim = num(key, value)?,
            "rmin" => self.r_min = num(key, value)?,
            "rmax" => self.r_max = num(key, value)?,
            "points" => self.points = num(key, value)?,
            "grid" => self.grid = value.parse()?,
            "tol_abs" => self.tolerances.abs_tol = num(key, value)?,
            "tol_rel" => self.tolerances.rel_tol = num(key, value)?,
            "max_depth" => self.tolerances.max_depth = num(key, value)?,
            "osc_blocks" => self.tolerances.osc_blocks = num(key, value)?,
            "accel" => self.tolerances.accel = num(key, value)?,
            "out" => self.output_path = Some(PathBuf::from(value)),
            other => return Err(Error::Input(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::Input(format!("dim must be 1, 2 or 3, got {}", self.dim)));
        }
        if !(self.r_min.is_finite() && self.r_max.is_finite() && self.r_min >= 0.0) {
            return Err(Error::Input(format!("invalid radius range [{}, {}]", self.r_min, self.r_max)));
        }
        if self.r_min >= self.r_max {
            return Err(Error::Input(format!("rmin {} must be below rmax {}", self.r_min, self.r_max)));
        }
        if self.points < 2 {
            return Err(Error::Input(format!("points must be at least 2, got {}", self.points)));
        }
        if self.grid == GridKind::Log && self.r_min <= 0.0 {
            return Err(Error::Input("a log grid needs rmin > 0".into()));
        }
        self.tolerances.validate()
    }

    pub fn radii(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.r_max;
                }
                let t = i as f64 / last;
                match self.grid {
                    GridKind::Linear => self.r_min + (self.r_max - self.r_min) * t,
                    GridKind::Log => self.r_min * (self.r_max / self.r_min).powf(t),
                }
            })
            .collect()
    }
}

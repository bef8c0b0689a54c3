use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use hlmoments::arith::DEFAULT_SEGMENT_LENGTH;
use hlmoments::SieveConfig;

pub const DEFAULT_PMAX: u64 = 10_000_000;

/// Parameters shared by every command. Loaded from a JSON file and then
/// overridden field by field with command-line flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<u64>,
    pub h: Option<Vec<u64>>,
    pub k: Option<Vec<u32>>,
    pub kmax: Option<u32>,
    pub tuple: Option<String>,
    pub pmax: Option<u64>,
    pub x_min: Option<u64>,
    pub x_max: Option<u64>,
    pub x_points: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub segment_length: Option<usize>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overlay(mut self, flags: RunConfig) -> Self {
        overlay_fields!(self, flags; n, h, k, kmax, tuple, pmax, x_min, x_max, x_points,
            cache_dir, out, threads, segment_length);
        self
    }

    pub fn validate(&self) -> CliResult<()> {
        let positive = |name: &str, v: Option<u64>| match v {
            Some(0) => Err(CliError::Parameter(format!("--{name} must be positive"))),
            _ => Ok(()),
        };
        positive("n", self.n)?;
        positive("kmax", self.kmax.map(u64::from))?;
        positive("pmax", self.pmax)?;
        positive("x-min", self.x_min)?;
        positive("x-max", self.x_max)?;
        positive("x-points", self.x_points.map(|v| v as u64))?;
        positive("threads", self.threads.map(|v| v as u64))?;
        if let Some(hs) = &self.h {
            if hs.contains(&0) {
                return Err(CliError::Parameter("--h values must be positive".into()));
            }
        }
        if let Some(ks) = &self.k {
            if ks.contains(&0) {
                return Err(CliError::Parameter("--k values must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn require_n(&self) -> CliResult<u64> {
        self.n
            .ok_or_else(|| CliError::Parameter("--n is required".into()))
    }

    pub fn h_list(&self) -> CliResult<Vec<u64>> {
        match &self.h {
            Some(h) if !h.is_empty() => Ok(h.clone()),
            _ => Err(CliError::Parameter("--h is required".into())),
        }
    }

    pub fn k_list(&self, default: u32) -> Vec<u32> {
        match &self.k {
            Some(k) if !k.is_empty() => k.clone(),
            _ => vec![default],
        }
    }

    pub fn pmax(&self) -> u64 {
        self.pmax.unwrap_or(DEFAULT_PMAX)
    }

    pub fn sieve_config(&self) -> SieveConfig {
        SieveConfig {
            segment_length: self.segment_length.unwrap_or(DEFAULT_SEGMENT_LENGTH),
            cache_dir: self.cache_dir.clone(),
        }
    }

    /// Geometric x-grid from `(x_min, x_max, x_points)`, rounded to integers.
    pub fn x_grid(&self) -> CliResult<Vec<u64>> {
        let (lo, hi, points) = match (self.x_min, self.x_max, self.x_points) {
            (Some(a), Some(b), Some(p)) => (a, b, p),
            _ => {
                return Err(CliError::Parameter(
                    "--x-min, --x-max and --x-points are required".into(),
                ))
            }
        };
        if hi < lo {
            return Err(CliError::Parameter(
                "--x-max must be at least --x-min".into(),
            ));
        }
        if points == 1 {
            return Ok(vec![lo]);
        }
        let ratio = hi as f64 / lo as f64;
        let grid: Vec<u64> = (0..points)
            .map(|i| match i {
                0 => lo,
                _ if i == points - 1 => hi,
                _ => (lo as f64 * ratio.powf(i as f64 / (points - 1) as f64)).round() as u64,
            })
            .collect();
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Parameter(format!(
                "x-grid {grid:?} is not strictly increasing; use fewer points"
            )));
        }
        Ok(grid)
    }
}

//! Experiment configuration and its validation.

use std::path::PathBuf;

use clap::ValueEnum;
use thiserror::Error;

/// Scalar regime selected for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Fp64,
    Fp32,
    Mixed,
}

/// Multiply-accumulate rounding policy for the mixed regime. Ignored by
/// the other modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    /// Multiplicands in binary16, accumulation in binary32.
    #[value(name = "fp32-acc")]
    Fp32Acc,
    /// Every intermediate rounded to binary16.
    #[value(name = "strict-fp16")]
    StrictFp16,
}

/// Seeded input distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Distribution {
    /// Uniform reals in [0, 1).
    Uniform01,
    /// Uniform integers in [0, 100].
    #[value(name = "uniform-int")]
    UniformInt,
    /// The constant 1.0.
    Constant,
    /// Uniform [0, 1) magnitudes with alternating sign.
    Alternating,
    /// Alternating-sign large values (1024..4096) interleaved with small
    /// positive fillers, to provoke cancellation and binary16 rounding.
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Everything one experiment run depends on. The seed fully determines
/// the generated inputs, so identical configs give identical reports.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n_list: Vec<usize>,
    pub m_list: Vec<usize>,
    pub mode: Mode,
    pub policy: Policy,
    pub dist: Distribution,
    pub seed: u64,
    pub noncoalesced_penalty: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("at least one problem size is required")]
    EmptySizes,
    #[error("at least one tile dimension is required")]
    EmptyTileDims,
    #[error("tile dimension must be at least 2, got {m}")]
    InvalidTileDim { m: usize },
    #[error("the precision sweep needs a floating mode, not exact")]
    SweepNeedsFloatingMode,
    #[error("cannot parse size list entry {entry:?}")]
    BadSizeEntry { entry: String },
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_list.is_empty() {
            return Err(ConfigError::EmptySizes);
        }
        if self.m_list.is_empty() {
            return Err(ConfigError::EmptyTileDims);
        }
        if let Some(&m) = self.m_list.iter().find(|&&m| m < 2) {
            return Err(ConfigError::InvalidTileDim { m });
        }
        Ok(())
    }
}

/// Parse a size list: comma-separated entries, each either a plain
/// integer or an inclusive stepped range `a..b:step`.
pub fn parse_size_list(list: &str) -> Result<Vec<usize>, ConfigError> {
    let bad = |entry: &str| ConfigError::BadSizeEntry {
        entry: entry.to_string(),
    };
    let mut out = Vec::new();
    for entry in list.split(',') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        if let Some((range, step)) = entry.split_once(':') {
            let (a, b) = range.split_once("..").ok_or_else(|| bad(entry))?;
            let a: usize = a.trim().parse().map_err(|_| bad(entry))?;
            let b: usize = b.trim().parse().map_err(|_| bad(entry))?;
            let step: usize = step.trim().parse().map_err(|_| bad(entry))?;
            if step == 0 || b < a {
                return Err(bad(entry));
            }
            out.extend((a..=b).step_by(step));
        } else {
            out.push(entry.parse().map_err(|_| bad(entry))?);
        }
    }
    Ok(out)
}

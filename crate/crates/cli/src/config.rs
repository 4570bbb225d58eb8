//! Flags shared by every subcommand, optionally loaded from a `key = value` file.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use banddepth::DepthMethod;
use clap::Args;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct RunConfig {
    /// File of `key = value` lines supplying defaults for any flag below
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Curve CSV to read
    #[arg(long, short)]
    pub input: Option<PathBuf>,

    /// Primary output file (stdout when absent)
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Directory for multi-file reports
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    /// Where `screen` writes the trimmed mean
    #[arg(long)]
    pub mean_output: Option<PathBuf>,

    /// Where `generate` writes contamination labels
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Depth method: BD, BD3, GBD, GBD3, cBD, cGBD, GBD_I or GBD_O
    #[arg(long)]
    pub method: Option<DepthMethod>,

    /// Comma-separated depth methods compared by `simulate`
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<DepthMethod>>,

    /// Largest band size J for BD and GBD
    #[arg(long, visible_alias = "J")]
    pub band_size: Option<usize>,

    /// Number of random parts K for resampled depths (1 = full sample)
    #[arg(long, visible_alias = "K")]
    pub parts: Option<usize>,

    /// Trimming proportion
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Seed for every random draw
    #[arg(long)]
    pub seed: Option<u64>,

    /// Comma-separated contamination model ids (0 to 6)
    #[arg(long, value_delimiter = ',')]
    pub models: Option<Vec<u32>>,

    /// Contamination model id for `generate`
    #[arg(long)]
    pub model: Option<u32>,

    /// Curves per sample
    #[arg(long)]
    pub n: Option<usize>,

    /// Contamination probability
    #[arg(long)]
    pub q: Option<f64>,

    /// Contamination magnitude
    #[arg(long, visible_alias = "M")]
    pub magnitude: Option<f64>,

    /// Simulation replications
    #[arg(long, visible_alias = "R")]
    pub replications: Option<usize>,

    /// Points of the canonical grid k/V
    #[arg(long, visible_alias = "V")]
    pub grid_points: Option<usize>,

    /// Peak length for model 4
    #[arg(long)]
    pub peak_length: Option<f64>,

    /// Contaminated points per curve for model 5
    #[arg(long)]
    pub k_points: Option<usize>,

    /// Simulated data sets for `resample-check`
    #[arg(long, visible_alias = "B")]
    pub repeats: Option<usize>,

    /// Covariance exponent of the process used by `resample-check`
    #[arg(long)]
    pub mu: Option<f64>,

    /// Worker threads (defaults to all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_value<T: FromStr>(raw: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| format!("cannot parse {raw:?}: {e}"))
}

fn parse_list<T: FromStr>(raw: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    raw.split(',').map(|s| parse_value(s.trim())).collect()
}

impl RunConfig {
    /// Sets one field from a config-file key, accepting `-` or `_` and the
    /// single-letter aliases.
    pub fn set(&mut self, key: &str, raw: &str) -> std::result::Result<(), String> {
        let key = key.trim().replace('-', "_");
        let raw = raw.trim();
        match key.as_str() {
            "input" => self.input = Some(raw.into()),
            "output" => self.output = Some(raw.into()),
            "out_dir" => self.out_dir = Some(raw.into()),
            "mean_output" => self.mean_output = Some(raw.into()),
            "labels" => self.labels = Some(raw.into()),
            "method" => self.method = Some(parse_value(raw)?),
            "methods" => self.methods = Some(parse_list(raw)?),
            "band_size" | "J" => self.band_size = Some(parse_value(raw)?),
            "parts" | "K" => self.parts = Some(parse_value(raw)?),
            "alpha" => self.alpha = Some(parse_value(raw)?),
            "seed" => self.seed = Some(parse_value(raw)?),
            "models" => self.models = Some(parse_list(raw)?),
            "model" => self.model = Some(parse_value(raw)?),
            "n" => self.n = Some(parse_value(raw)?),
            "q" => self.q = Some(parse_value(raw)?),
            "magnitude" | "M" => self.magnitude = Some(parse_value(raw)?),
            "replications" | "R" => self.replications = Some(parse_value(raw)?),
            "grid_points" | "V" => self.grid_points = Some(parse_value(raw)?),
            "peak_length" => self.peak_length = Some(parse_value(raw)?),
            "k_points" => self.k_points = Some(parse_value(raw)?),
            "repeats" | "B" => self.repeats = Some(parse_value(raw)?),
            "mu" => self.mu = Some(parse_value(raw)?),
            "threads" => self.threads = Some(parse_value(raw)?),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse_file(text: &str, path: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, line) in text.lines().enumerate() {
            let fail = |message: String| CliError::Config {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| fail("expected key = value".into()))?;
            cfg.set(key, value).map_err(fail)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse_file(&text, path)
    }

    /// Flags given here win over `base`.
    pub fn or(self, base: RunConfig) -> RunConfig {
        RunConfig {
            config: self.config.or(base.config),
            input: self.input.or(base.input),
            output: self.output.or(base.output),
            out_dir: self.out_dir.or(base.out_dir),
            mean_output: self.mean_output.or(base.mean_output),
            labels: self.labels.or(base.labels),
            method: self.method.or(base.method),
            methods: self.methods.or(base.methods),
            band_size: self.band_size.or(base.band_size),
            parts: self.parts.or(base.parts),
            alpha: self.alpha.or(base.alpha),
            seed: self.seed.or(base.seed),
            models: self.models.or(base.models),
            model: self.model.or(base.model),
            n: self.n.or(base.n),
            q: self.q.or(base.q),
            magnitude: self.magnitude.or(base.magnitude),
            replications: self.replications.or(base.replications),
            grid_points: self.grid_points.or(base.grid_points),
            peak_length: self.peak_length.or(base.peak_length),
            k_points: self.k_points.or(base.k_points),
            repeats: self.repeats.or(base.repeats),
            mu: self.mu.or(base.mu),
            threads: self.threads.or(base.threads),
        }
    }

    /// Command-line flags merged over the `--config` file, if any.
    pub fn resolve(self) -> Result<Self> {
        match self.config.clone() {
            Some(path) => Ok(self.or(RunConfig::load(&path)?)),
            None => Ok(self),
        }
    }

    pub fn require_seed(&self, why: &str) -> Result<u64> {
        self.seed
            .ok_or_else(|| CliError::Usage(format!("--seed is required {why}")))
    }

    pub fn require_input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Usage("--input is required".into()))
    }
}

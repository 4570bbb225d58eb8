//! Gaussian-process curves, contamination models and the replicated
//! trimmed-mean study.
//!
//! Curves follow `X_i(t) = g(t) + e_i(t)` with `g(t) = 4t` and `e_i` a
//! zero-mean Gaussian process with covariance `k exp(-c |t - s|^mu)`. The
//! contamination models perturb a random subset of curves:
//!
//! | model | contaminated curve                                            |
//! |-------|---------------------------------------------------------------|
//! | 0     | none                                                          |
//! | 1     | `X_i + M`                                                     |
//! | 2     | `X_i + sigma_i M`                                             |
//! | 3     | `X_i + sigma_i M` for `t >= T_i`, `T_i ~ U[0, 1]`             |
//! | 4     | `X_i + sigma_i M` on `[T_i, T_i + l]`, `T_i ~ U[0, 1 - l]`    |
//! | 5     | `X_i + sigma_i M` at `k_points` random grid points            |
//! | 6     | a rough process (`mu = 0.2`) replaces the smooth one (`mu = 2`) |
//!
//! Each curve draws from its own stream, seeded from the replication stream,
//! in a fixed order: the Gaussian noise first, then the contamination
//! indicator, the sign and the location of the contamination. The same seed
//! therefore yields the same base curves for every `q` and `M`.

use std::fmt;

use nalgebra::DMatrix;
use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::depth::{depth_all, DepthMethod};
use crate::error::{Error, Result};
use crate::estimators::{
    adjust_errors, integrated_error, mean_curve, trimmed_mean, AdjustedErrors, ErrorTable,
    Estimator,
};
use crate::resampling::{random_partition, resampled_depth_all};
use crate::rng::{stream_rng, StreamRng};
use crate::sample::{Curve, FunctionalSample, Grid};

/// Diagonal jitter tried in turn until the Cholesky factorisation succeeds.
pub const JITTER_LADDER: [f64; 4] = [0.0, 1e-12, 1e-10, 1e-8];

/// The trend `g(t) = 4t` shared by every model.
pub fn linear_trend(t: f64) -> f64 {
    4.0 * t
}

/// Covariance `k exp(-c |t - s|^mu)` plus a mean function.
#[derive(Debug, Clone, Copy)]
pub struct GpSpec {
    pub amplitude: f64,
    pub rate: f64,
    pub exponent: f64,
    pub mean_fn: fn(f64) -> f64,
}

impl PartialEq for GpSpec {
    fn eq(&self, other: &Self) -> bool {
        self.amplitude == other.amplitude
            && self.rate == other.rate
            && self.exponent == other.exponent
            && std::ptr::fn_addr_eq(self.mean_fn, other.mean_fn)
    }
}

impl GpSpec {
    pub fn new(amplitude: f64, rate: f64, exponent: f64) -> Self {
        Self {
            amplitude,
            rate,
            exponent,
            mean_fn: linear_trend,
        }
    }

    /// Base process of the contamination study, `exp(-|t - s|^1.5)`.
    pub fn base() -> Self {
        Self::new(1.0, 1.0, 1.5)
    }

    /// Smooth process `exp(-|t - s|^2)`.
    pub fn smooth() -> Self {
        Self::new(1.0, 1.0, 2.0)
    }

    /// Rough process `exp(-|t - s|^0.2)`.
    pub fn rough() -> Self {
        Self::new(1.0, 1.0, 0.2)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.amplitude) && ok(self.rate) && ok(self.exponent) {
            Ok(())
        } else {
            Err(Error::BadParameter(format!(
                "covariance parameters must be positive, got k={}, c={}, mu={}",
                self.amplitude, self.rate, self.exponent
            )))
        }
    }

    pub fn covariance(&self, s: f64, t: f64) -> f64 {
        self.amplitude * (-self.rate * (t - s).abs().powf(self.exponent)).exp()
    }
}

pub fn gp_covariance(grid: &Grid, spec: &GpSpec) -> DMatrix<f64> {
    let pts = grid.points();
    DMatrix::from_fn(pts.len(), pts.len(), |a, b| spec.covariance(pts[a], pts[b]))
}

/// Lower-triangular `L` with `L L^T = cov + jitter I`.
#[derive(Debug, Clone, PartialEq)]
pub struct GpFactor {
    pub lower: DMatrix<f64>,
    pub jitter: f64,
}

impl GpFactor {
    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }
}

pub fn gp_factor(cov: &DMatrix<f64>) -> Result<GpFactor> {
    if !cov.is_square() {
        return Err(Error::BadParameter(format!(
            "covariance must be square, got {}x{}",
            cov.nrows(),
            cov.ncols()
        )));
    }
    let n = cov.nrows();
    for jitter in JITTER_LADDER {
        let shifted = cov + DMatrix::<f64>::identity(n, n) * jitter;
        if let Some(chol) = shifted.cholesky() {
            return Ok(GpFactor {
                lower: chol.unpack(),
                jitter,
            });
        }
    }
    Err(Error::NotFactorizable {
        jitter: JITTER_LADDER[JITTER_LADDER.len() - 1],
    })
}

/// One draw `mean_fn(t) + L z` with `z` standard normal.
pub fn sample_gp<R: Rng + ?Sized>(
    factor: &GpFactor,
    mean_fn: impl Fn(f64) -> f64,
    grid: &Grid,
    rng: &mut R,
) -> Curve {
    let v = factor.dim();
    debug_assert_eq!(v, grid.len());
    let z: Vec<f64> = (0..v).map(|_| rng.sample(StandardNormal)).collect();
    let values = grid
        .points()
        .iter()
        .enumerate()
        .map(|(a, &t)| {
            let noise: f64 = (0..=a).map(|b| factor.lower[(a, b)] * z[b]).sum();
            mean_fn(t) + noise
        })
        .collect();
    Curve::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContaminationModel {
    None,
    Asymmetric,
    Symmetric,
    Partial,
    Peaks,
    ScatteredPoints,
    Shape,
}

impl ContaminationModel {
    pub const ALL: [ContaminationModel; 7] = [
        ContaminationModel::None,
        ContaminationModel::Asymmetric,
        ContaminationModel::Symmetric,
        ContaminationModel::Partial,
        ContaminationModel::Peaks,
        ContaminationModel::ScatteredPoints,
        ContaminationModel::Shape,
    ];

    pub fn from_id(id: u32) -> Result<Self> {
        Self::ALL
            .get(id as usize)
            .copied()
            .ok_or(Error::BadModelId(id))
    }

    pub fn id(self) -> u32 {
        self as u32
    }

    /// Models whose contamination carries a random sign.
    pub fn is_signed(self) -> bool {
        matches!(
            self,
            ContaminationModel::Symmetric
                | ContaminationModel::Partial
                | ContaminationModel::Peaks
                | ContaminationModel::ScatteredPoints
        )
    }
}

impl fmt::Display for ContaminationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContaminationConfig {
    pub model: ContaminationModel,
    /// Probability that a curve is contaminated.
    pub q: f64,
    /// Size of the offset `M`.
    pub magnitude: f64,
    /// Width `l` of the peaks of model 4.
    pub peak_length: f64,
    /// Number of shifted grid points in model 5.
    pub k_points: usize,
    /// Process behind models 0 to 5.
    pub base: GpSpec,
    pub smooth: GpSpec,
    pub rough: GpSpec,
}

impl Default for ContaminationConfig {
    fn default() -> Self {
        Self {
            model: ContaminationModel::None,
            q: 0.1,
            magnitude: 25.0,
            peak_length: 2.0 / 30.0,
            k_points: 2,
            base: GpSpec::base(),
            smooth: GpSpec::smooth(),
            rough: GpSpec::rough(),
        }
    }
}

impl ContaminationConfig {
    pub fn for_model(model: ContaminationModel) -> Self {
        Self {
            model,
            ..Self::default()
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::BadParameter(format!("q={} outside [0, 1]", self.q)));
        }
        if !self.magnitude.is_finite() {
            return Err(Error::BadParameter(format!(
                "M={} is not finite",
                self.magnitude
            )));
        }
        if !(self.peak_length > 0.0 && self.peak_length < 1.0) {
            return Err(Error::BadParameter(format!(
                "peak length l={} outside (0, 1)",
                self.peak_length
            )));
        }
        if self.k_points == 0 || self.k_points > grid.len() {
            return Err(Error::BadParameter(format!(
                "k_points={} must be in 1..={}",
                self.k_points,
                grid.len()
            )));
        }
        self.base.validate()?;
        self.smooth.validate()?;
        self.rough.validate()
    }
}

/// A generated sample with the ground truth of which curves were contaminated.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub sample: FunctionalSample,
    pub contaminated: Vec<bool>,
    /// `sigma_i` for the signed models 2 to 5.
    pub signs: Option<Vec<i8>>,
}

/// Covariance factors for one contamination configuration, reused across draws.
#[derive(Debug, Clone)]
pub struct ModelGenerator {
    config: ContaminationConfig,
    grid: Grid,
    primary: GpFactor,
    rough: Option<GpFactor>,
}

impl ModelGenerator {
    pub fn new(config: ContaminationConfig, grid: Grid) -> Result<Self> {
        config.validate(&grid)?;
        let (primary, rough) = if config.model == ContaminationModel::Shape {
            (
                gp_factor(&gp_covariance(&grid, &config.smooth))?,
                Some(gp_factor(&gp_covariance(&grid, &config.rough))?),
            )
        } else {
            (gp_factor(&gp_covariance(&grid, &config.base))?, None)
        };
        Ok(Self {
            config,
            grid,
            primary,
            rough,
        })
    }

    pub fn config(&self) -> &ContaminationConfig {
        &self.config
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn generate<R: RngCore + ?Sized>(&self, n: usize, rng: &mut R) -> Result<LabeledSample> {
        let seeds: Vec<u64> = (0..n).map(|_| rng.next_u64()).collect();
        let draws: Vec<(Curve, bool, i8)> = seeds
            .into_iter()
            .map(|s| self.draw_curve(&mut StreamRng::seed_from_u64(s)))
            .collect();
        let signs = self
            .config
            .model
            .is_signed()
            .then(|| draws.iter().map(|d| d.2).collect());
        let contaminated = draws.iter().map(|d| d.1).collect();
        let curves = draws.into_iter().map(|d| d.0).collect();
        Ok(LabeledSample {
            sample: FunctionalSample::new(self.grid.clone(), curves)?,
            contaminated,
            signs,
        })
    }

    fn draw_curve(&self, rng: &mut StreamRng) -> (Curve, bool, i8) {
        let cfg = &self.config;
        let pts = self.grid.points();
        if let Some(rough) = &self.rough {
            let smooth = sample_gp(&self.primary, cfg.smooth.mean_fn, &self.grid, rng);
            let irregular = sample_gp(rough, cfg.rough.mean_fn, &self.grid, rng);
            let eps = rng.random::<f64>() < cfg.q;
            return (if eps { irregular } else { smooth }, eps, 1);
        }

        let base = sample_gp(&self.primary, cfg.base.mean_fn, &self.grid, rng);
        let hit = rng.random::<f64>() < cfg.q;
        let sign: i8 = if rng.random::<bool>() { 1 } else { -1 };
        let offset = match cfg.model {
            ContaminationModel::Asymmetric => cfg.magnitude,
            _ => f64::from(sign) * cfg.magnitude,
        };
        let shifted: Vec<bool> = match cfg.model {
            ContaminationModel::None => vec![false; pts.len()],
            ContaminationModel::Asymmetric | ContaminationModel::Symmetric => {
                vec![true; pts.len()]
            }
            ContaminationModel::Partial => {
                let start: f64 = rng.random();
                pts.iter().map(|&t| t >= start).collect()
            }
            ContaminationModel::Peaks => {
                let start = rng.random::<f64>() * (1.0 - cfg.peak_length);
                let end = start + cfg.peak_length;
                pts.iter().map(|&t| start <= t && t <= end).collect()
            }
            ContaminationModel::ScatteredPoints => {
                let mut mask = vec![false; pts.len()];
                for k in index::sample(rng, pts.len(), cfg.k_points) {
                    mask[k] = true;
                }
                mask
            }
            ContaminationModel::Shape => unreachable!("shape model uses the rough factor"),
        };
        let contaminated = hit && cfg.model != ContaminationModel::None;
        let curve = if contaminated {
            Curve::new(
                base.values()
                    .iter()
                    .zip(&shifted)
                    .map(|(&y, &s)| if s { y + offset } else { y })
                    .collect(),
            )
        } else {
            base
        };
        let sign = if cfg.model == ContaminationModel::Asymmetric {
            1
        } else {
            sign
        };
        (curve, contaminated, sign)
    }
}

pub fn generate_model<R: RngCore + ?Sized>(
    config: &ContaminationConfig,
    n: usize,
    grid: &Grid,
    rng: &mut R,
) -> Result<LabeledSample> {
    ModelGenerator::new(*config, grid.clone())?.generate(n, rng)
}

/// Parameters of the replicated trimmed-mean comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub models: Vec<ContaminationModel>,
    pub methods: Vec<DepthMethod>,
    pub n: usize,
    pub q: f64,
    pub magnitude: f64,
    pub alpha: f64,
    pub replications: usize,
    pub grid_points: usize,
    /// Number of parts `K` for resampled depths; 1 uses full-data depths.
    pub parts: usize,
    pub peak_length: f64,
    pub k_points: usize,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            models: ContaminationModel::ALL.to_vec(),
            methods: DepthMethod::STUDY_SET.to_vec(),
            n: 150,
            q: 0.1,
            magnitude: 25.0,
            alpha: 0.2,
            replications: 200,
            grid_points: 30,
            parts: 10,
            peak_length: 2.0 / 30.0,
            k_points: 2,
            seed: 0,
        }
    }
}

impl StudyConfig {
    pub fn contamination(&self, model: ContaminationModel) -> ContaminationConfig {
        ContaminationConfig {
            model,
            q: self.q,
            magnitude: self.magnitude,
            peak_length: self.peak_length,
            k_points: self.k_points,
            ..ContaminationConfig::default()
        }
    }

    pub fn estimators(&self) -> Vec<Estimator> {
        std::iter::once(Estimator::Mean)
            .chain(self.methods.iter().map(|&m| Estimator::Trimmed(m)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelReport {
    pub model: ContaminationModel,
    pub errors: ErrorTable,
    pub adjusted: AdjustedErrors,
}

/// Mean and standard deviation of adjusted integrated errors per model and estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub models: Vec<ModelReport>,
}

impl StudyReport {
    pub fn model(&self, model: ContaminationModel) -> Option<&ModelReport> {
        self.models.iter().find(|m| m.model == model)
    }
}

const DATA_STREAM: u64 = 1;
const PARTITION_STREAM: u64 = 2;

pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    if config.replications == 0 {
        return Err(Error::BadParameter(
            "at least one replication is required".into(),
        ));
    }
    if config.methods.is_empty() {
        return Err(Error::BadParameter("no depth methods selected".into()));
    }
    if config.parts == 0 {
        return Err(Error::BadParameter("K must be at least 1".into()));
    }
    let grid = Grid::canonical(config.grid_points)?;
    let estimators = config.estimators();
    let mut models = Vec::with_capacity(config.models.len());
    for &model in &config.models {
        let generator = ModelGenerator::new(config.contamination(model), grid.clone())?;
        let rows: Vec<Vec<f64>> = (0..config.replications)
            .into_par_iter()
            .map(|rep| replicate(config, &generator, model, rep as u64))
            .collect::<Result<_>>()?;
        let mut errors = ErrorTable::new(estimators.clone());
        for row in rows {
            errors.push(row)?;
        }
        let adjusted = adjust_errors(&errors);
        models.push(ModelReport {
            model,
            errors,
            adjusted,
        });
    }
    Ok(StudyReport {
        config: config.clone(),
        models,
    })
}

/// Integrated errors of the mean and of every trimmed mean for one replication.
fn replicate(
    config: &StudyConfig,
    generator: &ModelGenerator,
    model: ContaminationModel,
    rep: u64,
) -> Result<Vec<f64>> {
    let key = u64::from(model.id());
    let mut data_rng = stream_rng(config.seed, &[DATA_STREAM, key, rep]);
    let labeled = generator.generate(config.n, &mut data_rng)?;
    let sample = &labeled.sample;
    let partition = if config.parts > 1 {
        let mut part_rng = stream_rng(config.seed, &[PARTITION_STREAM, key, rep]);
        Some(random_partition(config.n, config.parts, &mut part_rng)?)
    } else {
        None
    };

    let grid = sample.grid();
    let mut row = Vec::with_capacity(config.methods.len() + 1);
    row.push(integrated_error(&mean_curve(sample), linear_trend, grid)?);
    for &method in &config.methods {
        let depths = match &partition {
            Some(p) => resampled_depth_all(sample, p, method)?,
            None => depth_all(sample, method)?,
        };
        let estimate = trimmed_mean(sample, &depths, config.alpha)?;
        row.push(integrated_error(&estimate, linear_trend, grid)?);
    }
    Ok(row)
}

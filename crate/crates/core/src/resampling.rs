//! Depth estimated from `K` random parts of the sample, and the study that
//! compares the ranks it induces with those of the full-data depth.
//!
//! The resampled depth of a curve is the average of its depths with respect
//! to each part. A curve is not removed from its own part.

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::depth::{depth_all, rank_order, DepthMethod, ReferenceDepth};
use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::sample::{Curve, DepthVector, FunctionalSample, Grid, RankOrder};
use crate::simulation::{ContaminationConfig, ContaminationModel, GpSpec, ModelGenerator};

/// Balanced assignment of curves to `K` parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Checks that parts are balanced and hold at least two curves each.
    pub fn new(assignment: Vec<usize>, k: usize) -> Result<Self> {
        let n = assignment.len();
        if k == 0 || n / k < 2 {
            return Err(Error::PartTooSmall { n, k });
        }
        let mut sizes = vec![0usize; k];
        for &p in &assignment {
            if p >= k {
                return Err(Error::BadParameter(format!("part id {p} >= K={k}")));
            }
            sizes[p] += 1;
        }
        let (lo, hi) = (n / k, n.div_ceil(k));
        if sizes.iter().any(|&s| s < lo || s > hi) {
            return Err(Error::BadParameter(format!(
                "unbalanced part sizes {sizes:?}"
            )));
        }
        Ok(Self { assignment, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Curve indices of every part, ascending within each part.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.k];
        for (i, &p) in self.assignment.iter().enumerate() {
            parts[p].push(i);
        }
        parts
    }
}

/// Shuffles the indices and deals them round-robin into `k` parts.
pub fn random_partition<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Partition> {
    if k == 0 || n / k < 2 {
        return Err(Error::PartTooSmall { n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut assignment = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        assignment[i] = pos % k;
    }
    Partition::new(assignment, k)
}

fn part_references<'a>(
    sample: &'a FunctionalSample,
    partition: &Partition,
    method: DepthMethod,
) -> Result<Vec<ReferenceDepth<'a>>> {
    if partition.len() != sample.len() {
        return Err(Error::PartitionMismatch {
            expected: sample.len(),
            found: partition.len(),
        });
    }
    partition
        .parts()
        .iter()
        .map(|part| ReferenceDepth::from_subset(sample, part, method))
        .collect()
}

/// Mean of the depths of `x` with respect to each part.
pub fn resampled_depth(
    x: &Curve,
    sample: &FunctionalSample,
    partition: &Partition,
    method: DepthMethod,
) -> Result<f64> {
    let refs = part_references(sample, partition, method)?;
    let mut total = 0.0;
    for r in &refs {
        total += r.depth(x)?;
    }
    Ok(total / refs.len() as f64)
}

/// Resampled depth of every sample curve.
pub fn resampled_depth_all(
    sample: &FunctionalSample,
    partition: &Partition,
    method: DepthMethod,
) -> Result<DepthVector> {
    let refs = part_references(sample, partition, method)?;
    let k = refs.len() as f64;
    let values = sample
        .curves()
        .par_iter()
        .map(|c| refs.iter().map(|r| r.depth_of(c.values())).sum::<f64>() / k)
        .collect();
    Ok(DepthVector::new(method, values))
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]] == values[idx[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's rank correlation; NaN when either sequence is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "spearman needs paired samples");
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankAgreementConfig {
    /// Process of the curves, `x_i(t) = 4t + e_i(t)`.
    pub process: GpSpec,
    pub grid_points: usize,
    pub n: usize,
    pub parts: usize,
    pub repeats: usize,
    pub method: DepthMethod,
    pub seed: u64,
}

impl Default for RankAgreementConfig {
    fn default() -> Self {
        Self {
            process: GpSpec::smooth(),
            grid_points: 30,
            n: 150,
            parts: 10,
            repeats: 50,
            method: DepthMethod::GeneralizedBand(2),
            seed: 0,
        }
    }
}

/// Resampled ranks listed in full-data rank order, over repeated samples.
#[derive(Debug, Clone, PartialEq)]
pub struct RankAgreementReport {
    pub method: DepthMethod,
    /// `reordered[b][p]`: resampled rank of the curve at full-data position `p` in repeat `b`.
    pub reordered: Vec<Vec<f64>>,
    /// Mean over repeats per full-data position.
    pub mean: Vec<f64>,
    /// Sample standard deviation over repeats per position (0 for one repeat).
    pub sd: Vec<f64>,
    /// Spearman correlation between full-data and resampled ranks per repeat.
    pub correlations: Vec<f64>,
}

impl RankAgreementReport {
    pub fn mean_correlation(&self) -> f64 {
        self.correlations.iter().sum::<f64>() / self.correlations.len() as f64
    }

    /// Mean over repeats of the Spearman correlation restricted to a range of
    /// full-data positions (0-based, deepest first).
    pub fn segment_correlation(&self, positions: Range<usize>) -> f64 {
        let full: Vec<f64> = positions.clone().map(|p| (p + 1) as f64).collect();
        let total: f64 = self
            .reordered
            .iter()
            .map(|ranks| spearman(&full, &ranks[positions.clone()]))
            .sum();
        total / self.reordered.len() as f64
    }
}

const RANK_DATA_STREAM: u64 = 11;
const RANK_PARTITION_STREAM: u64 = 12;

pub fn rank_agreement_study(config: &RankAgreementConfig) -> Result<RankAgreementReport> {
    if config.repeats == 0 {
        return Err(Error::BadParameter(
            "at least one repeat is required".into(),
        ));
    }
    let grid = Grid::canonical(config.grid_points)?;
    let generator = ModelGenerator::new(
        ContaminationConfig {
            model: ContaminationModel::None,
            base: config.process,
            ..ContaminationConfig::default()
        },
        grid,
    )?;
    let reordered: Vec<Vec<f64>> = (0..config.repeats as u64)
        .into_par_iter()
        .map(|b| {
            let mut data_rng = stream_rng(config.seed, &[RANK_DATA_STREAM, b]);
            let sample = generator.generate(config.n, &mut data_rng)?.sample;
            let mut part_rng = stream_rng(config.seed, &[RANK_PARTITION_STREAM, b]);
            let partition = random_partition(config.n, config.parts, &mut part_rng)?;

            let full = rank_order(&depth_all(&sample, config.method)?);
            let resampled = RankOrder::from_depths(
                &resampled_depth_all(&sample, &partition, config.method)?.values,
            )
            .ranks();
            Ok(full.order.iter().map(|&i| resampled[i] as f64).collect())
        })
        .collect::<Result<_>>()?;

    let n = config.n;
    let b = reordered.len() as f64;
    let mean: Vec<f64> = (0..n)
        .map(|p| reordered.iter().map(|r| r[p]).sum::<f64>() / b)
        .collect();
    let sd = (0..n)
        .map(|p| {
            if reordered.len() < 2 {
                return 0.0;
            }
            let ss: f64 = reordered.iter().map(|r| (r[p] - mean[p]).powi(2)).sum();
            (ss / (b - 1.0)).sqrt()
        })
        .collect();
    let positions: Vec<f64> = (1..=n).map(|p| p as f64).collect();
    let correlations = reordered.iter().map(|r| spearman(&positions, r)).collect();
    Ok(RankAgreementReport {
        method: config.method,
        reordered,
        mean,
        sd,
        correlations,
    })
}

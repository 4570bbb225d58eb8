//! Location estimates for curves and their integrated errors.

use std::fmt;

use crate::depth::{rank_order, DepthMethod};
use crate::error::{Error, Result};
use crate::sample::{Curve, DepthVector, FunctionalSample, Grid};

/// A location estimator compared in the simulation study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Mean,
    Trimmed(DepthMethod),
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimator::Mean => write!(f, "Mean"),
            Estimator::Trimmed(m) => write!(f, "{m}"),
        }
    }
}

/// Trimming proportion and the number of curves it removes from a sample of `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimSpec {
    pub alpha: f64,
    pub method: DepthMethod,
    pub trim_count: usize,
}

impl TrimSpec {
    pub fn new(alpha: f64, method: DepthMethod, n: usize) -> Result<Self> {
        Ok(Self {
            alpha,
            method,
            trim_count: trim_count(n, alpha)?,
        })
    }
}

/// `[n * alpha]`, the integer part. The product is nudged by 1e-9 so that
/// values like `0.29 * 100` do not truncate one below the intended count.
pub fn trim_count(n: usize, alpha: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::BadAlpha(alpha));
    }
    let count = (n as f64 * alpha + 1e-9).floor() as usize;
    Ok(count.min(n.saturating_sub(1)))
}

pub(crate) fn pointwise_mean<'a>(curves: impl IntoIterator<Item = &'a Curve>) -> Curve {
    let mut sum: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for c in curves {
        if sum.is_empty() {
            sum = vec![0.0; c.len()];
        }
        for (s, &y) in sum.iter_mut().zip(c.values()) {
            *s += y;
        }
        count += 1;
    }
    let n = count as f64;
    Curve::new(sum.into_iter().map(|s| s / n).collect())
}

pub fn mean_curve(sample: &FunctionalSample) -> Curve {
    pointwise_mean(sample.curves())
}

/// Pointwise mean of the `n - [n * alpha]` deepest curves.
pub fn trimmed_mean(sample: &FunctionalSample, depths: &DepthVector, alpha: f64) -> Result<Curve> {
    if depths.len() != sample.len() {
        return Err(Error::DepthLengthMismatch {
            expected: sample.len(),
            found: depths.len(),
        });
    }
    let keep = sample.len() - trim_count(sample.len(), alpha)?;
    let order = rank_order(depths);
    Ok(pointwise_mean(
        order.order[..keep].iter().map(|&i| sample.curve(i)),
    ))
}

/// Indices of the `[n * alpha]` least deep curves, least deep last.
pub fn trimmed_indices(depths: &DepthVector, alpha: f64) -> Result<Vec<usize>> {
    let n = depths.len();
    let trim = trim_count(n, alpha)?;
    Ok(rank_order(depths).order[n - trim..].to_vec())
}

/// Mean squared deviation from `truth` over the grid points.
pub fn integrated_error(estimate: &Curve, truth: impl Fn(f64) -> f64, grid: &Grid) -> Result<f64> {
    if estimate.len() != grid.len() {
        return Err(Error::GridMismatch {
            expected: grid.len(),
            found: estimate.len(),
        });
    }
    let sq: f64 = estimate
        .values()
        .iter()
        .zip(grid.points())
        .map(|(&y, &t)| (y - truth(t)).powi(2))
        .sum();
    Ok(sq / grid.len() as f64)
}

/// Integrated errors of several estimators over replications.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub estimators: Vec<Estimator>,
    /// One row per replication, one column per estimator.
    pub ei: Vec<Vec<f64>>,
}

impl ErrorTable {
    pub fn new(estimators: Vec<Estimator>) -> Self {
        Self {
            estimators,
            ei: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.estimators.len() {
            return Err(Error::BadParameter(format!(
                "error row has {} entries for {} estimators",
                row.len(),
                self.estimators.len()
            )));
        }
        self.ei.push(row);
        Ok(())
    }

    pub fn replications(&self) -> usize {
        self.ei.len()
    }
}

/// Errors relative to the best estimator of each replication.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjustedErrors {
    pub estimators: Vec<Estimator>,
    pub eai: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// Sample standard deviation (`R - 1` denominator; 0 for one replication).
    pub sd: Vec<f64>,
}

impl AdjustedErrors {
    pub fn summary(&self, estimator: Estimator) -> Option<(f64, f64)> {
        let i = self.estimators.iter().position(|&e| e == estimator)?;
        Some((self.mean[i], self.sd[i]))
    }
}

/// Subtracts each replication's minimum, taken over every estimator including
/// the plain mean, and summarises the adjusted errors per estimator.
pub fn adjust_errors(raw: &ErrorTable) -> AdjustedErrors {
    let eai: Vec<Vec<f64>> = raw
        .ei
        .iter()
        .map(|row| {
            let best = row.iter().copied().fold(f64::INFINITY, f64::min);
            row.iter().map(|&e| e - best).collect()
        })
        .collect();
    let cols = raw.estimators.len();
    let r = eai.len();
    let mut mean = vec![0.0; cols];
    let mut sd = vec![0.0; cols];
    for c in 0..cols {
        let m = eai.iter().map(|row| row[c]).sum::<f64>() / r as f64;
        mean[c] = m;
        sd[c] = if r > 1 {
            (eai.iter().map(|row| (row[c] - m).powi(2)).sum::<f64>() / (r - 1) as f64).sqrt()
        } else {
            0.0
        };
    }
    AdjustedErrors {
        estimators: raw.estimators.clone(),
        eai,
        mean,
        sd,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constants(values: &[f64], v: usize) -> FunctionalSample {
        let grid = Grid::canonical(v).unwrap();
        let curves = values.iter().map(|&c| Curve::constant(c, v)).collect();
        FunctionalSample::new(grid, curves).unwrap()
    }

    #[test]
    fn mean_of_constants() {
        assert_eq!(
            mean_curve(&constants(&[0.0, 1.0, 2.0], 4)),
            Curve::constant(1.0, 4)
        );
        let one = Curve::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(pointwise_mean([&one]), one);
    }

    #[test]
    fn trim_counts_truncate() {
        assert_eq!(trim_count(10, 0.25).unwrap(), 2);
        assert_eq!(trim_count(10, 0.2).unwrap(), 2);
        assert_eq!(trim_count(150, 0.2).unwrap(), 30);
        assert_eq!(trim_count(100, 0.29).unwrap(), 29);
        assert_eq!(trim_count(7, 0.0).unwrap(), 0);
        assert_eq!(trim_count(9, 0.99).unwrap(), 8);
        assert!(matches!(trim_count(10, 1.0), Err(Error::BadAlpha(_))));
        assert!(matches!(trim_count(10, -0.1), Err(Error::BadAlpha(_))));
    }

    #[test]
    fn trimmed_mean_drops_least_deep() {
        let s = constants(&[0.0, 1.0, 2.0, 100.0], 5);
        let depths = DepthVector::new(DepthMethod::GeneralizedBand(2), vec![0.5, 0.9, 0.5, 0.1]);
        assert_eq!(
            trimmed_mean(&s, &depths, 0.25).unwrap(),
            Curve::constant(1.0, 5)
        );
        assert_eq!(trimmed_mean(&s, &depths, 0.0).unwrap(), mean_curve(&s));
        assert_eq!(trimmed_indices(&depths, 0.25).unwrap(), [3]);
        assert!(trimmed_indices(&depths, 0.0).unwrap().is_empty());
    }

    #[test]
    fn trimmed_mean_length_mismatch() {
        let s = constants(&[0.0, 1.0], 5);
        let depths = DepthVector::new(DepthMethod::CorrectedBand, vec![0.5]);
        assert!(matches!(
            trimmed_mean(&s, &depths, 0.0),
            Err(Error::DepthLengthMismatch { .. })
        ));
    }

    #[test]
    fn integrated_errors() {
        let grid = Grid::canonical(30).unwrap();
        let g = |t: f64| 4.0 * t;
        assert_eq!(integrated_error(&grid.evaluate(g), g, &grid).unwrap(), 0.0);
        let shifted = grid.evaluate(|t| g(t) + 1.0);
        assert!((integrated_error(&shifted, g, &grid).unwrap() - 1.0).abs() < 1e-12);
        // (1/30) * sum_{k=1}^{30} (k/30)^2 = 31 * 61 / (6 * 900)
        let tilted = grid.evaluate(|t| g(t) + t);
        let expected = 31.0 * 61.0 / 5400.0;
        assert!((integrated_error(&tilted, g, &grid).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.350185).abs() < 1e-6);
        assert!(matches!(
            integrated_error(&Curve::constant(0.0, 29), g, &grid),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn adjustment_subtracts_row_minimum() {
        let mut table = ErrorTable::new(vec![
            Estimator::Mean,
            Estimator::Trimmed(DepthMethod::Band(2)),
            Estimator::Trimmed(DepthMethod::GeneralizedBand(2)),
        ]);
        table.push(vec![0.5, 0.3, 0.2]).unwrap();
        let adj = adjust_errors(&table);
        let expected = [0.3, 0.1, 0.0];
        for (a, e) in adj.eai[0].iter().zip(expected) {
            assert!((a - e).abs() < 1e-15);
        }
        assert_eq!(adj.sd, [0.0; 3]);
        assert!(table.push(vec![1.0]).is_err());

        let mut single = ErrorTable::new(vec![Estimator::Mean]);
        single.push(vec![3.0]).unwrap();
        single.push(vec![7.0]).unwrap();
        let adj = adjust_errors(&single);
        assert_eq!(adj.eai, [[0.0], [0.0]]);
        assert_eq!(adj.summary(Estimator::Mean), Some((0.0, 0.0)));
    }
}

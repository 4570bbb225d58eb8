//! Band depths of a curve with respect to a sample of curves.
//!
//! Six functionals are available:
//!
//! | method  | per-band quantity                                   | range     |
//! |---------|-----------------------------------------------------|-----------|
//! | `BD_J`  | graph fully inside the band of `j` curves, `j<=J`   | `[0,J-1]` |
//! | `GBD_J` | proportion of the grid inside the band              | `[0,J-1]` |
//! | `cBD`   | weighted containment in the corrected band          | `[0,1]`   |
//! | `cGBD`  | proportion of the grid inside the corrected band    | `[0,1]`   |
//! | `GBD_I` | longest consecutive stretch inside the band         | `[0,1]`   |
//! | `GBD_O` | one minus the longest consecutive stretch outside   | `[0,1]`   |
//!
//! The last four always use bands of two curves. When the curve is itself a
//! member of the reference sample, the bands it delimits are part of the
//! enumeration.
//!
//! Every per-band quantity is an integer number of grid points, so the sums
//! are accumulated exactly in integers and divided once at the end. Results do
//! not depend on evaluation order or on the number of worker threads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::band::longest_runs;
use crate::error::{Error, Result};
use crate::sample::{Curve, DepthVector, FunctionalSample, RankOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DepthMethod {
    /// `BD_J`: cumulative band depth over band sizes `2..=J`.
    Band(usize),
    /// `GBD_J`: cumulative generalized band depth over band sizes `2..=J`.
    GeneralizedBand(usize),
    /// `cBD`
    CorrectedBand,
    /// `cGBD`
    CorrectedGeneralizedBand,
    /// `GBD_I`
    GeneralizedInside,
    /// `GBD_O`
    GeneralizedOutside,
}

impl DepthMethod {
    /// BD2, BD3, cBD, GBD, cGBD, GBD_I and GBD_O.
    pub const STUDY_SET: [DepthMethod; 7] = [
        DepthMethod::Band(2),
        DepthMethod::Band(3),
        DepthMethod::CorrectedBand,
        DepthMethod::GeneralizedBand(2),
        DepthMethod::CorrectedGeneralizedBand,
        DepthMethod::GeneralizedInside,
        DepthMethod::GeneralizedOutside,
    ];

    /// Largest number of curves delimiting one band.
    pub fn band_size(self) -> usize {
        match self {
            DepthMethod::Band(j) | DepthMethod::GeneralizedBand(j) => j,
            _ => 2,
        }
    }

    /// Replaces `J` for `BD_J`/`GBD_J`; other methods are fixed at two curves.
    pub fn with_band_size(self, j: usize) -> Self {
        match self {
            DepthMethod::Band(_) => DepthMethod::Band(j),
            DepthMethod::GeneralizedBand(_) => DepthMethod::GeneralizedBand(j),
            other => other,
        }
    }

    pub fn upper_bound(self) -> f64 {
        match self {
            DepthMethod::Band(j) | DepthMethod::GeneralizedBand(j) => (j - 1) as f64,
            _ => 1.0,
        }
    }

    /// Checks `2 <= J <= n` for a reference sample of `n` curves.
    pub fn check(self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::TooFewCurves(n));
        }
        let j = self.band_size();
        if j < 2 || j > n {
            return Err(Error::BadJ { j, n });
        }
        Ok(())
    }
}

impl fmt::Display for DepthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthMethod::Band(j) => write!(f, "BD{j}"),
            DepthMethod::GeneralizedBand(2) => write!(f, "GBD"),
            DepthMethod::GeneralizedBand(j) => write!(f, "GBD{j}"),
            DepthMethod::CorrectedBand => write!(f, "cBD"),
            DepthMethod::CorrectedGeneralizedBand => write!(f, "cGBD"),
            DepthMethod::GeneralizedInside => write!(f, "GBD_I"),
            DepthMethod::GeneralizedOutside => write!(f, "GBD_O"),
        }
    }
}

impl FromStr for DepthMethod {
    type Err = Error;

    /// Accepts the display tags case-insensitively; `BD` and `GBD` without a
    /// suffix mean `J = 2`.
    fn from_str(s: &str) -> Result<Self> {
        let tag = s.trim().to_ascii_lowercase();
        let band_size = |digits: &str| -> Result<usize> {
            if digits.is_empty() {
                return Ok(2);
            }
            digits
                .parse()
                .map_err(|_| Error::UnknownMethod(s.to_string()))
        };
        match tag.as_str() {
            "cbd" => Ok(DepthMethod::CorrectedBand),
            "cgbd" => Ok(DepthMethod::CorrectedGeneralizedBand),
            "gbd_i" | "gbdi" => Ok(DepthMethod::GeneralizedInside),
            "gbd_o" | "gbdo" => Ok(DepthMethod::GeneralizedOutside),
            _ => {
                if let Some(rest) = tag.strip_prefix("gbd") {
                    Ok(DepthMethod::GeneralizedBand(band_size(rest)?))
                } else if let Some(rest) = tag.strip_prefix("bd") {
                    Ok(DepthMethod::Band(band_size(rest)?))
                } else {
                    Err(Error::UnknownMethod(s.to_string()))
                }
            }
        }
    }
}

/// Corrected bands of every pair of a reference set, prepared once.
#[derive(Debug, Clone)]
struct CorrectedPairs {
    /// (lower curve, upper curve) per pair.
    delimiters: Vec<(usize, usize)>,
    /// `max(L_ab, L_ba)` in grid points.
    weights: Vec<u64>,
    /// Domain bits, `V` per pair.
    domains: Vec<bool>,
}

impl CorrectedPairs {
    fn new(rows: &[&[f64]], v: usize) -> Self {
        let m = rows.len();
        let pairs = m * (m - 1) / 2;
        let mut delimiters = Vec::with_capacity(pairs);
        let mut weights = Vec::with_capacity(pairs);
        let mut domains = Vec::with_capacity(pairs * v);
        for a in 0..m {
            for b in a + 1..m {
                let (xa, xb) = (rows[a], rows[b]);
                let ab = (0..v).filter(|&k| xb[k] - xa[k] >= 0.0).count();
                let ba = (0..v).filter(|&k| xa[k] - xb[k] >= 0.0).count();
                weights.push(ab.max(ba) as u64);
                if 2 * ab >= v {
                    delimiters.push((a, b));
                    domains.extend((0..v).map(|k| xb[k] - xa[k] >= 0.0));
                } else {
                    delimiters.push((b, a));
                    domains.extend((0..v).map(|k| xa[k] - xb[k] >= 0.0));
                }
            }
        }
        Self {
            delimiters,
            weights,
            domains,
        }
    }
}

/// A reference sample prepared for repeated depth evaluation under one method.
#[derive(Debug, Clone)]
pub struct ReferenceDepth<'a> {
    rows: Vec<&'a [f64]>,
    v: usize,
    method: DepthMethod,
    corrected: Option<CorrectedPairs>,
}

impl<'a> ReferenceDepth<'a> {
    pub fn new(sample: &'a FunctionalSample, method: DepthMethod) -> Result<Self> {
        Self::from_rows(sample.rows(), sample.grid_len(), method)
    }

    /// Uses the given curves of `sample` as the reference set.
    pub fn from_subset(
        sample: &'a FunctionalSample,
        indices: &[usize],
        method: DepthMethod,
    ) -> Result<Self> {
        let rows = indices.iter().map(|&i| sample.curve(i).values()).collect();
        Self::from_rows(rows, sample.grid_len(), method)
    }

    pub(crate) fn from_rows(rows: Vec<&'a [f64]>, v: usize, method: DepthMethod) -> Result<Self> {
        method.check(rows.len())?;
        let corrected = match method {
            DepthMethod::CorrectedBand | DepthMethod::CorrectedGeneralizedBand => {
                Some(CorrectedPairs::new(&rows, v))
            }
            _ => None,
        };
        Ok(Self {
            rows,
            v,
            method,
            corrected,
        })
    }

    pub fn method(&self) -> DepthMethod {
        self.method
    }

    /// Number of reference curves.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn depth(&self, x: &Curve) -> Result<f64> {
        if x.len() != self.v {
            return Err(Error::GridMismatch {
                expected: self.v,
                found: x.len(),
            });
        }
        Ok(self.depth_of(x.values()))
    }

    pub(crate) fn depth_of(&self, x: &[f64]) -> f64 {
        let m = self.rows.len();
        let v = self.v as f64;
        match self.method {
            DepthMethod::Band(j_max) => (2..=j_max)
                .map(|j| subset_counts(x, &self.rows, j).contained as f64 / binomial(m, j))
                .sum(),
            DepthMethod::GeneralizedBand(j_max) => (2..=j_max)
                .map(|j| subset_counts(x, &self.rows, j).inside as f64 / (v * binomial(m, j)))
                .sum(),
            DepthMethod::CorrectedBand => {
                let total = self.corrected_sum(
                    x,
                    |inside, domain, weight| {
                        if inside == domain {
                            weight
                        } else {
                            0
                        }
                    },
                );
                total as f64 / (v * binomial(m, 2))
            }
            DepthMethod::CorrectedGeneralizedBand => {
                let total = self.corrected_sum(x, |inside, _, _| inside);
                total as f64 / (v * binomial(m, 2))
            }
            DepthMethod::GeneralizedInside => {
                let total = self.pair_runs_sum(x, |longest_in, _| longest_in);
                total as f64 / (v * binomial(m, 2))
            }
            DepthMethod::GeneralizedOutside => {
                let n = self.v as u64;
                let total = self.pair_runs_sum(x, |_, longest_out| n - longest_out);
                total as f64 / (v * binomial(m, 2))
            }
        }
    }

    /// Sums `term(inside points, domain points, weight)` over corrected bands.
    fn corrected_sum(&self, x: &[f64], term: impl Fn(u64, u64, u64) -> u64) -> u64 {
        let pairs = self.corrected.as_ref().expect("corrected pairs prepared");
        let v = self.v;
        let mut total = 0u64;
        for (p, &(lo, hi)) in pairs.delimiters.iter().enumerate() {
            let (lower, upper) = (self.rows[lo], self.rows[hi]);
            let domain = &pairs.domains[p * v..(p + 1) * v];
            let mut inside = 0u64;
            let mut size = 0u64;
            for k in 0..v {
                if domain[k] {
                    size += 1;
                    inside += (lower[k] <= x[k] && x[k] <= upper[k]) as u64;
                }
            }
            total += term(inside, size, pairs.weights[p]);
        }
        total
    }

    /// Sums `term(longest inside run, longest outside run)` over two-curve bands.
    fn pair_runs_sum(&self, x: &[f64], term: impl Fn(u64, u64) -> u64) -> u64 {
        let m = self.rows.len();
        let mut total = 0u64;
        for a in 0..m {
            for b in a + 1..m {
                let (xa, xb) = (self.rows[a], self.rows[b]);
                let bits = (0..self.v).map(|k| {
                    let (lo, hi) = if xa[k] <= xb[k] {
                        (xa[k], xb[k])
                    } else {
                        (xb[k], xa[k])
                    };
                    lo <= x[k] && x[k] <= hi
                });
                let (run_in, run_out) = longest_runs(bits);
                total += term(run_in as u64, run_out as u64);
            }
        }
        total
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct SubsetCounts {
    /// Bands whose envelope contains the whole graph.
    contained: u64,
    /// Grid points inside, summed over bands.
    inside: u64,
}

/// Enumerates every `j`-subset of `rows` and counts how `x` sits in its envelope.
fn subset_counts(x: &[f64], rows: &[&[f64]], j: usize) -> SubsetCounts {
    let v = x.len();
    let mut counts = SubsetCounts::default();
    let mut tally = |lower: &[f64], upper: &[f64]| {
        let inside = (0..v)
            .filter(|&k| lower[k] <= x[k] && x[k] <= upper[k])
            .count();
        counts.inside += inside as u64;
        counts.contained += (inside == v) as u64;
    };

    if j == 2 {
        let mut lower = vec![0.0; v];
        let mut upper = vec![0.0; v];
        for a in 0..rows.len() {
            for b in a + 1..rows.len() {
                for k in 0..v {
                    lower[k] = rows[a][k].min(rows[b][k]);
                    upper[k] = rows[a][k].max(rows[b][k]);
                }
                tally(&lower, &upper);
            }
        }
        return counts;
    }

    // envelopes of the first `level + 1` chosen curves
    let mut lowers = vec![vec![0.0; v]; j];
    let mut uppers = vec![vec![0.0; v]; j];
    let mut chosen = vec![0usize; j];
    fn descend(
        level: usize,
        start: usize,
        rows: &[&[f64]],
        chosen: &mut [usize],
        lowers: &mut [Vec<f64>],
        uppers: &mut [Vec<f64>],
        tally: &mut dyn FnMut(&[f64], &[f64]),
    ) {
        let j = chosen.len();
        let m = rows.len();
        for i in start..=(m - (j - level)) {
            chosen[level] = i;
            if level == 0 {
                lowers[0].copy_from_slice(rows[i]);
                uppers[0].copy_from_slice(rows[i]);
            } else {
                let (done, rest) = lowers.split_at_mut(level);
                for (k, lo) in rest[0].iter_mut().enumerate() {
                    *lo = done[level - 1][k].min(rows[i][k]);
                }
                let (done, rest) = uppers.split_at_mut(level);
                for (k, hi) in rest[0].iter_mut().enumerate() {
                    *hi = done[level - 1][k].max(rows[i][k]);
                }
            }
            if level + 1 == j {
                tally(&lowers[level], &uppers[level]);
            } else {
                descend(level + 1, i + 1, rows, chosen, lowers, uppers, tally);
            }
        }
    }
    descend(
        0,
        0,
        rows,
        &mut chosen,
        &mut lowers,
        &mut uppers,
        &mut tally,
    );
    counts
}

/// `n choose k` as a float (exact for every size this crate can enumerate).
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c as f64
}

/// Depth of `x` with respect to `sample`.
pub fn depth(x: &Curve, sample: &FunctionalSample, method: DepthMethod) -> Result<f64> {
    ReferenceDepth::new(sample, method)?.depth(x)
}

/// `BD_J`: sum over `j = 2..=J` of the fraction of `j`-curve bands containing the graph of `x`.
pub fn band_depth(x: &Curve, sample: &FunctionalSample, j: usize) -> Result<f64> {
    depth(x, sample, DepthMethod::Band(j))
}

/// `GBD_J`: sum over `j = 2..=J` of the mean proportion of the grid on which `x` is inside a band.
pub fn generalized_band_depth(x: &Curve, sample: &FunctionalSample, j: usize) -> Result<f64> {
    depth(x, sample, DepthMethod::GeneralizedBand(j))
}

/// `cBD`: mean over pairs of `max(L_ab, L_ba)` times containment in the corrected band.
pub fn corrected_band_depth(x: &Curve, sample: &FunctionalSample) -> Result<f64> {
    depth(x, sample, DepthMethod::CorrectedBand)
}

/// `cGBD`: mean over pairs of the measure of the corrected inside set.
pub fn corrected_generalized_band_depth(x: &Curve, sample: &FunctionalSample) -> Result<f64> {
    depth(x, sample, DepthMethod::CorrectedGeneralizedBand)
}

/// `GBD_I`: mean over pairs of the longest consecutive stretch inside the band.
pub fn gbd_inside(x: &Curve, sample: &FunctionalSample) -> Result<f64> {
    depth(x, sample, DepthMethod::GeneralizedInside)
}

/// `GBD_O`: mean over pairs of one minus the longest consecutive stretch outside the band.
pub fn gbd_outside(x: &Curve, sample: &FunctionalSample) -> Result<f64> {
    depth(x, sample, DepthMethod::GeneralizedOutside)
}

/// Depth of every sample curve with respect to the full sample.
pub fn depth_all(sample: &FunctionalSample, method: DepthMethod) -> Result<DepthVector> {
    let reference = ReferenceDepth::new(sample, method)?;
    let values = sample
        .curves()
        .par_iter()
        .map(|c| reference.depth_of(c.values()))
        .collect();
    Ok(DepthVector::new(method, values))
}

pub fn rank_order(depths: &DepthVector) -> RankOrder {
    RankOrder::from_depths(&depths.values)
}

/// Index of the deepest curve (the lowest index among ties).
pub fn deepest(sample: &FunctionalSample, method: DepthMethod) -> Result<usize> {
    let depths = depth_all(sample, method)?;
    Ok(rank_order(&depths).order[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Grid;

    fn constants(values: &[f64], v: usize) -> FunctionalSample {
        let grid = Grid::canonical(v).unwrap();
        let curves = values.iter().map(|&c| Curve::constant(c, v)).collect();
        FunctionalSample::new(grid, curves).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn method_tags_round_trip() {
        for m in DepthMethod::STUDY_SET {
            assert_eq!(m.to_string().parse::<DepthMethod>().unwrap(), m);
        }
        assert_eq!("bd".parse::<DepthMethod>().unwrap(), DepthMethod::Band(2));
        assert_eq!(
            "GBD3".parse::<DepthMethod>().unwrap(),
            DepthMethod::GeneralizedBand(3)
        );
        assert!("tukey".parse::<DepthMethod>().is_err());
        assert!("BDx".parse::<DepthMethod>().is_err());
    }

    #[test]
    fn band_depth_of_constants() {
        let s = constants(&[0.0, 1.0, 2.0], 5);
        assert!(close(band_depth(s.curve(1), &s, 2).unwrap(), 1.0));
        assert!(close(band_depth(s.curve(0), &s, 2).unwrap(), 2.0 / 3.0));
        let all = depth_all(&s, DepthMethod::Band(2)).unwrap();
        assert!(close(all.values[0], 2.0 / 3.0));
        assert!(close(all.values[1], 1.0));
        assert!(close(all.values[2], 2.0 / 3.0));
        assert_eq!(deepest(&s, DepthMethod::Band(2)).unwrap(), 1);
    }

    #[test]
    fn generalized_depth_of_constants() {
        let s = constants(&[0.0, 1.0, 2.0], 5);
        assert!(close(
            generalized_band_depth(s.curve(1), &s, 2).unwrap(),
            1.0
        ));
        assert!(close(
            generalized_band_depth(s.curve(0), &s, 2).unwrap(),
            2.0 / 3.0
        ));
    }

    #[test]
    fn bad_band_size() {
        let s = constants(&[0.0, 1.0, 2.0], 5);
        assert_eq!(
            band_depth(s.curve(0), &s, 4).unwrap_err(),
            Error::BadJ { j: 4, n: 3 }
        );
        assert_eq!(
            band_depth(s.curve(0), &s, 1).unwrap_err(),
            Error::BadJ { j: 1, n: 3 }
        );
        assert_eq!(
            depth(&Curve::constant(0.0, 4), &s, DepthMethod::CorrectedBand).unwrap_err(),
            Error::GridMismatch {
                expected: 5,
                found: 4
            }
        );
    }

    #[test]
    fn crossing_pair_terms() {
        let grid = Grid::canonical(10).unwrap();
        let s = FunctionalSample::new(
            grid.clone(),
            vec![grid.evaluate(|t| t), grid.evaluate(|t| 1.0 - t)],
        )
        .unwrap();
        // corrected band on k <= 5 needs t_k <= 0.1, which fails from k = 2
        assert_eq!(
            corrected_band_depth(&Curve::constant(0.1, 10), &s).unwrap(),
            0.0
        );
        assert!(close(
            corrected_generalized_band_depth(&Curve::constant(0.5, 10), &s).unwrap(),
            0.5
        ));
    }

    #[test]
    fn fully_inside_curve_has_unit_depth() {
        let s = constants(&[0.0, 2.0], 6);
        let x = Curve::constant(1.0, 6);
        for m in [
            DepthMethod::GeneralizedBand(2),
            DepthMethod::GeneralizedInside,
            DepthMethod::GeneralizedOutside,
            DepthMethod::CorrectedBand,
        ] {
            assert_eq!(depth(&x, &s, m).unwrap(), 1.0, "{m}");
        }
    }

    #[test]
    fn run_depths_on_single_pair() {
        // band (0, 1) and a curve inside on the pattern 1110001100
        let s = constants(&[0.0, 1.0], 10);
        let x = Curve::new(vec![0.5, 0.5, 0.5, 2.0, 2.0, 2.0, 0.5, 0.5, 2.0, 2.0]);
        assert!(close(gbd_inside(&x, &s).unwrap(), 0.3));
        assert!(close(gbd_outside(&x, &s).unwrap(), 0.7));
        assert!(close(generalized_band_depth(&x, &s, 2).unwrap(), 0.5));
    }

    #[test]
    fn three_curve_bands() {
        // constants 0..4: x = 2 is in every band except those drawn only from
        // {0, 1} or {3, 4}
        let s = constants(&[0.0, 1.0, 2.0, 3.0, 4.0], 3);
        let x = Curve::constant(2.0, 3);
        let pairs_containing = 10.0 - 2.0;
        let triples_containing = 10.0;
        let expected = pairs_containing / 10.0 + triples_containing / 10.0;
        assert!(close(band_depth(&x, &s, 3).unwrap(), expected));
        // the lowest constant sits only in bands it delimits: 4 of 10 pairs, 6 of 10 triples
        let low = Curve::constant(0.0, 3);
        assert!(close(band_depth(&low, &s, 3).unwrap(), 0.4 + 0.6));
    }

    #[test]
    fn identical_curves_tie_at_index_zero() {
        let s = constants(&[1.0, 1.0, 1.0, 1.0], 4);
        for m in DepthMethod::STUDY_SET {
            assert_eq!(deepest(&s, m).unwrap(), 0, "{m}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(150, 2), 11175.0);
        assert_eq!(binomial(15, 3), 455.0);
        assert_eq!(binomial(3, 4), 0.0);
    }
}

//! Grids, curves and samples of curves observed on a shared grid.
//!
//! Every depth in this crate is computed pointwise on the grid: the measure of
//! a set of grid points is its size divided by the number of points `V`.

use std::collections::HashSet;
use std::ops::Index;

use crate::depth::DepthMethod;
use crate::error::{Error, Result};

/// Ordered sampling grid `t_1 < ... < t_V` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::BadGrid(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        for (k, &t) in points.iter().enumerate() {
            if !t.is_finite() || !(0.0..=1.0).contains(&t) {
                return Err(Error::BadGrid(format!(
                    "point {k} ({t}) lies outside [0, 1]"
                )));
            }
        }
        if let Some(k) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::BadGrid(format!(
                "abscissae not strictly increasing at position {}",
                k + 1
            )));
        }
        Ok(Self { points })
    }

    /// The equally spaced grid `t_k = k / V`, `k = 1..=V`.
    pub fn canonical(v: usize) -> Result<Self> {
        Self::new((1..=v).map(|k| k as f64 / v as f64).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Evaluates `f` at every grid point.
    pub fn evaluate(&self, f: impl Fn(f64) -> f64) -> Curve {
        Curve::new(self.points.iter().map(|&t| f(t)).collect())
    }
}

/// Values of one function at the grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve(Vec<f64>);

impl Curve {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn constant(value: f64, len: usize) -> Self {
        Self(vec![value; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Curve {
        Curve(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl From<Vec<f64>> for Curve {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

impl Index<usize> for Curve {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// `n >= 2` curves on one grid, each with a unique identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSample {
    grid: Grid,
    curves: Vec<Curve>,
    ids: Vec<String>,
}

impl FunctionalSample {
    /// Builds a sample whose ids are the row indices `"0"`, `"1"`, ...
    pub fn new(grid: Grid, curves: Vec<Curve>) -> Result<Self> {
        let ids = (0..curves.len()).map(|i| i.to_string()).collect();
        Self::with_ids(grid, curves, ids)
    }

    pub fn with_ids(grid: Grid, curves: Vec<Curve>, ids: Vec<String>) -> Result<Self> {
        validate_sample(Self { grid, curves, ids })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve(&self, i: usize) -> &Curve {
        &self.curves[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Number of curves.
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Number of grid points.
    pub fn grid_len(&self) -> usize {
        self.grid.len()
    }

    pub(crate) fn rows(&self) -> Vec<&[f64]> {
        self.curves.iter().map(Curve::values).collect()
    }

    /// The sub-sample made of the given curves, keeping their ids.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let curves = indices.iter().map(|&i| self.curves[i].clone()).collect();
        let ids = indices.iter().map(|&i| self.ids[i].clone()).collect();
        Self::with_ids(self.grid.clone(), curves, ids)
    }
}

/// Checks every sample invariant and hands the sample back unchanged.
pub fn validate_sample(sample: FunctionalSample) -> Result<FunctionalSample> {
    let v = sample.grid.len();
    if sample.curves.len() < 2 {
        return Err(Error::TooFewCurves(sample.curves.len()));
    }
    if sample.ids.len() != sample.curves.len() {
        return Err(Error::BadParameter(format!(
            "{} ids for {} curves",
            sample.ids.len(),
            sample.curves.len()
        )));
    }
    for (i, curve) in sample.curves.iter().enumerate() {
        if curve.len() != v {
            return Err(Error::MismatchedLength {
                curve: i,
                expected: v,
                found: curve.len(),
            });
        }
        if let Some(k) = curve.values().iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { curve: i, point: k });
        }
    }
    let mut seen = HashSet::with_capacity(sample.ids.len());
    for id in &sample.ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    Ok(sample)
}

/// Pointwise membership over the grid, e.g. where a curve lies inside a band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandMask(Vec<bool>);

impl BandMask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn full(len: usize) -> Self {
        Self(vec![true; len])
    }

    pub fn empty(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> BandMask {
        Self(self.0.iter().map(|b| !b).collect())
    }

    pub fn is_subset_of(&self, other: &BandMask) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    /// Proportion of grid points in the mask.
    pub fn measure(&self) -> f64 {
        measure(self)
    }
}

impl FromIterator<bool> for BandMask {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Counting measure on the grid normalised to `[0, 1]`.
pub fn measure(mask: &BandMask) -> f64 {
    if mask.is_empty() {
        return 0.0;
    }
    mask.count() as f64 / mask.len() as f64
}

/// Depth of every curve of a sample under one method.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthVector {
    pub method: DepthMethod,
    pub values: Vec<f64>,
}

impl DepthVector {
    pub fn new(method: DepthMethod, values: Vec<f64>) -> Self {
        Self { method, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// How equal depths are ordered in a [`RankOrder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Equal depths keep ascending curve index.
    LowerIndexFirst,
}

/// Curve indices from deepest to least deep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOrder {
    pub order: Vec<usize>,
    pub ties_broken_by: TieBreak,
}

impl RankOrder {
    pub fn from_depths(values: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        // stable sort keeps index order among ties
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        Self {
            order,
            ties_broken_by: TieBreak::LowerIndexFirst,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based rank of every curve (1 = deepest).
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.order.len()];
        for (pos, &i) in self.order.iter().enumerate() {
            ranks[i] = pos + 1;
        }
        ranks
    }

    pub fn deepest(&self) -> Option<usize> {
        self.order.first().copied()
    }
}

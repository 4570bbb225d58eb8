//! Bands delimited by sample curves and the sets they induce on the grid.
//!
//! Containment is inclusive at the band boundary, so a delimiting curve is
//! always inside its own band. Ties between two curves belong to both of
//! their dominance sets.

use crate::error::{Error, Result};
use crate::sample::{measure, BandMask, Curve, FunctionalSample};

/// Pointwise envelope of `j >= 2` sample curves.
#[derive(Debug, Clone, PartialEq)]
pub struct BandEnvelope {
    pub lower: Curve,
    pub upper: Curve,
    pub delimiter_indices: Vec<usize>,
}

/// Which of the two delimiting curves forms the lower edge of a corrected band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `x_a` below `x_b` on `a(a, b) = {t : x_b(t) >= x_a(t)}`.
    FirstBelow,
    /// `x_b` below `x_a` on `a(b, a)`.
    SecondBelow,
}

/// A two-curve band restricted to the longer of its two dominance sets.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedBand {
    pub domain: BandMask,
    pub lower: Curve,
    pub upper: Curve,
    /// `max(L_ab, L_ba)`.
    pub weight: f64,
    pub orientation: Orientation,
}

pub fn envelope(sample: &FunctionalSample, indices: &[usize]) -> Result<BandEnvelope> {
    if indices.len() < 2 {
        return Err(Error::BadIndices(format!(
            "a band needs at least 2 delimiting curves, got {}",
            indices.len()
        )));
    }
    for (pos, &i) in indices.iter().enumerate() {
        if i >= sample.len() {
            return Err(Error::BadIndices(format!(
                "index {i} out of range for {} curves",
                sample.len()
            )));
        }
        if indices[..pos].contains(&i) {
            return Err(Error::BadIndices(format!("index {i} repeated")));
        }
    }
    let v = sample.grid_len();
    let mut lower = sample.curve(indices[0]).values().to_vec();
    let mut upper = lower.clone();
    for &i in &indices[1..] {
        for (k, &y) in sample.curve(i).values().iter().enumerate().take(v) {
            lower[k] = lower[k].min(y);
            upper[k] = upper[k].max(y);
        }
    }
    Ok(BandEnvelope {
        lower: Curve::new(lower),
        upper: Curve::new(upper),
        delimiter_indices: indices.to_vec(),
    })
}

/// True iff the whole graph of `x` lies in the band.
pub fn contains_graph(x: &Curve, band: &BandEnvelope) -> bool {
    assert_eq!(x.len(), band.lower.len(), "curve and band grids differ");
    x.values()
        .iter()
        .zip(band.lower.values().iter().zip(band.upper.values()))
        .all(|(&y, (&lo, &hi))| lo <= y && y <= hi)
}

pub fn inside_mask(x: &Curve, band: &BandEnvelope) -> BandMask {
    assert_eq!(x.len(), band.lower.len(), "curve and band grids differ");
    x.values()
        .iter()
        .zip(band.lower.values().iter().zip(band.upper.values()))
        .map(|(&y, (&lo, &hi))| lo <= y && y <= hi)
        .collect()
}

/// The set where `x_b >= x_a` and its measure `L_ab`.
pub fn dominance(x_a: &Curve, x_b: &Curve) -> (BandMask, f64) {
    assert_eq!(x_a.len(), x_b.len(), "curves on different grids");
    let mask: BandMask = x_a
        .values()
        .iter()
        .zip(x_b.values())
        .map(|(&a, &b)| b - a >= 0.0)
        .collect();
    let l = measure(&mask);
    (mask, l)
}

/// Picks `a(a, b)` when `L_ab >= 1/2` and `a(b, a)` otherwise, so an exact
/// half split keeps `x_a` as the lower curve.
pub fn corrected_band(x_a: &Curve, x_b: &Curve) -> CorrectedBand {
    let (ab, l_ab) = dominance(x_a, x_b);
    let (ba, l_ba) = dominance(x_b, x_a);
    let weight = l_ab.max(l_ba);
    if 2 * ab.count() >= ab.len() {
        CorrectedBand {
            domain: ab,
            lower: x_a.clone(),
            upper: x_b.clone(),
            weight,
            orientation: Orientation::FirstBelow,
        }
    } else {
        CorrectedBand {
            domain: ba,
            lower: x_b.clone(),
            upper: x_a.clone(),
            weight,
            orientation: Orientation::SecondBelow,
        }
    }
}

/// Containment of the graph of `x` restricted to the band's domain; vacuously
/// true on an empty domain.
pub fn corrected_contains(x: &Curve, cb: &CorrectedBand) -> bool {
    assert_eq!(x.len(), cb.domain.len(), "curve and band grids differ");
    (0..x.len()).all(|k| !cb.domain.bits()[k] || (cb.lower[k] <= x[k] && x[k] <= cb.upper[k]))
}

pub fn corrected_inside_mask(x: &Curve, cb: &CorrectedBand) -> BandMask {
    assert_eq!(x.len(), cb.domain.len(), "curve and band grids differ");
    (0..x.len())
        .map(|k| cb.domain.bits()[k] && cb.lower[k] <= x[k] && x[k] <= cb.upper[k])
        .collect()
}

/// Longest run of consecutive `true` bits, as a proportion of the grid.
pub fn longest_true_run(mask: &BandMask) -> f64 {
    if mask.is_empty() {
        return 0.0;
    }
    longest_runs(mask.bits().iter().copied()).0 as f64 / mask.len() as f64
}

/// Longest run of consecutive `false` bits, as a proportion of the grid.
pub fn longest_false_run(mask: &BandMask) -> f64 {
    if mask.is_empty() {
        return 0.0;
    }
    longest_runs(mask.bits().iter().copied()).1 as f64 / mask.len() as f64
}

/// Lengths in grid points of the longest `true` run and the longest `false` run.
pub(crate) fn longest_runs(bits: impl Iterator<Item = bool>) -> (usize, usize) {
    let (mut run_in, mut run_out) = (0usize, 0usize);
    let (mut best_in, mut best_out) = (0usize, 0usize);
    for b in bits {
        if b {
            run_in += 1;
            run_out = 0;
            best_in = best_in.max(run_in);
        } else {
            run_out += 1;
            run_in = 0;
            best_out = best_out.max(run_out);
        }
    }
    (best_in, best_out)
}

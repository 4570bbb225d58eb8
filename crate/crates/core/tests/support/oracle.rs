//! Literal nested-loop depth definitions used as test oracles.
//!
//! Deliberately naive: explicit loops over pairs and triples, floating-point
//! proportions summed band by band, and the longest inside/outside stretches
//! found by trying every interval of grid points.

#![allow(dead_code)]

pub type Rows = Vec<Vec<f64>>;

fn choose(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

fn inside(x: &[f64], band: &[&[f64]], t: usize) -> bool {
    let lo = band.iter().map(|c| c[t]).fold(f64::INFINITY, f64::min);
    let hi = band.iter().map(|c| c[t]).fold(f64::NEG_INFINITY, f64::max);
    lo <= x[t] && x[t] <= hi
}

fn proportion_inside(x: &[f64], band: &[&[f64]]) -> f64 {
    let v = x.len();
    let mut p = 0.0;
    for t in 0..v {
        if inside(x, band, t) {
            p += 1.0 / v as f64;
        }
    }
    p
}

fn graph_inside(x: &[f64], band: &[&[f64]]) -> bool {
    (0..x.len()).all(|t| inside(x, band, t))
}

/// Every band of `j` curves, `j` in 2..=3.
fn bands(rows: &Rows, j: usize) -> Vec<Vec<&[f64]>> {
    let n = rows.len();
    let mut out = Vec::new();
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            if j == 2 {
                out.push(vec![rows[i1].as_slice(), rows[i2].as_slice()]);
                continue;
            }
            for i3 in i2 + 1..n {
                out.push(vec![
                    rows[i1].as_slice(),
                    rows[i2].as_slice(),
                    rows[i3].as_slice(),
                ]);
            }
        }
    }
    out
}

pub fn band_depth(x: &[f64], rows: &Rows, big_j: usize) -> f64 {
    assert!(big_j <= 3, "oracle enumerates pairs and triples only");
    let n = rows.len();
    let mut total = 0.0;
    for j in 2..=big_j {
        let mut s = 0.0;
        for band in bands(rows, j) {
            if graph_inside(x, &band) {
                s += 1.0;
            }
        }
        total += s / choose(n, j);
    }
    total
}

pub fn generalized_band_depth(x: &[f64], rows: &Rows, big_j: usize) -> f64 {
    assert!(big_j <= 3, "oracle enumerates pairs and triples only");
    let n = rows.len();
    let mut total = 0.0;
    for j in 2..=big_j {
        let mut s = 0.0;
        for band in bands(rows, j) {
            s += proportion_inside(x, &band);
        }
        total += s / choose(n, j);
    }
    total
}

/// The corrected band of a pair: (domain, lower, upper, weight).
fn corrected(x1: &[f64], x2: &[f64]) -> (Vec<bool>, Vec<f64>, Vec<f64>, f64) {
    let v = x1.len();
    let a12: Vec<bool> = (0..v).map(|t| x2[t] - x1[t] >= 0.0).collect();
    let a21: Vec<bool> = (0..v).map(|t| x1[t] - x2[t] >= 0.0).collect();
    let l12 = a12.iter().filter(|&&b| b).count() as f64 / v as f64;
    let l21 = a21.iter().filter(|&&b| b).count() as f64 / v as f64;
    let weight = if l12 > l21 { l12 } else { l21 };
    if l12 >= 0.5 {
        (a12, x1.to_vec(), x2.to_vec(), weight)
    } else if l21 > 0.5 {
        (a21, x2.to_vec(), x1.to_vec(), weight)
    } else {
        unreachable!("one dominance set covers at least half the grid")
    }
}

pub fn corrected_band_depth(x: &[f64], rows: &Rows) -> f64 {
    let n = rows.len();
    let mut s = 0.0;
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            let (domain, lower, upper, weight) = corrected(&rows[i1], &rows[i2]);
            let mut contained = true;
            for t in 0..x.len() {
                if domain[t] && !(lower[t] <= x[t] && x[t] <= upper[t]) {
                    contained = false;
                }
            }
            if contained {
                s += weight;
            }
        }
    }
    s / choose(n, 2)
}

pub fn corrected_generalized_band_depth(x: &[f64], rows: &Rows) -> f64 {
    let n = rows.len();
    let v = x.len();
    let mut s = 0.0;
    for i1 in 0..n {
        for i2 in i1 + 1..n {
            let (domain, lower, upper, _) = corrected(&rows[i1], &rows[i2]);
            let mut measure = 0.0;
            for t in 0..v {
                if domain[t] && lower[t] <= x[t] && x[t] <= upper[t] {
                    measure += 1.0;
                }
            }
            s += measure / v as f64;
        }
    }
    s / choose(n, 2)
}

/// Length of the longest interval of grid indices on which `pred` holds everywhere.
fn longest_interval(v: usize, pred: impl Fn(usize) -> bool) -> usize {
    let mut best = 0;
    for start in 0..v {
        for end in start..v {
            if (start..=end).all(&pred) {
                best = best.max(end - start + 1);
            }
        }
    }
    best
}

pub fn gbd_inside(x: &[f64], rows: &Rows) -> f64 {
    let n = rows.len();
    let v = x.len();
    let mut s = 0.0;
    for band in bands(rows, 2) {
        let ci = longest_interval(v, |t| inside(x, &band, t));
        s += ci as f64 / v as f64;
    }
    s / choose(n, 2)
}

pub fn gbd_outside(x: &[f64], rows: &Rows) -> f64 {
    let n = rows.len();
    let v = x.len();
    let mut s = 0.0;
    for band in bands(rows, 2) {
        let co = longest_interval(v, |t| !inside(x, &band, t));
        s += 1.0 - co as f64 / v as f64;
    }
    s / choose(n, 2)
}

/// Oracle depth by method tag, for `BD2`, `BD3`, `GBD`, `GBD3`, `cBD`, `cGBD`, `GBD_I`, `GBD_O`.
pub fn depth_by_tag(tag: &str, x: &[f64], rows: &Rows) -> f64 {
    match tag {
        "BD2" => band_depth(x, rows, 2),
        "BD3" => band_depth(x, rows, 3),
        "GBD" => generalized_band_depth(x, rows, 2),
        "GBD3" => generalized_band_depth(x, rows, 3),
        "cBD" => corrected_band_depth(x, rows),
        "cGBD" => corrected_generalized_band_depth(x, rows),
        "GBD_I" => gbd_inside(x, rows),
        "GBD_O" => gbd_outside(x, rows),
        other => panic!("no oracle for {other}"),
    }
}

pub const TAGS: [&str; 8] = ["BD2", "BD3", "GBD", "GBD3", "cBD", "cGBD", "GBD_I", "GBD_O"];

//! Band depths for functional data.
//!
//! Curves are observed on a shared grid in `[0, 1]`. The crate computes the
//! band depth and generalized band depth, their corrected versions, and the
//! run-length variants `GBD_I` and `GBD_O`; orders curves from the deepest
//! outwards; builds depth-trimmed means; estimates depths cheaply from random
//! parts of the sample; and runs the Gaussian-process contamination study
//! comparing the resulting estimators.
//!
//! ```
//! use banddepth::{depth_all, Curve, DepthMethod, FunctionalSample, Grid};
//!
//! let grid = Grid::canonical(5).unwrap();
//! let curves = [0.0, 1.0, 2.0].iter().map(|&c| Curve::constant(c, 5)).collect();
//! let sample = FunctionalSample::new(grid, curves).unwrap();
//! let depths = depth_all(&sample, DepthMethod::Band(2)).unwrap();
//! assert_eq!(depths.values[1], 1.0);
//! ```

pub mod band;
pub mod depth;
pub mod error;
pub mod estimators;
pub mod resampling;
pub mod rng;
pub mod sample;
pub mod simulation;

pub use depth::{deepest, depth, depth_all, rank_order, DepthMethod, ReferenceDepth};
pub use error::{Error, Result};
pub use sample::{
    measure, validate_sample, BandMask, Curve, DepthVector, FunctionalSample, Grid, RankOrder,
};

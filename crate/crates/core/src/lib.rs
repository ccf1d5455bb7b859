//! Computable similarity diagnostics for weighted backward shift
//! operators on diagonal reproducing-kernel Hilbert spaces over the
//! unit disk.
//!
//! The crate evaluates metrics, curvatures, and jet-bundle metrics of
//! the eigenvector line bundles attached to such shifts, and runs the
//! checkable similarity criteria built on them: window-product weight
//! comparisons, hypercontraction-type power-norm sums, defect
//! coefficient recursions, cofactor (tensor-split) extraction, and
//! multiplier-norm summability certificates.
//!
//! Everything is computed in one of two arithmetic modes chosen at
//! construction: exact rationals (identities hold bit-for-bit) or
//! binary64 floats (tolerances are explicit). Grid-based bound reports
//! always carry the grid that witnessed them; a finite grid never
//! certifies a disk-wide statement.

pub mod cases;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kernels;
pub mod multiplier;
pub mod scalar;
pub mod series;
pub mod shift;

pub use error::{Error, Result};
pub use scalar::{Mode, Scalar};
pub use series::{cauchy_product, series_reciprocal, CoeffSeq, RadialEval, TailBound};

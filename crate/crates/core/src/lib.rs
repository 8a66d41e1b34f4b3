//! Computational geometry of iterated function systems and their arithmetic sums.
//!
//! The crate is organised around a pipeline:
//!
//! 1. [`ifs`] — affine/similitude systems, word combinatorics, and certified
//!    depth-`k` attractor approximations (inner point set, outer ball cover,
//!    Hausdorff error bound).
//! 2. [`geom`] — low-dimensional convex geometry: hulls in d = 1, 2, 3,
//!    Chebyshev centers by a dense simplex LP, membership tests, and
//!    randomized checkers for the convexity lemmas the sum arguments rest on.
//! 3. [`grid`] — conservative rasterization onto uniform bit-grids and
//!    bit-parallel n-fold Minkowski sums (shift-OR dilation), plus Hausdorff
//!    distances between rasters.
//! 4. [`thickness`] — empirical estimation and certified lower bounds for the
//!    ball-inscription thickness of a compact set, and packing-witness
//!    extraction.
//! 5. [`sums`] — the executable sum theorems: the rotation-free identity
//!    `⊕ₙE = n·conv(F)` with its greedy word-family expansion, the certified
//!    non-membership counterexample for a rotating system, and a desk-scale
//!    probe of the thick-sum interior argument.
//!
//! Everything is deterministic given an explicit seed; all public types are
//! immutable after construction.

// Index loops over fixed-size coordinate arrays are the house style in the
// numeric kernels; iterator-zip rewrites read worse there.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::manual_range_contains)]

pub mod geom;
pub mod grid;
pub mod ifs;
pub mod linalg;
pub mod sample;
pub mod sums;
pub mod thickness;

/// Absolute geometric tolerance used by facet/membership comparisons.
///
/// Inputs are assumed O(1) after normalization (coordinates within a few
/// units of the origin), so an absolute tolerance is appropriate for double
/// precision.
pub const TOL_GEO: f64 = 1e-9;

pub use geom::{Ball, Point, Polytope};
pub use ifs::{AffineMap, CylinderCover, Ifs, Word};
pub use grid::Raster;

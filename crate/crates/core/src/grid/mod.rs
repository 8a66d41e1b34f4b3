//! Uniform bit-grids over ℝᵈ and conservative rasterization.
//!
//! A [`Raster`] stores one bit per cell of a δ-lattice; the cell at index
//! `i` represents the lattice point `origin + i·δ` and, as a region, the
//! closed δ-box centered there. INNER rasters under-approximate (every set
//! lattice point is near the true set, with the deviation tracked in
//! `slack`); OUTER rasters over-approximate (the true set is covered by the
//! set cells, inflated by `slack`).
//!
//! Minkowski sums act on lattice indices exactly: bit `u+v` of the sum is
//! set iff bits `u` and `v` are set in the operands, and the sum's origin is
//! the sum of the operands' origins, so INNER slack accumulates additively.

mod dilate;
mod distance;
mod pbm;

pub use dilate::{minkowski_sum, n_fold_sum, SumOpts};
pub use distance::hausdorff_distance;
pub use pbm::{encode_pbm, sidecar_text};

use thiserror::Error;

use crate::geom::{Ball, Point, Polytope};
use crate::TOL_GEO;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GridError {
    #[error("bounding box too small: {0}")]
    BoxTooSmall(String),
    #[error("incompatible rasters: {0}")]
    CellMismatch(String),
    #[error("allocation of {requested} bytes exceeds the {cap}-byte cap")]
    AllocationLimit { requested: u64, cap: u64 },
    #[error("raster has no set cells")]
    EmptyRaster,
    #[error("origins differ by a non-integral number of cells on axis {axis} ({offset_cells} cells)")]
    MisalignedOrigins { axis: usize, offset_cells: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RasterMode {
    Inner,
    Outer,
}

/// Axis-aligned box, used to bound rasterization extents.
#[derive(Clone, Copy, Debug)]
pub struct BBox {
    pub lo: Point,
    pub hi: Point,
}

impl BBox {
    pub fn new(lo: Point, hi: Point) -> Self {
        assert_eq!(lo.dim(), hi.dim());
        BBox { lo, hi }
    }

    pub fn of_points(points: &[Point], pad: f64) -> Self {
        let (lo, hi) = crate::geom::bounding_box(points);
        BBox { lo: offset_all(lo, -pad), hi: offset_all(hi, pad) }
    }

    pub fn of_ball(b: &Ball, pad: f64) -> Self {
        BBox {
            lo: offset_all(b.center, -(b.radius + pad)),
            hi: offset_all(b.center, b.radius + pad),
        }
    }

    pub fn contains_point(&self, p: &Point, tol: f64) -> bool {
        (0..p.dim()).all(|i| {
            p.coord(i) >= self.lo.coord(i) - tol && p.coord(i) <= self.hi.coord(i) + tol
        })
    }
}

fn offset_all(p: Point, off: f64) -> Point {
    let mut c = [0.0; 3];
    for i in 0..p.dim() {
        c[i] = p.coord(i) + off;
    }
    Point::from_array(c, p.dim())
}

/// Packed bitmap over a δ-lattice. Bits are packed along axis 0 into u64
/// words, rows padded to a word boundary; row `(i1, i2)` starts at word
/// `((i2·dims[1]) + i1)·words_per_row`.
#[derive(Clone, Debug)]
pub struct Raster {
    origin: Point,
    delta: f64,
    dims: [usize; 3],
    dim: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    mode: RasterMode,
    slack: f64,
}

pub const DEFAULT_MEMORY_CAP: u64 = 2 << 30;

impl Raster {
    pub fn new_empty(
        origin: Point,
        delta: f64,
        dims: [usize; 3],
        mode: RasterMode,
        slack: f64,
        memory_cap: u64,
    ) -> Result<Raster, GridError> {
        assert!(delta > 0.0, "cell size must be positive");
        let dim = origin.dim();
        debug_assert!(dims.iter().all(|&d| d >= 1));
        debug_assert!((dim..3).all(|i| dims[i] == 1), "unused axes must have extent 1");
        let wpr = dims[0].div_ceil(64);
        let words = wpr
            .checked_mul(dims[1])
            .and_then(|w| w.checked_mul(dims[2]))
            .ok_or(GridError::AllocationLimit { requested: u64::MAX, cap: memory_cap })?;
        let bytes = words as u64 * 8;
        if bytes > memory_cap {
            return Err(GridError::AllocationLimit { requested: bytes, cap: memory_cap });
        }
        Ok(Raster {
            origin,
            delta,
            dims,
            dim,
            words_per_row: wpr,
            bits: vec![0u64; words],
            mode,
            slack,
        })
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> RasterMode {
        self.mode
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    pub(crate) fn set_slack(&mut self, slack: f64) {
        self.slack = slack;
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.bits
    }

    #[inline]
    pub fn row_range(&self, i1: usize, i2: usize) -> std::ops::Range<usize> {
        let start = (i2 * self.dims[1] + i1) * self.words_per_row;
        start..start + self.words_per_row
    }

    #[inline]
    pub fn set(&mut self, cell: [usize; 3]) {
        debug_assert!(cell.iter().zip(&self.dims).all(|(&c, &d)| c < d));
        let row = self.row_range(cell[1], cell[2]).start;
        self.bits[row + cell[0] / 64] |= 1u64 << (cell[0] % 64);
    }

    #[inline]
    pub fn get(&self, cell: [usize; 3]) -> bool {
        if cell.iter().zip(&self.dims).any(|(&c, &d)| c >= d) {
            return false;
        }
        let row = self.row_range(cell[1], cell[2]).start;
        self.bits[row + cell[0] / 64] & (1u64 << (cell[0] % 64)) != 0
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// All set cells, ordered by (i2, i1, i0).
    pub fn set_cells(&self) -> Vec<[usize; 3]> {
        self.set_cells_compact()
            .into_iter()
            .map(|c| [c[0] as usize, c[1] as usize, c[2] as usize])
            .collect()
    }

    /// Compact cell list for hot paths (12 bytes per cell).
    pub(crate) fn set_cells_compact(&self) -> Vec<[u32; 3]> {
        let mut out = Vec::with_capacity(self.count_ones() as usize);
        for i2 in 0..self.dims[2] {
            for i1 in 0..self.dims[1] {
                let range = self.row_range(i1, i2);
                for (wi, &w) in self.bits[range].iter().enumerate() {
                    let mut word = w;
                    while word != 0 {
                        let b = word.trailing_zeros() as usize;
                        out.push([(wi * 64 + b) as u32, i1 as u32, i2 as u32]);
                        word &= word - 1;
                    }
                }
            }
        }
        out
    }

    /// The spatial point represented by a cell.
    pub fn lattice_point(&self, cell: [usize; 3]) -> Point {
        let mut c = [0.0; 3];
        for i in 0..self.dim {
            c[i] = self.origin.coord(i) + cell[i] as f64 * self.delta;
        }
        Point::from_array(c, self.dim)
    }

    /// Translates the raster origin; bits are untouched.
    pub fn translated(&self, t: &Point) -> Raster {
        let mut r = self.clone();
        r.origin = self.origin.add(t);
        r
    }
}

fn grid_range(lo: f64, hi: f64, delta: f64) -> (i64, usize) {
    let lo_idx = (lo / delta).round() as i64 - 1;
    let hi_idx = (hi / delta).round() as i64 + 1;
    (lo_idx, (hi_idx - lo_idx + 1) as usize)
}

/// Rasterizes a finite point set: exactly the cells containing an input
/// point are set, so the represented lattice set is within `δ·√d/2` of the
/// input set (both directions); that slack is recorded on the raster.
pub fn rasterize_inner(points: &[Point], delta: f64, bbox: &BBox) -> Result<Raster, GridError> {
    rasterize_inner_capped(points, delta, bbox, DEFAULT_MEMORY_CAP)
}

pub fn rasterize_inner_capped(
    points: &[Point],
    delta: f64,
    bbox: &BBox,
    memory_cap: u64,
) -> Result<Raster, GridError> {
    let dim = bbox.lo.dim();
    for p in points {
        if !bbox.contains_point(p, TOL_GEO) {
            return Err(GridError::BoxTooSmall(format!(
                "point {:?} outside the bounding box",
                p.coords()
            )));
        }
    }
    let mut lo_idx = [0i64; 3];
    let mut dims = [1usize; 3];
    for i in 0..dim {
        let (lo, n) = grid_range(bbox.lo.coord(i), bbox.hi.coord(i), delta);
        lo_idx[i] = lo;
        dims[i] = n;
    }
    let origin = origin_from_index(lo_idx, delta, dim);
    let slack = delta * (dim as f64).sqrt() / 2.0;
    let mut r = Raster::new_empty(origin, delta, dims, RasterMode::Inner, slack, memory_cap)?;
    for p in points {
        let mut cell = [0usize; 3];
        for i in 0..dim {
            let idx = (p.coord(i) / delta).round() as i64 - lo_idx[i];
            cell[i] = idx.clamp(0, dims[i] as i64 - 1) as usize;
        }
        r.set(cell);
    }
    Ok(r)
}

/// Rasterizes a ball union conservatively: every cell whose closed box can
/// intersect a ball is set (center within `radius + δ·√d/2`).
pub fn rasterize_outer(balls: &[Ball], delta: f64, bbox: &BBox) -> Result<Raster, GridError> {
    rasterize_outer_capped(balls, delta, bbox, DEFAULT_MEMORY_CAP)
}

pub fn rasterize_outer_capped(
    balls: &[Ball],
    delta: f64,
    bbox: &BBox,
    memory_cap: u64,
) -> Result<Raster, GridError> {
    let dim = bbox.lo.dim();
    for b in balls {
        let inside = (0..dim).all(|i| {
            b.center.coord(i) - b.radius >= bbox.lo.coord(i) - TOL_GEO
                && b.center.coord(i) + b.radius <= bbox.hi.coord(i) + TOL_GEO
        });
        if !inside {
            return Err(GridError::BoxTooSmall("ball outside the bounding box".into()));
        }
    }
    let mut lo_idx = [0i64; 3];
    let mut dims = [1usize; 3];
    for i in 0..dim {
        let (lo, n) = grid_range(bbox.lo.coord(i), bbox.hi.coord(i), delta);
        lo_idx[i] = lo;
        dims[i] = n;
    }
    let origin = origin_from_index(lo_idx, delta, dim);
    let mut r = Raster::new_empty(origin, delta, dims, RasterMode::Outer, 0.0, memory_cap)?;
    let margin = delta * (dim as f64).sqrt() / 2.0;
    for b in balls {
        stamp_ball(&mut r, b, margin, lo_idx);
    }
    Ok(r)
}

fn stamp_ball(r: &mut Raster, b: &Ball, margin: f64, lo_idx: [i64; 3]) {
    let dim = r.dim();
    let delta = r.delta();
    let reach = b.radius + margin;
    let mut lo = [0usize; 3];
    let mut hi = [0usize; 3];
    for i in 0..dim {
        let l = ((b.center.coord(i) - reach) / delta).floor() as i64 - lo_idx[i];
        let h = ((b.center.coord(i) + reach) / delta).ceil() as i64 - lo_idx[i];
        lo[i] = l.clamp(0, r.dims()[i] as i64 - 1) as usize;
        hi[i] = h.clamp(0, r.dims()[i] as i64 - 1) as usize;
    }
    for i2 in lo[2]..=hi[2] {
        for i1 in lo[1]..=hi[1] {
            for i0 in lo[0]..=hi[0] {
                let p = r.lattice_point([i0, i1, i2]);
                if p.dist(&b.center) <= reach {
                    r.set([i0, i1, i2]);
                }
            }
        }
    }
}

fn origin_from_index(lo_idx: [i64; 3], delta: f64, dim: usize) -> Point {
    let mut c = [0.0; 3];
    for i in 0..dim {
        c[i] = lo_idx[i] as f64 * delta;
    }
    Point::from_array(c, dim)
}

/// Rasterizes a convex polytope on the lattice `{phase + ℤ·δ}`.
///
/// OUTER sets every cell whose center satisfies all facet inequalities
/// within `margin` (a superset of the inflated polytope); INNER sets cells
/// whose centers lie in the polytope shrunk by `margin`. Anchoring `phase`
/// to another raster's origin guarantees exact lattice alignment for
/// containment tests.
pub fn rasterize_polytope(
    poly: &Polytope,
    delta: f64,
    bbox: &BBox,
    mode: RasterMode,
    margin: f64,
    phase: &Point,
    memory_cap: u64,
) -> Result<Raster, GridError> {
    let dim = bbox.lo.dim();
    let mut lo_idx = [0i64; 3];
    let mut dims = [1usize; 3];
    for i in 0..dim {
        let lo = ((bbox.lo.coord(i) - phase.coord(i)) / delta).round() as i64 - 1;
        let hi = ((bbox.hi.coord(i) - phase.coord(i)) / delta).round() as i64 + 1;
        lo_idx[i] = lo;
        dims[i] = (hi - lo + 1) as usize;
    }
    let mut oc = [0.0; 3];
    for i in 0..dim {
        oc[i] = phase.coord(i) + lo_idx[i] as f64 * delta;
    }
    let origin = Point::from_array(oc, dim);
    let mut r = Raster::new_empty(origin, delta, dims, mode, margin, memory_cap)?;
    let degenerate = poly.is_degenerate();
    for i2 in 0..dims[2] {
        for i1 in 0..dims[1] {
            for i0 in 0..dims[0] {
                let p = r.lattice_point([i0, i1, i2]);
                let u = poly.span().project(&p);
                // A full-rank span carries no distance; only degenerate
                // polytopes live in a proper slab.
                let off_span = if degenerate { poly.span().dist(&p) } else { 0.0 };
                let inside = match mode {
                    RasterMode::Outer => {
                        off_span <= margin + TOL_GEO
                            && poly.facets().iter().all(|f| f.eval(u) <= margin)
                    }
                    RasterMode::Inner => {
                        off_span <= TOL_GEO
                            && poly.facets().iter().all(|f| f.eval(u) <= -margin)
                    }
                };
                if inside {
                    r.set([i0, i1, i2]);
                }
            }
        }
    }
    Ok(r)
}

/// Subset test on aligned lattices: true iff every set cell of `inner` maps
/// to a set cell of `outer`. Origins must differ by integral multiples of δ
/// within `TOL_GEO`.
pub fn contains_raster(outer: &Raster, inner: &Raster) -> Result<bool, GridError> {
    if (outer.delta() - inner.delta()).abs() > 1e-12 * outer.delta() {
        return Err(GridError::CellMismatch(format!(
            "cell sizes differ: {} vs {}",
            outer.delta(),
            inner.delta()
        )));
    }
    let delta = outer.delta();
    let mut shift = [0i64; 3];
    for i in 0..outer.dim() {
        let off = (inner.origin().coord(i) - outer.origin().coord(i)) / delta;
        let k = off.round();
        if (off - k).abs() * delta > TOL_GEO {
            return Err(GridError::MisalignedOrigins { axis: i, offset_cells: off });
        }
        shift[i] = k as i64;
    }
    // Stream inner's set bits row by row; nothing is materialized.
    for i2 in 0..inner.dims()[2] {
        for i1 in 0..inner.dims()[1] {
            let range = inner.row_range(i1, i2);
            let row_words = &inner.words()[range];
            if row_words.iter().all(|&w| w == 0) {
                continue;
            }
            let o1 = i1 as i64 + shift[1];
            let o2 = i2 as i64 + shift[2];
            let row_ok =
                o1 >= 0 && o2 >= 0 && o1 < outer.dims()[1] as i64 && o2 < outer.dims()[2] as i64;
            for (wi, &word) in row_words.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    let o0 = (wi * 64 + b) as i64 + shift[0];
                    if !row_ok
                        || o0 < 0
                        || o0 >= outer.dims()[0] as i64
                        || !outer.get([o0 as usize, o1 as usize, o2 as usize])
                    {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

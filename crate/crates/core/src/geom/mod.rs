//! Exact-as-practical convex geometry in dimensions 1, 2, 3.
//!
//! Hulls are built in the intrinsic coordinates of the input's affine span,
//! so affinely dependent inputs (segments in the plane, flat point sets in
//! space) flow through the same pipeline: their facets describe the hull
//! inside the span and the full-dimensional inscribed radius is reported
//! as zero rather than erroring.

mod hull2;
mod hull3;
mod lemmas;
mod simplex;

pub use lemmas::{
    check_ball_sum_absorption, check_distance_bound, check_lemma_sum_absorption,
    check_perturbation_lemma, run_lemma_trials, sum_absorption_samples, LemmaSuiteReport,
};
pub use simplex::solve_lp;

use crate::TOL_GEO;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty input to {0}")]
    EmptyInput(&'static str),
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("eps = {eps} exceeds the lemma hypothesis bound 1/n = {max}")]
    EpsOutOfRange { eps: f64, max: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("LP unbounded; cannot occur for a vertex-derived polytope")]
    Unbounded,
    #[error("simplex did not converge (internal error)")]
    LpStalled,
}

/// A point of ℝᵈ, d ∈ {1, 2, 3}. Unused coordinates are zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    c: [f64; 3],
    dim: usize,
}

impl Point {
    pub fn new(coords: &[f64]) -> Self {
        assert!((1..=3).contains(&coords.len()), "dimension must be 1, 2 or 3");
        let mut c = [0.0; 3];
        c[..coords.len()].copy_from_slice(coords);
        Point { c, dim: coords.len() }
    }

    pub fn from_array(c: [f64; 3], dim: usize) -> Self {
        debug_assert!((1..=3).contains(&dim));
        let mut z = [0.0; 3];
        z[..dim].copy_from_slice(&c[..dim]);
        Point { c: z, dim }
    }

    pub fn origin(dim: usize) -> Self {
        Point::from_array([0.0; 3], dim)
    }

    pub fn p1(x: f64) -> Self {
        Point::new(&[x])
    }

    pub fn p2(x: f64, y: f64) -> Self {
        Point::new(&[x, y])
    }

    pub fn p3(x: f64, y: f64, z: f64) -> Self {
        Point::new(&[x, y, z])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.c[i]
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|v| v.is_finite())
    }

    pub fn add(&self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut c = [0.0; 3];
        for i in 0..self.dim {
            c[i] = self.c[i] + rhs.c[i];
        }
        Point { c, dim: self.dim }
    }

    pub fn sub(&self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut c = [0.0; 3];
        for i in 0..self.dim {
            c[i] = self.c[i] - rhs.c[i];
        }
        Point { c, dim: self.dim }
    }

    pub fn scale(&self, s: f64) -> Point {
        let mut c = [0.0; 3];
        for i in 0..self.dim {
            c[i] = self.c[i] * s;
        }
        Point { c, dim: self.dim }
    }

    pub fn dot(&self, rhs: &Point) -> f64 {
        debug_assert_eq!(self.dim, rhs.dim);
        (0..self.dim).map(|i| self.c[i] * rhs.c[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, rhs: &Point) -> f64 {
        self.sub(rhs).norm()
    }

    /// Total lexicographic order on coordinates; the deterministic ordering
    /// used by greedy selections and tie-breaks.
    pub fn lex_cmp(&self, rhs: &Point) -> std::cmp::Ordering {
        for i in 0..self.dim {
            match self.c[i].total_cmp(&rhs.c[i]) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// Closed ball B(x, r).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Self {
        assert!(radius >= 0.0 && radius.is_finite(), "radius must be finite and ≥ 0");
        Ball { center, radius }
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.center.dist(p) <= self.radius + tol
    }
}

/// Orthonormal affine span of a point set: `base + span{basis}`.
#[derive(Clone, Debug)]
pub struct AffineSpan {
    pub base: Point,
    pub basis: Vec<Point>,
    /// Indices of the input points that realised each basis direction
    /// (plus the base point first); affinely independent by construction.
    pub support: Vec<usize>,
}

impl AffineSpan {
    /// Greedy Gram–Schmidt: each sweep adopts the direction with the largest
    /// residual, which keeps the basis well conditioned.
    pub fn compute(points: &[Point], tol: f64) -> AffineSpan {
        let dim = points[0].dim();
        let base = points[0];
        let mut basis: Vec<Point> = Vec::new();
        let mut support = vec![0usize];
        while basis.len() < dim {
            let mut best = (0usize, 0.0f64, Point::origin(dim));
            for (i, p) in points.iter().enumerate() {
                let mut v = p.sub(&base);
                for b in &basis {
                    v = v.sub(&b.scale(v.dot(b)));
                }
                let n = v.norm();
                if n > best.1 {
                    best = (i, n, v);
                }
            }
            if best.1 <= tol {
                break;
            }
            basis.push(best.2.scale(1.0 / best.1));
            support.push(best.0);
        }
        AffineSpan { base, basis, support }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Intrinsic coordinates of `p` inside the span.
    pub fn project(&self, p: &Point) -> [f64; 3] {
        let v = p.sub(&self.base);
        let mut u = [0.0; 3];
        for (i, b) in self.basis.iter().enumerate() {
            u[i] = v.dot(b);
        }
        u
    }

    /// Distance from `p` to the span.
    pub fn dist(&self, p: &Point) -> f64 {
        let mut v = p.sub(&self.base);
        for b in &self.basis {
            v = v.sub(&b.scale(v.dot(b)));
        }
        v.norm()
    }

    /// Ambient point for intrinsic coordinates `u`.
    pub fn embed(&self, u: [f64; 3]) -> Point {
        let mut p = self.base;
        for (i, b) in self.basis.iter().enumerate() {
            p = p.add(&b.scale(u[i]));
        }
        p
    }
}

/// A halfspace `n·u ≤ offset` in the intrinsic coordinates of a polytope's
/// affine span; `n` is unit length.
#[derive(Clone, Copy, Debug)]
pub struct Halfspace {
    pub normal: [f64; 3],
    pub offset: f64,
}

impl Halfspace {
    pub fn eval(&self, u: [f64; 3]) -> f64 {
        self.normal[0] * u[0] + self.normal[1] * u[1] + self.normal[2] * u[2] - self.offset
    }
}

/// Convex polytope in V-representation with an H-representation derived at
/// construction. `facet_vertices[i]` lists the vertex indices on facet `i`
/// (an ordered polygon in rank 3, an edge pair in rank 2, an endpoint in
/// rank 1).
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    span: AffineSpan,
    facets: Vec<Halfspace>,
    facet_vertices: Vec<Vec<usize>>,
}

/// Largest ball inscribed in a polytope (Chebyshev center). The radius is
/// measured in the ambient dimension: lower-dimensional polytopes get 0.
#[derive(Clone, Copy, Debug)]
pub struct InscribedBall {
    pub center: Point,
    pub radius: f64,
}

/// Builds the convex hull of `points` in dimension `dim`.
///
/// Affinely dependent inputs are projected to their affine span first; the
/// result is flagged degenerate, not an error.
pub fn convex_hull(points: &[Point], dim: usize) -> Result<Polytope, GeomError> {
    if points.is_empty() {
        return Err(GeomError::EmptyInput("convex_hull"));
    }
    for p in points {
        if p.dim() != dim {
            return Err(GeomError::DimensionMismatch { expected: dim, got: p.dim() });
        }
        if !p.is_finite() {
            return Err(GeomError::NonFinite);
        }
    }
    // Coincident inputs (for instance padded packing witnesses) would break
    // strict-turn predicates downstream; sort-based exact dedup keeps this
    // O(n log n) for million-point covers.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].lex_cmp(&points[j]));
    let mut pts: Vec<Point> = Vec::with_capacity(points.len());
    for &i in &order {
        if pts.last().is_none_or(|q| q.lex_cmp(&points[i]) != std::cmp::Ordering::Equal) {
            pts.push(points[i]);
        }
    }
    let span = AffineSpan::compute(&pts, TOL_GEO);
    let intrinsic: Vec<[f64; 3]> = pts.iter().map(|p| span.project(p)).collect();

    let (vertex_ids, facets, facet_vertices) = match span.rank() {
        0 => (vec![0usize], Vec::new(), Vec::new()),
        1 => {
            let (mut lo, mut hi) = (0usize, 0usize);
            for (i, u) in intrinsic.iter().enumerate() {
                if u[0] < intrinsic[lo][0] {
                    lo = i;
                }
                if u[0] > intrinsic[hi][0] {
                    hi = i;
                }
            }
            let facets = vec![
                Halfspace { normal: [1.0, 0.0, 0.0], offset: intrinsic[hi][0] },
                Halfspace { normal: [-1.0, 0.0, 0.0], offset: -intrinsic[lo][0] },
            ];
            (vec![lo, hi], facets, vec![vec![1], vec![0]])
        }
        2 => {
            let hull = hull2::monotone_chain(&intrinsic);
            let h = hull.len();
            let mut facets = Vec::with_capacity(h);
            let mut fverts = Vec::with_capacity(h);
            for i in 0..h {
                let a = intrinsic[hull[i]];
                let b = intrinsic[hull[(i + 1) % h]];
                if h == 1 {
                    break;
                }
                let e = [b[0] - a[0], b[1] - a[1]];
                let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
                let n = [e[1] / len, -e[0] / len, 0.0];
                facets.push(Halfspace { normal: n, offset: n[0] * a[0] + n[1] * a[1] });
                fverts.push(vec![i, (i + 1) % h]);
            }
            (hull, facets, fverts)
        }
        _ => hull3::incremental_hull(&intrinsic, &span.support),
    };

    let vertices: Vec<Point> = vertex_ids.iter().map(|&i| pts[i]).collect();
    Ok(Polytope { dim, vertices, span, facets, facet_vertices })
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn facet_vertices(&self) -> &[Vec<usize>] {
        &self.facet_vertices
    }

    pub fn span(&self) -> &AffineSpan {
        &self.span
    }

    /// True when the hull is lower-dimensional than the ambient space.
    pub fn is_degenerate(&self) -> bool {
        self.span.rank() < self.dim
    }

    /// Membership within `tol`: distance to the affine span at most `tol`
    /// and every facet inequality satisfied within `tol`.
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        assert_eq!(x.dim(), self.dim, "dimension mismatch in contains");
        if self.span.dist(x) > tol {
            return false;
        }
        let u = self.span.project(x);
        self.facets.iter().all(|f| f.eval(u) <= tol)
    }

    /// True when B(center, radius) fits inside the polytope within `tol`
    /// (facet slack at least `radius − tol` everywhere).
    pub fn contains_ball(&self, center: &Point, radius: f64, tol: f64) -> bool {
        if self.is_degenerate() && radius > tol {
            return false;
        }
        if self.span.dist(center) > tol {
            return false;
        }
        let u = self.span.project(center);
        self.facets.iter().all(|f| f.eval(u) + radius <= tol)
    }

    /// Chebyshev center: the largest inscribed ball, by a dense simplex LP
    /// in the intrinsic coordinates (at most dim + 1 structural variables).
    pub fn chebyshev_center(&self) -> Result<InscribedBall, GeomError> {
        let k = self.span.rank();
        if k == 0 {
            return Ok(InscribedBall { center: self.vertices[0], radius: 0.0 });
        }
        // Shift to the vertex centroid so the all-slack basis is feasible.
        let mut centroid = [0.0f64; 3];
        for v in &self.vertices {
            let u = self.span.project(v);
            for i in 0..k {
                centroid[i] += u[i];
            }
        }
        for c in centroid.iter_mut().take(k) {
            *c /= self.vertices.len() as f64;
        }

        // Variables: y⁺ (k), y⁻ (k), r. Maximize r subject to
        // n·(y⁺ − y⁻) + r ≤ offset − n·centroid for every facet.
        let nvars = 2 * k + 1;
        let mut a = Vec::with_capacity(self.facets.len());
        let mut b = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            let mut row = vec![0.0; nvars];
            for i in 0..k {
                row[i] = f.normal[i];
                row[k + i] = -f.normal[i];
            }
            row[2 * k] = 1.0;
            a.push(row);
            let shifted = f.offset
                - (0..k).map(|i| f.normal[i] * centroid[i]).sum::<f64>();
            // The centroid is inside the hull, so negative slack is only
            // floating-point crumbs.
            b.push(shifted.max(0.0));
        }
        let mut obj = vec![0.0; nvars];
        obj[2 * k] = 1.0;
        let sol = simplex::solve_lp(&a, &b, &obj)?;
        let mut u = [0.0f64; 3];
        for i in 0..k {
            u[i] = centroid[i] + sol.x[i] - sol.x[k + i];
        }
        let center = self.span.embed(u);
        let radius = if self.is_degenerate() { 0.0 } else { sol.value };
        Ok(InscribedBall { center, radius })
    }

    /// Euclidean distance from `x` to the polytope (0 inside).
    pub fn distance_from(&self, x: &Point) -> f64 {
        assert_eq!(x.dim(), self.dim);
        // A full-rank span carries no distance; skipping it avoids
        // projection crumbs polluting interior distances.
        let off_span = if self.is_degenerate() { self.span.dist(x) } else { 0.0 };
        let u = self.span.project(x);
        let in_span = self.intrinsic_distance(u);
        (off_span * off_span + in_span * in_span).sqrt()
    }

    fn intrinsic_distance(&self, u: [f64; 3]) -> f64 {
        match self.span.rank() {
            0 => 0.0,
            1 => {
                let hi = self.facets[0].offset;
                let lo = -self.facets[1].offset;
                (lo - u[0]).max(u[0] - hi).max(0.0)
            }
            2 => {
                if self.facets.iter().all(|f| f.eval(u) <= 0.0) {
                    return 0.0;
                }
                let mut best = f64::INFINITY;
                for fv in &self.facet_vertices {
                    let a = self.span.project(&self.vertices[fv[0]]);
                    let b = self.span.project(&self.vertices[fv[1]]);
                    best = best.min(dist_point_segment(u, a, b, 2));
                }
                best
            }
            _ => {
                if self.facets.iter().all(|f| f.eval(u) <= 0.0) {
                    return 0.0;
                }
                let mut best = f64::INFINITY;
                for (f, poly) in self.facets.iter().zip(&self.facet_vertices) {
                    best = best.min(self.distance_to_face(u, f, poly));
                }
                best
            }
        }
    }

    fn distance_to_face(&self, u: [f64; 3], f: &Halfspace, poly: &[usize]) -> f64 {
        let d = f.eval(u);
        let foot = [
            u[0] - d * f.normal[0],
            u[1] - d * f.normal[1],
            u[2] - d * f.normal[2],
        ];
        // Is the foot inside the polygon? Test against the polygon's edge
        // planes (edge direction × face normal points outward for CCW-from-
        // outside ordering).
        let pts: Vec<[f64; 3]> =
            poly.iter().map(|&i| self.span.project(&self.vertices[i])).collect();
        let mut inside = true;
        for i in 0..pts.len() {
            let a = pts[i];
            let b = pts[(i + 1) % pts.len()];
            let e = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let out = cross3(e, f.normal);
            let v = [foot[0] - a[0], foot[1] - a[1], foot[2] - a[2]];
            if out[0] * v[0] + out[1] * v[1] + out[2] * v[2] > 0.0 {
                inside = false;
                break;
            }
        }
        if inside {
            return d.abs();
        }
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            best = best.min(dist_point_segment(u, pts[i], pts[(i + 1) % pts.len()], 3));
        }
        best
    }

    /// The polytope scaled by `s > 0` about the origin.
    pub fn scale(&self, s: f64) -> Polytope {
        assert!(s > 0.0);
        let vertices: Vec<Point> = self.vertices.iter().map(|v| v.scale(s)).collect();
        let span = AffineSpan {
            base: self.span.base.scale(s),
            basis: self.span.basis.clone(),
            support: self.span.support.clone(),
        };
        let facets = self
            .facets
            .iter()
            .map(|f| Halfspace { normal: f.normal, offset: f.offset * s })
            .collect();
        Polytope {
            dim: self.dim,
            vertices,
            span,
            facets,
            facet_vertices: self.facet_vertices.clone(),
        }
    }
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dist_point_segment(p: [f64; 3], a: [f64; 3], b: [f64; 3], dim: usize) -> f64 {
    let mut ab = [0.0; 3];
    let mut ap = [0.0; 3];
    let mut ab2 = 0.0;
    let mut apab = 0.0;
    for i in 0..dim {
        ab[i] = b[i] - a[i];
        ap[i] = p[i] - a[i];
        ab2 += ab[i] * ab[i];
        apab += ap[i] * ab[i];
    }
    let t = if ab2 > 0.0 { (apab / ab2).clamp(0.0, 1.0) } else { 0.0 };
    let mut d2 = 0.0;
    for i in 0..dim {
        let v = ap[i] - t * ab[i];
        d2 += v * v;
    }
    d2.sqrt()
}

/// Exact diameter of a finite point set (via its convex hull, so large
/// inputs stay cheap).
pub fn diameter(points: &[Point], dim: usize) -> Result<f64, GeomError> {
    if points.is_empty() {
        return Err(GeomError::EmptyInput("diameter"));
    }
    if points.len() == 1 {
        return Ok(0.0);
    }
    let hull = convex_hull(points, dim)?;
    let vs = hull.vertices();
    let mut best = 0.0f64;
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            best = best.max(vs[i].dist(&vs[j]));
        }
    }
    Ok(best)
}

/// Two-sided Hausdorff distance between convex polytopes: for convex sets
/// the directed distance is attained at a vertex of the source.
pub fn hausdorff_convex(p: &Polytope, q: &Polytope) -> f64 {
    let pq = p
        .vertices()
        .iter()
        .map(|v| q.distance_from(v))
        .fold(0.0f64, f64::max);
    let qp = q
        .vertices()
        .iter()
        .map(|v| p.distance_from(v))
        .fold(0.0f64, f64::max);
    pq.max(qp)
}

/// Axis-aligned bounding box of a point set.
pub fn bounding_box(points: &[Point]) -> (Point, Point) {
    let dim = points[0].dim();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for i in 0..dim {
            lo[i] = lo[i].min(p.coord(i));
            hi[i] = hi[i].max(p.coord(i));
        }
    }
    (Point::from_array(lo, dim), Point::from_array(hi, dim))
}

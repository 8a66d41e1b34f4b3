//! Ball-inscription thickness: empirical estimates, a certified lower bound
//! for similitude systems, packing-witness extraction, and the thick-sum
//! threshold arithmetic.
//!
//! The thickness of a compact set E is the largest c ∈ [0, 1] such that for
//! every center x ∈ E and scale 0 < r ≤ diam(E) the hull of E ∩ B(x, r)
//! contains a ball of radius c·r. No finite procedure decides it, so the
//! estimator is labeled empirical (an upper-style estimate from finitely
//! many (x, r) pairs, contaminated below by the cover error), while the
//! self-similar bound is a true certified lower bound.

use thiserror::Error;

use crate::geom::{convex_hull, GeomError, InscribedBall, Point};
use crate::ifs::{CylinderCover, Ifs};
use crate::sample::Sampler;
use crate::TOL_GEO;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ThicknessError {
    #[error("all inner points coincide; thickness is undefined on a singleton sample")]
    DegenerateSet,
    #[error("system is not a similitude system with exact ratios")]
    NotSimilitude,
    #[error("packing witness failed: hull radius {hull_radius} below required {required}")]
    WitnessFailed { hull_radius: f64, required: f64 },
    #[error("thickness constant must satisfy 0 < c ≤ 1, got {0}")]
    InvalidC(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("packing count {got} exceeded the volume bound {bound} (internal error)")]
    PackingBoundViolated { got: usize, bound: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Empirical,
    CertifiedSelfSimilar,
}

#[derive(Clone, Debug)]
pub enum Provenance {
    /// The (ρ_min, r₀, diam upper bound) triple behind a certified value.
    Certified { rho_min: f64, r0: f64, diam_ub: f64 },
    /// The sampled (x, r) grid behind an empirical value, with its argmin.
    Empirical {
        centers: usize,
        radii_per_decade: u32,
        r_min: f64,
        r_max: f64,
        argmin_center: Point,
        argmin_radius: f64,
    },
}

#[derive(Clone, Debug)]
pub struct ThicknessBound {
    pub value: f64,
    pub kind: BoundKind,
    pub provenance: Provenance,
    /// Set when the sample was flat (inscribed radius 0); the bound then
    /// degenerates to 0 without being an error.
    pub flat: bool,
}

#[derive(Clone, Debug)]
pub struct EstimateCfg {
    pub radii_per_decade: u32,
    pub max_centers: usize,
    pub seed: u64,
}

impl Default for EstimateCfg {
    fn default() -> Self {
        EstimateCfg { radii_per_decade: 8, max_centers: 256, seed: 0 }
    }
}

/// Empirical thickness estimate over sampled centers (inner points) and a
/// geometric radius grid from `diam` down to `max(10·eps, diam·2⁻¹²)`.
pub fn estimate_thickness(
    cover: &CylinderCover,
    cfg: &EstimateCfg,
) -> Result<ThicknessBound, ThicknessError> {
    let points = &cover.inner_points;
    let dim = points[0].dim();
    let distinct = points.iter().any(|p| p.dist(&points[0]) > TOL_GEO);
    if !distinct {
        return Err(ThicknessError::DegenerateSet);
    }
    let diam = crate::geom::diameter(points, dim)?;
    let r_max = diam;
    let r_min = (10.0 * cover.eps).max(diam * 2.0f64.powi(-12)).min(r_max);
    let ratio = 10.0f64.powf(-1.0 / cfg.radii_per_decade as f64);

    let mut centers: Vec<Point> = if points.len() <= cfg.max_centers {
        points.clone()
    } else {
        let mut s = Sampler::new(cfg.seed);
        let mut idx: Vec<usize> = (0..points.len()).collect();
        for i in 0..cfg.max_centers {
            let j = i + s.index(idx.len() - i);
            idx.swap(i, j);
        }
        idx[..cfg.max_centers].iter().map(|&i| points[i]).collect()
    };
    centers.sort_by(|a, b| a.lex_cmp(b));

    let mut radii = Vec::new();
    let mut r = r_max;
    while r >= r_min * (1.0 - 1e-12) {
        radii.push(r);
        r *= ratio;
    }
    if radii.is_empty() {
        radii.push(r_max);
    }

    let mut best = f64::INFINITY;
    let mut arg = (centers[0], radii[0]);
    let mut dists: Vec<(f64, usize)> = Vec::with_capacity(points.len());
    for x in &centers {
        dists.clear();
        dists.extend(points.iter().enumerate().map(|(i, p)| (x.dist(p), i)));
        dists.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &r in &radii {
            let take = dists.partition_point(|&(d, _)| d <= r + TOL_GEO);
            let subset: Vec<Point> = dists[..take].iter().map(|&(_, i)| points[i]).collect();
            let rho = if subset.len() < 2 {
                0.0
            } else {
                convex_hull(&subset, dim)?.chebyshev_center()?.radius
            };
            let ratio_here = rho / r;
            if ratio_here < best {
                best = ratio_here;
                arg = (*x, r);
            }
        }
    }

    Ok(ThicknessBound {
        value: best.clamp(0.0, 1.0),
        kind: BoundKind::Empirical,
        provenance: Provenance::Empirical {
            centers: centers.len(),
            radii_per_decade: cfg.radii_per_decade,
            r_min,
            r_max,
            argmin_center: arg.0,
            argmin_radius: arg.1,
        },
        flat: best <= TOL_GEO,
    })
}

/// Certified lower bound `ρ_min · r₀ / diam_ub` for a similitude system.
///
/// `r₀` is the Chebyshev radius of the hull of the inner points — inner
/// points lie in E, so any ball inscribed in their hull is inscribed in
/// conv(E) — and `diam_ub` comes from the outer ball cover, which is the
/// only side that can certify an upper bound on diam(E).
pub fn certified_self_similar_bound(
    ifs: &Ifs,
    cover: &CylinderCover,
) -> Result<ThicknessBound, ThicknessError> {
    let Some(rho_min) = ifs.rho_min() else {
        return Err(ThicknessError::NotSimilitude);
    };
    let dim = ifs.dim();
    let r0 = convex_hull(&cover.inner_points, dim)?
        .chebyshev_center()?
        .radius;
    let diam_ub = cover.diameter_upper_bound();
    let flat = r0 <= TOL_GEO || diam_ub <= TOL_GEO;
    let value = if flat { 0.0 } else { (rho_min * r0 / diam_ub).clamp(0.0, 1.0) };
    Ok(ThicknessBound {
        value,
        kind: BoundKind::CertifiedSelfSimilar,
        provenance: Provenance::Certified { rho_min, r0, diam_ub },
        flat,
    })
}

/// A packing witness at one (x, r): a maximal separated subset of the
/// sample inside B(x, r) whose hull provably contains a c·r/2-ball up to
/// the cover error.
#[derive(Clone, Debug)]
pub struct PackingWitness {
    pub center_x: Point,
    pub radius_r: f64,
    /// Selected points padded to exactly N by repeating the last one.
    pub points: Vec<Point>,
    /// Number of distinct greedy selections before padding.
    pub selection_len: usize,
    pub inscribed: InscribedBall,
}

/// The packing count bound `⌊((4+c)/c)^d⌋`.
pub fn packing_count(c: f64, dim: usize) -> usize {
    (((4.0 + c) / c).powi(dim as i32)).floor() as usize
}

/// Uniform-bucket index over a point set for repeated ball queries.
pub struct PointIndex<'a> {
    points: &'a [Point],
    cell: f64,
    lo: [f64; 3],
    dims: [usize; 3],
    buckets: Vec<Vec<u32>>,
    dim: usize,
}

impl<'a> PointIndex<'a> {
    pub fn build(points: &'a [Point], cell: f64) -> Self {
        let dim = points[0].dim();
        let (lo_p, hi_p) = crate::geom::bounding_box(points);
        let mut lo = [0.0; 3];
        let mut dims = [1usize; 3];
        for i in 0..dim {
            lo[i] = lo_p.coord(i);
            dims[i] = (((hi_p.coord(i) - lo_p.coord(i)) / cell).floor() as usize) + 1;
        }
        let mut buckets = vec![Vec::new(); dims[0] * dims[1] * dims[2]];
        for (idx, p) in points.iter().enumerate() {
            let b = Self::bucket_of(p, &lo, &dims, cell, dim);
            buckets[b].push(idx as u32);
        }
        PointIndex { points, cell, lo, dims, buckets, dim }
    }

    fn bucket_of(p: &Point, lo: &[f64; 3], dims: &[usize; 3], cell: f64, dim: usize) -> usize {
        let mut c = [0usize; 3];
        for i in 0..dim {
            let k = ((p.coord(i) - lo[i]) / cell).floor() as i64;
            c[i] = k.clamp(0, dims[i] as i64 - 1) as usize;
        }
        (c[2] * dims[1] + c[1]) * dims[0] + c[0]
    }

    /// Indices of points within `radius` (+tol) of `center`.
    pub fn query_ball(&self, center: &Point, radius: f64) -> Vec<usize> {
        let mut lo_c = [0i64; 3];
        let mut hi_c = [0i64; 3];
        for i in 0..self.dim {
            lo_c[i] = (((center.coord(i) - radius - self.lo[i]) / self.cell).floor() as i64)
                .clamp(0, self.dims[i] as i64 - 1);
            hi_c[i] = (((center.coord(i) + radius - self.lo[i]) / self.cell).floor() as i64)
                .clamp(0, self.dims[i] as i64 - 1);
        }
        let mut out = Vec::new();
        for c2 in lo_c[2]..=hi_c[2] {
            for c1 in lo_c[1]..=hi_c[1] {
                for c0 in lo_c[0]..=hi_c[0] {
                    let b = (c2 as usize * self.dims[1] + c1 as usize) * self.dims[0]
                        + c0 as usize;
                    for &idx in &self.buckets[b] {
                        if self.points[idx as usize].dist(center) <= radius + TOL_GEO {
                            out.push(idx as usize);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Greedy packing-witness extraction at center `x` and scale `r` for a
/// claimed thickness `c`; see [`extract_packing_witness_indexed`] for the
/// variant that reuses a prebuilt index across many calls.
pub fn extract_packing_witness(
    cover: &CylinderCover,
    x: &Point,
    r: f64,
    c: f64,
) -> Result<PackingWitness, ThicknessError> {
    let index = PointIndex::build(&cover.inner_points, (r / 4.0).max(cover.eps).max(1e-6));
    extract_packing_witness_indexed(cover, &index, x, r, c)
}

pub fn extract_packing_witness_indexed(
    cover: &CylinderCover,
    index: &PointIndex,
    x: &Point,
    r: f64,
    c: f64,
) -> Result<PackingWitness, ThicknessError> {
    debug_assert!(
        std::ptr::eq(index.points.as_ptr(), cover.inner_points.as_ptr()),
        "index must be built over the cover's inner points"
    );
    if c <= 0.0 || c > 1.0 {
        return Err(ThicknessError::InvalidC(c));
    }
    if r <= 0.0 {
        return Err(ThicknessError::PreconditionViolated("r must be positive".into()));
    }
    let points = &cover.inner_points;
    let dim = points[0].dim();
    if index.query_ball(x, 1e-9).is_empty() {
        return Err(ThicknessError::PreconditionViolated(
            "witness center must be one of the inner points".into(),
        ));
    }

    // Maximal subset with pairwise separation c·r/2 (disjoint open balls of
    // radius c·r/4), greedy first-fit in lexicographic order.
    let sep = c * r / 2.0;
    let mut candidates: Vec<&Point> = index
        .query_ball(x, r)
        .into_iter()
        .map(|i| &points[i])
        .collect();
    candidates.sort_by(|a, b| a.lex_cmp(b));
    let mut selected: Vec<Point> = Vec::new();
    for p in candidates {
        if selected.iter().all(|q| q.dist(p) >= sep) {
            selected.push(*p);
        }
    }
    let n_bound = packing_count(c, dim);
    if selected.len() > n_bound {
        return Err(ThicknessError::PackingBoundViolated {
            got: selected.len(),
            bound: n_bound,
        });
    }
    if selected.is_empty() {
        return Err(ThicknessError::PreconditionViolated(
            "no sample points inside the witness ball".into(),
        ));
    }

    let hull = convex_hull(&selected, dim)?;
    let inscribed = hull.chebyshev_center()?;
    let required = (c * r / 2.0 - 2.0 * cover.eps).max(0.0);
    if inscribed.radius + TOL_GEO < required {
        return Err(ThicknessError::WitnessFailed {
            hull_radius: inscribed.radius,
            required,
        });
    }

    let selection_len = selected.len();
    let mut pts = selected;
    let last = *pts.last().unwrap();
    pts.resize(n_bound.max(selection_len), last);
    Ok(PackingWitness {
        center_x: *x,
        radius_r: r,
        points: pts,
        selection_len,
        inscribed,
    })
}

/// Smallest integer n with `n > 2¹¹·c⁻³ + 1`: the sum count above which the
/// n-fold sum of thickness-c sets must have interior.
pub fn sum_threshold(c: f64) -> Result<u64, ThicknessError> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(ThicknessError::InvalidC(c));
    }
    let x = 2048.0 / (c * c * c) + 1.0;
    Ok(x.floor() as u64 + 1)
}

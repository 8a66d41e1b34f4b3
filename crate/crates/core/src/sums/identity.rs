//! The rotation-free sum identity `⊕ₙE = n·conv(F)` as a raster pipeline.

use super::{SumIdentityReport, SumsError, Verdict};
use crate::geom::{convex_hull, Polytope};
use crate::grid::{
    contains_raster, hausdorff_distance, n_fold_sum, rasterize_inner_capped,
    rasterize_polytope, BBox, RasterMode, SumOpts,
};
use crate::ifs::{expand_cover, ExpandCfg, Ifs};
use crate::TOL_GEO;

/// Smallest integer `n ≥ 1 + ℓ/ρ_min`. Ratios arrive as doubles, so values
/// within 1e−9 of an integer snap to it before the ceiling.
pub fn sum_identity_threshold(ifs: &Ifs) -> Result<u64, SumsError> {
    let Some(rho_min) = ifs.rho_min() else {
        return Err(SumsError::NotSimilitude);
    };
    let x = 1.0 + ifs.len() as f64 / rho_min;
    let snapped = x.round();
    let n = if (x - snapped).abs() <= 1e-9 { snapped } else { x.ceil() };
    Ok(n as u64)
}

/// True iff `φᵢ(p) ⊆ p` for every map — exact for affine maps, since the
/// image of a polytope is the polytope of the image vertices.
pub fn verify_invariant_region(ifs: &Ifs, p: &Polytope) -> bool {
    ifs.maps().iter().all(|m| {
        p.vertices()
            .iter()
            .all(|v| p.contains(&m.apply(*v), TOL_GEO))
    })
}

#[derive(Clone, Debug)]
pub struct IdentityCheckCfg {
    pub depth: u32,
    pub delta: f64,
    /// Run even when n is below the threshold; the report is then marked
    /// informational (the theorem is sufficient, not necessary).
    pub force: bool,
    pub sum: SumOpts,
    pub word_budget: u64,
}

impl IdentityCheckCfg {
    pub fn new(depth: u32, delta: f64) -> Self {
        IdentityCheckCfg {
            depth,
            delta,
            force: false,
            sum: SumOpts::default(),
            word_budget: ExpandCfg::default().budget,
        }
    }
}

/// Builds the depth-k inner raster of the attractor, takes its n-fold
/// Minkowski sum, rasterizes `n·conv(F)` on the same lattice, and measures
/// the two-sided Hausdorff distance plus the exact containment direction
/// `⊕ₙ(inner) ⊆ OUTER(n·conv(F))` (which must hold unconditionally since
/// `E ⊆ conv(F)` whenever the fixed-point hull is invariant).
pub fn verify_sum_identity(ifs: &Ifs, n: u64, cfg: &IdentityCheckCfg) -> Result<SumIdentityReport, SumsError> {
    let threshold = sum_identity_threshold(ifs)?;
    let informational = n < threshold;
    if informational && !cfg.force {
        return Err(SumsError::ThresholdNotMet { n, threshold });
    }
    let dim = ifs.dim();
    let delta = cfg.delta;
    let sqrt_d = (dim as f64).sqrt();

    let cover = expand_cover(
        ifs,
        cfg.depth,
        &ExpandCfg { budget: cfg.word_budget, dedup: false },
    )?;
    let bbox = BBox::of_ball(&cover.root, 4.0 * delta);
    let inner = rasterize_inner_capped(&cover.inner_points, delta, &bbox, cfg.sum.memory_cap)?;
    let sum = n_fold_sum(&inner, n, &cfg.sum)?;

    let fixed = ifs.fixed_points()?;
    let hull_f = convex_hull(&fixed, dim)?;
    let n_conv = hull_f.scale(n as f64);
    let ref_bbox = BBox::of_points(n_conv.vertices(), 4.0 * delta);
    let phase = sum.origin();
    // Sum lattice points stray at most n·δ·√d/2 from n·conv(F); the OUTER
    // margin absorbs exactly that, making the containment direction a
    // theorem rather than a heuristic.
    let outer_margin = n as f64 * delta * sqrt_d / 2.0 + TOL_GEO;
    let outer_ref = rasterize_polytope(
        &n_conv,
        delta,
        &ref_bbox,
        RasterMode::Outer,
        outer_margin,
        &phase,
        cfg.sum.memory_cap,
    )?;
    let inner_ref = rasterize_polytope(
        &n_conv,
        delta,
        &ref_bbox,
        RasterMode::Inner,
        0.0,
        &phase,
        cfg.sum.memory_cap,
    )?;

    let containment_ok = contains_raster(&outer_ref, &sum)?;
    // Degenerate fixed-point hulls (systems lying in a hyperplane) have a
    // measure-zero n·conv(F), so its center-in INNER raster can be empty;
    // the OUTER raster over-covers by at most its margin, which the
    // tolerance's n·δ·√d term already budgets for.
    let reference = if inner_ref.is_empty() { &outer_ref } else { &inner_ref };
    let d_h_measured = hausdorff_distance(&sum, reference)?;
    let tolerance =
        n as f64 * cover.eps + n as f64 * delta * sqrt_d + delta * sqrt_d;
    let verdict = if d_h_measured <= tolerance && containment_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(SumIdentityReport {
        n,
        depth: cfg.depth,
        delta,
        d_h_measured,
        tolerance,
        cover_eps: cover.eps,
        containment_ok,
        verdict,
        informational,
        threshold,
    })
}

//! Certified non-membership for the rotating counterexample system.
//!
//! The system: two homotheties of ratio 1/4 fixed at (1,0) and (0,1), plus
//! a 1/4-contraction composed with an exact clockwise quarter turn about
//! (1,0). Its attractor fills the triangle T = conv{(0,0),(1,0),(0,1)} in
//! convex hull, yet `(1/2, 0)` misses every n-fold sum: the attractor lives
//! in the upper half-plane and meets the x-axis only near {0} ∪ [3/4, 1],
//! so axis points of the sum are sums of axis points, and interval
//! arithmetic excludes 1/2. Each link of that chain is checked numerically
//! with an explicit margin.

use super::{SumsError, Verdict};
use crate::geom::{convex_hull, Point, Polytope};
use crate::ifs::{expand_cover, AffineMap, ExpandCfg, Ifs};
use crate::linalg::Mat;
use crate::TOL_GEO;

/// The rotating triangle system (exact 0/±1 rotation entries).
pub fn rotating_counterexample_ifs() -> Ifs {
    let phi1 = AffineMap::homothety(0.25, Point::p2(0.75, 0.0));
    let phi2 = AffineMap::homothety(0.25, Point::p2(0.0, 0.75));
    let phi3 = AffineMap::similitude(0.25, Mat::quarter_turns2(-1), Point::p2(0.0, 0.25));
    Ifs::new(vec![phi1, phi2, phi3]).expect("fixed system is valid")
}

/// The invariant triangle T = conv{(0,0), (1,0), (0,1)}.
pub fn invariant_triangle() -> Polytope {
    convex_hull(
        &[Point::p2(0.0, 0.0), Point::p2(1.0, 0.0), Point::p2(0.0, 1.0)],
        2,
    )
    .expect("triangle is a valid hull")
}

#[derive(Clone, Debug)]
pub struct CertificateStep {
    pub name: &'static str,
    pub margin: f64,
    pub detail: String,
}

/// A verified exclusion `(1/2, 0) ∉ ⊕ₙE` at one (n, depth). Valid only when
/// every step is present with positive margin.
#[derive(Clone, Debug)]
pub struct NonMembershipCertificate {
    pub point: Point,
    pub n: u64,
    pub depth: u32,
    /// Strip half-width used for the axis slice (the cover error).
    pub eta: f64,
    /// Inflation of the axis clusters derived from the actual outer balls
    /// meeting the strip.
    pub eta_prime: f64,
    pub steps: Vec<CertificateStep>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct CertificateCfg {
    pub word_budget: u64,
}

impl Default for CertificateCfg {
    fn default() -> Self {
        CertificateCfg { word_budget: ExpandCfg::default().budget }
    }
}

/// Builds the depth-k certificate for `(1/2, 0) ∉ ⊕ₙE`.
///
/// Fails with the offending step and its (non-positive) margin when the
/// depth is too small for the requested n — cluster inflation η′ must beat
/// 1/(4n).
pub fn certify_nonmembership(
    n: u64,
    depth: u32,
    cfg: &CertificateCfg,
) -> Result<NonMembershipCertificate, SumsError> {
    if n < 2 {
        return Err(SumsError::BadCount(n));
    }
    let ifs = rotating_counterexample_ifs();
    let triangle = invariant_triangle();
    let mut steps = Vec::with_capacity(4);

    // Step 1: φᵢ(T) ⊆ T, hence E ⊆ T. Affine images of T are spanned by
    // the image vertices, so checking those is exact.
    let mut worst_violation = 0.0f64;
    for m in ifs.maps() {
        for v in triangle.vertices() {
            let img = m.apply(*v);
            let u = triangle.span().project(&img);
            for f in triangle.facets() {
                worst_violation = worst_violation.max(f.eval(u));
            }
        }
    }
    let margin1 = TOL_GEO - worst_violation;
    steps.push(CertificateStep {
        name: "invariant-region",
        margin: margin1,
        detail: format!(
            "max facet violation of image vertices = {worst_violation:.3e} (tolerance {TOL_GEO:.1e})"
        ),
    });
    if margin1 <= 0.0 {
        return Err(SumsError::CertificateFailed {
            step: 1,
            name: "invariant-region",
            margin: margin1,
        });
    }

    // Step 2: T lies in the closed upper half-plane, so E does too.
    let min_y = triangle
        .vertices()
        .iter()
        .map(|v| v.coord(1))
        .fold(f64::INFINITY, f64::min);
    let margin2 = TOL_GEO - (-min_y).max(0.0);
    steps.push(CertificateStep {
        name: "half-plane",
        margin: margin2,
        detail: format!("min vertex y-coordinate = {min_y:.3e}"),
    });
    if margin2 <= 0.0 {
        return Err(SumsError::CertificateFailed { step: 2, name: "half-plane", margin: margin2 });
    }

    // Step 3: slice the depth-k outer cover along the x-axis. Every point
    // of E on the axis lies in an outer ball meeting the strip |y| ≤ η;
    // project those balls to x-intervals and verify they cluster around
    // {0} and [3/4, 1] with inflation η′ read off the data.
    let cover = expand_cover(&ifs, depth, &ExpandCfg { budget: cfg.word_budget, dedup: false })?;
    let eta = cover.eps;
    let split = 0.375; // midpoint separating the two admissible clusters
    let mut eta_prime = 0.0f64;
    let mut left_hi = f64::NEG_INFINITY;
    let mut right_lo = f64::INFINITY;
    let mut selected = 0usize;
    for b in &cover.outer_balls {
        if b.center.coord(1).abs() > eta + b.radius {
            continue;
        }
        selected += 1;
        let lo = b.center.coord(0) - b.radius;
        let hi = b.center.coord(0) + b.radius;
        if hi < split {
            eta_prime = eta_prime.max(lo.abs()).max(hi.abs());
            left_hi = left_hi.max(hi);
        } else if lo > split {
            eta_prime = eta_prime.max(0.75 - lo).max(hi - 1.0).max(0.0);
            right_lo = right_lo.min(lo);
        } else {
            // A ball straddling the split cannot be assigned to a cluster.
            let margin = -(hi - split).min(split - lo);
            steps.push(CertificateStep {
                name: "axis-slice",
                margin,
                detail: format!("ball [{lo:.6}, {hi:.6}] straddles the cluster split {split}"),
            });
            return Err(SumsError::CertificateFailed {
                step: 3,
                name: "axis-slice",
                margin,
            });
        }
    }
    let margin3 = if right_lo.is_finite() && left_hi.is_finite() {
        right_lo - left_hi
    } else {
        // One cluster empty still certifies a (degenerate) slice.
        split
    };
    steps.push(CertificateStep {
        name: "axis-slice",
        margin: margin3,
        detail: format!(
            "{selected} balls meet the strip |y| ≤ {eta:.3e}; clusters ⊆ [−η′, η′] ∪ [3/4−η′, 1+η′] with η′ = {eta_prime:.6e}; cluster gap = {margin3:.6}"
        ),
    });
    if margin3 <= 0.0 {
        return Err(SumsError::CertificateFailed { step: 3, name: "axis-slice", margin: margin3 });
    }

    // Step 4: interval-sumset exclusion. Axis points of ⊕ₙE are sums of n
    // values from L ∪ R with L = [−η′, η′], R = [3/4−η′, 1+η′]: all-L sums
    // stay within n·η′ of 0 and any sum with an R term is at least
    // 3/4 − n·η′. Both must exclude 1/2.
    let margin_zero = 0.5 - n as f64 * eta_prime;
    let margin_low = 0.25 - n as f64 * eta_prime;
    let margin4 = margin_zero.min(margin_low);
    steps.push(CertificateStep {
        name: "interval-sumset-exclusion",
        margin: margin4,
        detail: format!(
            "all-zero-cluster sums ≤ n·η′ = {:.6e} (margin to 1/2: {margin_zero:.6}); sums with a right-cluster term ≥ 3/4 − n·η′ (margin to 1/2: {margin_low:.6})",
            n as f64 * eta_prime
        ),
    });
    if margin4 <= 0.0 {
        return Err(SumsError::CertificateFailed {
            step: 4,
            name: "interval-sumset-exclusion",
            margin: margin4,
        });
    }

    Ok(NonMembershipCertificate {
        point: Point::p2(0.5, 0.0),
        n,
        depth,
        eta,
        eta_prime,
        steps,
        verdict: Verdict::Pass,
    })
}

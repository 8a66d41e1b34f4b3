//! Desk-scale probe of the ball-hierarchy monotonicity step behind the
//! thick-sum interior theorem.
//!
//! For each summand a three-level witness tree is extracted from the
//! sample: a root packing witness at scale r₀/2, one witness per root
//! point at scale ρ·r₀/2 (their inscribed centers are the level-1 ball
//! centers z_J), and one witness per level-2 point at scale ρ²·r₀/2
//! (giving the level-2 centers z_{Jj}), with ρ = c/4. The probe then
//! rasterizes
//!
//!   H₁ = ⊕ᵢ ⋃_J B(z_Jⁱ, ρ·c·r₀/16)   and
//!   H₂ = ⊕ᵢ ⋃_{Jj} B(z_{Jj}ⁱ, ρ²·c·r₀/16)
//!
//! on one shared lattice and checks the refinement monotonicity H₂ ⊇ H₁ by
//! explicit raster containment. Because balls of equal radius factor out of
//! a Minkowski sum (n balls of radius t sum to one ball of radius n·t), the
//! heavy n-fold sums run on the bare center clouds and a single disc kernel
//! is applied at the end. The H₂ side is inflated by the recorded lattice
//! slack so that true containment can never be reported FAIL; the verdict
//! probes the mechanism at the stated inflation, it does not prove the
//! theorem.

use super::{SumsError, Verdict};
use crate::geom::Point;
use crate::grid::{
    contains_raster, minkowski_sum, rasterize_inner_capped, BBox, Raster, RasterMode, SumOpts,
};
use crate::ifs::CylinderCover;
use crate::thickness::{extract_packing_witness_indexed, PointIndex, ThicknessError};
use crate::TOL_GEO;

#[derive(Clone, Debug)]
pub struct ProbeCfg {
    /// Lattice cell size; defaults to twice the level-2 ball radius.
    pub delta: Option<f64>,
    pub sum: SumOpts,
    /// Above this many exact tuple sums the center clouds are summed as
    /// rasters instead of point lists.
    pub exact_tuple_limit: u128,
}

impl Default for ProbeCfg {
    fn default() -> Self {
        ProbeCfg { delta: None, sum: SumOpts::default(), exact_tuple_limit: 5_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct SumProbeReport {
    pub n: u64,
    pub c: f64,
    pub rho: f64,
    pub r0: f64,
    /// Level-1 and level-2 ball radii ρ·c·r₀/16 and ρ²·c·r₀/16.
    pub rad1: f64,
    pub rad2: f64,
    pub delta: f64,
    /// Total inflation applied to the H₂ side (lattice slack closure); the
    /// verdict certifies H₁ ⊆ V_inflation(H₂) at raster resolution.
    pub inflation: f64,
    /// Witness counts per distinct input set: (level-1, level-2).
    pub witness_counts: Vec<(usize, usize)>,
    pub verdict: Verdict,
}

struct WitnessTree {
    z1: Vec<Point>,
    z2: Vec<Point>,
}

fn build_witness_tree(
    cover: &CylinderCover,
    c: f64,
    rho: f64,
    r0: f64,
) -> Result<WitnessTree, SumsError> {
    let points = &cover.inner_points;
    let bucket = (rho * rho * r0 / 2.0).max(1e-9);
    let index = PointIndex::build(points, bucket);
    let x_root = *points
        .iter()
        .min_by(|a, b| a.lex_cmp(b))
        .expect("covers are non-empty");

    let root = extract_packing_witness_indexed(cover, &index, &x_root, r0 / 2.0, c)?;
    let level1_centers = &root.points[..root.selection_len];

    let mut z1 = Vec::with_capacity(level1_centers.len());
    let mut level2_centers: Vec<Point> = Vec::new();
    for x in level1_centers {
        let w = extract_packing_witness_indexed(cover, &index, x, rho * r0 / 2.0, c)?;
        z1.push(w.inscribed.center);
        level2_centers.extend_from_slice(&w.points[..w.selection_len]);
    }
    let mut z2 = Vec::with_capacity(level2_centers.len());
    for x in &level2_centers {
        let w = extract_packing_witness_indexed(cover, &index, x, rho * rho * r0 / 2.0, c)?;
        z2.push(w.inscribed.center);
    }
    Ok(WitnessTree { z1, z2 })
}

/// Rasterizes the Minkowski sum of point clouds: exactly (all tuple sums)
/// when small enough, otherwise by dilating the per-cloud rasters.
fn sum_point_clouds(
    clouds: &[&Vec<Point>],
    delta: f64,
    cfg: &ProbeCfg,
) -> Result<Raster, SumsError> {
    let tuples: u128 = clouds.iter().map(|c| c.len() as u128).product();
    if tuples <= cfg.exact_tuple_limit {
        let dim = clouds[0][0].dim();
        let mut sums = vec![Point::origin(dim)];
        for cloud in clouds {
            let mut next = Vec::with_capacity(sums.len() * cloud.len());
            for s in &sums {
                for p in cloud.iter() {
                    next.push(s.add(p));
                }
            }
            sums = next;
        }
        let bbox = BBox::of_points(&sums, 2.0 * delta);
        Ok(rasterize_inner_capped(&sums, delta, &bbox, cfg.sum.memory_cap)?)
    } else {
        let mut acc: Option<Raster> = None;
        for cloud in clouds {
            let bbox = BBox::of_points(cloud, 2.0 * delta);
            let r = rasterize_inner_capped(cloud, delta, &bbox, cfg.sum.memory_cap)?;
            acc = Some(match acc {
                None => r,
                Some(a) => minkowski_sum(&a, &r, &cfg.sum)?,
            });
        }
        Ok(acc.expect("at least one cloud"))
    }
}

/// Disc structuring element: all lattice points within `reach + δ·√d/2` of
/// the origin, so dilation by it covers a `reach`-ball around every set
/// cell.
fn disc_kernel(delta: f64, reach: f64, dim: usize, memory_cap: u64) -> Result<Raster, SumsError> {
    let margin = delta * (dim as f64).sqrt() / 2.0;
    let m = ((reach + margin) / delta).ceil() as i64 + 1;
    let mut dims = [1usize; 3];
    let mut oc = [0.0; 3];
    for i in 0..dim {
        dims[i] = (2 * m + 1) as usize;
        oc[i] = -(m as f64) * delta;
    }
    let origin = Point::from_array(oc, dim);
    let mut r = Raster::new_empty(origin, delta, dims, RasterMode::Inner, 0.0, memory_cap)?;
    for i2 in 0..dims[2] {
        for i1 in 0..dims[1] {
            for i0 in 0..dims[0] {
                if r.lattice_point([i0, i1, i2]).norm() <= reach + margin {
                    r.set([i0, i1, i2]);
                }
            }
        }
    }
    Ok(r)
}

/// One refinement step of the thick-sum ball hierarchy, checked on rasters.
///
/// `sets` are recycled cyclically to supply n summands. Flat or too-sparse
/// samples surface as witness failures. The full interior theorem needs
/// n beyond 2¹¹·c⁻³, which is out of desk range by design; this probe
/// exercises the H₂ ⊇ H₁ step only.
pub fn ball_hierarchy_probe(
    sets: &[CylinderCover],
    c: f64,
    n: u64,
    cfg: &ProbeCfg,
) -> Result<SumProbeReport, SumsError> {
    if n < 2 {
        return Err(SumsError::BadCount(n));
    }
    if !(c > 0.0 && c <= 1.0) {
        return Err(SumsError::Thickness(ThicknessError::InvalidC(c)));
    }
    assert!(!sets.is_empty(), "need at least one input set");
    let dim = sets[0].inner_points[0].dim();
    let sqrt_d = (dim as f64).sqrt();

    let r0 = sets
        .iter()
        .map(|s| s.diameter_upper_bound())
        .fold(f64::INFINITY, f64::min);
    let rho = c / 4.0;
    let rad1 = rho * c * r0 / 16.0;
    let rad2 = rho * rad1;
    let delta = cfg.delta.unwrap_or(2.0 * rad2);

    let trees: Vec<WitnessTree> = sets
        .iter()
        .map(|s| build_witness_tree(s, c, rho, r0))
        .collect::<Result<_, _>>()?;
    let witness_counts: Vec<(usize, usize)> =
        trees.iter().map(|t| (t.z1.len(), t.z2.len())).collect();

    let z1_ops: Vec<&Vec<Point>> =
        (0..n as usize).map(|i| &trees[i % trees.len()].z1).collect();
    let z2_ops: Vec<&Vec<Point>> =
        (0..n as usize).map(|i| &trees[i % trees.len()].z2).collect();

    let c1 = sum_point_clouds(&z1_ops, delta, cfg)?;
    let c2 = sum_point_clouds(&z2_ops, delta, cfg)?;

    // H₁ side: exact ball radius; the kernel's own half-cell margin is the
    // only over-approximation, and it is absorbed by the H₂ inflation.
    let k1 = disc_kernel(delta, n as f64 * rad1, dim, cfg.sum.memory_cap)?;
    // H₂ side: close the lattice slack so that true H₂ ⊇ H₁ can never be
    // reported FAIL: R₁ lattice points sit within δ√d of H₁; the raster
    // cloud for C₂ may displace exact center sums by up to n·δ√d/2.
    let slack_closure = delta * sqrt_d + n as f64 * delta * sqrt_d / 2.0
        + delta * sqrt_d / 2.0
        + TOL_GEO;
    let k2 = disc_kernel(delta, n as f64 * rad2 + slack_closure, dim, cfg.sum.memory_cap)?;

    let r1 = minkowski_sum(&c1, &k1, &cfg.sum)?;
    let r2 = minkowski_sum(&c2, &k2, &cfg.sum)?;
    let verdict = if contains_raster(&r2, &r1)? { Verdict::Pass } else { Verdict::Fail };

    Ok(SumProbeReport {
        n,
        c,
        rho,
        r0,
        rad1,
        rad2,
        delta,
        inflation: slack_closure + delta * sqrt_d / 2.0,
        witness_counts,
        verdict,
    })
}

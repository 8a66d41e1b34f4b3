//! Hausdorff distances between rasters.
//!
//! On integrally aligned lattices (the common case by construction) both
//! directed distances come from an exact squared Euclidean distance
//! transform over the union index range. Misaligned rasters fall back to an
//! outward ring search per cell with the true Euclidean distance re-checked
//! at every candidate, so both paths are exact on cell centers.

use super::{GridError, Raster};
use crate::TOL_GEO;

const INF: f64 = 1e18;

pub fn hausdorff_distance(a: &Raster, b: &Raster) -> Result<f64, GridError> {
    if (a.delta() - b.delta()).abs() > 1e-12 * a.delta() {
        return Err(GridError::CellMismatch(format!(
            "cell sizes differ: {} vs {}",
            a.delta(),
            b.delta()
        )));
    }
    if a.is_empty() || b.is_empty() {
        return Err(GridError::EmptyRaster);
    }
    let delta = a.delta();
    // Shift mapping a-frame cell indices into b-frame: a.origin + u·δ =
    // b.origin + (u + shift)·δ.
    let mut shift = [0i64; 3];
    let mut aligned = true;
    for i in 0..a.dim() {
        let off = (a.origin().coord(i) - b.origin().coord(i)) / delta;
        let k = off.round();
        if (off - k).abs() * delta > TOL_GEO {
            aligned = false;
            break;
        }
        shift[i] = k as i64;
    }
    if aligned {
        let d1 = directed_aligned(a, b, shift);
        let neg = [-shift[0], -shift[1], -shift[2]];
        let d2 = directed_aligned(b, a, neg);
        Ok(d1.max(d2) * delta)
    } else {
        let d1 = directed_ring(a, b);
        let d2 = directed_ring(b, a);
        Ok(d1.max(d2))
    }
}

/// Directed Hausdorff in cell units: `from`'s cells live at `index + shift`
/// in `to`'s frame.
fn directed_aligned(from: &Raster, to: &Raster, shift: [i64; 3]) -> f64 {
    // Union range in to-frame covering both rasters' cells.
    let mut lo = [0i64; 3];
    let mut n = [1usize; 3];
    for i in 0..3 {
        let a_lo = shift[i];
        let a_hi = shift[i] + from.dims()[i] as i64 - 1;
        lo[i] = a_lo.min(0);
        let hi = a_hi.max(to.dims()[i] as i64 - 1);
        n[i] = (hi - lo[i] + 1) as usize;
    }
    let total = n[0] * n[1] * n[2];
    let mut field = vec![INF; total];
    let at = |c: [usize; 3]| (c[2] * n[1] + c[1]) * n[0] + c[0];
    for cell in to.set_cells() {
        let idx = [
            (cell[0] as i64 - lo[0]) as usize,
            (cell[1] as i64 - lo[1]) as usize,
            (cell[2] as i64 - lo[2]) as usize,
        ];
        field[at(idx)] = 0.0;
    }
    squared_edt(&mut field, n);
    let mut worst = 0.0f64;
    for cell in from.set_cells() {
        let idx = [
            (cell[0] as i64 + shift[0] - lo[0]) as usize,
            (cell[1] as i64 + shift[1] - lo[1]) as usize,
            (cell[2] as i64 + shift[2] - lo[2]) as usize,
        ];
        worst = worst.max(field[at(idx)]);
    }
    worst.sqrt()
}

/// In-place exact squared Euclidean distance transform (per-axis parabola
/// lower envelopes).
fn squared_edt(field: &mut [f64], n: [usize; 3]) {
    let cap = n[0].max(n[1]).max(n[2]);
    let mut f = vec![0.0f64; cap];
    let mut d = vec![0.0f64; cap];
    let mut v = vec![0usize; cap];
    let mut z = vec![0.0f64; cap + 1];

    // Axis 0.
    for i2 in 0..n[2] {
        for i1 in 0..n[1] {
            let base = (i2 * n[1] + i1) * n[0];
            f[..n[0]].copy_from_slice(&field[base..base + n[0]]);
            dt_1d(&f[..n[0]], &mut d, &mut v, &mut z);
            field[base..base + n[0]].copy_from_slice(&d[..n[0]]);
        }
    }
    // Axis 1.
    if n[1] > 1 {
        for i2 in 0..n[2] {
            for i0 in 0..n[0] {
                for i1 in 0..n[1] {
                    f[i1] = field[(i2 * n[1] + i1) * n[0] + i0];
                }
                dt_1d(&f[..n[1]], &mut d, &mut v, &mut z);
                for i1 in 0..n[1] {
                    field[(i2 * n[1] + i1) * n[0] + i0] = d[i1];
                }
            }
        }
    }
    // Axis 2.
    if n[2] > 1 {
        for i1 in 0..n[1] {
            for i0 in 0..n[0] {
                for i2 in 0..n[2] {
                    f[i2] = field[(i2 * n[1] + i1) * n[0] + i0];
                }
                dt_1d(&f[..n[2]], &mut d, &mut v, &mut z);
                for i2 in 0..n[2] {
                    field[(i2 * n[1] + i1) * n[0] + i0] = d[i2];
                }
            }
        }
    }
}

/// One-dimensional squared distance transform of sampled function `f`.
fn dt_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    if n == 1 {
        d[0] = f[0];
        return;
    }
    let mut k = 0usize;
    v[0] = 0;
    z[0] = -INF;
    z[1] = INF;
    for q in 1..n {
        if f[q] >= INF {
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64))
                / (2.0 * q as f64 - 2.0 * p as f64);
            if s <= z[k] {
                if k == 0 {
                    // Replace the only parabola.
                    v[0] = q;
                    z[0] = -INF;
                    z[1] = INF;
                    break;
                }
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = INF;
            break;
        }
    }
    let mut k2 = 0usize;
    for q in 0..n {
        while z[k2 + 1] < q as f64 {
            k2 += 1;
        }
        let p = v[k2];
        let dq = q as f64 - p as f64;
        d[q] = dq * dq + f[p];
    }
}

/// Directed distance by outward ring search with continuous lattice offsets
/// (spatial units). Exact: candidates are re-verified with true Euclidean
/// distances and rings stop only once no closer cell can exist.
fn directed_ring(from: &Raster, to: &Raster) -> f64 {
    let delta = to.delta();
    let mut worst = 0.0f64;
    for cell in from.set_cells() {
        let p = from.lattice_point(cell);
        // Continuous position in to-frame cell units.
        let mut c = [0.0f64; 3];
        for i in 0..to.dim() {
            c[i] = (p.coord(i) - to.origin().coord(i)) / delta;
        }
        let center = [c[0].round() as i64, c[1].round() as i64, c[2].round() as i64];
        let max_ring = to.dims().iter().map(|&d| d as i64).max().unwrap()
            + center.iter().map(|v| v.abs()).max().unwrap()
            + 2;
        let mut best = f64::INFINITY;
        'rings: for ring in 0..=max_ring {
            // No cell in ring ρ or beyond can be closer than (ρ−2)·δ, so a
            // found candidate below that bound is the exact minimum.
            if (ring - 2) as f64 * delta > best {
                break;
            }
            for v2 in ring_axis(center[2], ring, to.dims()[2], to.dim() >= 3) {
                for v1 in ring_axis(center[1], ring, to.dims()[1], to.dim() >= 2) {
                    for v0 in ring_axis(center[0], ring, to.dims()[0], true) {
                        let cheb = (v0 - center[0])
                            .abs()
                            .max((v1 - center[1]).abs())
                            .max((v2 - center[2]).abs());
                        if cheb != ring {
                            continue;
                        }
                        if !to.get([v0 as usize, v1 as usize, v2 as usize]) {
                            continue;
                        }
                        let q = to.lattice_point([v0 as usize, v1 as usize, v2 as usize]);
                        let d = p.dist(&q);
                        best = best.min(d);
                        if best <= worst {
                            break 'rings;
                        }
                    }
                }
            }
        }
        debug_assert!(best.is_finite(), "non-empty raster must yield a distance");
        worst = worst.max(best);
    }
    worst
}

fn ring_axis(center: i64, ring: i64, dim: usize, live: bool) -> std::ops::RangeInclusive<i64> {
    if !live {
        return 0..=0;
    }
    let lo = (center - ring).max(0);
    let hi = (center + ring).min(dim as i64 - 1);
    lo..=hi
}

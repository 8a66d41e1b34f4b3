//! Tiny dense linear algebra for d ≤ 3: matrices, linear solves, and the
//! largest singular value via Jacobi iteration on `TᵀT`.

use crate::geom::Point;

/// Row-major d×d matrix embedded in a 3×3 block; `dim` rows/columns are live.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat {
    pub m: [[f64; 3]; 3],
    pub dim: usize,
}

impl Mat {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=3).contains(&dim), "dimension must be 1, 2 or 3");
        Mat { m: [[0.0; 3]; 3], dim }
    }

    pub fn identity(dim: usize) -> Self {
        let mut a = Mat::zero(dim);
        for i in 0..dim {
            a.m[i][i] = 1.0;
        }
        a
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut a = Mat::zero(dim);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), dim, "matrix must be square");
            for (j, &v) in r.iter().enumerate() {
                a.m[i][j] = v;
            }
        }
        a
    }

    pub fn scale(dim: usize, s: f64) -> Self {
        let mut a = Mat::zero(dim);
        for i in 0..dim {
            a.m[i][i] = s;
        }
        a
    }

    /// 2-D rotation. Angles that are exact multiples of π/2 are materialized
    /// with exact 0/±1 entries so quarter-turn systems reproduce bit-for-bit.
    pub fn rotation2(angle: f64) -> Self {
        let quarter = angle / std::f64::consts::FRAC_PI_2;
        let k = quarter.round();
        if (quarter - k).abs() < 1e-12 && k.abs() < 1e15 {
            return Self::quarter_turns2(k as i64);
        }
        let (s, c) = angle.sin_cos();
        let mut a = Mat::zero(2);
        a.m[0] = [c, -s, 0.0];
        a.m[1] = [s, c, 0.0];
        a
    }

    /// Exact rotation by `k` quarter turns (counterclockwise for k > 0).
    pub fn quarter_turns2(k: i64) -> Self {
        let mut a = Mat::zero(2);
        let (c, s): (f64, f64) = match k.rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
        a.m[0] = [c, -s, 0.0];
        a.m[1] = [s, c, 0.0];
        a
    }

    /// 3-D rotation about `axis` by `angle` (Rodrigues' formula).
    pub fn rotation3(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        assert!(n > 0.0, "rotation axis must be non-zero");
        let (ux, uy, uz) = (axis[0] / n, axis[1] / n, axis[2] / n);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        let mut a = Mat::zero(3);
        a.m[0] = [c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s];
        a.m[1] = [uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s];
        a.m[2] = [uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t];
        a
    }

    pub fn apply(&self, p: Point) -> Point {
        debug_assert_eq!(self.dim, p.dim());
        let mut out = [0.0; 3];
        for i in 0..self.dim {
            let mut acc = 0.0;
            for j in 0..self.dim {
                acc += self.m[i][j] * p.coord(j);
            }
            out[i] = acc;
        }
        Point::from_array(out, self.dim)
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = Mat::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = 0.0;
                for k in 0..self.dim {
                    acc += self.m[i][k] * rhs.m[k][j];
                }
                out.m[i][j] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = self.m[j][i];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = Mat::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.m[i][j] = self.m[i][j] - rhs.m[i][j];
            }
        }
        out
    }

    /// Certified upper bound on the operator norm: √λ_max(TᵀT) rounded up.
    pub fn operator_norm_ub(&self) -> f64 {
        let g = self.transpose().mul(self);
        let lam = jacobi_eig_max(&g);
        lam.max(0.0).sqrt() + 1e-12
    }
}

/// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eig_max(a: &Mat) -> f64 {
    let d = a.dim;
    let mut m = a.m;
    for _ in 0..64 {
        let mut off = 0.0;
        let (mut p, mut q) = (0, 1.min(d - 1));
        for i in 0..d {
            for j in (i + 1)..d {
                if m[i][j].abs() > off {
                    off = m[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if off < 1e-15 || d == 1 {
            break;
        }
        let theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        let mut next = m;
        for k in 0..d {
            next[p][k] = c * m[p][k] - s * m[q][k];
            next[q][k] = s * m[p][k] + c * m[q][k];
        }
        let mid = next;
        for k in 0..d {
            next[k][p] = c * mid[k][p] - s * mid[k][q];
            next[k][q] = s * mid[k][p] + c * mid[k][q];
        }
        m = next;
    }
    (0..d).map(|i| m[i][i]).fold(f64::NEG_INFINITY, f64::max)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when the pivot collapses (numerically singular system).
pub fn solve(a: &Mat, b: Point) -> Option<Point> {
    let d = a.dim;
    let mut aug = [[0.0f64; 4]; 3];
    for i in 0..d {
        for j in 0..d {
            aug[i][j] = a.m[i][j];
        }
        aug[i][d] = b.coord(i);
    }
    for col in 0..d {
        let piv = (col..d)
            .max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))
            .unwrap();
        if aug[piv][col].abs() < 1e-14 {
            return None;
        }
        aug.swap(col, piv);
        for row in (col + 1)..d {
            let f = aug[row][col] / aug[col][col];
            for j in col..=d {
                aug[row][j] -= f * aug[col][j];
            }
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..d).rev() {
        let mut acc = aug[row][d];
        for j in (row + 1)..d {
            acc -= aug[row][j] * x[j];
        }
        x[row] = acc / aug[row][row];
    }
    Some(Point::from_array(x, d))
}

//! Dense primal simplex with Bland's rule.
//!
//! Solves `maximize c·x subject to A x ≤ b, x ≥ 0` with `b ≥ 0`, so the
//! all-slack basis is feasible and no phase-1 is needed. Problem sizes here
//! are tiny (at most 7 structural variables, a few hundred facet rows);
//! robustness beats speed.

use super::GeomError;

const PIVOT_EPS: f64 = 1e-12;
const MAX_ITERS: usize = 20_000;

pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

pub fn solve_lp(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution, GeomError> {
    let m = a.len();
    let n = c.len();
    debug_assert_eq!(b.len(), m);
    debug_assert!(b.iter().all(|&v| v >= 0.0));

    // Tableau rows: [structural | slack | rhs]; final row is the objective.
    let width = n + m + 1;
    let mut t = vec![vec![0.0f64; width]; m + 1];
    for i in 0..m {
        debug_assert_eq!(a[i].len(), n);
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _ in 0..MAX_ITERS {
        // Bland: entering variable is the smallest index with a negative
        // reduced cost.
        let Some(enter) = (0..n + m).find(|&j| t[m][j] < -PIVOT_EPS) else {
            let mut x = vec![0.0; n];
            for (i, &bj) in basis.iter().enumerate() {
                if bj < n {
                    x[bj] = t[i][width - 1];
                }
            }
            return Ok(LpSolution { x, value: t[m][width - 1] });
        };
        // Ratio test; ties go to the smallest basis index (Bland).
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > PIVOT_EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                if ratio < best - PIVOT_EPS
                    || (ratio < best + PIVOT_EPS
                        && leave.is_some_and(|l| basis[i] < basis[l]))
                {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(GeomError::Unbounded);
        };
        let piv = t[leave][enter];
        for v in &mut t[leave] {
            *v /= piv;
        }
        for i in 0..=m {
            if i == leave {
                continue;
            }
            let f = t[i][enter];
            if f != 0.0 {
                for j in 0..width {
                    t[i][j] -= f * t[leave][j];
                }
            }
        }
        basis[leave] = enter;
    }
    Err(GeomError::LpStalled)
}

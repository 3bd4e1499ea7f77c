//! Dense simplex method on a compact (Tucker) tableau.
//!
//! Solves `max cᵀx  s.t.  Ax ≤ b, x ≥ 0` with `b ≥ 0`, so the slack basis is
//! feasible from the start. Bland's rule guarantees termination on the
//! degenerate vertices that regular polygons produce.

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct LpSolution {
    pub x: Vec<f64>,
    /// Dual multipliers, one per constraint.
    pub y: Vec<f64>,
    pub value: f64,
}

impl LpSolution {
    /// `bᵀy − cᵀx`; zero at an exact optimum.
    pub fn duality_gap(&self, b: &[f64]) -> f64 {
        b.iter().zip(&self.y).map(|(bi, yi)| bi * yi).sum::<f64>() - self.value
    }
}

pub(crate) fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = b.len();
    if b.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidArgument("simplex start requires b ≥ 0".into()));
    }
    // Labels: 0..n are structural variables, n..n+m are slacks.
    let mut col_var: Vec<usize> = (0..n).collect();
    let mut row_var: Vec<usize> = (n..n + m).collect();
    let mut t: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    let mut obj = c.to_vec();
    let mut z = 0.0;
    let eps = 1e-12;

    for _ in 0..50 * (n + m) + 100 {
        // Entering column: smallest label with positive reduced cost.
        let entering = (0..n).filter(|&j| obj[j] > eps).min_by_key(|&j| col_var[j]);
        let Some(s) = entering else {
            let mut x = vec![0.0; n];
            for (i, &v) in row_var.iter().enumerate() {
                if v < n {
                    x[v] = rhs[i];
                }
            }
            let mut y = vec![0.0; m];
            for (j, &v) in col_var.iter().enumerate() {
                if v >= n {
                    y[v - n] = -obj[j];
                }
            }
            return Ok(LpSolution { x, y, value: z });
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][s] > eps {
                let ratio = rhs[i] / t[i][s];
                let better = match leave {
                    None => true,
                    Some((r, best)) => ratio < best - 1e-15 || (ratio <= best + 1e-15 && row_var[i] < row_var[r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::InvalidArgument("linear program is unbounded".into()));
        };
        let p = t[r][s];
        let pivot_row: Vec<f64> = t[r].clone();
        for j in 0..n {
            t[r][j] = if j == s { 1.0 / p } else { pivot_row[j] / p };
        }
        rhs[r] /= p;
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = t[i][s];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                t[i][j] = if j == s { -f / p } else { t[i][j] - f * pivot_row[j] / p };
            }
            rhs[i] -= f * rhs[r];
        }
        let f = obj[s];
        for j in 0..n {
            obj[j] = if j == s { -f / p } else { obj[j] - f * pivot_row[j] / p };
        }
        z += f * rhs[r];
        std::mem::swap(&mut col_var[s], &mut row_var[r]);
    }
    Err(Error::Convergence("simplex iteration cap reached".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36.
        let a = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]];
        let sol = maximize(&[3.0, 5.0], &a, &[4.0, 12.0, 18.0]).unwrap();
        assert!((sol.value - 36.0).abs() < 1e-12);
        assert!((sol.x[0] - 2.0).abs() < 1e-12 && (sol.x[1] - 6.0).abs() < 1e-12);
        assert!(sol.duality_gap(&[4.0, 12.0, 18.0]).abs() < 1e-12);
        assert!(sol.y.iter().all(|&y| y >= 0.0));
    }

    #[test]
    fn unbounded_is_reported() {
        let a = vec![vec![1.0, -1.0]];
        assert!(maximize(&[1.0, 1.0], &a, &[1.0]).is_err());
    }
}

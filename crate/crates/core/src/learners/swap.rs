//! Swap-regret reduction: one RM+ learner per arm, combined through the
//! stationary distribution of the row-stochastic matrix of their policies.

use super::regret::{RegretMatcher, RegretVariant};

/// Residual `max_j |(pQ)_j - p_j|`.
pub fn stationary_residual(p: &[f64], q: &[Vec<f64>]) -> f64 {
    let m = p.len();
    (0..m)
        .map(|j| {
            let pq: f64 = (0..m).map(|i| p[i] * q[i][j]).sum();
            (pq - p[j]).abs()
        })
        .fold(0.0, f64::max)
}

const POWER_TOL: f64 = 1e-13;
const POWER_MAX_ITERS: usize = 200_000;

/// Limit of the lazy chain `(I + Q) / 2` started from uniform. Equals the
/// unique stationary distribution when there is one, and picks a
/// deterministic one otherwise.
pub fn power_stationary(q: &[Vec<f64>]) -> Vec<f64> {
    let m = q.len();
    let mut p = vec![1.0 / m as f64; m];
    let mut next = vec![0.0; m];
    for _ in 0..POWER_MAX_ITERS {
        if stationary_residual(&p, q) <= POWER_TOL {
            break;
        }
        for j in 0..m {
            let pq: f64 = (0..m).map(|i| p[i] * q[i][j]).sum();
            next[j] = 0.5 * (p[j] + pq);
        }
        let total: f64 = next.iter().sum();
        for j in 0..m {
            p[j] = next[j] / total;
        }
    }
    p
}

/// Solves `p (Q - I) = 0`, `sum p = 1` by Gaussian elimination; `None` if
/// the system is singular (several closed classes).
#[allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]
fn direct_stationary(q: &[Vec<f64>]) -> Option<Vec<f64>> {
    let m = q.len();
    // rows: equations for column j of pQ = p, last replaced by normalization
    let mut a = vec![vec![0.0; m + 1]; m];
    for j in 0..m {
        for i in 0..m {
            a[j][i] = q[i][j] - if i == j { 1.0 } else { 0.0 };
        }
    }
    for i in 0..m {
        a[m - 1][i] = 1.0;
    }
    a[m - 1][m] = 1.0;
    for col in 0..m {
        let pivot = (col..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, pivot);
        for row in 0..m {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    for k in col..=m {
                        a[row][k] -= f * a[col][k];
                    }
                }
            }
        }
    }
    let mut p: Vec<f64> = (0..m).map(|i| (a[i][m] / a[i][i]).max(0.0)).collect();
    let total: f64 = p.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    p.iter_mut().for_each(|x| *x /= total);
    Some(p)
}

/// Stationary distribution of a row-stochastic matrix: direct solve when
/// unique, otherwise the uniform-seeded power-iteration limit.
pub fn stationary_distribution(q: &[Vec<f64>]) -> Vec<f64> {
    match direct_stationary(q) {
        Some(p) if stationary_residual(&p, q) <= 1e-12 => p,
        _ => power_stationary(q),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapRegret {
    subs: Vec<RegretMatcher>,
    rows: Vec<Vec<f64>>,
    last: Vec<f64>,
}

impl SwapRegret {
    pub fn new(arms: usize) -> Self {
        SwapRegret {
            subs: (0..arms).map(|_| RegretMatcher::new(RegretVariant::RmPlus, arms)).collect(),
            rows: vec![vec![1.0 / arms as f64; arms]; arms],
            last: vec![1.0 / arms as f64; arms],
        }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn last_policy(&self) -> &[f64] {
        &self.last
    }

    pub fn policy(&mut self) -> Vec<f64> {
        for (row, sub) in self.rows.iter_mut().zip(self.subs.iter_mut()) {
            *row = sub.policy();
        }
        self.last = stationary_distribution(&self.rows);
        debug_assert!(
            stationary_residual(&self.last, &self.rows) <= 1e-9,
            "stationary residual {}",
            stationary_residual(&self.last, &self.rows)
        );
        self.last.clone()
    }

    /// Sub-learner `i` sees the payoff vector scaled by `p[i]`.
    pub fn update(&mut self, u: &[f64]) {
        for (i, sub) in self.subs.iter_mut().enumerate() {
            let scaled: Vec<f64> = u.iter().map(|x| x * self.last[i]).collect();
            sub.update_with(&scaled, &self.rows[i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn analytic_cases() {
        let q = vec![vec![0.2, 0.3, 0.5]; 3];
        assert!(approx(&stationary_distribution(&q), &[0.2, 0.3, 0.5]));
        let cyclic = vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]];
        assert!(approx(&stationary_distribution(&cyclic), &[1.0 / 3.0; 3]));
        let identity = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!(approx(&stationary_distribution(&identity), &[1.0 / 3.0; 3]));
    }

    #[test]
    fn reducible_with_transient_state() {
        // state 2 leaks into the closed class {0, 1}
        let q = vec![vec![0.5, 0.5, 0.0], vec![0.25, 0.75, 0.0], vec![0.0, 0.5, 0.5]];
        let p = stationary_distribution(&q);
        assert!(approx(&p, &[1.0 / 3.0, 2.0 / 3.0, 0.0]), "{p:?}");
    }

    #[test]
    fn two_closed_classes_use_power_limit() {
        let q = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.5, 0.0, 0.5]];
        let p = stationary_distribution(&q);
        assert!(stationary_residual(&p, &q) <= 1e-12);
        // mass of the transient state drains evenly toward state 0
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-9 && (p[1] - 1.0 / 3.0).abs() < 1e-9, "{p:?}");
    }
}

use serde::{Deserialize, Serialize};

use super::action::{payoff, Action, ACTIONS};

/// Total mass must equal one within this tolerance.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A probability triple indexed by [`Action`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionDistribution([f64; 3]);

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum DistributionError {
    #[error("negative or non-finite probability {value} for action {action}")]
    BadMass { action: Action, value: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    BadTotal(f64),
}

impl ActionDistribution {
    pub const UNIFORM: ActionDistribution = ActionDistribution([1.0 / 3.0; 3]);

    /// Checked constructor.
    pub fn new(p: [f64; 3]) -> Result<Self, DistributionError> {
        let d = ActionDistribution(p);
        d.validate()?;
        Ok(d)
    }

    pub fn uniform() -> Self {
        Self::UNIFORM
    }

    pub fn point(a: Action) -> Self {
        let mut p = [0.0; 3];
        p[a.index()] = 1.0;
        ActionDistribution(p)
    }

    /// Normalizes non-negative weights; all-zero weights give uniform.
    pub fn from_weights(w: [f64; 3]) -> Self {
        let total: f64 = w.iter().map(|x| x.max(0.0)).sum();
        if total <= 0.0 || !total.is_finite() {
            return Self::UNIFORM;
        }
        ActionDistribution([w[0].max(0.0) / total, w[1].max(0.0) / total, w[2].max(0.0) / total])
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    pub fn validate(&self) -> Result<(), DistributionError> {
        for a in ACTIONS {
            let v = self.0[a.index()];
            if !(v >= 0.0) || !v.is_finite() {
                return Err(DistributionError::BadMass { action: a, value: v });
            }
        }
        let total: f64 = self.0.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(DistributionError::BadTotal(total));
        }
        Ok(())
    }

    #[inline]
    pub fn prob(&self, a: Action) -> f64 {
        self.0[a.index()]
    }

    pub fn probs(&self) -> [f64; 3] {
        self.0
    }

    /// Expected reward of playing `a` against this distribution.
    pub fn value_of(&self, a: Action) -> f64 {
        ACTIONS.iter().map(|&o| self.prob(o) * payoff(a, o).0 as f64).sum()
    }

    /// Expected reward of this distribution against a fixed opposing move.
    pub fn value_against(&self, o: Action) -> f64 {
        ACTIONS.iter().map(|&a| self.prob(a) * payoff(a, o).0 as f64).sum()
    }

    /// Most likely action, lowest index on ties.
    pub fn argmax(&self) -> Action {
        let mut best = Action::Rock;
        for a in ACTIONS {
            if self.prob(a) > self.prob(best) {
                best = a;
            }
        }
        best
    }

    /// Myopic best response: maximizes expected reward against this
    /// distribution, lowest index on ties.
    pub fn best_response(&self) -> Action {
        let mut best = Action::Rock;
        let mut best_v = self.value_of(best);
        for a in [Action::Paper, Action::Scissors] {
            let v = self.value_of(a);
            if v > best_v + 1e-12 {
                best = a;
                best_v = v;
            }
        }
        best
    }

    pub fn is_point_mass(&self) -> bool {
        self.0.contains(&1.0)
    }

    /// Inverse-CDF sampling from a uniform draw in `[0, 1)`. Never returns an
    /// action with zero mass.
    pub fn sample_with(&self, u: f64) -> Action {
        let mut acc = 0.0;
        let mut last = Action::Rock;
        for a in ACTIONS {
            let p = self.prob(a);
            if p <= 0.0 {
                continue;
            }
            acc += p;
            last = a;
            if u < acc {
                return a;
            }
        }
        last
    }

    /// Mixes `self` and `other` with weight `w` on `other`.
    pub fn mix(&self, other: &ActionDistribution, w: f64) -> ActionDistribution {
        let mut p = [0.0; 3];
        for (i, slot) in p.iter_mut().enumerate() {
            *slot = (1.0 - w) * self.0[i] + w * other.0[i];
        }
        ActionDistribution::from_weights(p)
    }
}

impl Default for ActionDistribution {
    fn default() -> Self {
        Self::UNIFORM
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_mass() {
        assert!(ActionDistribution::new([0.5, 0.6, -0.1]).is_err());
        assert!(ActionDistribution::new([0.5, 0.5, 0.1]).is_err());
        assert!(ActionDistribution::new([f64::NAN, 0.5, 0.5]).is_err());
        assert!(ActionDistribution::new([0.2, 0.2, 0.6]).is_ok());
    }

    #[test]
    fn best_response_to_r226() {
        let d = ActionDistribution::new([0.2, 0.2, 0.6]).unwrap();
        assert!((d.value_of(Action::Rock) - 0.4).abs() < 1e-12);
        assert!((d.value_of(Action::Paper) + 0.4).abs() < 1e-12);
        assert!(d.value_of(Action::Scissors).abs() < 1e-12);
        assert_eq!(d.best_response(), Action::Rock);
        assert_eq!(ActionDistribution::UNIFORM.best_response(), Action::Rock);
    }

    #[test]
    fn sampling_skips_zero_mass() {
        let d = ActionDistribution::new([0.0, 1.0, 0.0]).unwrap();
        for u in [0.0, 0.3, 0.999_999] {
            assert_eq!(d.sample_with(u), Action::Paper);
        }
        let d = ActionDistribution::new([0.5, 0.5, 0.0]).unwrap();
        assert_eq!(d.sample_with(0.999_999_999), Action::Paper);
    }
}

use serde::{Deserialize, Serialize};

use super::catalog::BotParams;
use crate::engine::{ActionDistribution, History, JointAction, Policy};

fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaSwitcherParams {
    pub strategies: Vec<BotParams>,
    /// Forgetting factor on the counterfactual scores.
    #[serde(default = "default_one")]
    pub decay: f64,
}

/// Runs every sub-policy in the shadow and plays the one whose
/// counterfactual score (expected reward of its suggested distribution
/// against the realized opponent move) is highest, lowest index on ties.
pub struct MetaSwitcher {
    subs: Vec<Box<dyn Policy>>,
    scores: Vec<f64>,
    current: Vec<ActionDistribution>,
    decay: f64,
}

impl MetaSwitcher {
    pub fn new(params: &MetaSwitcherParams) -> Self {
        let subs: Vec<_> = params.strategies.iter().map(BotParams::instantiate).collect();
        Self::from_policies(subs, params.decay)
    }

    pub fn from_policies(subs: Vec<Box<dyn Policy>>, decay: f64) -> Self {
        assert!(!subs.is_empty(), "meta-switcher needs at least one sub-policy");
        let n = subs.len();
        MetaSwitcher { subs, scores: vec![0.0; n], current: vec![ActionDistribution::UNIFORM; n], decay }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn leader(&self) -> usize {
        let mut best = 0;
        for (i, &s) in self.scores.iter().enumerate() {
            if s > self.scores[best] {
                best = i;
            }
        }
        best
    }
}

impl Policy for MetaSwitcher {
    fn reset(&mut self) {
        self.subs.iter_mut().for_each(|s| s.reset());
        self.scores.iter_mut().for_each(|s| *s = 0.0);
    }

    fn distribution(&mut self, history: &History) -> ActionDistribution {
        for (slot, sub) in self.current.iter_mut().zip(self.subs.iter_mut()) {
            *slot = sub.distribution(history);
        }
        self.current[self.leader()]
    }

    fn observe(&mut self, joint: JointAction, reward: i32) {
        for (i, sub) in self.subs.iter_mut().enumerate() {
            self.scores[i] = self.scores[i] * self.decay + self.current[i].value_against(joint.theirs);
            sub.observe(joint, reward);
        }
    }
}

use serde::{Deserialize, Serialize};

use super::regret::{RegretMatcher, RegretVariant};
use super::saol::Saol;
use super::swap::SwapRegret;

/// Full-information regret minimizers usable as agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegretAlgorithm {
    Rm,
    RmPlus,
    Saol,
    SwapRmPlus,
}

impl RegretAlgorithm {
    pub const ALL: [RegretAlgorithm; 4] =
        [RegretAlgorithm::Rm, RegretAlgorithm::RmPlus, RegretAlgorithm::Saol, RegretAlgorithm::SwapRmPlus];

    pub fn as_str(self) -> &'static str {
        match self {
            RegretAlgorithm::Rm => "rm",
            RegretAlgorithm::RmPlus => "rm_plus",
            RegretAlgorithm::Saol => "saol",
            RegretAlgorithm::SwapRmPlus => "swap_rm_plus",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Inner {
    Regret(RegretMatcher),
    Saol(Saol),
    Swap(SwapRegret),
}

/// One learner instance over a fixed number of arms. Besides the current
/// policy it tracks the average of the policies it has played, which is
/// what regret guarantees speak about and what a frozen agent plays.
#[derive(Debug, Clone, PartialEq)]
pub struct Learner {
    inner: Inner,
    last: Vec<f64>,
    policy_sum: Vec<f64>,
    updates: u64,
}

impl Learner {
    pub fn new(algorithm: RegretAlgorithm, arms: usize) -> Self {
        let inner = match algorithm {
            RegretAlgorithm::Rm => Inner::Regret(RegretMatcher::new(RegretVariant::Rm, arms)),
            RegretAlgorithm::RmPlus => Inner::Regret(RegretMatcher::new(RegretVariant::RmPlus, arms)),
            RegretAlgorithm::Saol => Inner::Saol(Saol::new(arms)),
            RegretAlgorithm::SwapRmPlus => Inner::Swap(SwapRegret::new(arms)),
        };
        Learner { inner, last: vec![1.0 / arms as f64; arms], policy_sum: vec![0.0; arms], updates: 0 }
    }

    pub fn policy(&mut self) -> Vec<f64> {
        self.last = match &mut self.inner {
            Inner::Regret(l) => l.policy(),
            Inner::Saol(l) => l.policy(),
            Inner::Swap(l) => l.policy(),
        };
        self.last.clone()
    }

    /// Feedback for the decision made by the latest `policy` call.
    pub fn update(&mut self, u: &[f64]) {
        match &mut self.inner {
            Inner::Regret(l) => l.update(u),
            Inner::Saol(l) => l.update(u),
            Inner::Swap(l) => l.update(u),
        }
        for (s, p) in self.policy_sum.iter_mut().zip(&self.last) {
            *s += p;
        }
        self.updates += 1;
    }

    /// Mean of the policies played so far; uniform before any update.
    pub fn average_policy(&self) -> Vec<f64> {
        let m = self.policy_sum.len();
        if self.updates == 0 {
            return vec![1.0 / m as f64; m];
        }
        self.policy_sum.iter().map(|s| s / self.updates as f64).collect()
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }
}

//! Regret matching and RM+ over an arbitrary number of arms.

use serde::{Deserialize, Serialize};

use crate::engine::{payoff, Action, ACTIONS};

/// Full-information payoff vector for one RPS step: entry `a` is what our
/// move `a` would have earned against the opponent's realized move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffVector(pub [f64; 3]);

impl PayoffVector {
    pub fn against(opp: Action) -> Self {
        PayoffVector(ACTIONS.map(|a| payoff(a, opp).0 as f64))
    }

    pub fn get(&self, a: Action) -> f64 {
        self.0[a.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Policy proportional to the positive parts of `regrets`; uniform when
/// none is positive.
pub fn rm_policy(regrets: &[f64]) -> Vec<f64> {
    let total: f64 = regrets.iter().map(|r| r.max(0.0)).sum();
    let m = regrets.len();
    if total > 0.0 && total.is_finite() {
        regrets.iter().map(|r| r.max(0.0) / total).collect()
    } else {
        vec![1.0 / m as f64; m]
    }
}

pub fn dot(p: &[f64], u: &[f64]) -> f64 {
    p.iter().zip(u).map(|(a, b)| a * b).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegretVariant {
    Rm,
    RmPlus,
}

/// Cumulative-regret learner. RM+ clips regrets at zero after every
/// update, so its state stays non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretMatcher {
    variant: RegretVariant,
    regrets: Vec<f64>,
    last_policy: Vec<f64>,
}

impl RegretMatcher {
    pub fn new(variant: RegretVariant, arms: usize) -> Self {
        assert!(arms > 0);
        RegretMatcher { variant, regrets: vec![0.0; arms], last_policy: vec![1.0 / arms as f64; arms] }
    }

    pub fn from_regrets(variant: RegretVariant, regrets: Vec<f64>) -> Self {
        let m = regrets.len();
        RegretMatcher { variant, regrets, last_policy: vec![1.0 / m as f64; m] }
    }

    pub fn variant(&self) -> RegretVariant {
        self.variant
    }

    pub fn regrets(&self) -> &[f64] {
        &self.regrets
    }

    pub fn arms(&self) -> usize {
        self.regrets.len()
    }

    pub fn policy(&mut self) -> Vec<f64> {
        self.last_policy = rm_policy(&self.regrets);
        self.last_policy.clone()
    }

    /// `regrets[a] += u[a] - <played, u>`, clipped at zero for RM+.
    pub fn update_with(&mut self, u: &[f64], played: &[f64]) {
        debug_assert_eq!(u.len(), self.regrets.len());
        let baseline = dot(played, u);
        for (r, &ua) in self.regrets.iter_mut().zip(u) {
            *r += ua - baseline;
            if self.variant == RegretVariant::RmPlus && *r < 0.0 {
                *r = 0.0;
            }
        }
    }

    /// Update against the policy most recently returned by [`Self::policy`].
    pub fn update(&mut self, u: &[f64]) {
        let played = std::mem::take(&mut self.last_policy);
        self.update_with(u, &played);
        self.last_policy = played;
    }
}

//! Strongly adaptive online learner over RM+ bases.
//!
//! Time is 1-indexed. Interval `I(k, i) = [i * 2^k, (i + 1) * 2^k - 1]`
//! with `i >= 1` hosts a fresh RM+ instance for its lifetime, so exactly
//! `floor(log2 t) + 1` intervals are active at time `t`. The played
//! distribution is the weight mixture of the active bases; each weight is
//! multiplied by `1 + eta_I * r_I`, where `r_I` is the base's payoff minus
//! the mixture's, both mapped from `[-1, 1]` to `[0, 1]`, and
//! `eta_I = min(1/2, 1/sqrt(|I|))`. Weights are kept in log space.

use super::regret::{dot, RegretMatcher, RegretVariant};

#[derive(Debug, Clone, PartialEq)]
pub struct SaolInterval {
    pub start: u64,
    pub end: u64,
    pub eta: f64,
    pub log_weight: f64,
    base: RegretMatcher,
    last_policy: Vec<f64>,
}

impl SaolInterval {
    #[allow(clippy::len_without_is_empty)] // never empty
    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Saol {
    arms: usize,
    /// Time of the next decision.
    t: u64,
    /// Time at which the active set was last brought up to date.
    refreshed: u64,
    active: Vec<SaolInterval>,
    last_mixture: Vec<f64>,
}

/// `[i * 2^k, (i + 1) * 2^k - 1]` for every `k` with `2^k <= t`.
pub fn intervals_containing(t: u64) -> Vec<(u64, u64)> {
    assert!(t >= 1);
    let mut out = Vec::new();
    let mut k = 0u32;
    while (1u64 << k) <= t {
        let len = 1u64 << k;
        let i = t / len;
        out.push((i * len, (i + 1) * len - 1));
        k += 1;
    }
    out
}

impl Saol {
    pub fn new(arms: usize) -> Self {
        Saol { arms, t: 1, refreshed: 0, active: Vec::new(), last_mixture: vec![1.0 / arms as f64; arms] }
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn active(&self) -> &[SaolInterval] {
        &self.active
    }

    /// Normalized mixture weights of the active intervals.
    pub fn weights(&self) -> Vec<f64> {
        let max = self.active.iter().map(|i| i.log_weight).fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = self.active.iter().map(|i| (i.log_weight - max).exp()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    fn refresh(&mut self) {
        let t = self.t;
        if self.refreshed == t {
            return;
        }
        self.refreshed = t;
        self.active.retain(|i| i.end >= t);
        let mut k = 0u32;
        while (1u64 << k) <= t {
            let len = 1u64 << k;
            if t.is_multiple_of(len) {
                let eta = (1.0 / (len as f64).sqrt()).min(0.5);
                self.active.push(SaolInterval {
                    start: t,
                    end: t + len - 1,
                    eta,
                    log_weight: eta.ln(),
                    base: RegretMatcher::new(RegretVariant::RmPlus, self.arms),
                    last_policy: vec![1.0 / self.arms as f64; self.arms],
                });
            }
            k += 1;
        }
    }

    pub fn policy(&mut self) -> Vec<f64> {
        self.refresh();
        let weights = self.weights();
        let mut mix = vec![0.0; self.arms];
        for (inst, w) in self.active.iter_mut().zip(weights) {
            inst.last_policy = inst.base.policy();
            for (m, p) in mix.iter_mut().zip(&inst.last_policy) {
                *m += w * p;
            }
        }
        let total: f64 = mix.iter().sum();
        mix.iter_mut().for_each(|m| *m /= total);
        self.last_mixture = mix.clone();
        mix
    }

    /// Feedback for the decision made by the latest [`Self::policy`] call.
    pub fn update(&mut self, u: &[f64]) {
        let meta = (dot(&self.last_mixture, u) + 1.0) / 2.0;
        for inst in &mut self.active {
            let own = (dot(&inst.last_policy, u) + 1.0) / 2.0;
            inst.log_weight += (1.0 + inst.eta * (own - meta)).ln();
            inst.base.update_with(u, &inst.last_policy);
        }
        self.t += 1;
    }
}

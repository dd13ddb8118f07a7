//! Tabular Q-learning over observation codes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::engine::{Action, ActionDistribution, ACTIONS};

/// Largest recall stored as a dense array (3 * 10^6 values).
pub const DENSE_RECALL_LIMIT: usize = 6;
/// Recalls from here on need an explicit opt-in.
pub const LARGE_RECALL: usize = 10;

/// Linear decay from `start` to `end` over the first `fraction` of a
/// lifetime, constant afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpsilonSchedule {
    pub start: f64,
    pub end: f64,
    pub fraction: f64,
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        EpsilonSchedule { start: 0.2, end: 0.01, fraction: 0.1 }
    }
}

impl EpsilonSchedule {
    pub fn constant(eps: f64) -> Self {
        EpsilonSchedule { start: eps, end: eps, fraction: 0.0 }
    }

    pub fn at(&self, step: u64, lifetime: u64) -> f64 {
        let horizon = self.fraction * lifetime as f64;
        if horizon <= 0.0 || step as f64 >= horizon {
            return self.end;
        }
        let x = step as f64 / horizon;
        self.start + (self.end - self.start) * x
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Store {
    Dense(Vec<[f64; 3]>),
    Sparse(HashMap<u64, [f64; 3]>),
}

/// Action values per observation code, zero-initialized.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    recall: usize,
    store: Store,
}

impl QTable {
    pub fn new(recall: usize) -> Self {
        let store = if recall <= DENSE_RECALL_LIMIT {
            Store::Dense(vec![[0.0; 3]; 10usize.pow(recall as u32)])
        } else {
            Store::Sparse(HashMap::new())
        };
        QTable { recall, store }
    }

    pub fn recall(&self) -> usize {
        self.recall
    }

    pub fn values(&self, s: u64) -> [f64; 3] {
        match &self.store {
            Store::Dense(v) => v[s as usize],
            Store::Sparse(m) => m.get(&s).copied().unwrap_or([0.0; 3]),
        }
    }

    fn values_mut(&mut self, s: u64) -> &mut [f64; 3] {
        match &mut self.store {
            Store::Dense(v) => &mut v[s as usize],
            Store::Sparse(m) => m.entry(s).or_insert([0.0; 3]),
        }
    }

    pub fn get(&self, s: u64, a: Action) -> f64 {
        self.values(s)[a.index()]
    }

    /// Greedy action, ties to the lowest index.
    pub fn greedy(&self, s: u64) -> Action {
        argmax_action(self.values(s))
    }

    pub fn max_value(&self, s: u64) -> f64 {
        let q = self.values(s);
        q[0].max(q[1]).max(q[2])
    }

    pub fn all_finite(&self) -> bool {
        match &self.store {
            Store::Dense(v) => v.iter().flatten().all(|x| x.is_finite()),
            Store::Sparse(m) => m.values().flatten().all(|x| x.is_finite()),
        }
    }

    /// `Q(s,a) += alpha * (target - Q(s,a))` with
    /// `target = r + gamma * max Q(s', .)`, or `r` when `next` is `None`.
    pub fn update(&mut self, s: u64, a: Action, r: f64, next: Option<u64>, alpha: f64, gamma: f64) {
        let target = r + next.map_or(0.0, |s2| gamma * self.max_value(s2));
        let q = &mut self.values_mut(s)[a.index()];
        *q += alpha * (target - *q);
    }
}

/// Epsilon-greedy as a distribution: `eps / 3` everywhere plus `1 - eps` on
/// the greedy action.
pub fn epsilon_greedy(greedy: Action, eps: f64) -> ActionDistribution {
    let mut p = [eps / 3.0; 3];
    p[greedy.index()] += 1.0 - eps;
    ActionDistribution::from_weights(p)
}

/// Greedy action for a value triple, ties to the lowest index.
pub fn argmax_action(q: [f64; 3]) -> Action {
    ACTIONS.into_iter().fold(Action::Rock, |best, a| if q[a.index()] > q[best.index()] { a } else { best })
}

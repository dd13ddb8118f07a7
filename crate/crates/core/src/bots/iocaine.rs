//! Iocaine-style predictor / meta-strategy bot.
//!
//! Predictors: a uniform guess, move frequencies, and suffix matching on
//! the opponent, own and joint channels for each configured window. Every
//! predictor yields a guess `m` of the opponent's next move and a guess
//! `m'` of our own; the six meta-strategies play `beat(m)`, `m`,
//! `loses_to(m)`, `beat(m')`, `m'`, `loses_to(m')`. Each (predictor,
//! meta-strategy) pair keeps a counterfactual score and the best pair is
//! played, lowest index on ties.

use serde::{Deserialize, Serialize};

use super::predict::{most_frequent, Channel, SuffixIndex};
use crate::engine::{Action, ActionDistribution, History, JointAction, Policy};

pub const META_STRATEGIES: usize = 6;

fn default_windows() -> Vec<usize> {
    vec![1, 2, 3, 5, 10, 20]
}

fn default_one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IocaineParams {
    /// Maximum suffix lengths, one history-match predictor per channel each.
    #[serde(default = "default_windows")]
    pub windows: Vec<usize>,
    /// Per-step forgetting factor on pair scores; 1 keeps a plain sum.
    #[serde(default = "default_one")]
    pub decay: f64,
}

impl Default for IocaineParams {
    fn default() -> Self {
        IocaineParams { windows: default_windows(), decay: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predictor {
    Uniform,
    Frequency,
    Match { channel: Channel, window: usize },
}

#[derive(Debug, Clone)]
pub struct IocaineBot {
    predictors: Vec<Predictor>,
    indexes: Vec<SuffixIndex>,
    own_counts: [f64; 3],
    opp_counts: [f64; 3],
    scores: Vec<[f64; META_STRATEGIES]>,
    suggestions: Vec<[Option<Action>; META_STRATEGIES]>,
    decay: f64,
}

impl IocaineBot {
    pub fn new(params: &IocaineParams) -> Self {
        let mut predictors = vec![Predictor::Uniform, Predictor::Frequency];
        for channel in Channel::ALL {
            for &window in &params.windows {
                predictors.push(Predictor::Match { channel, window });
            }
        }
        let longest = params.windows.iter().copied().max().unwrap_or(1);
        let indexes = Channel::ALL.iter().map(|&c| SuffixIndex::new(c, longest)).collect();
        let n = predictors.len();
        IocaineBot {
            predictors,
            indexes,
            own_counts: [0.0; 3],
            opp_counts: [0.0; 3],
            scores: vec![[0.0; META_STRATEGIES]; n],
            suggestions: vec![[None; META_STRATEGIES]; n],
            decay: params.decay,
        }
    }

    pub fn predictors(&self) -> &[Predictor] {
        &self.predictors
    }

    /// Highest-scoring `(predictor, meta)` pair, lowest index on ties.
    pub fn best_pair(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_score = self.scores[0][0];
        for (p, row) in self.scores.iter().enumerate() {
            for (s, &score) in row.iter().enumerate() {
                if score > best_score {
                    best = (p, s);
                    best_score = score;
                }
            }
        }
        best
    }

    pub fn score(&self, predictor: usize, meta: usize) -> f64 {
        self.scores[predictor][meta]
    }

    fn predict(&self, p: Predictor, history: &History) -> (Option<Action>, Option<Action>) {
        match p {
            Predictor::Uniform => (None, None),
            Predictor::Frequency => (most_frequent(&self.opp_counts), most_frequent(&self.own_counts)),
            Predictor::Match { channel, window } => {
                let slot = Channel::ALL.iter().position(|&c| c == channel).unwrap();
                match self.indexes[slot].lookup(window) {
                    Some((pos, _)) => (Some(history[pos].theirs), Some(history[pos].mine)),
                    None => (None, None),
                }
            }
        }
    }

    fn rotations(m: Option<Action>) -> [Option<Action>; 3] {
        match m {
            Some(m) => [Some(m.beat()), Some(m), Some(m.loses_to())],
            None => [None; 3],
        }
    }
}

impl Policy for IocaineBot {
    fn reset(&mut self) {
        self.indexes.iter_mut().for_each(SuffixIndex::reset);
        self.own_counts = [0.0; 3];
        self.opp_counts = [0.0; 3];
        self.scores.iter_mut().for_each(|s| *s = [0.0; META_STRATEGIES]);
    }

    fn distribution(&mut self, history: &History) -> ActionDistribution {
        for i in 0..self.predictors.len() {
            let (m, own) = self.predict(self.predictors[i], history);
            let [a, b, c] = Self::rotations(m);
            let [d, e, f] = Self::rotations(own);
            self.suggestions[i] = [a, b, c, d, e, f];
        }
        let (p, s) = self.best_pair();
        self.suggestions[p][s].map_or(ActionDistribution::UNIFORM, ActionDistribution::point)
    }

    fn observe(&mut self, joint: JointAction, _reward: i32) {
        for (row, sugg) in self.scores.iter_mut().zip(&self.suggestions) {
            for (score, a) in row.iter_mut().zip(sugg) {
                // a uniform suggestion earns zero in expectation
                let earned = a.map_or(0.0, |a| JointAction::new(a, joint.theirs).reward() as f64);
                *score = *score * self.decay + earned;
            }
        }
        self.own_counts[joint.mine.index()] += 1.0;
        self.opp_counts[joint.theirs.index()] += 1.0;
        self.indexes.iter_mut().for_each(|idx| idx.push(joint));
    }
}

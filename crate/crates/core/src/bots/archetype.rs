//! Parameterized predictor archetypes standing in for competition entrants
//! whose code is not available: count, Markov and history-match predictors.

use serde::{Deserialize, Serialize};

use super::predict::{most_frequent, respond_to, Channel, MarkovModel, SuffixIndex};
use crate::engine::{Action, ActionDistribution, History, JointAction, Policy};

fn default_one() -> f64 {
    1.0
}

/// Which side's move counts drive the prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountTarget {
    /// Predict the opponent's most frequent move and beat it.
    Opp,
    /// Assume the opponent counts our moves and beats our favourite; beat
    /// that.
    Own,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountPredictorParams {
    pub target: CountTarget,
    /// Per-step forgetting factor applied to counts.
    #[serde(default = "default_one")]
    pub decay: f64,
    /// Only count the last `window` steps.
    #[serde(default)]
    pub window: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CountPredictorBot {
    params: CountPredictorParams,
    counts: [f64; 3],
}

impl CountPredictorBot {
    pub fn new(params: CountPredictorParams) -> Self {
        CountPredictorBot { params, counts: [0.0; 3] }
    }

    fn pick(&self, j: JointAction) -> Action {
        match self.params.target {
            CountTarget::Opp => j.theirs,
            CountTarget::Own => j.mine,
        }
    }
}

impl Policy for CountPredictorBot {
    fn reset(&mut self) {
        self.counts = [0.0; 3];
    }

    fn distribution(&mut self, history: &History) -> ActionDistribution {
        let counts = match self.params.window {
            Some(w) => {
                let mut c = [0.0; 3];
                let steps = history.steps();
                for &j in &steps[steps.len().saturating_sub(w)..] {
                    c[self.pick(j).index()] += 1.0;
                }
                c
            }
            None => self.counts,
        };
        match (most_frequent(&counts), self.params.target) {
            (None, _) => ActionDistribution::UNIFORM,
            (Some(m), CountTarget::Opp) => ActionDistribution::point(m.beat()),
            (Some(m), CountTarget::Own) => ActionDistribution::point(m.beat().beat()),
        }
    }

    fn observe(&mut self, joint: JointAction, _reward: i32) {
        if self.params.decay < 1.0 {
            self.counts.iter_mut().for_each(|c| *c *= self.params.decay);
        }
        let a = self.pick(joint);
        self.counts[a.index()] += 1.0;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovParams {
    pub order: usize,
    #[serde(default = "default_one")]
    pub smoothing: f64,
    #[serde(default = "default_one")]
    pub decay: f64,
}

/// Best response to an order-k Markov prediction of the opponent.
#[derive(Debug, Clone)]
pub struct MarkovBot {
    model: MarkovModel,
}

impl MarkovBot {
    pub fn new(params: &MarkovParams) -> Self {
        MarkovBot { model: MarkovModel::new(params.order, params.smoothing, params.decay) }
    }
}

impl Policy for MarkovBot {
    fn reset(&mut self) {
        self.model.reset();
    }

    fn distribution(&mut self, _history: &History) -> ActionDistribution {
        respond_to(&self.model.predict())
    }

    fn observe(&mut self, joint: JointAction, _reward: i32) {
        self.model.push(joint.theirs);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryMatcherParams {
    pub channel: Channel,
    pub max_window: usize,
}

/// Beats whatever followed the longest recurring suffix; uniform when
/// nothing recurs.
#[derive(Debug, Clone)]
pub struct HistoryMatcherBot {
    channel: Channel,
    max_window: usize,
    index: SuffixIndex,
}

impl HistoryMatcherBot {
    pub fn new(params: &HistoryMatcherParams) -> Self {
        HistoryMatcherBot {
            channel: params.channel,
            max_window: params.max_window,
            index: SuffixIndex::new(params.channel, params.max_window),
        }
    }
}

impl Policy for HistoryMatcherBot {
    fn reset(&mut self) {
        self.index.reset();
    }

    fn distribution(&mut self, history: &History) -> ActionDistribution {
        let Some((pos, _)) = self.index.lookup(self.max_window) else {
            return ActionDistribution::UNIFORM;
        };
        let follower = history[pos];
        match self.channel {
            // we expect to repeat ourselves, so the opponent will beat that
            Channel::Own => ActionDistribution::point(follower.mine.beat().beat()),
            Channel::Opp | Channel::Joint => ActionDistribution::point(follower.theirs.beat()),
        }
    }

    fn observe(&mut self, joint: JointAction, _reward: i32) {
        self.index.push(joint);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::*;

    fn feed(bot: &mut dyn Policy, steps: &[JointAction]) -> History {
        let mut h = History::new();
        for &j in steps {
            bot.observe(j, j.reward());
            h.push(j);
        }
        h
    }

    #[test]
    fn count_predictor_targets() {
        let steps = [JointAction::new(Paper, Rock), JointAction::new(Paper, Rock), JointAction::new(Scissors, Paper)];
        let mut opp = CountPredictorBot::new(CountPredictorParams { target: CountTarget::Opp, decay: 1.0, window: None });
        let h = feed(&mut opp, &steps);
        assert_eq!(opp.distribution(&h), ActionDistribution::point(Paper));
        let mut own = CountPredictorBot::new(CountPredictorParams { target: CountTarget::Own, decay: 1.0, window: None });
        let h = feed(&mut own, &steps);
        // favourite own move Paper, opponent expected to play Scissors
        assert_eq!(own.distribution(&h), ActionDistribution::point(Rock));
        let mut windowed =
            CountPredictorBot::new(CountPredictorParams { target: CountTarget::Opp, decay: 1.0, window: Some(1) });
        let h = feed(&mut windowed, &steps);
        assert_eq!(windowed.distribution(&h), ActionDistribution::point(Scissors));
    }

    #[test]
    fn markov_bot_exploits_alternation() {
        let mut bot = MarkovBot::new(&MarkovParams { order: 1, smoothing: 1.0, decay: 1.0 });
        assert_eq!(bot.distribution(&History::new()), ActionDistribution::UNIFORM);
        let steps: Vec<_> = (0..6).map(|i| JointAction::new(Rock, if i % 2 == 0 { Rock } else { Paper })).collect();
        let h = feed(&mut bot, &steps);
        // last opponent move Paper, always followed by Rock
        assert_eq!(bot.distribution(&h), ActionDistribution::point(Paper));
    }

    #[test]
    fn history_matcher_channels() {
        let steps: Vec<_> =
            [Rock, Paper, Scissors, Rock, Paper].iter().map(|&o| JointAction::new(Rock, o)).collect();
        let mut bot = HistoryMatcherBot::new(&HistoryMatcherParams { channel: Channel::Opp, max_window: 4 });
        let h = feed(&mut bot, &steps);
        assert_eq!(bot.distribution(&h), ActionDistribution::point(Rock));
        bot.reset();
        assert_eq!(bot.distribution(&History::new()), ActionDistribution::UNIFORM);
    }
}

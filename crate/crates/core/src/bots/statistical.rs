//! Seed bots driven by move counts over the episode.

use serde::{Deserialize, Serialize};

use super::predict::{least_frequent, most_frequent};
use crate::engine::{Action, ActionDistribution, History, JointAction, Policy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StatisticalRule {
    /// Beat the opponent's most frequent move.
    Frequency,
    /// Play the own least-frequent move, keeping the histogram flat.
    Flat,
    /// Predict the opponent with the `Flat` rule and beat it.
    AntiFlat,
    /// Beat `last + d`, where `d` is the opponent's most common step-to-step
    /// increment over the last `window` moves.
    AntiRotation { window: usize },
}

#[derive(Debug, Clone)]
pub struct StatisticalBot {
    rule: StatisticalRule,
    own: [f64; 3],
    opp: [f64; 3],
}

impl StatisticalBot {
    pub fn new(rule: StatisticalRule) -> Self {
        StatisticalBot { rule, own: [0.0; 3], opp: [0.0; 3] }
    }

    fn rotation_guess(history: &History, window: usize) -> Option<Action> {
        let last = history.last()?.theirs;
        let opp = history.steps();
        let start = opp.len().saturating_sub(window);
        let mut deltas = [0.0; 3];
        for w in opp[start..].windows(2) {
            deltas[(3 + w[1].theirs.index() - w[0].theirs.index()) % 3] += 1.0;
        }
        let delta = most_frequent(&deltas).map_or(0, Action::index);
        Some(Action::from_index(last.index() + delta))
    }
}

impl Policy for StatisticalBot {
    fn reset(&mut self) {
        self.own = [0.0; 3];
        self.opp = [0.0; 3];
    }

    fn distribution(&mut self, history: &History) -> ActionDistribution {
        let next = match self.rule {
            StatisticalRule::Frequency => most_frequent(&self.opp).unwrap_or(Action::Rock).beat(),
            StatisticalRule::Flat => least_frequent(&self.own),
            StatisticalRule::AntiFlat => least_frequent(&self.opp).beat(),
            StatisticalRule::AntiRotation { window } => match Self::rotation_guess(history, window) {
                Some(pred) => pred.beat(),
                None => return ActionDistribution::UNIFORM,
            },
        };
        ActionDistribution::point(next)
    }

    fn observe(&mut self, joint: JointAction, _reward: i32) {
        self.own[joint.mine.index()] += 1.0;
        self.opp[joint.theirs.index()] += 1.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::*;

    #[test]
    fn freqbot_beats_most_frequent() {
        let mut bot = StatisticalBot::new(StatisticalRule::Frequency);
        let mut h = History::new();
        for (o, n) in [(Rock, 10), (Paper, 5), (Scissors, 3)] {
            for _ in 0..n {
                let j = JointAction::new(Rock, o);
                bot.observe(j, 0);
                h.push(j);
            }
        }
        assert_eq!(bot.distribution(&h), ActionDistribution::point(Paper));
    }

    #[test]
    fn flat_keeps_histogram_flat() {
        let mut bot = StatisticalBot::new(StatisticalRule::Flat);
        let mut h = History::new();
        let mut counts = [0; 3];
        for _ in 0..30 {
            let a = bot.distribution(&h).argmax();
            counts[a.index()] += 1;
            let j = JointAction::new(a, Rock);
            bot.observe(j, 0);
            h.push(j);
        }
        assert_eq!(counts, [10, 10, 10]);
    }

    #[test]
    fn antirotation_predicts_increment() {
        let mut bot = StatisticalBot::new(StatisticalRule::AntiRotation { window: 20 });
        let h: History =
            [Rock, Paper, Scissors, Rock].iter().map(|&o| JointAction::new(Rock, o)).collect::<Vec<_>>().into();
        // opponent rotates by +1, so next is Paper, beaten by Scissors
        assert_eq!(bot.distribution(&h), ActionDistribution::point(Scissors));
        assert_eq!(bot.distribution(&History::new()), ActionDistribution::UNIFORM);
    }
}

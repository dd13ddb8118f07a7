//! Bots reacting to the previous step (plus the drifting-bias archetypes).
//! All of them play uniform when there is no previous step.

use serde::{Deserialize, Serialize};

use crate::engine::{Action, ActionDistribution, History, JointAction, Policy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ReactiveRule {
    /// Beat the opponent's previous move.
    Copy,
    /// Never repeat the own previous move; uniform over the other two.
    Switch,
    /// Repeat the own previous move with `repeat_prob`, otherwise split
    /// evenly over the other two.
    Switchalot { repeat_prob: f64 },
    /// Uniform on even steps; on odd steps the own previous move shifted
    /// by `offset`.
    Foxtrot { offset: usize },
    /// One bias vector; after each step `step` is added to the move that
    /// would have beaten the opponent's move.
    Drift { step: f64 },
    /// As `Drift`, but one bias vector per previous joint action.
    AddDrift { step: f64 },
    /// Plays `(opponent's previous + shift)` with probability `bias`, the
    /// rest split evenly; `shift` advances by one after every loss.
    AddShift { bias: f64 },
}

#[derive(Debug, Clone)]
pub struct ReactiveBot {
    rule: ReactiveRule,
    bias: Vec<[f64; 3]>,
    context: usize,
    shift: usize,
}

const NO_CONTEXT: usize = 9;

impl ReactiveBot {
    pub fn new(rule: ReactiveRule) -> Self {
        let rows = match rule {
            ReactiveRule::Drift { .. } => 1,
            ReactiveRule::AddDrift { .. } => 10,
            _ => 0,
        };
        ReactiveBot { rule, bias: vec![[1.0; 3]; rows], context: NO_CONTEXT, shift: 0 }
    }

    fn spread(main: Action, p_main: f64) -> ActionDistribution {
        let rest = (1.0 - p_main) / 2.0;
        let mut p = [rest; 3];
        p[main.index()] = p_main;
        ActionDistribution::from_weights(p)
    }
}

impl Policy for ReactiveBot {
    fn reset(&mut self) {
        self.bias.iter_mut().for_each(|b| *b = [1.0; 3]);
        self.context = NO_CONTEXT;
        self.shift = 0;
    }

    fn distribution(&mut self, history: &History) -> ActionDistribution {
        let last = match history.last() {
            Some(j) => j,
            None => return ActionDistribution::UNIFORM,
        };
        match self.rule {
            ReactiveRule::Copy => ActionDistribution::point(last.theirs.beat()),
            ReactiveRule::Switch => Self::spread(last.mine, 0.0),
            ReactiveRule::Switchalot { repeat_prob } => Self::spread(last.mine, repeat_prob),
            ReactiveRule::Foxtrot { offset } => {
                if history.len().is_multiple_of(2) {
                    ActionDistribution::UNIFORM
                } else {
                    ActionDistribution::point(Action::from_index(last.mine.index() + offset))
                }
            }
            ReactiveRule::Drift { .. } => ActionDistribution::from_weights(self.bias[0]),
            ReactiveRule::AddDrift { .. } => ActionDistribution::from_weights(self.bias[self.context]),
            ReactiveRule::AddShift { bias } => {
                Self::spread(Action::from_index(last.theirs.index() + self.shift), bias)
            }
        }
    }

    fn observe(&mut self, joint: JointAction, reward: i32) {
        let winner = joint.theirs.beat().index();
        match self.rule {
            ReactiveRule::Drift { step } => self.bias[0][winner] += step,
            ReactiveRule::AddDrift { step } => self.bias[self.context][winner] += step,
            ReactiveRule::AddShift { .. }
                if reward < 0 => {
                    self.shift = (self.shift + 1) % 3;
                }
            _ => {}
        }
        self.context = joint.index();
    }
}

//! Configurable agents that sit in an episode seat.

use serde::{Deserialize, Serialize};

use super::contextual::ContextTable;
use super::experts::{combine, expert_suggestions, EXPERT_ARMS};
use super::learner::RegretAlgorithm;
use super::qlearn::{epsilon_greedy, EpsilonSchedule, QTable, LARGE_RECALL};
use super::regret::PayoffVector;
use crate::engine::{
    encode_observation, shift_observation, Action, ActionDistribution, History, JointAction, Policy,
    MAX_ENCODABLE_RECALL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentAlgorithm {
    Uniform,
    Rock,
    Paper,
    Scissors,
    Rm,
    RmPlus,
    Saol,
    SwapRmPlus,
    Qlearn,
}

impl AgentAlgorithm {
    pub fn regret(self) -> Option<RegretAlgorithm> {
        match self {
            AgentAlgorithm::Rm => Some(RegretAlgorithm::Rm),
            AgentAlgorithm::RmPlus => Some(RegretAlgorithm::RmPlus),
            AgentAlgorithm::Saol => Some(RegretAlgorithm::Saol),
            AgentAlgorithm::SwapRmPlus => Some(RegretAlgorithm::SwapRmPlus),
            _ => None,
        }
    }
}

impl From<RegretAlgorithm> for AgentAlgorithm {
    fn from(a: RegretAlgorithm) -> Self {
        match a {
            RegretAlgorithm::Rm => AgentAlgorithm::Rm,
            RegretAlgorithm::RmPlus => AgentAlgorithm::RmPlus,
            RegretAlgorithm::Saol => AgentAlgorithm::Saol,
            RegretAlgorithm::SwapRmPlus => AgentAlgorithm::SwapRmPlus,
        }
    }
}

/// How a regret learner splits its history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextMode {
    /// One learner over the three actions.
    None,
    /// One learner per observation code at the configured recall.
    Discrete,
    /// Nine arms (actions plus six history experts); one learner per
    /// observation code at `recall - 1`, so a single learner at recall 1.
    Experts,
}

/// What happens to learned state between episodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lifetime {
    /// Nothing is learned.
    Fixed,
    /// State is cleared by every reset.
    Episode,
    /// State carries over from one episode to the next.
    Persistent,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AgentError {
    #[error("recall {0} exceeds the encodable maximum {MAX_ENCODABLE_RECALL}")]
    RecallTooLarge(usize),
    #[error("recall {0} needs a table of 3*10^{0} entries; set allow_large_recall to proceed")]
    LargeRecallGuard(usize),
    #[error("experts contexts need recall >= 1")]
    ExpertsNeedRecall,
    #[error("{name} = {value} is outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("episodes and steps must be at least 1")]
    EmptyLifetime,
}

/// Agent configuration; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentConfig {
    pub algorithm: AgentAlgorithm,
    pub recall: usize,
    pub contexts: ContextMode,
    pub persist: bool,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_schedule: EpsilonSchedule,
    /// Episodes in the agent's lifetime when persistent (sets the exploration schedule length).
    pub episodes: u64,
    pub allow_large_recall: bool,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            algorithm: AgentAlgorithm::Uniform,
            recall: 1,
            contexts: ContextMode::None,
            persist: false,
            alpha: 0.02,
            gamma: 0.9,
            epsilon_schedule: EpsilonSchedule::default(),
            episodes: 100,
            allow_large_recall: false,
        }
    }
}

fn check(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<(), AgentError> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(AgentError::OutOfRange { name, value, range })
    }
}

impl AgentConfig {
    pub fn new(algorithm: AgentAlgorithm) -> Self {
        AgentConfig { algorithm, ..Default::default() }
    }

    pub fn regret(algorithm: RegretAlgorithm, contexts: ContextMode, recall: usize) -> Self {
        AgentConfig { algorithm: algorithm.into(), contexts, recall, ..Default::default() }
    }

    pub fn qlearn(recall: usize, episodes: u64) -> Self {
        AgentConfig { algorithm: AgentAlgorithm::Qlearn, recall, persist: true, episodes, ..Default::default() }
    }

    pub fn persistent(mut self, persist: bool) -> Self {
        self.persist = persist;
        self
    }

    /// Short label such as `rm_plus/discrete/R2`.
    pub fn label(&self) -> String {
        let alg = serde_json::to_value(self.algorithm).ok().and_then(|v| v.as_str().map(str::to_owned));
        let alg = alg.unwrap_or_default();
        match self.algorithm {
            AgentAlgorithm::Uniform | AgentAlgorithm::Rock | AgentAlgorithm::Paper | AgentAlgorithm::Scissors => alg,
            AgentAlgorithm::Qlearn => format!("qlearn/R{}", self.recall),
            _ => {
                let ctx = match self.contexts {
                    ContextMode::None => "none",
                    ContextMode::Discrete => "discrete",
                    ContextMode::Experts => "experts",
                };
                format!("{alg}/{ctx}/R{}", self.recall)
            }
        }
    }

    pub fn validate(&self) -> Result<(), AgentError> {
        if self.recall > MAX_ENCODABLE_RECALL {
            return Err(AgentError::RecallTooLarge(self.recall));
        }
        let tabular = self.algorithm == AgentAlgorithm::Qlearn
            || (self.algorithm.regret().is_some() && self.contexts != ContextMode::None);
        if tabular && self.recall >= LARGE_RECALL && !self.allow_large_recall {
            return Err(AgentError::LargeRecallGuard(self.recall));
        }
        if self.algorithm.regret().is_some() && self.contexts == ContextMode::Experts && self.recall == 0 {
            return Err(AgentError::ExpertsNeedRecall);
        }
        if self.algorithm == AgentAlgorithm::Qlearn {
            check("alpha", self.alpha, f64::MIN_POSITIVE, 1.0, "(0, 1]")?;
            check("gamma", self.gamma, 0.0, 1.0, "[0, 1]")?;
            let e = &self.epsilon_schedule;
            check("epsilon_schedule.start", e.start, 0.0, 1.0, "[0, 1]")?;
            check("epsilon_schedule.end", e.end, 0.0, 1.0, "[0, 1]")?;
            check("epsilon_schedule.fraction", e.fraction, 0.0, 1.0, "[0, 1]")?;
        }
        if self.episodes == 0 {
            return Err(AgentError::EmptyLifetime);
        }
        Ok(())
    }

    /// Builds the agent for episodes of `steps` steps.
    pub fn build(&self, steps: usize) -> Result<Box<dyn Agent>, AgentError> {
        self.validate()?;
        if steps == 0 {
            return Err(AgentError::EmptyLifetime);
        }
        Ok(match self.algorithm {
            AgentAlgorithm::Uniform => Box::new(FixedAgent(ActionDistribution::UNIFORM)),
            AgentAlgorithm::Rock => Box::new(FixedAgent(ActionDistribution::point(Action::Rock))),
            AgentAlgorithm::Paper => Box::new(FixedAgent(ActionDistribution::point(Action::Paper))),
            AgentAlgorithm::Scissors => Box::new(FixedAgent(ActionDistribution::point(Action::Scissors))),
            AgentAlgorithm::Qlearn => Box::new(QAgent::new(self, steps)),
            other => {
                let alg = other.regret().expect("regret algorithm");
                Box::new(RegretAgent::new(alg, self.contexts, self.recall, self.persist))
            }
        })
    }
}

/// A policy that may learn, and can be frozen for evaluation.
pub trait Agent: Policy + Sync {
    /// Turns learning on or off. A frozen agent ignores feedback and plays
    /// what it has learned: the average policy for regret learners, the
    /// greedy policy for Q-learning.
    fn set_learning(&mut self, enabled: bool);

    fn learning(&self) -> bool;

    fn lifetime(&self) -> Lifetime;

    fn box_clone(&self) -> Box<dyn Agent>;
}

impl Clone for Box<dyn Agent> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// Plays one fixed distribution forever.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedAgent(pub ActionDistribution);

impl Policy for FixedAgent {
    fn reset(&mut self) {}

    fn distribution(&mut self, _: &History) -> ActionDistribution {
        self.0
    }

    fn observe(&mut self, _: JointAction, _: i32) {}
}

impl Agent for FixedAgent {
    fn set_learning(&mut self, _: bool) {}

    fn learning(&self) -> bool {
        false
    }

    fn lifetime(&self) -> Lifetime {
        Lifetime::Fixed
    }

    fn box_clone(&self) -> Box<dyn Agent> {
        Box::new(*self)
    }
}

/// Regret minimizer with full-information feedback, optionally split by
/// context and extended with history experts.
#[derive(Debug, Clone)]
pub struct RegretAgent {
    mode: ContextMode,
    recall: usize,
    persist: bool,
    learning: bool,
    table: ContextTable,
    pending: Option<(u64, [ActionDistribution; EXPERT_ARMS])>,
}

impl RegretAgent {
    pub fn new(algorithm: RegretAlgorithm, mode: ContextMode, recall: usize, persist: bool) -> Self {
        let arms = if mode == ContextMode::Experts { EXPERT_ARMS } else { 3 };
        RegretAgent { mode, recall, persist, learning: true, table: ContextTable::new(algorithm, arms), pending: None }
    }

    pub fn table(&self) -> &ContextTable {
        &self.table
    }

    fn table_arms(&self) -> usize {
        if self.mode == ContextMode::Experts {
            EXPERT_ARMS
        } else {
            3
        }
    }

    fn context(&self, h: &History) -> u64 {
        match self.mode {
            ContextMode::None => 0,
            ContextMode::Discrete => encode_observation(h, self.recall),
            ContextMode::Experts => encode_observation(h, self.recall - 1),
        }
    }
}

impl Policy for RegretAgent {
    fn reset(&mut self) {
        if !self.persist {
            self.table.clear();
        }
        self.pending = None;
    }

    fn distribution(&mut self, h: &History) -> ActionDistribution {
        let ctx = self.context(h);
        let arms = if self.mode == ContextMode::Experts {
            expert_suggestions(h)
        } else {
            let mut arms = [ActionDistribution::UNIFORM; EXPERT_ARMS];
            for (slot, a) in arms.iter_mut().zip(crate::engine::ACTIONS) {
                *slot = ActionDistribution::point(a);
            }
            arms
        };
        let weights = if self.learning { self.table.policy(ctx) } else { self.table.average_policy(ctx) };
        self.pending = Some((ctx, arms));
        combine(&weights, &arms)
    }

    fn observe(&mut self, joint: JointAction, _: i32) {
        let Some((ctx, arms)) = self.pending.take() else { return };
        if !self.learning {
            return;
        }
        let u = PayoffVector::against(joint.theirs);
        let n = self.table_arms();
        let arm_u: Vec<f64> = arms[..n].iter().map(|d| d.probs().iter().zip(&u.0).map(|(p, x)| p * x).sum()).collect();
        self.table.update(ctx, &arm_u);
    }
}

impl Agent for RegretAgent {
    fn set_learning(&mut self, enabled: bool) {
        self.learning = enabled;
    }

    fn learning(&self) -> bool {
        self.learning
    }

    fn lifetime(&self) -> Lifetime {
        if self.persist {
            Lifetime::Persistent
        } else {
            Lifetime::Episode
        }
    }

    fn box_clone(&self) -> Box<dyn Agent> {
        Box::new(self.clone())
    }
}

/// Epsilon-greedy tabular Q-learner over observation codes. The episode's
/// last step is terminal. Exploration decays over the lifetime in steps:
/// `episodes * steps` when persistent, one episode otherwise.
#[derive(Debug, Clone)]
pub struct QAgent {
    table: QTable,
    alpha: f64,
    gamma: f64,
    schedule: EpsilonSchedule,
    persist: bool,
    learning: bool,
    horizon: usize,
    lifetime_steps: u64,
    steps_done: u64,
    step_in_episode: usize,
    pending: Option<u64>,
}

impl QAgent {
    pub fn new(cfg: &AgentConfig, steps: usize) -> Self {
        let lifetime_steps = if cfg.persist { cfg.episodes.saturating_mul(steps as u64) } else { steps as u64 };
        QAgent {
            table: QTable::new(cfg.recall),
            alpha: cfg.alpha,
            gamma: cfg.gamma,
            schedule: cfg.epsilon_schedule,
            persist: cfg.persist,
            learning: true,
            horizon: steps,
            lifetime_steps,
            steps_done: 0,
            step_in_episode: 0,
            pending: None,
        }
    }

    pub fn table(&self) -> &QTable {
        &self.table
    }

    pub fn epsilon(&self) -> f64 {
        if self.learning {
            self.schedule.at(self.steps_done, self.lifetime_steps)
        } else {
            0.0
        }
    }
}

impl Policy for QAgent {
    fn reset(&mut self) {
        if !self.persist {
            self.table = QTable::new(self.table.recall());
            self.steps_done = 0;
        }
        self.step_in_episode = 0;
        self.pending = None;
    }

    fn distribution(&mut self, h: &History) -> ActionDistribution {
        let s = encode_observation(h, self.table.recall());
        self.pending = Some(s);
        epsilon_greedy(self.table.greedy(s), self.epsilon())
    }

    fn observe(&mut self, joint: JointAction, reward: i32) {
        let Some(s) = self.pending.take() else { return };
        self.step_in_episode += 1;
        if !self.learning {
            return;
        }
        let next = if self.step_in_episode >= self.horizon {
            None
        } else {
            Some(shift_observation(s, joint, self.table.recall()))
        };
        self.table.update(s, joint.mine, reward as f64, next, self.alpha, self.gamma);
        self.steps_done += 1;
    }
}

impl Agent for QAgent {
    fn set_learning(&mut self, enabled: bool) {
        self.learning = enabled;
    }

    fn learning(&self) -> bool {
        self.learning
    }

    fn lifetime(&self) -> Lifetime {
        if self.persist {
            Lifetime::Persistent
        } else {
            Lifetime::Episode
        }
    }

    fn box_clone(&self) -> Box<dyn Agent> {
        Box::new(self.clone())
    }
}

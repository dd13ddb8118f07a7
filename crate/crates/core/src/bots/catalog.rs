use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::archetype::{
    CountPredictorBot, CountPredictorParams, CountTarget, HistoryMatcherBot, HistoryMatcherParams, MarkovBot,
    MarkovParams,
};
use super::iocaine::{IocaineBot, IocaineParams};
use super::meta::{MetaSwitcher, MetaSwitcherParams};
use super::predict::Channel;
use super::reactive::{ReactiveBot, ReactiveRule};
use super::sequence::{SequenceBot, SequenceSource};
use super::statistical::{StatisticalBot, StatisticalRule};
use crate::engine::{Action, ActionDistribution, FixedPolicy, Policy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BotFamily {
    Constant,
    FixedMix,
    Sequence,
    Reactive,
    Statistical,
    CountPredictor,
    MarkovPredictor,
    HistoryMatcher,
    MetaSwitcher,
    Iocaine,
}

impl BotFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            BotFamily::Constant => "constant",
            BotFamily::FixedMix => "fixed_mix",
            BotFamily::Sequence => "sequence",
            BotFamily::Reactive => "reactive",
            BotFamily::Statistical => "statistical",
            BotFamily::CountPredictor => "count_predictor",
            BotFamily::MarkovPredictor => "markov_predictor",
            BotFamily::HistoryMatcher => "history_matcher",
            BotFamily::MetaSwitcher => "meta_switcher",
            BotFamily::Iocaine => "iocaine",
        }
    }
}

impl fmt::Display for BotFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Family tag plus its parameter record. Serialized as
/// `{"family": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum BotParams {
    Constant { action: Action },
    FixedMix { probs: [f64; 3] },
    Sequence { source: SequenceSource },
    Reactive(ReactiveRule),
    Statistical(StatisticalRule),
    CountPredictor(CountPredictorParams),
    MarkovPredictor(MarkovParams),
    HistoryMatcher(HistoryMatcherParams),
    MetaSwitcher(MetaSwitcherParams),
    Iocaine(IocaineParams),
}

impl BotParams {
    pub fn family(&self) -> BotFamily {
        match self {
            BotParams::Constant { .. } => BotFamily::Constant,
            BotParams::FixedMix { .. } => BotFamily::FixedMix,
            BotParams::Sequence { .. } => BotFamily::Sequence,
            BotParams::Reactive(_) => BotFamily::Reactive,
            BotParams::Statistical(_) => BotFamily::Statistical,
            BotParams::CountPredictor(_) => BotFamily::CountPredictor,
            BotParams::MarkovPredictor(_) => BotFamily::MarkovPredictor,
            BotParams::HistoryMatcher(_) => BotFamily::HistoryMatcher,
            BotParams::MetaSwitcher(_) => BotFamily::MetaSwitcher,
            BotParams::Iocaine(_) => BotFamily::Iocaine,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            BotParams::FixedMix { probs } => {
                ActionDistribution::new(*probs).map(|_| ()).map_err(|e| e.to_string())
            }
            BotParams::Reactive(ReactiveRule::Switchalot { repeat_prob: p })
            | BotParams::Reactive(ReactiveRule::AddShift { bias: p }) => {
                if (0.0..=1.0).contains(p) {
                    Ok(())
                } else {
                    Err(format!("probability {p} outside [0, 1]"))
                }
            }
            BotParams::MarkovPredictor(m) => {
                if m.smoothing <= 0.0 {
                    Err("markov smoothing must be positive".into())
                } else if m.order > 12 {
                    Err("markov order above 12 is not supported".into())
                } else {
                    Ok(())
                }
            }
            BotParams::HistoryMatcher(p) if p.max_window == 0 => Err("max_window must be at least 1".into()),
            BotParams::MetaSwitcher(m) => {
                if m.strategies.is_empty() {
                    return Err("meta-switcher needs at least one strategy".into());
                }
                m.strategies.iter().try_for_each(BotParams::validate)
            }
            BotParams::Iocaine(p) if p.windows.is_empty() => Err("iocaine needs at least one window".into()),
            _ => Ok(()),
        }
    }

    /// Fresh bot with no shared state.
    pub fn instantiate(&self) -> Box<dyn Policy> {
        match self {
            BotParams::Constant { action } => Box::new(FixedPolicy::always(*action)),
            BotParams::FixedMix { probs } => Box::new(FixedPolicy(ActionDistribution::from_weights(*probs))),
            BotParams::Sequence { source } => Box::new(SequenceBot::new(*source)),
            BotParams::Reactive(rule) => Box::new(ReactiveBot::new(rule.clone())),
            BotParams::Statistical(rule) => Box::new(StatisticalBot::new(rule.clone())),
            BotParams::CountPredictor(p) => Box::new(CountPredictorBot::new(p.clone())),
            BotParams::MarkovPredictor(p) => Box::new(MarkovBot::new(p)),
            BotParams::HistoryMatcher(p) => Box::new(HistoryMatcherBot::new(p)),
            BotParams::MetaSwitcher(p) => Box::new(MetaSwitcher::new(p)),
            BotParams::Iocaine(p) => Box::new(IocaineBot::new(p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BotSpec {
    pub id: u64,
    pub name: String,
    #[serde(flatten)]
    pub params: BotParams,
}

impl BotSpec {
    pub fn new(id: u64, name: impl Into<String>, params: BotParams) -> Self {
        BotSpec { id, name: name.into(), params }
    }

    pub fn family(&self) -> BotFamily {
        self.params.family()
    }

    pub fn instantiate(&self) -> Box<dyn Policy> {
        self.params.instantiate()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog is empty")]
    Empty,
    #[error("duplicate bot id {0}")]
    DuplicateId(u64),
    #[error("duplicate bot name {0:?}")]
    DuplicateName(String),
    #[error("bot {name:?}: {reason}")]
    InvalidParams { name: String, reason: String },
    #[error("catalog parse error: {0}")]
    Parse(String),
    #[error("unknown bot {0:?}")]
    UnknownBot(String),
}

/// A validated set of bots. Cheap to share across threads; every
/// instantiation is independent.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    specs: Vec<BotSpec>,
}

impl Population {
    pub fn new(specs: Vec<BotSpec>) -> Result<Self, CatalogError> {
        if specs.is_empty() {
            return Err(CatalogError::Empty);
        }
        let mut ids = HashSet::new();
        let mut names = HashSet::new();
        for s in &specs {
            if !ids.insert(s.id) {
                return Err(CatalogError::DuplicateId(s.id));
            }
            if !names.insert(s.name.as_str()) {
                return Err(CatalogError::DuplicateName(s.name.clone()));
            }
            s.params
                .validate()
                .map_err(|reason| CatalogError::InvalidParams { name: s.name.clone(), reason })?;
        }
        Ok(Population { specs })
    }

    /// The built-in 43-bot population.
    pub fn builtin() -> Self {
        Population::new(default_catalog()).expect("built-in catalog is valid")
    }

    /// Parses a JSON catalog: either a list of bot records or
    /// `{"bots": [...]}`.
    pub fn from_json(text: &str) -> Result<Self, CatalogError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Doc {
            List(Vec<BotSpec>),
            Wrapped { bots: Vec<BotSpec> },
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        match doc {
            Doc::List(specs) | Doc::Wrapped { bots: specs } => Population::new(specs),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.specs).expect("catalog serializes")
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn specs(&self) -> &[BotSpec] {
        &self.specs
    }

    pub fn get(&self, slot: usize) -> &BotSpec {
        &self.specs[slot]
    }

    pub fn names(&self) -> Vec<&str> {
        self.specs.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn slot_of(&self, name: &str) -> Option<usize> {
        self.specs.iter().position(|s| s.name == name)
    }

    pub fn by_name(&self, name: &str) -> Result<&BotSpec, CatalogError> {
        self.slot_of(name).map(|i| &self.specs[i]).ok_or_else(|| CatalogError::UnknownBot(name.to_string()))
    }

    pub fn instantiate(&self, slot: usize) -> Box<dyn Policy> {
        self.specs[slot].instantiate()
    }

    /// Sub-population of the given slots, in the given order.
    pub fn subset(&self, slots: &[usize]) -> Result<Population, CatalogError> {
        Population::new(slots.iter().map(|&i| self.specs[i].clone()).collect())
    }
}

fn markov(order: usize, decay: f64) -> BotParams {
    BotParams::MarkovPredictor(MarkovParams { order, smoothing: 1.0, decay })
}

fn counts(target: CountTarget, decay: f64, window: Option<usize>) -> BotParams {
    BotParams::CountPredictor(CountPredictorParams { target, decay, window })
}

fn matcher(channel: Channel, max_window: usize) -> BotParams {
    BotParams::HistoryMatcher(HistoryMatcherParams { channel, max_window })
}

fn switcher(strategies: Vec<BotParams>, decay: f64) -> BotParams {
    BotParams::MetaSwitcher(MetaSwitcherParams { strategies, decay })
}

fn mix(p: [f64; 3]) -> BotParams {
    BotParams::FixedMix { probs: p }
}

fn seq(source: SequenceSource) -> BotParams {
    BotParams::Sequence { source }
}

/// The 43 bots, ids 0..=42 in published ranking order.
///
/// Seed bots follow their published descriptions. Entrants whose source is
/// not reproduced here are archetypes:
///
/// | slot | archetype |
/// |------|-----------|
/// | greenberg | iocaine, twelve match windows up to 24 |
/// | iocainebot | iocaine, windows 1, 2, 3, 5, 10, 20 |
/// | biopic | switcher over Markov 1/2 and opp/joint matchers |
/// | boom | switcher over decayed counts, Markov 1, joint matcher, uniform |
/// | shofar | switcher led by uniform, plus Markov 1/2 and counts |
/// | robertot | opponent counts, decay 0.95 |
/// | phasenbott | switcher over opp/own/joint matchers and Markov 2 |
/// | mod1bot | own counts (models the opponent as a count predictor) |
/// | sweetrock / piedra / predbot | opponent counts, windows 50 / 100 / all |
/// | markovbails, markov5, halbot, russrocker4 | Markov orders 2, 5, 3, 4 |
/// | sunNervebot | Markov order 1, decay 0.95 |
/// | actr_lag2_decay | Markov order 2, decay 0.85 |
/// | mixed_strategy | switcher over copy, counts, Markov 1 |
/// | marble / granite | joint matcher, windows 5 / 6 |
/// | zq_move | opponent matcher, window 8 |
/// | inocencio | own matcher, window 4 |
/// | multibot | switcher over the three constants and rotation |
/// | sunCrazybot | switcher over three biased mixes, decay 0.9 |
/// | peterbot | switcher over copy, frequency and rotation |
pub fn default_catalog() -> Vec<BotSpec> {
    use Action::*;
    use Channel::*;
    let entries: Vec<(&str, BotParams)> = vec![
        (
            "greenberg",
            BotParams::Iocaine(IocaineParams { windows: vec![1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24], decay: 1.0 }),
        ),
        ("iocainebot", BotParams::Iocaine(IocaineParams::default())),
        ("biopic", switcher(vec![markov(1, 1.0), markov(2, 1.0), matcher(Opp, 8), matcher(Joint, 8)], 1.0)),
        (
            "boom",
            switcher(vec![counts(CountTarget::Opp, 0.9, None), markov(1, 1.0), matcher(Joint, 6), mix([1.0 / 3.0; 3])], 0.98),
        ),
        ("shofar", switcher(vec![mix([1.0 / 3.0; 3]), markov(1, 1.0), markov(2, 1.0), counts(CountTarget::Opp, 1.0, None)], 0.95)),
        ("robertot", counts(CountTarget::Opp, 0.95, None)),
        ("phasenbott", switcher(vec![matcher(Opp, 5), matcher(Own, 5), matcher(Joint, 5), markov(2, 1.0)], 1.0)),
        ("mod1bot", counts(CountTarget::Own, 1.0, None)),
        ("sweetrock", counts(CountTarget::Opp, 1.0, Some(50))),
        ("piedra", counts(CountTarget::Opp, 1.0, Some(100))),
        ("markovbails", markov(2, 1.0)),
        ("sunNervebot", markov(1, 0.95)),
        ("markov5", markov(5, 1.0)),
        ("antirotnbot", BotParams::Statistical(StatisticalRule::AntiRotation { window: 20 })),
        ("halbot", markov(3, 1.0)),
        (
            "mixed_strategy",
            switcher(vec![BotParams::Reactive(ReactiveRule::Copy), counts(CountTarget::Opp, 1.0, None), markov(1, 1.0)], 1.0),
        ),
        ("randbot", mix([1.0 / 3.0; 3])),
        ("pibot", seq(SequenceSource::PiDigits)),
        ("actr_lag2_decay", markov(2, 0.85)),
        ("marble", matcher(Joint, 5)),
        ("granite", matcher(Joint, 6)),
        ("predbot", counts(CountTarget::Opp, 1.0, None)),
        ("zq_move", matcher(Opp, 8)),
        (
            "multibot",
            switcher(
                vec![
                    BotParams::Constant { action: Rock },
                    BotParams::Constant { action: Paper },
                    BotParams::Constant { action: Scissors },
                    seq(SequenceSource::Rotate),
                ],
                1.0,
            ),
        ),
        ("textbot", seq(SequenceSource::Text)),
        ("debruijn81", seq(SequenceSource::DeBruijn81)),
        ("driftbot", BotParams::Reactive(ReactiveRule::Drift { step: 0.01 })),
        ("adddriftbot2", BotParams::Reactive(ReactiveRule::AddDrift { step: 0.01 })),
        ("russrocker4", markov(4, 1.0)),
        ("switchalot", BotParams::Reactive(ReactiveRule::Switchalot { repeat_prob: 0.12 })),
        ("addshiftbot3", BotParams::Reactive(ReactiveRule::AddShift { bias: 0.7 })),
        ("foxtrotbot", BotParams::Reactive(ReactiveRule::Foxtrot { offset: 1 })),
        ("flatbot3", BotParams::Statistical(StatisticalRule::Flat)),
        ("inocencio", matcher(Own, 4)),
        ("r226bot", mix([0.2, 0.2, 0.6])),
        ("sunCrazybot", switcher(vec![mix([0.5, 0.25, 0.25]), mix([0.25, 0.5, 0.25]), mix([0.25, 0.25, 0.5])], 0.9)),
        ("switchbot", BotParams::Reactive(ReactiveRule::Switch)),
        (
            "peterbot",
            switcher(
                vec![
                    BotParams::Reactive(ReactiveRule::Copy),
                    BotParams::Statistical(StatisticalRule::Frequency),
                    seq(SequenceSource::Rotate),
                ],
                1.0,
            ),
        ),
        ("freqbot2", BotParams::Statistical(StatisticalRule::Frequency)),
        ("copybot", BotParams::Reactive(ReactiveRule::Copy)),
        ("rotatebot", seq(SequenceSource::Rotate)),
        ("rockbot", BotParams::Constant { action: Rock }),
        ("antiflatbot", BotParams::Statistical(StatisticalRule::AntiFlat)),
    ];
    entries.into_iter().enumerate().map(|(i, (name, params))| BotSpec::new(i as u64, name, params)).collect()
}

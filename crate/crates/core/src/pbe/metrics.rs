//! Population return, within-population exploitability and the
//! aggregate score, all from one set of agent-vs-bot episodes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{in_pool, PbeError};
use crate::bots::Population;
use crate::engine::{derive_episode_seed, play_episode, EpisodeConfig, EpisodeError};
use crate::learners::{Agent, Lifetime};

/// Seed-derivation row for agent-vs-bot evaluation episodes.
pub const AGENT_ROW: u64 = u64::MAX - 3;

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let stderr = if xs.len() > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Estimate { mean, stderr }
    }
}

/// The agent's returns against one bot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BotOutcome {
    pub bot_id: u64,
    pub bot_name: String,
    /// Agent's per-episode returns, in episode order.
    pub returns: Vec<i64>,
}

impl BotOutcome {
    /// Agent's mean return against this bot.
    pub fn agent_return(&self) -> Estimate {
        let xs: Vec<f64> = self.returns.iter().map(|&r| r as f64).collect();
        Estimate::from_samples(&xs)
    }
}

/// Outcomes of one evaluation run, one entry per bot in population order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRun {
    pub episodes_per_bot: u64,
    pub outcomes: Vec<BotOutcome>,
}

impl EvalRun {
    /// Mean over bots of the agent's mean return, bots weighted equally.
    pub fn population_return(&self) -> Estimate {
        let n = self.outcomes.len() as f64;
        let per_bot: Vec<Estimate> = self.outcomes.iter().map(BotOutcome::agent_return).collect();
        let mean = per_bot.iter().map(|e| e.mean).sum::<f64>() / n;
        let stderr = per_bot.iter().map(|e| e.stderr.powi(2)).sum::<f64>().sqrt() / n;
        Estimate { mean, stderr }
    }

    /// Largest mean return any bot achieved against the agent, with that
    /// bot's index in the run. Ties go to the earlier bot.
    pub fn within_pop_expl(&self) -> (Estimate, usize) {
        let mut best: Option<(Estimate, usize)> = None;
        for (i, o) in self.outcomes.iter().enumerate() {
            let e = o.agent_return();
            let bot = Estimate { mean: -e.mean, stderr: e.stderr };
            if best.is_none_or(|(b, _)| bot.mean > b.mean) {
                best = Some((bot, i));
            }
        }
        best.expect("evaluation runs are never empty")
    }

    /// Restriction to the bots at `slots`.
    pub fn select(&self, slots: &[usize]) -> EvalRun {
        EvalRun { episodes_per_bot: self.episodes_per_bot, outcomes: slots.iter().map(|&i| self.outcomes[i].clone()).collect() }
    }

    pub fn record(&self, name: impl Into<String>) -> MetricsRecord {
        let pr = self.population_return();
        let (wpe, slot) = self.within_pop_expl();
        MetricsRecord::new(name, pr, wpe, Some(self.outcomes[slot].bot_name.clone()), self.episodes_per_bot)
    }
}

pub fn aggregate_score(pop_return: f64, wp_expl: f64) -> f64 {
    pop_return - wp_expl
}

/// One row of a metrics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub name: String,
    pub pop_return: f64,
    pub pop_return_se: f64,
    pub wp_expl: f64,
    pub wp_expl_se: f64,
    /// Bot that achieved `wp_expl`.
    pub wp_expl_bot: Option<String>,
    pub learned_expl: Option<f64>,
    pub agg_score: f64,
    pub agg_score_se: f64,
    pub episodes_per_bot: u64,
}

impl MetricsRecord {
    pub fn new(
        name: impl Into<String>,
        pop_return: Estimate,
        wp_expl: Estimate,
        wp_expl_bot: Option<String>,
        episodes_per_bot: u64,
    ) -> Self {
        MetricsRecord {
            name: name.into(),
            pop_return: pop_return.mean,
            pop_return_se: pop_return.stderr,
            wp_expl: wp_expl.mean,
            wp_expl_se: wp_expl.stderr,
            wp_expl_bot,
            learned_expl: None,
            agg_score: aggregate_score(pop_return.mean, wp_expl.mean),
            agg_score_se: (pop_return.stderr.powi(2) + wp_expl.stderr.powi(2)).sqrt(),
            episodes_per_bot,
        }
    }
}

/// Plays `agent` against every bot for `episodes_per_bot` episodes,
/// seeding episode `e` against bot `b` with
/// `derive_episode_seed(seed, AGENT_ROW, b.id, e)`.
///
/// A persistent agent that is still learning keeps learning across its
/// episodes against each bot, starting from the given state for every bot.
/// Any other agent starts every episode from the given state, so episodes
/// are independent. `workers = 0` uses the global thread pool; results do
/// not depend on it.
pub fn evaluate_agent(
    agent: &dyn Agent,
    pop: &Population,
    episodes_per_bot: u64,
    cfg: &EpisodeConfig,
    seed: u64,
    workers: usize,
) -> Result<EvalRun, PbeError> {
    let carry = agent.lifetime() == Lifetime::Persistent && agent.learning();
    evaluate_agent_mode(agent, pop, episodes_per_bot, cfg, seed, workers, carry)
}

/// [`evaluate_agent`] with the carry-over choice made explicitly: with
/// `carry == false` every episode starts from the given agent state, even
/// for a persistent learner.
pub fn evaluate_agent_mode(
    agent: &dyn Agent,
    pop: &Population,
    episodes_per_bot: u64,
    cfg: &EpisodeConfig,
    seed: u64,
    workers: usize,
    carry: bool,
) -> Result<EvalRun, PbeError> {
    if episodes_per_bot == 0 {
        return Err(PbeError::NoEpisodes);
    }
    let bots = pop.specs();
    let outcomes = in_pool(workers, || -> Result<Vec<BotOutcome>, EpisodeError> {
        if carry {
            bots.par_iter()
                .map(|bot| {
                    let mut a = agent.box_clone();
                    let mut b = bot.instantiate();
                    let returns = (0..episodes_per_bot)
                        .map(|e| {
                            let s = derive_episode_seed(seed, AGENT_ROW, bot.id, e);
                            play_episode(&mut a, &mut b, cfg, s).map(|r| r.return0)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(BotOutcome { bot_id: bot.id, bot_name: bot.name.clone(), returns })
                })
                .collect()
        } else {
            let n = episodes_per_bot as usize;
            let flat = (0..bots.len() * n)
                .into_par_iter()
                .map(|cell| {
                    let bot = &bots[cell / n];
                    let e = (cell % n) as u64;
                    let mut a = agent.box_clone();
                    let mut b = bot.instantiate();
                    let s = derive_episode_seed(seed, AGENT_ROW, bot.id, e);
                    play_episode(&mut a, &mut b, cfg, s).map(|r| r.return0)
                })
                .collect::<Result<Vec<i64>, _>>()?;
            Ok(bots
                .iter()
                .zip(flat.chunks(n))
                .map(|(bot, rs)| BotOutcome { bot_id: bot.id, bot_name: bot.name.clone(), returns: rs.to_vec() })
                .collect())
        }
    })??;
    Ok(EvalRun { episodes_per_bot, outcomes })
}

/// Population return alone; see [`evaluate_agent`].
pub fn population_return(
    agent: &dyn Agent,
    pop: &Population,
    episodes_per_bot: u64,
    cfg: &EpisodeConfig,
    seed: u64,
) -> Result<Estimate, PbeError> {
    Ok(evaluate_agent(agent, pop, episodes_per_bot, cfg, seed, 0)?.population_return())
}

/// Within-population exploitability and the id of the bot achieving it.
pub fn within_pop_expl(
    agent: &dyn Agent,
    pop: &Population,
    episodes_per_bot: u64,
    cfg: &EpisodeConfig,
    seed: u64,
) -> Result<(Estimate, u64), PbeError> {
    let run = evaluate_agent(agent, pop, episodes_per_bot, cfg, seed, 0)?;
    let (e, slot) = run.within_pop_expl();
    Ok((e, run.outcomes[slot].bot_id))
}

//! Best-response exploiters: the omniscient per-step oracle and trained
//! Q-learning exploiters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::agent::{AgentConfig, AgentError};
use super::qlearn::EpsilonSchedule;
use crate::bots::BotSpec;
use crate::engine::{
    derive_episode_seed, play_episode, play_exploit_episode, Action, ActionDistribution, EpisodeConfig, EpisodeError,
};

/// Seed-derivation rows reserved for exploiter runs, far from bot slots.
pub const ORACLE_ROW: u64 = u64::MAX - 1;
const TRAIN_ROW_BASE: u64 = u64::MAX - 1_000;
const EVAL_ROW_BASE: u64 = u64::MAX - 2_000;

/// Best response to the opponent's current-step distribution, ties to the
/// lowest index.
pub fn omniscient_exploit_step(opponent: &ActionDistribution) -> Action {
    opponent.best_response()
}

/// Mean return of the omniscient oracle over `episodes` episodes. Exact
/// for opponents that ignore our moves, a lower bound otherwise.
pub fn omniscient_exploitability(
    bot: &BotSpec,
    cfg: &EpisodeConfig,
    episodes: u64,
    seed: u64,
) -> Result<f64, EpisodeError> {
    if episodes == 0 {
        return Err(EpisodeError::EmptyEpisode);
    }
    let mut policy = bot.instantiate();
    let mut total = 0i64;
    for e in 0..episodes {
        let s = derive_episode_seed(seed, ORACLE_ROW, bot.id, e);
        total += play_exploit_episode(&mut policy, cfg, s)?.return0;
    }
    Ok(total as f64 / episodes as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExploiterOptions {
    pub recalls: Vec<usize>,
    pub episodes: u64,
    /// Training episodes between greedy evaluations; 0 picks `episodes / 100`.
    pub eval_every: u64,
    /// Greedy episodes averaged into one evaluation.
    pub eval_episodes: u64,
    /// Evaluations per sliding window.
    pub window: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_schedule: EpsilonSchedule,
    pub allow_large_recall: bool,
}

impl Default for ExploiterOptions {
    fn default() -> Self {
        ExploiterOptions {
            recalls: vec![1, 3, 5],
            episodes: 10_000,
            eval_every: 0,
            eval_episodes: 5,
            window: 50,
            alpha: 0.02,
            gamma: 0.9,
            epsilon_schedule: EpsilonSchedule::default(),
            allow_large_recall: false,
        }
    }
}

impl ExploiterOptions {
    pub fn eval_interval(&self) -> u64 {
        if self.eval_every > 0 {
            self.eval_every
        } else {
            (self.episodes / 100).max(1)
        }
    }

    fn agent_config(&self, recall: usize) -> AgentConfig {
        AgentConfig {
            alpha: self.alpha,
            gamma: self.gamma,
            epsilon_schedule: self.epsilon_schedule,
            allow_large_recall: self.allow_large_recall,
            ..AgentConfig::qlearn(recall, self.episodes)
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExploitError {
    #[error("training needs at least one episode, one evaluation episode and one recall value")]
    Empty,
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Episode(#[from] EpisodeError),
}

/// One Q-learning run at a fixed recall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploiterRun {
    pub recall: usize,
    pub best_window_mean: f64,
    /// Mean greedy return of each evaluation, in training order.
    pub evaluations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploiterReport {
    pub bot_id: u64,
    pub bot_name: String,
    pub best_mean: f64,
    pub best_config: AgentConfig,
    pub episodes: u64,
    pub runs: Vec<ExploiterRun>,
}

/// Largest mean over consecutive runs of `window` values; the plain mean
/// when there are fewer values than that.
pub fn best_window_mean(values: &[f64], window: usize) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let w = window.clamp(1, values.len());
    values.windows(w).map(|v| v.iter().sum::<f64>() / w as f64).fold(f64::NEG_INFINITY, f64::max)
}

fn train_one(bot: &BotSpec, opts: &ExploiterOptions, cfg: &EpisodeConfig, recall: usize, seed: u64) -> Result<ExploiterRun, ExploitError> {
    let mut agent = opts.agent_config(recall).build(cfg.steps)?;
    let mut opponent = bot.instantiate();
    let every = opts.eval_interval();
    let train_row = TRAIN_ROW_BASE + recall as u64;
    let eval_row = EVAL_ROW_BASE + recall as u64;
    let mut evaluations = Vec::new();
    for e in 0..opts.episodes {
        play_episode(&mut agent, &mut opponent, cfg, derive_episode_seed(seed, train_row, bot.id, e))?;
        if (e + 1) % every == 0 {
            agent.set_learning(false);
            let first = evaluations.len() as u64 * opts.eval_episodes;
            let mut total = 0i64;
            for k in first..first + opts.eval_episodes {
                total += play_episode(&mut agent, &mut opponent, cfg, derive_episode_seed(seed, eval_row, bot.id, k))?.return0;
            }
            evaluations.push(total as f64 / opts.eval_episodes as f64);
            agent.set_learning(true);
        }
    }
    Ok(ExploiterRun { recall, best_window_mean: best_window_mean(&evaluations, opts.window), evaluations })
}

/// Trains one Q-learning exploiter per recall against a fixed bot and
/// reports the best sliding-window mean of greedy evaluation returns.
pub fn train_exploiter(bot: &BotSpec, opts: &ExploiterOptions, steps: usize, seed: u64) -> Result<ExploiterReport, ExploitError> {
    if opts.episodes == 0 || opts.eval_episodes == 0 || opts.recalls.is_empty() {
        return Err(ExploitError::Empty);
    }
    for &r in &opts.recalls {
        opts.agent_config(r).validate()?;
    }
    let runs: Vec<ExploiterRun> = opts
        .recalls
        .par_iter()
        .map(|&recall| {
            let cfg = EpisodeConfig { steps, recall };
            train_one(bot, opts, &cfg, recall, seed)
        })
        .collect::<Result<_, _>>()?;
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.best_window_mean > runs[b].best_window_mean { i } else { b });
    Ok(ExploiterReport {
        bot_id: bot.id,
        bot_name: bot.name.clone(),
        best_mean: runs[best].best_window_mean,
        best_config: opts.agent_config(runs[best].recall),
        episodes: opts.episodes,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_means() {
        assert_eq!(best_window_mean(&[1.0, 2.0, 3.0], 50), 2.0);
        assert_eq!(best_window_mean(&[0.0, 10.0, 10.0, 0.0], 2), 10.0);
        assert_eq!(best_window_mean(&[5.0], 1), 5.0);
        assert!(best_window_mean(&[], 3).is_nan());
    }

    #[test]
    fn oracle_step_is_best_response() {
        let d = ActionDistribution::new([0.2, 0.2, 0.6]).unwrap();
        assert_eq!(omniscient_exploit_step(&d), Action::Rock);
        assert_eq!(omniscient_exploit_step(&ActionDistribution::point(Action::Rock)), Action::Paper);
    }

    #[test]
    fn interval_default() {
        let o = ExploiterOptions { episodes: 5_000, ..Default::default() };
        assert_eq!(o.eval_interval(), 50);
        let o = ExploiterOptions { episodes: 30, ..Default::default() };
        assert_eq!(o.eval_interval(), 1);
    }
}

//! Generalization to unseen opponents: train against part of the
//! population, then evaluate the frozen agent on both parts.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{evaluate_agent_mode, Estimate};
use super::PbeError;
use crate::bots::Population;
use crate::engine::{derive_episode_seed, episode_rng, play_episode, EpisodeConfig};
use crate::learners::{AgentConfig, Lifetime};

const HOLDOUT_ROW: u64 = u64::MAX - 4;
const TRAIN_ROW: u64 = u64::MAX - 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HoldoutOptions {
    pub n_test: usize,
    pub folds: usize,
    /// Training episodes per fold, each against a bot drawn uniformly from
    /// the training set.
    pub train_episodes: u64,
    /// Evaluation episodes per bot.
    pub eval_episodes: u64,
    /// Keep learning within each evaluation episode. Every episode still
    /// starts from the trained state, so evaluation never changes it.
    pub adapt: bool,
}

impl Default for HoldoutOptions {
    fn default() -> Self {
        HoldoutOptions { n_test: 10, folds: 50, train_episodes: 1000, eval_episodes: 10, adapt: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoldoutFold {
    pub index: usize,
    pub train_ids: Vec<u64>,
    pub test_ids: Vec<u64>,
    pub train_return: Estimate,
    pub test_return: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoldoutReport {
    pub agent: String,
    pub options: HoldoutOptions,
    pub folds: Vec<HoldoutFold>,
    pub train_mean: f64,
    pub test_mean: f64,
}

/// Seeded split of `0..n` into sorted (train, test) slot lists with
/// `n_test` test slots. Folds are sampled independently.
pub fn fold_partition(n: usize, n_test: usize, seed: u64, fold: usize) -> (Vec<usize>, Vec<usize>) {
    let mut rng = episode_rng(derive_episode_seed(seed, HOLDOUT_ROW, fold as u64, 0));
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(&mut rng);
    let mut test = slots[..n_test].to_vec();
    let mut train = slots[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    (train, test)
}

fn run_fold(
    agent_cfg: &AgentConfig,
    pop: &Population,
    opts: &HoldoutOptions,
    cfg: &EpisodeConfig,
    seed: u64,
    fold: usize,
) -> Result<HoldoutFold, PbeError> {
    let (train, test) = fold_partition(pop.len(), opts.n_test, seed, fold);
    let fold_seed = derive_episode_seed(seed, HOLDOUT_ROW, fold as u64, 1);
    let mut agent = agent_cfg.build(cfg.steps)?;
    if agent.lifetime() == Lifetime::Persistent {
        let mut picker = episode_rng(derive_episode_seed(fold_seed, TRAIN_ROW, 0, 0));
        let mut bots: Vec<_> = train.iter().map(|&s| pop.instantiate(s)).collect();
        for t in 0..opts.train_episodes {
            let k = picker.gen_range(0..train.len());
            let s = derive_episode_seed(fold_seed, TRAIN_ROW, pop.get(train[k]).id, t);
            play_episode(&mut agent, &mut bots[k], cfg, s)?;
        }
    }
    agent.set_learning(opts.adapt);
    let run = evaluate_agent_mode(agent.as_ref(), pop, opts.eval_episodes, cfg, fold_seed, 0, false)?;
    let ids = |slots: &[usize]| slots.iter().map(|&s| pop.get(s).id).collect();
    Ok(HoldoutFold {
        index: fold,
        train_ids: ids(&train),
        test_ids: ids(&test),
        train_return: run.select(&train).population_return(),
        test_return: run.select(&test).population_return(),
    })
}

/// Trains a fresh persistent agent per fold against the training bots,
/// freezes it and measures its population return on both sides of the
/// split. Agents that forget between episodes are rejected; fixed agents
/// skip training.
pub fn holdout_eval(
    agent_cfg: &AgentConfig,
    pop: &Population,
    opts: &HoldoutOptions,
    cfg: &EpisodeConfig,
    seed: u64,
    workers: usize,
) -> Result<HoldoutReport, PbeError> {
    if opts.n_test == 0 || opts.n_test >= pop.len() {
        return Err(PbeError::BadSplit { n_test: opts.n_test, n: pop.len() });
    }
    if opts.folds == 0 || opts.eval_episodes == 0 {
        return Err(PbeError::NoEpisodes);
    }
    if agent_cfg.build(cfg.steps)?.lifetime() == Lifetime::Episode {
        return Err(PbeError::CannotTrain(agent_cfg.label()));
    }
    let folds = super::in_pool(workers, || {
        (0..opts.folds)
            .into_par_iter()
            .map(|f| run_fold(agent_cfg, pop, opts, cfg, seed, f))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let n = folds.len() as f64;
    Ok(HoldoutReport {
        agent: agent_cfg.label(),
        options: opts.clone(),
        train_mean: folds.iter().map(|f| f.train_return.mean).sum::<f64>() / n,
        test_mean: folds.iter().map(|f| f.test_return.mean).sum::<f64>() / n,
        folds,
    })
}

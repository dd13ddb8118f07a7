//! Population-based evaluation: population return, within-population
//! exploitability, aggregate score, cross-tables, rankings, hold-out
//! generalization and a predictability matrix.

mod crosstable;
mod holdout;
mod metrics;
mod predictability;

pub use crosstable::{cross_table, cross_table_logged, rank_population, write_ranking_csv, CrossTable, CrossTableRun, RankRow};
pub use holdout::{fold_partition, holdout_eval, HoldoutFold, HoldoutOptions, HoldoutReport};
pub use metrics::{
    aggregate_score, evaluate_agent, evaluate_agent_mode, population_return, within_pop_expl, BotOutcome, Estimate, EvalRun,
    MetricsRecord, AGENT_ROW,
};
pub use predictability::{predictability_matrix, PredictabilityMatrix, MAX_PREDICTOR_ORDER};

use crate::bots::BotSpec;
use crate::engine::EpisodeError;
use crate::learners::{train_exploiter, AgentError, ExploitError, ExploiterOptions};

#[derive(Debug, thiserror::Error)]
pub enum PbeError {
    #[error("episode count must be at least 1")]
    NoEpisodes,
    #[error("test set size {n_test} must be between 1 and {} for a population of {n}", n.saturating_sub(1))]
    BadSplit { n_test: usize, n: usize },
    #[error("{0} forgets everything between episodes and cannot be trained; enable persistence")]
    CannotTrain(String),
    #[error("predictor order {0} exceeds {MAX_PREDICTOR_ORDER}")]
    OrderTooLarge(usize),
    #[error("malformed cross-table: {0}")]
    BadTable(String),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Episode(#[from] EpisodeError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Exploit(#[from] ExploitError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the current
/// pool when `workers == 0`.
pub fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, PbeError> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| PbeError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

/// Learned exploitability: the best trained Q-learning exploiter's
/// sliding-window mean return against `bot`.
pub fn learned_expl(bot: &BotSpec, opts: &ExploiterOptions, steps: usize, seed: u64) -> Result<f64, PbeError> {
    Ok(train_exploiter(bot, opts, steps, seed)?.best_mean)
}

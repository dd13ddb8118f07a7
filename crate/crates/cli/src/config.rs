//! Run configuration: built-in defaults, then an optional TOML file, then
//! command-line flags.

use std::path::{Path, PathBuf};

use rrps::learners::{AgentConfig, EpsilonSchedule, ExploiterOptions};
use rrps::pbe::HoldoutOptions;
use serde::{Deserialize, Serialize};

use crate::Failure;

pub const SEED_ENV: &str = "RRPS_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `builtin` or the path of a JSON catalog.
    pub catalog: String,
    pub seed: Option<u64>,
    /// Steps per episode (K).
    pub steps: usize,
    /// Worker threads; 0 means available parallelism.
    pub workers: usize,
    pub out_dir: PathBuf,
    /// Episodes per cell (crosstable, rank, predictability) or per bot (eval).
    pub episodes: Option<u64>,
    /// Episodes per cell kept in the crosstable match log.
    pub log_episodes: u64,
    pub agent: AgentConfig,
    pub exploit: ExploitSection,
    pub holdout: HoldoutOptions,
    pub predictability: PredictabilitySection,
    pub rank: RankSection,
    pub play: PlaySection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            catalog: "builtin".into(),
            seed: None,
            steps: 1000,
            workers: 0,
            out_dir: PathBuf::from("rrps-out"),
            episodes: None,
            log_episodes: 1,
            agent: AgentConfig::default(),
            exploit: ExploitSection::default(),
            holdout: HoldoutOptions::default(),
            predictability: PredictabilitySection::default(),
            rank: RankSection::default(),
            play: PlaySection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExploitSection {
    pub bot: Option<String>,
    pub recalls: Vec<usize>,
    /// Training episodes per recall.
    pub episodes: u64,
    pub eval_every: u64,
    pub eval_episodes: u64,
    pub window: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_schedule: EpsilonSchedule,
    pub allow_large_recall: bool,
}

impl Default for ExploitSection {
    fn default() -> Self {
        let o = ExploiterOptions::default();
        ExploitSection {
            bot: None,
            recalls: o.recalls,
            episodes: o.episodes,
            eval_every: o.eval_every,
            eval_episodes: o.eval_episodes,
            window: o.window,
            alpha: o.alpha,
            gamma: o.gamma,
            epsilon_schedule: o.epsilon_schedule,
            allow_large_recall: o.allow_large_recall,
        }
    }
}

impl ExploitSection {
    pub fn options(&self) -> ExploiterOptions {
        ExploiterOptions {
            recalls: self.recalls.clone(),
            episodes: self.episodes,
            eval_every: self.eval_every,
            eval_episodes: self.eval_episodes,
            window: self.window,
            alpha: self.alpha,
            gamma: self.gamma,
            epsilon_schedule: self.epsilon_schedule,
            allow_large_recall: self.allow_large_recall,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PredictabilitySection {
    pub order: usize,
}

impl Default for PredictabilitySection {
    fn default() -> Self {
        PredictabilitySection { order: 1 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RankSection {
    /// Rank from an existing crosstable CSV instead of playing one.
    pub from_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlaySection {
    pub bot: Option<String>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<RunConfig, Failure> {
        let Some(path) = path else { return Ok(RunConfig::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Fills the seed from the environment (or 0) and the worker count
    /// from the machine when they are still unset.
    pub fn resolve_defaults(&mut self) -> Result<(), Failure> {
        if self.seed.is_none() {
            self.seed = Some(match std::env::var(SEED_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{SEED_ENV}={v:?} is not an integer")))?,
                Err(_) => 0,
            });
        }
        if self.workers == 0 {
            self.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        }
        if self.steps == 0 {
            return Err(Failure::Usage("steps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }
}

/// Parses a snake_case enum name through its serde representation, so
/// that the error lists the valid names.
pub fn parse_name<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

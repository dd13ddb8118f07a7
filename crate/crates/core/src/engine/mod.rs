//! Stage game, episode loop, observation codes and seeding.

mod action;
mod distribution;
mod episode;
mod history;
pub mod matchlog;
mod seed;

pub use action::{payoff, Action, JointAction, ACTIONS};
pub use distribution::{ActionDistribution, DistributionError, MASS_TOLERANCE};
pub use episode::{
    episode_rng, play_episode, play_exploit_episode, EpisodeConfig, EpisodeError, EpisodeResult, FixedPolicy, Policy,
    DEFAULT_STEPS,
};
pub use history::{
    encode_observation, observation_space, shift_observation, History, MAX_ENCODABLE_RECALL, SENTINEL_DIGIT,
};
pub use matchlog::MatchLogRecord;
pub use seed::{derive_episode_seed, mix64};

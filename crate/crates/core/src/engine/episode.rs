use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::action::{payoff, Action, JointAction};
use super::distribution::{ActionDistribution, DistributionError};
use super::history::History;

/// Default episode length.
pub const DEFAULT_STEPS: usize = 1000;

/// Anything that can sit in a seat: bots, learners, a human at a terminal.
///
/// Per step the engine calls [`Policy::distribution`] once, samples the move
/// itself, and then reports the realized joint action through
/// [`Policy::observe`]. Policies never draw randomness of their own.
pub trait Policy: Send {
    /// Called before every episode.
    fn reset(&mut self);

    /// Distribution for the next move given this episode's history so far.
    fn distribution(&mut self, history: &History) -> ActionDistribution;

    /// The realized step, from this policy's seat, and its reward.
    fn observe(&mut self, joint: JointAction, reward: i32);
}

impl<P: Policy + ?Sized> Policy for Box<P> {
    fn reset(&mut self) {
        (**self).reset()
    }

    fn distribution(&mut self, history: &History) -> ActionDistribution {
        (**self).distribution(history)
    }

    fn observe(&mut self, joint: JointAction, reward: i32) {
        (**self).observe(joint, reward)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EpisodeConfig {
    /// Steps per episode (K).
    pub steps: usize,
    /// Joint actions visible to recall-limited agents (R).
    pub recall: usize,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        EpisodeConfig { steps: DEFAULT_STEPS, recall: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EpisodeError {
    #[error("seat {seat} returned an invalid distribution at step {step}: {source}")]
    InvalidDistribution {
        seat: usize,
        step: usize,
        #[source]
        source: DistributionError,
    },
    #[error("episode length must be at least 1")]
    EmptyEpisode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    /// Joint actions from seat 0's perspective.
    pub actions: History,
    /// Per-step rewards of seat 0.
    pub rewards0: Vec<i8>,
    pub return0: i64,
}

impl EpisodeResult {
    pub fn return1(&self) -> i64 {
        -self.return0
    }
}

/// Per-episode random stream used to sample both seats' moves.
pub fn episode_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Runs one full episode. Both policies are reset first.
pub fn play_episode<A, B>(
    p0: &mut A,
    p1: &mut B,
    cfg: &EpisodeConfig,
    seed: u64,
) -> Result<EpisodeResult, EpisodeError>
where
    A: Policy + ?Sized,
    B: Policy + ?Sized,
{
    if cfg.steps == 0 {
        return Err(EpisodeError::EmptyEpisode);
    }
    p0.reset();
    p1.reset();
    let mut rng = episode_rng(seed);
    let mut h0 = History::with_capacity(cfg.steps);
    let mut h1 = History::with_capacity(cfg.steps);
    let mut rewards0 = Vec::with_capacity(cfg.steps);
    let mut total = 0i64;
    for step in 0..cfg.steps {
        let d0 = p0.distribution(&h0);
        d0.validate()
            .map_err(|source| EpisodeError::InvalidDistribution { seat: 0, step, source })?;
        let d1 = p1.distribution(&h1);
        d1.validate()
            .map_err(|source| EpisodeError::InvalidDistribution { seat: 1, step, source })?;
        let a0 = d0.sample_with(rng.gen::<f64>());
        let a1 = d1.sample_with(rng.gen::<f64>());
        let (r0, r1) = payoff(a0, a1);
        let j0 = JointAction::new(a0, a1);
        h0.push(j0);
        h1.push(j0.flipped());
        p0.observe(j0, r0);
        p1.observe(j0.flipped(), r1);
        rewards0.push(r0 as i8);
        total += r0 as i64;
    }
    Ok(EpisodeResult { actions: h0, rewards0, return0: total })
}

/// Episode against an opponent whose per-step distribution is read before
/// moving: seat 0 plays the myopic best response to it. Returns seat 0's
/// return.
pub fn play_exploit_episode<B>(bot: &mut B, cfg: &EpisodeConfig, seed: u64) -> Result<EpisodeResult, EpisodeError>
where
    B: Policy + ?Sized,
{
    if cfg.steps == 0 {
        return Err(EpisodeError::EmptyEpisode);
    }
    bot.reset();
    let mut rng = episode_rng(seed);
    let mut h0 = History::with_capacity(cfg.steps);
    let mut h1 = History::with_capacity(cfg.steps);
    let mut rewards0 = Vec::with_capacity(cfg.steps);
    let mut total = 0i64;
    for step in 0..cfg.steps {
        let d1 = bot.distribution(&h1);
        d1.validate()
            .map_err(|source| EpisodeError::InvalidDistribution { seat: 1, step, source })?;
        let a0 = d1.best_response();
        // keep the stream aligned with play_episode
        let _ = rng.gen::<f64>();
        let a1 = d1.sample_with(rng.gen::<f64>());
        let (r0, r1) = payoff(a0, a1);
        let j0 = JointAction::new(a0, a1);
        h0.push(j0);
        h1.push(j0.flipped());
        bot.observe(j0.flipped(), r1);
        rewards0.push(r0 as i8);
        total += r0 as i64;
    }
    Ok(EpisodeResult { actions: h0, rewards0, return0: total })
}

/// Fixed policy, mostly for tests and baseline agents.
#[derive(Debug, Clone)]
pub struct FixedPolicy(pub ActionDistribution);

impl FixedPolicy {
    pub fn always(a: Action) -> Self {
        FixedPolicy(ActionDistribution::point(a))
    }

    pub fn uniform() -> Self {
        FixedPolicy(ActionDistribution::UNIFORM)
    }
}

impl Policy for FixedPolicy {
    fn reset(&mut self) {}

    fn distribution(&mut self, _history: &History) -> ActionDistribution {
        self.0
    }

    fn observe(&mut self, _joint: JointAction, _reward: i32) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Broken;

    impl Policy for Broken {
        fn reset(&mut self) {}
        fn distribution(&mut self, h: &History) -> ActionDistribution {
            if h.len() == 3 {
                // bypasses the checked constructor on purpose
                serde_json::from_str("[0.5,0.5,0.5]").unwrap()
            } else {
                ActionDistribution::UNIFORM
            }
        }
        fn observe(&mut self, _: JointAction, _: i32) {}
    }

    #[test]
    fn rock_vs_paper() {
        let cfg = EpisodeConfig::default();
        let r = play_episode(&mut FixedPolicy::always(Action::Rock), &mut FixedPolicy::always(Action::Paper), &cfg, 1)
            .unwrap();
        assert_eq!(r.return0, -1000);
        assert_eq!(r.return1(), 1000);
        assert_eq!(r.rewards0.len(), 1000);
    }

    #[test]
    fn invalid_distribution_reports_seat_and_step() {
        let cfg = EpisodeConfig::default();
        let err = play_episode(&mut FixedPolicy::uniform(), &mut Broken, &cfg, 1).unwrap_err();
        match err {
            EpisodeError::InvalidDistribution { seat, step, .. } => {
                assert_eq!((seat, step), (1, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_steps_rejected() {
        let cfg = EpisodeConfig { steps: 0, recall: 1 };
        assert_eq!(
            play_episode(&mut FixedPolicy::uniform(), &mut FixedPolicy::uniform(), &cfg, 0),
            Err(EpisodeError::EmptyEpisode)
        );
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = EpisodeConfig::default();
        let a = play_episode(&mut FixedPolicy::uniform(), &mut FixedPolicy::uniform(), &cfg, 99).unwrap();
        let b = play_episode(&mut FixedPolicy::uniform(), &mut FixedPolicy::uniform(), &cfg, 99).unwrap();
        assert_eq!(a, b);
        let c = play_episode(&mut FixedPolicy::uniform(), &mut FixedPolicy::uniform(), &cfg, 100).unwrap();
        assert_ne!(a.actions, c.actions);
    }
}

//! Human-vs-bot mode: the human sits in seat 0 and types one move per step.

use std::io::{BufRead, Write};

use anyhow::Context;
use rand::Rng;
use rrps::bots::BotSpec;
use rrps::engine::{derive_episode_seed, episode_rng, payoff, Action, History, JointAction, MatchLogRecord, Policy};

use crate::config::RunConfig;
use crate::Failure;

/// Row id used to derive the seed of an interactive episode.
pub const HUMAN_ROW: u64 = u64::MAX - 2;

enum Input {
    Move(Action),
    Quit,
}

fn parse_input(line: &str) -> Option<Input> {
    match line.trim().to_ascii_lowercase().as_str() {
        "q" | "quit" => Some(Input::Quit),
        "r" | "rock" => Some(Input::Move(Action::Rock)),
        "p" | "paper" => Some(Input::Move(Action::Paper)),
        "s" | "scissors" => Some(Input::Move(Action::Scissors)),
        _ => None,
    }
}

/// Plays one episode against `bot`, reading moves from `input`. Ends after
/// the configured number of steps, on `q`, or at end of input.
pub fn run<R: BufRead, W: Write>(
    bot: &BotSpec,
    cfg: &RunConfig,
    input: &mut R,
    out: &mut W,
) -> Result<MatchLogRecord, Failure> {
    let seed = derive_episode_seed(cfg.seed(), HUMAN_ROW, bot.id, 0);
    let mut rng = episode_rng(seed);
    let mut policy = bot.instantiate();
    policy.reset();
    let mut h0 = History::with_capacity(cfg.steps);
    let mut h1 = History::with_capacity(cfg.steps);
    let mut total = 0i64;
    writeln!(out, "playing {} for up to {} steps; enter r, p, s or q", bot.name, cfg.steps).context("writing to terminal")?;
    let mut line = String::new();
    'steps: for step in 0..cfg.steps {
        let d1 = policy.distribution(&h1);
        let mine = loop {
            write!(out, "[{}/{}] score {:+} > ", step + 1, cfg.steps, total).context("writing to terminal")?;
            out.flush().context("writing to terminal")?;
            line.clear();
            if input.read_line(&mut line).context("reading input")? == 0 {
                writeln!(out).context("writing to terminal")?;
                break 'steps;
            }
            match parse_input(&line) {
                Some(Input::Move(a)) => break a,
                Some(Input::Quit) => break 'steps,
                None => writeln!(out, "unrecognized move {:?}; enter r, p, s or q", line.trim()).context("writing to terminal")?,
            }
        };
        // two draws per step, as in a simulated episode
        let _ = rng.gen::<f64>();
        let theirs = d1.sample_with(rng.gen::<f64>());
        let (r0, r1) = payoff(mine, theirs);
        let j0 = JointAction::new(mine, theirs);
        h0.push(j0);
        h1.push(j0.flipped());
        policy.observe(j0.flipped(), r1);
        total += r0 as i64;
        let verdict = match r0 {
            1 => "win",
            -1 => "loss",
            _ => "draw",
        };
        writeln!(out, "you {} vs {} {}: {}", mine.as_char(), bot.name, theirs.as_char(), verdict).context("writing to terminal")?;
    }
    let record = MatchLogRecord {
        row_id: HUMAN_ROW,
        col_id: bot.id,
        episode_index: 0,
        seed,
        actions0: h0.own_actions().map(Action::as_char).collect(),
        actions1: h0.opp_actions().map(Action::as_char).collect(),
        return0: total,
    };
    writeln!(out, "final return after {} steps: {}", h0.len(), total).context("writing to terminal")?;
    writeln!(out, "you: {}", record.actions0).context("writing to terminal")?;
    writeln!(out, "bot: {}", record.actions1).context("writing to terminal")?;
    Ok(record)
}

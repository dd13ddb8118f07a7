//! `rrps`: tournaments, metrics, exploiters, hold-out runs and a
//! human-vs-bot mode for repeated rock-paper-scissors.

mod commands;
mod config;
mod play;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rrps::learners::{AgentAlgorithm, ContextMode};

use config::{parse_name, RunConfig};

/// Exit code 2: the request itself is wrong. Exit code 1: it failed while running.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "rrps", version, about = "Repeated rock-paper-scissors: population tournaments and learning agents")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (default: $RRPS_SEED, else 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Steps per episode.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// `builtin` or a JSON catalog path.
    #[arg(long, global = true)]
    catalog: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play every pair of bots and write the head-to-head table.
    Crosstable {
        /// Episodes per cell (default 1000).
        #[arg(long)]
        episodes: Option<u64>,
        /// Episodes per cell written to the match log.
        #[arg(long)]
        log_episodes: Option<u64>,
    },
    /// Population return, within-population exploitability and aggregate score of an agent.
    Eval {
        /// Episodes per bot (default 100).
        #[arg(long)]
        episodes: Option<u64>,
        #[command(flatten)]
        agent: AgentArgs,
    },
    /// Train Q-learning exploiters against one bot.
    Exploit {
        #[arg(long)]
        bot: Option<String>,
        /// Comma-separated recall values.
        #[arg(long, value_delimiter = ',')]
        recalls: Option<Vec<usize>>,
        /// Training episodes per recall.
        #[arg(long)]
        episodes: Option<u64>,
        #[arg(long)]
        eval_every: Option<u64>,
        #[arg(long)]
        eval_episodes: Option<u64>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        allow_large_recall: bool,
    },
    /// Rank the population by aggregate score.
    Rank {
        /// Existing crosstable CSV to rank instead of playing a new table.
        #[arg(long)]
        from_csv: Option<PathBuf>,
        /// Episodes per cell when playing a new table (default 1000).
        #[arg(long)]
        episodes: Option<u64>,
    },
    /// Train on part of the population, evaluate on the rest.
    Holdout {
        #[arg(long)]
        n_test: Option<usize>,
        #[arg(long)]
        folds: Option<usize>,
        #[arg(long)]
        train_episodes: Option<u64>,
        #[arg(long)]
        eval_episodes: Option<u64>,
        /// Keep learning within evaluation episodes.
        #[arg(long)]
        adapt: bool,
        #[command(flatten)]
        agent: AgentArgs,
    },
    /// How well an order-k Markov predictor anticipates each bot.
    Predictability {
        #[arg(long)]
        order: Option<usize>,
        /// Episodes per cell (default 10).
        #[arg(long)]
        episodes: Option<u64>,
    },
    /// Play one episode against a bot from the terminal (R/P/S, q to quit).
    Play {
        #[arg(long)]
        bot: Option<String>,
    },
}

#[derive(Args, Debug, Default)]
struct AgentArgs {
    /// uniform, rock, paper, scissors, rm, rm_plus, saol, swap_rm_plus or qlearn.
    #[arg(long, value_parser = parse_name::<AgentAlgorithm>)]
    algorithm: Option<AgentAlgorithm>,
    #[arg(long)]
    recall: Option<usize>,
    /// none, discrete or experts.
    #[arg(long, value_parser = parse_name::<ContextMode>)]
    contexts: Option<ContextMode>,
    /// Carry learned state across episodes.
    #[arg(long)]
    persist: bool,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Lifetime in episodes, for the exploration schedule.
    #[arg(long)]
    agent_episodes: Option<u64>,
    #[arg(long)]
    allow_large_recall: bool,
}

impl AgentArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        let a = &mut cfg.agent;
        set(&mut a.algorithm, self.algorithm);
        set(&mut a.recall, self.recall);
        set(&mut a.contexts, self.contexts);
        set(&mut a.alpha, self.alpha);
        set(&mut a.gamma, self.gamma);
        set(&mut a.episodes, self.agent_episodes);
        a.persist |= self.persist;
        a.allow_large_recall |= self.allow_large_recall;
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    set(&mut cfg.workers, cli.workers);
    set(&mut cfg.steps, cli.steps);
    set(&mut cfg.catalog, cli.catalog.clone());
    set(&mut cfg.out_dir, cli.out.clone());
    match &cli.command {
        Command::Crosstable { episodes, log_episodes } => {
            cfg.episodes = Some(episodes.or(cfg.episodes).unwrap_or(1000));
            set(&mut cfg.log_episodes, *log_episodes);
        }
        Command::Eval { episodes, agent } => {
            cfg.episodes = Some(episodes.or(cfg.episodes).unwrap_or(100));
            agent.apply(&mut cfg);
        }
        Command::Exploit { bot, recalls, episodes, eval_every, eval_episodes, window, alpha, gamma, allow_large_recall } => {
            let e = &mut cfg.exploit;
            set(&mut e.bot, bot.clone().map(Some));
            set(&mut e.recalls, recalls.clone());
            set(&mut e.episodes, *episodes);
            set(&mut e.eval_every, *eval_every);
            set(&mut e.eval_episodes, *eval_episodes);
            set(&mut e.window, *window);
            set(&mut e.alpha, *alpha);
            set(&mut e.gamma, *gamma);
            e.allow_large_recall |= allow_large_recall;
        }
        Command::Rank { from_csv, episodes } => {
            set(&mut cfg.rank.from_csv, from_csv.clone().map(Some));
            cfg.episodes = Some(episodes.or(cfg.episodes).unwrap_or(1000));
        }
        Command::Holdout { n_test, folds, train_episodes, eval_episodes, adapt, agent } => {
            let h = &mut cfg.holdout;
            set(&mut h.n_test, *n_test);
            set(&mut h.folds, *folds);
            set(&mut h.train_episodes, *train_episodes);
            set(&mut h.eval_episodes, *eval_episodes);
            h.adapt |= adapt;
            agent.apply(&mut cfg);
        }
        Command::Predictability { order, episodes } => {
            set(&mut cfg.predictability.order, *order);
            cfg.episodes = Some(episodes.or(cfg.episodes).unwrap_or(10));
        }
        Command::Play { bot } => set(&mut cfg.play.bot, bot.clone().map(Some)),
    }
    cfg.resolve_defaults()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let outcome = resolve(&cli).and_then(|cfg| commands::run(&cli.command, &cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

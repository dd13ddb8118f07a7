use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use rrps::bots::{BotSpec, Population};
use rrps::engine::matchlog::write_records;
use rrps::engine::EpisodeConfig;
use rrps::learners::train_exploiter;
use rrps::pbe::{
    cross_table_logged, evaluate_agent, holdout_eval, in_pool, predictability_matrix, rank_population,
    write_ranking_csv, CrossTable, MetricsRecord, PbeError,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{play, Command, Failure};

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    wall_time_secs: f64,
    artifacts: Vec<String>,
    config: &'a RunConfig,
}

/// Artifacts written by one command, plus the bookkeeping for its manifest.
struct Bundle<'a> {
    command: &'a str,
    cfg: &'a RunConfig,
    start: Instant,
    artifacts: Vec<String>,
}

impl<'a> Bundle<'a> {
    fn new(command: &'a str, cfg: &'a RunConfig) -> Result<Self, Failure> {
        fs::create_dir_all(&cfg.out_dir)
            .with_context(|| format!("cannot create output directory {}", cfg.out_dir.display()))?;
        eprintln!("# resolved config for `{command}`\n{}", cfg.to_toml());
        Ok(Bundle { command, cfg, start: Instant::now(), artifacts: Vec::new() })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out_dir.join(name)
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>, Failure> {
        let path = self.path(name);
        let f = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
        self.artifacts.push(name.to_string());
        Ok(BufWriter::new(f))
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value).context("serializing output")?;
        writeln!(w).context("writing output")?;
        w.flush().context("writing output")?;
        Ok(())
    }

    fn finish(mut self) -> Result<(), Failure> {
        let config_name = format!("{}.config.toml", self.command);
        let mut w = self.create(&config_name)?;
        w.write_all(self.cfg.to_toml().as_bytes()).context("writing config echo")?;
        w.flush().context("writing config echo")?;
        let manifest = Manifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            seed: self.cfg.seed(),
            wall_time_secs: self.start.elapsed().as_secs_f64(),
            artifacts: self.artifacts.clone(),
            config: self.cfg,
        };
        let name = format!("{}.manifest.json", self.command);
        self.write_json(&name, &manifest)?;
        eprintln!("wrote {} files to {}", self.artifacts.len(), self.cfg.out_dir.display());
        Ok(())
    }
}

fn pbe_failure(e: PbeError) -> Failure {
    match e {
        PbeError::NoEpisodes
        | PbeError::BadSplit { .. }
        | PbeError::CannotTrain(_)
        | PbeError::OrderTooLarge(_)
        | PbeError::Agent(_) => Failure::Usage(e.to_string()),
        PbeError::Exploit(rrps::learners::ExploitError::Agent(a)) => Failure::Usage(a.to_string()),
        PbeError::Exploit(rrps::learners::ExploitError::Empty) => Failure::Usage(e.to_string()),
        other => Failure::Runtime(other.into()),
    }
}

fn load_population(cfg: &RunConfig) -> Result<Population, Failure> {
    if cfg.catalog == "builtin" {
        return Ok(Population::builtin());
    }
    let text = fs::read_to_string(&cfg.catalog).with_context(|| format!("cannot read catalog {}", cfg.catalog))?;
    Population::from_json(&text).with_context(|| format!("invalid catalog {}", cfg.catalog)).map_err(Failure::Runtime)
}

fn find_bot<'p>(pop: &'p Population, name: Option<&str>, command: &str) -> Result<&'p BotSpec, Failure> {
    let names = pop.names().join(", ");
    let name = name.ok_or_else(|| Failure::Usage(format!("{command} needs --bot; available bots: {names}")))?;
    pop.by_name(name).map_err(|_| Failure::Usage(format!("unknown bot {name:?}; available bots: {names}")))
}

fn positive(name: &str, value: u64) -> Result<u64, Failure> {
    if value == 0 {
        Err(Failure::Usage(format!("{name} must be at least 1")))
    } else {
        Ok(value)
    }
}

fn episode_config(cfg: &RunConfig) -> EpisodeConfig {
    EpisodeConfig { steps: cfg.steps, recall: cfg.agent.recall }
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<(), Failure> {
    match command {
        Command::Crosstable { .. } => crosstable(cfg),
        Command::Eval { .. } => eval(cfg),
        Command::Exploit { .. } => exploit(cfg),
        Command::Rank { .. } => rank(cfg),
        Command::Holdout { .. } => holdout(cfg),
        Command::Predictability { .. } => predictability(cfg),
        Command::Play { .. } => {
            let pop = load_population(cfg)?;
            let bot = find_bot(&pop, cfg.play.bot.as_deref(), "play")?;
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            let mut bundle = Bundle::new("play", cfg)?;
            let record = play::run(bot, cfg, &mut stdin.lock(), &mut stdout.lock())?;
            let mut w = bundle.create("play.jsonl")?;
            write_records(&mut w, std::slice::from_ref(&record)).context("writing match log")?;
            w.flush().context("writing match log")?;
            bundle.finish()
        }
    }
}

fn write_table(bundle: &mut Bundle, name: &str, table: &CrossTable) -> Result<(), Failure> {
    let w = bundle.create(name)?;
    table.write_csv(w).map_err(pbe_failure)
}

fn crosstable(cfg: &RunConfig) -> Result<(), Failure> {
    let episodes = positive("episodes", cfg.episodes.unwrap_or(0))?;
    let pop = load_population(cfg)?;
    let mut bundle = Bundle::new("crosstable", cfg)?;
    let run = cross_table_logged(&pop, episodes, &episode_config(cfg), cfg.seed(), cfg.workers, cfg.log_episodes)
        .map_err(pbe_failure)?;
    write_table(&mut bundle, "crosstable.csv", &run.table)?;
    let se = CrossTable { means: run.table.stderrs.clone(), ..run.table.clone() };
    write_table(&mut bundle, "crosstable_stderr.csv", &se)?;
    let w = bundle.create("matches.jsonl")?;
    write_records(w, &run.logs).context("writing match log")?;
    println!(
        "{n}x{n} table, {episodes} episodes per cell, seed {}, {} logged episodes",
        cfg.seed(),
        run.logs.len(),
        n = run.table.len()
    );
    bundle.finish()
}

fn print_record(r: &MetricsRecord) {
    println!("{:<28} {:>12} {:>12} {:>12}", "agent", "pop_return", "wp_expl", "agg_score");
    println!(
        "{:<28} {:>12.3} {:>12.3} {:>12.3}",
        r.name, r.pop_return, r.wp_expl, r.agg_score
    );
    println!(
        "{:<28} {:>12} {:>12} {:>12}",
        "  (stderr)",
        format!("±{:.3}", r.pop_return_se),
        format!("±{:.3}", r.wp_expl_se),
        format!("±{:.3}", r.agg_score_se)
    );
    if let Some(bot) = &r.wp_expl_bot {
        println!("most exploiting bot: {bot}");
    }
}

fn write_metrics_csv(bundle: &mut Bundle, name: &str, records: &[MetricsRecord]) -> Result<(), Failure> {
    let w = bundle.create(name)?;
    let mut out = csv::Writer::from_writer(w);
    let header = [
        "name", "pop_return", "pop_return_se", "wp_expl", "wp_expl_se", "wp_expl_bot", "agg_score", "agg_score_se",
        "episodes_per_bot",
    ];
    out.write_record(header).context("writing metrics")?;
    for r in records {
        out.write_record([
            r.name.clone(),
            format!("{:.6}", r.pop_return),
            format!("{:.6}", r.pop_return_se),
            format!("{:.6}", r.wp_expl),
            format!("{:.6}", r.wp_expl_se),
            r.wp_expl_bot.clone().unwrap_or_default(),
            format!("{:.6}", r.agg_score),
            format!("{:.6}", r.agg_score_se),
            r.episodes_per_bot.to_string(),
        ])
        .context("writing metrics")?;
    }
    out.flush().context("writing metrics")?;
    Ok(())
}

fn eval(cfg: &RunConfig) -> Result<(), Failure> {
    let episodes = positive("episodes", cfg.episodes.unwrap_or(0))?;
    let agent = cfg.agent.build(cfg.steps).map_err(|e| Failure::Usage(e.to_string()))?;
    let pop = load_population(cfg)?;
    let mut bundle = Bundle::new("eval", cfg)?;
    let run = evaluate_agent(agent.as_ref(), &pop, episodes, &episode_config(cfg), cfg.seed(), cfg.workers)
        .map_err(pbe_failure)?;
    let record = run.record(cfg.agent.label());
    print_record(&record);
    bundle.write_json("metrics.json", &record)?;
    write_metrics_csv(&mut bundle, "metrics.csv", std::slice::from_ref(&record))?;
    let w = bundle.create("per_bot.csv")?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["bot", "agent_return", "stderr"]).context("writing per-bot results")?;
    for o in &run.outcomes {
        let e = o.agent_return();
        out.write_record([o.bot_name.clone(), format!("{:.6}", e.mean), format!("{:.6}", e.stderr)])
            .context("writing per-bot results")?;
    }
    out.flush().context("writing per-bot results")?;
    drop(out);
    bundle.finish()
}

fn exploit(cfg: &RunConfig) -> Result<(), Failure> {
    let pop = load_population(cfg)?;
    let bot = find_bot(&pop, cfg.exploit.bot.as_deref(), "exploit")?;
    let opts = cfg.exploit.options();
    let mut bundle = Bundle::new("exploit", cfg)?;
    let report = in_pool(cfg.workers, || train_exploiter(bot, &opts, cfg.steps, cfg.seed()))
        .map_err(pbe_failure)?
        .map_err(|e| pbe_failure(e.into()))?;
    println!("exploiting {} with {} training episodes per recall", report.bot_name, report.episodes);
    println!("{:>6} {:>12} {:>12} {:>8}", "recall", "best_window", "last_eval", "evals");
    for r in &report.runs {
        let last = r.evaluations.last().copied().unwrap_or(f64::NAN);
        println!("{:>6} {:>12.3} {:>12.3} {:>8}", r.recall, r.best_window_mean, last, r.evaluations.len());
    }
    println!("learned exploitability: {:.3} (recall {})", report.best_mean, report.best_config.recall);
    bundle.write_json("exploit.json", &report)?;
    bundle.finish()
}

fn rank(cfg: &RunConfig) -> Result<(), Failure> {
    let mut bundle;
    let table = match &cfg.rank.from_csv {
        Some(path) => {
            let table = read_table(path)?;
            bundle = Bundle::new("rank", cfg)?;
            table
        }
        None => {
            let episodes = positive("episodes", cfg.episodes.unwrap_or(0))?;
            let pop = load_population(cfg)?;
            bundle = Bundle::new("rank", cfg)?;
            let run = cross_table_logged(&pop, episodes, &episode_config(cfg), cfg.seed(), cfg.workers, 0)
                .map_err(pbe_failure)?;
            write_table(&mut bundle, "crosstable.csv", &run.table)?;
            run.table
        }
    };
    let records = table.records();
    let rows = rank_population(&records);
    println!("{:>4}  {:<18} {:>12} {:>12} {:>12}", "rank", "name", "pop_return", "wp_expl", "agg_score");
    for r in &rows {
        println!("{:>4}  {:<18} {:>12.3} {:>12.3} {:>12.3}", r.rank, r.name, r.pop_return, r.wp_expl, r.agg_score);
    }
    let w = bundle.create("ranking.csv")?;
    write_ranking_csv(w, &rows).map_err(pbe_failure)?;
    write_metrics_csv(&mut bundle, "metrics.csv", &records)?;
    bundle.finish()
}

fn read_table(path: &Path) -> Result<CrossTable, Failure> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    CrossTable::read_csv(f).map_err(|e| Failure::Runtime(anyhow::anyhow!("{}: {e}", path.display())))
}

fn holdout(cfg: &RunConfig) -> Result<(), Failure> {
    let pop = load_population(cfg)?;
    let mut bundle = Bundle::new("holdout", cfg)?;
    let report = holdout_eval(&cfg.agent, &pop, &cfg.holdout, &episode_config(cfg), cfg.seed(), cfg.workers)
        .map_err(pbe_failure)?;
    println!("{:>5} {:>12} {:>10} {:>12} {:>10}", "fold", "train_mean", "train_se", "test_mean", "test_se");
    for f in &report.folds {
        println!(
            "{:>5} {:>12.3} {:>10.3} {:>12.3} {:>10.3}",
            f.index, f.train_return.mean, f.train_return.stderr, f.test_return.mean, f.test_return.stderr
        );
    }
    println!("{}: train {:.3}, test {:.3} over {} folds", report.agent, report.train_mean, report.test_mean, report.folds.len());
    let w = bundle.create("holdout.csv")?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["fold", "train_mean", "train_se", "test_mean", "test_se", "train_ids", "test_ids"])
        .context("writing folds")?;
    let join = |ids: &[u64]| ids.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    for f in &report.folds {
        out.write_record([
            f.index.to_string(),
            format!("{:.6}", f.train_return.mean),
            format!("{:.6}", f.train_return.stderr),
            format!("{:.6}", f.test_return.mean),
            format!("{:.6}", f.test_return.stderr),
            join(&f.train_ids),
            join(&f.test_ids),
        ])
        .context("writing folds")?;
    }
    out.flush().context("writing folds")?;
    drop(out);
    bundle.write_json("holdout.json", &report)?;
    bundle.finish()
}

fn predictability(cfg: &RunConfig) -> Result<(), Failure> {
    let episodes = positive("episodes", cfg.episodes.unwrap_or(0))?;
    let pop = load_population(cfg)?;
    let mut bundle = Bundle::new("predictability", cfg)?;
    let m = predictability_matrix(&pop, cfg.predictability.order, episodes, &episode_config(cfg), cfg.seed(), cfg.workers)
        .map_err(pbe_failure)?;
    println!("order-{} Markov predictor, mean accuracy per bot:", m.order);
    for (name, row) in m.names.iter().zip(&m.accuracy) {
        println!("{:<18} {:.3}", name, row.iter().sum::<f64>() / row.len() as f64);
    }
    let w = bundle.create("predictability.csv")?;
    m.write_csv(w).map_err(pbe_failure)?;
    bundle.finish()
}

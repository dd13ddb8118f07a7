//! Head-to-head table of the population and the ranking derived from it.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{Estimate, MetricsRecord};
use super::{in_pool, PbeError};
use crate::bots::Population;
use crate::engine::{derive_episode_seed, play_episode, EpisodeConfig, EpisodeError, MatchLogRecord};

/// Row bot's mean per-episode return against the column bot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossTable {
    pub names: Vec<String>,
    pub ids: Vec<u64>,
    pub episodes_per_cell: u64,
    pub seed: u64,
    pub means: Vec<Vec<f64>>,
    pub stderrs: Vec<Vec<f64>>,
}

impl CrossTable {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn cell(&self, row: usize, col: usize) -> f64 {
        self.means[row][col]
    }

    /// Header row and column of bot names, means with six decimals.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), PbeError> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![String::new()];
        header.extend(self.names.iter().cloned());
        out.write_record(&header)?;
        for (name, row) in self.names.iter().zip(&self.means) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(|v| format!("{v:.6}")));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Reads a table written by [`Self::write_csv`]. Ids, seed, episode
    /// counts and standard errors are not part of the file and come back
    /// as slot indices and zeros.
    pub fn read_csv<R: Read>(r: R) -> Result<CrossTable, PbeError> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(r);
        let mut rows = rdr.records();
        let header = rows.next().ok_or_else(|| PbeError::BadTable("empty file".into()))??;
        let names: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
        let n = names.len();
        let mut means = Vec::with_capacity(n);
        for (i, rec) in rows.enumerate() {
            let rec = rec?;
            if rec.len() != n + 1 || rec.get(0) != names.get(i).map(String::as_str) {
                return Err(PbeError::BadTable(format!("row {} does not match the header", i + 1)));
            }
            let row = rec
                .iter()
                .skip(1)
                .map(|v| v.trim().parse::<f64>().map_err(|e| PbeError::BadTable(format!("row {}: {e}", i + 1))))
                .collect::<Result<Vec<_>, _>>()?;
            means.push(row);
        }
        if means.len() != n || n == 0 {
            return Err(PbeError::BadTable(format!("expected {n} rows, found {}", means.len())));
        }
        Ok(CrossTable {
            ids: (0..n as u64).collect(),
            names,
            episodes_per_cell: 0,
            seed: 0,
            stderrs: vec![vec![0.0; n]; n],
            means,
        })
    }

    /// One metrics record per bot, treating the population (itself
    /// included) as both opponents and exploiters.
    pub fn records(&self) -> Vec<MetricsRecord> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let pr = self.means[i].iter().sum::<f64>() / n as f64;
                let pr_se = self.stderrs[i].iter().map(|s| s * s).sum::<f64>().sqrt() / n as f64;
                let mut best = 0;
                for j in 1..n {
                    if self.means[j][i] > self.means[best][i] {
                        best = j;
                    }
                }
                MetricsRecord::new(
                    self.names[i].clone(),
                    Estimate { mean: pr, stderr: pr_se },
                    Estimate { mean: self.means[best][i], stderr: self.stderrs[best][i] },
                    Some(self.names[best].clone()),
                    self.episodes_per_cell,
                )
            })
            .collect()
    }
}

/// A cross-table plus match logs for the first few episodes of each cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossTableRun {
    pub table: CrossTable,
    pub logs: Vec<MatchLogRecord>,
}

/// Plays every ordered pair of bots (self-pairs included) for
/// `episodes_per_cell` episodes seeded by
/// `derive_episode_seed(seed, row.id, col.id, e)`. Cells are filled by
/// index, so the result is bit-identical for every worker count.
pub fn cross_table(
    pop: &Population,
    episodes_per_cell: u64,
    cfg: &EpisodeConfig,
    seed: u64,
    workers: usize,
) -> Result<CrossTable, PbeError> {
    Ok(cross_table_logged(pop, episodes_per_cell, cfg, seed, workers, 0)?.table)
}

/// [`cross_table`] that also keeps match logs for episodes
/// `0..log_episodes` of every cell, in row-major order.
pub fn cross_table_logged(
    pop: &Population,
    episodes_per_cell: u64,
    cfg: &EpisodeConfig,
    seed: u64,
    workers: usize,
    log_episodes: u64,
) -> Result<CrossTableRun, PbeError> {
    if episodes_per_cell == 0 {
        return Err(PbeError::NoEpisodes);
    }
    let bots = pop.specs();
    let n = bots.len();
    let cells = in_pool(workers, || {
        (0..n * n)
            .into_par_iter()
            .map(|cell| {
                let (row, col) = (&bots[cell / n], &bots[cell % n]);
                let mut a = row.instantiate();
                let mut b = col.instantiate();
                let mut returns = Vec::with_capacity(episodes_per_cell as usize);
                let mut logs = Vec::new();
                for e in 0..episodes_per_cell {
                    let s = derive_episode_seed(seed, row.id, col.id, e);
                    let r = play_episode(&mut a, &mut b, cfg, s)?;
                    returns.push(r.return0 as f64);
                    if e < log_episodes {
                        logs.push(MatchLogRecord::from_result(row.id, col.id, e, s, &r));
                    }
                }
                Ok((Estimate::from_samples(&returns), logs))
            })
            .collect::<Result<Vec<_>, EpisodeError>>()
    })??;
    let mut means = vec![vec![0.0; n]; n];
    let mut stderrs = vec![vec![0.0; n]; n];
    let mut logs = Vec::new();
    for (cell, (est, cell_logs)) in cells.into_iter().enumerate() {
        means[cell / n][cell % n] = est.mean;
        stderrs[cell / n][cell % n] = est.stderr;
        logs.extend(cell_logs);
    }
    let table = CrossTable {
        names: bots.iter().map(|b| b.name.clone()).collect(),
        ids: bots.iter().map(|b| b.id).collect(),
        episodes_per_cell,
        seed,
        means,
        stderrs,
    };
    Ok(CrossTableRun { table, logs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub rank: usize,
    pub name: String,
    pub pop_return: f64,
    pub wp_expl: f64,
    pub agg_score: f64,
}

/// Sorts by aggregate score, highest first, ties by name.
pub fn rank_population(records: &[MetricsRecord]) -> Vec<RankRow> {
    let mut sorted: Vec<&MetricsRecord> = records.iter().collect();
    sorted.sort_by(|a, b| b.agg_score.total_cmp(&a.agg_score).then_with(|| a.name.cmp(&b.name)));
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, r)| RankRow {
            rank: i + 1,
            name: r.name.clone(),
            pop_return: r.pop_return,
            wp_expl: r.wp_expl,
            agg_score: r.agg_score,
        })
        .collect()
}

pub fn write_ranking_csv<W: Write>(w: W, rows: &[RankRow]) -> Result<(), PbeError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["rank", "name", "pop_return", "wp_expl", "agg_score"])?;
    for r in rows {
        out.write_record([
            r.rank.to_string(),
            r.name.clone(),
            format!("{:.6}", r.pop_return),
            format!("{:.6}", r.wp_expl),
            format!("{:.6}", r.agg_score),
        ])?;
    }
    out.flush()?;
    Ok(())
}

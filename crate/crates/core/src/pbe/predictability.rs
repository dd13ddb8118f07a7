//! How predictable each bot is: accuracy of an online order-k Markov
//! argmax predictor of the bot's own moves, per co-player.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{in_pool, PbeError};
use crate::bots::{MarkovModel, Population};
use crate::engine::{derive_episode_seed, play_episode, EpisodeConfig, EpisodeError};

pub const MAX_PREDICTOR_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictabilityMatrix {
    pub names: Vec<String>,
    pub order: usize,
    pub episodes: u64,
    pub seed: u64,
    /// `accuracy[row][col]`: share of the row bot's moves predicted
    /// correctly while it plays the column bot.
    pub accuracy: Vec<Vec<f64>>,
}

impl PredictabilityMatrix {
    pub fn row(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| self.accuracy[i].as_slice())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), PbeError> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![String::new()];
        header.extend(self.names.iter().cloned());
        out.write_record(&header)?;
        for (name, row) in self.names.iter().zip(&self.accuracy) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(|v| format!("{v:.6}")));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// The predictor restarts every episode and sees only the row bot's past
/// moves; ties in its prediction go to the lowest action.
pub fn predictability_matrix(
    pop: &Population,
    order: usize,
    episodes: u64,
    cfg: &EpisodeConfig,
    seed: u64,
    workers: usize,
) -> Result<PredictabilityMatrix, PbeError> {
    if episodes == 0 {
        return Err(PbeError::NoEpisodes);
    }
    if order > MAX_PREDICTOR_ORDER {
        return Err(PbeError::OrderTooLarge(order));
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
                let mut model = MarkovModel::new(order, 1.0, 1.0);
                let (mut hits, mut total) = (0u64, 0u64);
                for e in 0..episodes {
                    let r = play_episode(&mut a, &mut b, cfg, derive_episode_seed(seed, row.id, col.id, e))?;
                    model.reset();
                    for m in r.actions.own_actions() {
                        hits += (model.predict().argmax() == m) as u64;
                        total += 1;
                        model.push(m);
                    }
                }
                Ok(hits as f64 / total as f64)
            })
            .collect::<Result<Vec<f64>, EpisodeError>>()
    })??;
    Ok(PredictabilityMatrix {
        names: bots.iter().map(|b| b.name.clone()).collect(),
        order,
        episodes,
        seed,
        accuracy: cells.chunks(n).map(<[f64]>::to_vec).collect(),
    })
}

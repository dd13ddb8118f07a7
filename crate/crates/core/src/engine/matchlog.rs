use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::action::{payoff, Action};
use super::episode::EpisodeResult;

/// One episode as a JSON line. The action strings are replay material:
/// folding them through [`payoff`] reproduces `return0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchLogRecord {
    pub row_id: u64,
    pub col_id: u64,
    pub episode_index: u64,
    pub seed: u64,
    pub actions0: String,
    pub actions1: String,
    pub return0: i64,
}

#[derive(Debug, thiserror::Error)]
pub enum MatchLogError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
    #[error("record has action strings of different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("invalid action character {0:?}")]
    BadAction(char),
    #[error("replayed return {replayed} does not match recorded {recorded}")]
    ReturnMismatch { replayed: i64, recorded: i64 },
}

impl MatchLogRecord {
    pub fn from_result(row_id: u64, col_id: u64, episode_index: u64, seed: u64, result: &EpisodeResult) -> Self {
        let actions0 = result.actions.own_actions().map(Action::as_char).collect();
        let actions1 = result.actions.opp_actions().map(Action::as_char).collect();
        MatchLogRecord { row_id, col_id, episode_index, seed, actions0, actions1, return0: result.return0 }
    }

    /// Recomputes seat 0's return from the action strings.
    pub fn replay(&self) -> Result<i64, MatchLogError> {
        if self.actions0.len() != self.actions1.len() {
            return Err(MatchLogError::LengthMismatch(self.actions0.len(), self.actions1.len()));
        }
        let mut total = 0i64;
        for (c0, c1) in self.actions0.chars().zip(self.actions1.chars()) {
            let a0 = Action::from_char(c0).ok_or(MatchLogError::BadAction(c0))?;
            let a1 = Action::from_char(c1).ok_or(MatchLogError::BadAction(c1))?;
            total += payoff(a0, a1).0 as i64;
        }
        Ok(total)
    }

    pub fn verify(&self) -> Result<(), MatchLogError> {
        let replayed = self.replay()?;
        if replayed != self.return0 {
            return Err(MatchLogError::ReturnMismatch { replayed, recorded: self.return0 });
        }
        Ok(())
    }
}

pub fn write_records<W: Write>(mut w: W, records: &[MatchLogRecord]) -> Result<(), MatchLogError> {
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| MatchLogError::Io(e.into()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_records<R: BufRead>(r: R) -> Result<Vec<MatchLogRecord>, MatchLogError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|source| MatchLogError::Parse { line: i + 1, source })?;
        out.push(rec);
    }
    Ok(out)
}

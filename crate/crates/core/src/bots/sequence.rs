//! Bots that ignore the opponent and replay a fixed move sequence.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::engine::{Action, ActionDistribution, History, JointAction, Policy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceSource {
    /// R, P, S, R, ...: one step past the bot's own previous move.
    Rotate,
    /// Decimal digits of pi, each taken mod 3.
    PiDigits,
    /// The lexicographically least ternary de Bruijn sequence of order 4.
    DeBruijn81,
    /// Bytes of an embedded ASCII text, each taken mod 3.
    Text,
}

/// Text replayed by the `Text` source.
pub const TEXTBOT_TEXT: &str = "Repeated Rock-Paper-Scissors bot population. Every bot plays a match of one thousand \
turns against every other bot, seeing the full move history of the match so far and nothing else. Rock beats \
scissors, paper beats rock and scissors beats paper; a match is scored as wins minus losses.";

const PI_DIGITS: usize = 1200;

/// First `n` decimal digits of pi (3, 1, 4, 1, 5, ...) by the
/// Rabinowitz-Wagon spigot.
pub fn pi_digits(n: usize) -> Vec<u8> {
    let len = n * 10 / 3 + 2;
    let mut a = vec![2u64; len];
    let mut out = Vec::with_capacity(n + 2);
    let mut nines = 0usize;
    let mut predigit: Option<u64> = None;
    while out.len() < n + 1 {
        let mut q = 0u64;
        for i in (1..=len).rev() {
            let x = 10 * a[i - 1] + q * i as u64;
            let d = 2 * i as u64 - 1;
            a[i - 1] = x % d;
            q = x / d;
        }
        a[0] = q % 10;
        q /= 10;
        match q {
            9 => nines += 1,
            10 => {
                if let Some(p) = predigit {
                    out.push((p + 1) as u8);
                }
                out.extend(std::iter::repeat_n(0, nines));
                predigit = Some(0);
                nines = 0;
            }
            _ => {
                if let Some(p) = predigit {
                    out.push(p as u8);
                }
                out.extend(std::iter::repeat_n(9, nines));
                predigit = Some(q);
                nines = 0;
            }
        }
    }
    out.truncate(n);
    out
}

/// Lexicographically least de Bruijn sequence over `k` symbols with
/// window `n` (Fredricksen-Kessler-Maiorana).
pub fn de_bruijn(k: usize, n: usize) -> Vec<u8> {
    fn rec(t: usize, p: usize, k: usize, n: usize, a: &mut [u8], out: &mut Vec<u8>) {
        if t > n {
            if n.is_multiple_of(p) {
                out.extend_from_slice(&a[1..=p]);
            }
        } else {
            a[t] = a[t - p];
            rec(t + 1, p, k, n, a, out);
            for j in (a[t - p] as usize + 1)..k {
                a[t] = j as u8;
                rec(t + 1, t, k, n, a, out);
            }
        }
    }
    let mut a = vec![0u8; n + 1];
    let mut out = Vec::with_capacity(k.pow(n as u32));
    rec(1, 1, k, n, &mut a, &mut out);
    out
}

fn to_actions(symbols: impl IntoIterator<Item = u8>) -> Vec<Action> {
    symbols.into_iter().map(|s| Action::from_index(s as usize)).collect()
}

fn table(source: SequenceSource) -> &'static [Action] {
    static PI: OnceLock<Vec<Action>> = OnceLock::new();
    static DB: OnceLock<Vec<Action>> = OnceLock::new();
    static TEXT: OnceLock<Vec<Action>> = OnceLock::new();
    match source {
        SequenceSource::Rotate => &[Action::Rock, Action::Paper, Action::Scissors],
        SequenceSource::PiDigits => PI.get_or_init(|| to_actions(pi_digits(PI_DIGITS))),
        SequenceSource::DeBruijn81 => DB.get_or_init(|| to_actions(de_bruijn(3, 4))),
        SequenceSource::Text => TEXT.get_or_init(|| to_actions(TEXTBOT_TEXT.bytes())),
    }
}

#[derive(Debug, Clone)]
pub struct SequenceBot {
    source: SequenceSource,
    moves: &'static [Action],
}

impl SequenceBot {
    pub fn new(source: SequenceSource) -> Self {
        SequenceBot { source, moves: table(source) }
    }

    /// Move at step `t` of the cycled sequence.
    pub fn move_at(&self, t: usize) -> Action {
        self.moves[t % self.moves.len()]
    }
}

impl Policy for SequenceBot {
    fn reset(&mut self) {}

    fn distribution(&mut self, history: &History) -> ActionDistribution {
        let next = match (self.source, history.last()) {
            (SequenceSource::Rotate, Some(last)) => last.mine.beat(),
            _ => self.move_at(history.len()),
        };
        ActionDistribution::point(next)
    }

    fn observe(&mut self, _joint: JointAction, _reward: i32) {}
}

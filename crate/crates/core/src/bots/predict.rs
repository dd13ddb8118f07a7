//! Opponent-modeling primitives shared by the predictor bots: an
//! order-k Markov model over the opponent's moves and suffix
//! (history) matching over one of three channels.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use serde::{Deserialize, Serialize};

use crate::engine::{Action, ActionDistribution, History, JointAction, ACTIONS};

/// Laplace-smoothed conditional distribution of the next opponent move
/// given its last `order` moves, counted over the whole sequence. Unseen
/// contexts and too-short sequences give uniform.
pub fn markov_predict(opp: &[Action], order: usize, smoothing: f64) -> ActionDistribution {
    debug_assert!(smoothing > 0.0);
    let n = opp.len();
    if n < order {
        return ActionDistribution::UNIFORM;
    }
    let context = &opp[n - order..];
    let mut counts = [0.0f64; 3];
    for i in order..n {
        if &opp[i - order..i] == context {
            counts[opp[i].index()] += 1.0;
        }
    }
    let total: f64 = counts.iter().sum();
    let denom = total + 3.0 * smoothing;
    ActionDistribution::from_weights([
        (counts[0] + smoothing) / denom,
        (counts[1] + smoothing) / denom,
        (counts[2] + smoothing) / denom,
    ])
}

/// Incremental version of [`markov_predict`] with optional exponential
/// forgetting of counts (`decay = 1` keeps everything).
#[derive(Debug, Clone)]
pub struct MarkovModel {
    order: usize,
    smoothing: f64,
    decay: f64,
    modulus: usize,
    context: usize,
    seen: usize,
    clock: u64,
    counts: Vec<[f64; 3]>,
    touched: Vec<u64>,
}

impl MarkovModel {
    pub fn new(order: usize, smoothing: f64, decay: f64) -> Self {
        let modulus = 3usize.pow(order as u32);
        MarkovModel {
            order,
            smoothing,
            decay,
            modulus,
            context: 0,
            seen: 0,
            clock: 0,
            counts: vec![[0.0; 3]; modulus],
            touched: vec![0; modulus],
        }
    }

    pub fn reset(&mut self) {
        self.context = 0;
        self.seen = 0;
        self.clock = 0;
        self.counts.iter_mut().for_each(|c| *c = [0.0; 3]);
        self.touched.iter_mut().for_each(|t| *t = 0);
    }

    fn row(&mut self, ctx: usize) -> &mut [f64; 3] {
        if self.decay < 1.0 {
            let age = self.clock - self.touched[ctx];
            if age > 0 {
                let f = self.decay.powi(age.min(i32::MAX as u64) as i32);
                self.counts[ctx].iter_mut().for_each(|c| *c *= f);
            }
            self.touched[ctx] = self.clock;
        }
        &mut self.counts[ctx]
    }

    pub fn push(&mut self, a: Action) {
        self.clock += 1;
        if self.seen >= self.order {
            let ctx = self.context;
            self.row(ctx)[a.index()] += 1.0;
        }
        if self.order > 0 {
            self.context = (self.context * 3 + a.index()) % self.modulus;
        }
        self.seen += 1;
    }

    pub fn predict(&mut self) -> ActionDistribution {
        if self.seen < self.order {
            return ActionDistribution::UNIFORM;
        }
        let s = self.smoothing;
        let ctx = self.context;
        let c = *self.row(ctx);
        let denom = c.iter().sum::<f64>() + 3.0 * s;
        ActionDistribution::from_weights([(c[0] + s) / denom, (c[1] + s) / denom, (c[2] + s) / denom])
    }
}

/// Which projection of the history a suffix match runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Own,
    Opp,
    Joint,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Opp, Channel::Own, Channel::Joint];

    fn symbol(self, j: JointAction) -> u8 {
        match self {
            Channel::Own => j.mine.index() as u8,
            Channel::Opp => j.theirs.index() as u8,
            Channel::Joint => j.index() as u8,
        }
    }

    fn base(self) -> u128 {
        match self {
            Channel::Joint => 9,
            _ => 3,
        }
    }

    /// The action a match on this channel predicts: our own next move for
    /// `Own`, the opponent's otherwise.
    fn predicted(self, j: JointAction) -> Action {
        match self {
            Channel::Own => j.mine,
            _ => j.theirs,
        }
    }
}

/// Longest suffix (at most `max_window` long) of the chosen channel that
/// also ends somewhere earlier; returns the action that followed the most
/// recent such occurrence and the suffix length, or `(None, 0)`.
///
/// Reference implementation by direct scanning.
pub fn history_match(h: &History, channel: Channel, max_window: usize) -> (Option<Action>, usize) {
    match match_position(h, channel, max_window) {
        Some((pos, len)) => (Some(channel.predicted(h[pos])), len),
        None => (None, 0),
    }
}

/// Index of the step that followed the matched occurrence, with its length.
pub fn match_position(h: &History, channel: Channel, max_window: usize) -> Option<(usize, usize)> {
    let seq: Vec<u8> = h.iter().map(|j| channel.symbol(j)).collect();
    let n = seq.len();
    if n < 2 {
        return None;
    }
    for len in (1..=max_window.min(n - 1)).rev() {
        let suffix = &seq[n - len..];
        for end in (len - 1..=n - 2).rev() {
            if &seq[end + 1 - len..=end] == suffix {
                return Some((end + 1, len));
            }
        }
    }
    None
}

/// Multiply-rotate hasher for the integer suffix keys.
#[derive(Default, Clone, Copy)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn write_u128(&mut self, v: u128) {
        self.write_u64(v as u64);
        self.write_u64((v >> 64) as u64);
    }
}

type KeyMap = HashMap<u128, usize, BuildHasherDefault<KeyHasher>>;

/// Incremental suffix matcher: hashes every suffix of length
/// `1..=max_window` ending at each position, so each push costs
/// `O(max_window)` instead of a scan of the whole history.
#[derive(Debug, Clone)]
pub struct SuffixIndex {
    channel: Channel,
    max_window: usize,
    seq: Vec<u8>,
    // by_len[l - 1]: suffix key of length l -> most recent end index
    by_len: Vec<KeyMap>,
    // follower index of the most recent match, per length up to the longest
    matches: Vec<usize>,
}

/// Longest window a `u128` key can hold for the joint channel.
pub const MAX_MATCH_WINDOW: usize = 40;

impl SuffixIndex {
    pub fn new(channel: Channel, max_window: usize) -> Self {
        let max_window = max_window.clamp(1, MAX_MATCH_WINDOW);
        SuffixIndex {
            channel,
            max_window,
            seq: Vec::new(),
            by_len: vec![KeyMap::default(); max_window],
            matches: Vec::with_capacity(max_window),
        }
    }

    pub fn reset(&mut self) {
        self.seq.clear();
        self.by_len.iter_mut().for_each(HashMap::clear);
        self.matches.clear();
    }

    pub fn push(&mut self, j: JointAction) {
        self.seq.push(self.channel.symbol(j));
        let n = self.seq.len();
        let base = self.channel.base();
        if n >= 2 {
            // the step at n - 2 now has a follower
            let end = n - 2;
            let mut key = 0u128;
            let mut scale = 1u128;
            for len in 1..=self.max_window.min(end + 1) {
                key += self.seq[end + 1 - len] as u128 * scale;
                scale *= base;
                self.by_len[len - 1].insert(key, end);
            }
        }
        self.matches.clear();
        let mut key = 0u128;
        let mut scale = 1u128;
        for len in 1..=self.max_window.min(n.saturating_sub(1)) {
            key += self.seq[n - len] as u128 * scale;
            scale *= base;
            match self.by_len[len - 1].get(&key) {
                Some(&end) => self.matches.push(end + 1),
                None => break,
            }
        }
    }

    /// `(follower index, length)` of the longest match no longer than `window`.
    pub fn lookup(&self, window: usize) -> Option<(usize, usize)> {
        let len = window.min(self.matches.len());
        if len == 0 {
            None
        } else {
            Some((self.matches[len - 1], len))
        }
    }

    pub fn longest(&self) -> usize {
        self.matches.len()
    }
}

/// Most frequent action by weight, lowest index on ties; `None` when all
/// weights are zero.
pub fn most_frequent(counts: &[f64; 3]) -> Option<Action> {
    if counts.iter().all(|&c| c <= 0.0) {
        return None;
    }
    let mut best = Action::Rock;
    for a in ACTIONS {
        if counts[a.index()] > counts[best.index()] {
            best = a;
        }
    }
    Some(best)
}

/// Least frequent action, lowest index on ties.
pub fn least_frequent(counts: &[f64; 3]) -> Action {
    let mut best = Action::Rock;
    for a in ACTIONS {
        if counts[a.index()] < counts[best.index()] {
            best = a;
        }
    }
    best
}

/// Best response to a predicted opponent distribution as a point mass,
/// or uniform when every response is equally good.
pub fn respond_to(pred: &ActionDistribution) -> ActionDistribution {
    let vals = ACTIONS.map(|a| pred.value_of(a));
    let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
    if spread < 1e-12 {
        ActionDistribution::UNIFORM
    } else {
        ActionDistribution::point(pred.best_response())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::*;

    fn opp_history(opp: &[Action]) -> History {
        opp.iter().map(|&o| JointAction::new(Rock, o)).collect::<Vec<_>>().into()
    }

    fn close(a: ActionDistribution, b: [f64; 3]) -> bool {
        a.probs().iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn markov_examples() {
        let d = markov_predict(&[Rock, Paper, Rock, Paper, Rock], 1, 1.0);
        assert!(close(d, [0.2, 0.6, 0.2]), "{d:?}");
        assert!(close(markov_predict(&[], 2, 1.0), [1.0 / 3.0; 3]));
        let rocks = vec![Rock; 100];
        let d = markov_predict(&rocks, 1, 1.0);
        assert!((d.prob(Rock) - 100.0 / 102.0).abs() < 1e-12);
        assert!(d.prob(Rock) >= 0.97);
    }

    #[test]
    fn markov_model_matches_batch() {
        let seq: Vec<Action> = (0..200).map(|i| Action::from_index((i * i + i / 3) % 7)).collect();
        for order in 0..4 {
            let mut m = MarkovModel::new(order, 0.5, 1.0);
            for t in 0..seq.len() {
                let a = m.predict();
                let b = markov_predict(&seq[..t], order, 0.5);
                assert!(close(a, b.probs()), "order {order} t {t}");
                m.push(seq[t]);
            }
        }
    }

    #[test]
    fn history_match_examples() {
        let h = opp_history(&[Rock, Paper, Scissors, Rock, Paper]);
        assert_eq!(history_match(&h, Channel::Opp, 10), (Some(Scissors), 2));
        assert_eq!(history_match(&History::new(), Channel::Opp, 10), (None, 0));
        let h = opp_history(&[Rock, Rock, Rock, Rock]);
        assert_eq!(history_match(&h, Channel::Opp, 10).0, Some(Rock));
        assert_eq!(history_match(&h, Channel::Opp, 10).1, 3);
        assert_eq!(history_match(&h, Channel::Opp, 2), (Some(Rock), 2));
        let h = opp_history(&[Rock, Paper, Scissors]);
        assert_eq!(history_match(&h, Channel::Opp, 5), (None, 0));
    }

    #[test]
    fn suffix_index_matches_scan() {
        let steps: Vec<JointAction> =
            (0..300).map(|i| JointAction::from_index(((i * 7) ^ (i / 5)) % 9)).collect();
        for channel in Channel::ALL {
            let mut idx = SuffixIndex::new(channel, 12);
            let mut h = History::new();
            for &j in &steps {
                h.push(j);
                idx.push(j);
                for w in [1, 2, 5, 12] {
                    assert_eq!(idx.lookup(w), match_position(&h, channel, w), "{channel:?} w={w} n={}", h.len());
                }
            }
        }
    }

    #[test]
    fn frequency_helpers() {
        assert_eq!(most_frequent(&[10.0, 5.0, 3.0]), Some(Rock));
        assert_eq!(most_frequent(&[1.0, 5.0, 5.0]), Some(Paper));
        assert_eq!(most_frequent(&[0.0; 3]), None);
        assert_eq!(least_frequent(&[1.0, 0.0, 0.0]), Paper);
        assert_eq!(respond_to(&ActionDistribution::UNIFORM), ActionDistribution::UNIFORM);
        assert_eq!(respond_to(&ActionDistribution::point(Scissors)), ActionDistribution::point(Rock));
    }
}

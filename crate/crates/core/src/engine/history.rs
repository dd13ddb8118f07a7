use std::ops::Index;

use super::action::{Action, JointAction};

/// Digit used for recall slots that precede the start of the episode.
pub const SENTINEL_DIGIT: u64 = 9;

/// Largest recall whose code fits in a `u64`.
pub const MAX_ENCODABLE_RECALL: usize = 19;

/// Joint actions of the current episode, oldest first, from one seat.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    steps: Vec<JointAction>,
}

impl History {
    pub fn new() -> Self {
        History { steps: Vec::new() }
    }

    pub fn with_capacity(n: usize) -> Self {
        History { steps: Vec::with_capacity(n) }
    }

    pub fn push(&mut self, j: JointAction) {
        self.steps.push(j);
    }

    pub fn clear(&mut self) {
        self.steps.clear();
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> Option<JointAction> {
        self.steps.last().copied()
    }

    pub fn steps(&self) -> &[JointAction] {
        &self.steps
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = JointAction> + ExactSizeIterator + '_ {
        self.steps.iter().copied()
    }

    pub fn own_actions(&self) -> impl DoubleEndedIterator<Item = Action> + '_ {
        self.steps.iter().map(|j| j.mine)
    }

    pub fn opp_actions(&self) -> impl DoubleEndedIterator<Item = Action> + '_ {
        self.steps.iter().map(|j| j.theirs)
    }

    /// The same history seen from the other seat.
    pub fn flipped(&self) -> History {
        History { steps: self.steps.iter().map(|j| j.flipped()).collect() }
    }
}

impl From<Vec<JointAction>> for History {
    fn from(steps: Vec<JointAction>) -> Self {
        History { steps }
    }
}

impl Index<usize> for History {
    type Output = JointAction;

    fn index(&self, i: usize) -> &JointAction {
        &self.steps[i]
    }
}

/// Base-10 code of the `recall` most recent joint actions: the most recent
/// in the lowest digit, digit 9 where the episode has not reached back that
/// far. `recall == 0` always gives 0.
pub fn encode_observation(h: &History, recall: usize) -> u64 {
    debug_assert!(recall <= MAX_ENCODABLE_RECALL);
    let mut code = 0u64;
    let mut scale = 1u64;
    let mut recent = h.steps.iter().rev();
    for _ in 0..recall {
        let digit = recent.next().map_or(SENTINEL_DIGIT, |j| j.index() as u64);
        code += digit * scale;
        scale = scale.wrapping_mul(10);
    }
    code
}

/// Code after appending `j` to a history whose code was `code`.
#[inline]
pub fn shift_observation(code: u64, j: JointAction, recall: usize) -> u64 {
    if recall == 0 {
        return 0;
    }
    let modulus = 10u64.pow(recall as u32 - 1);
    (code % modulus) * 10 + j.index() as u64
}

/// Number of distinct codes for a recall (`10^recall`).
pub fn observation_space(recall: usize) -> u64 {
    10u64.pow(recall as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Action::*;

    #[test]
    fn encoding_examples() {
        let h: History = vec![JointAction::new(Rock, Paper)].into();
        assert_eq!(encode_observation(&h, 1), 1);
        assert_eq!(encode_observation(&History::new(), 1), 9);
        let h: History = vec![JointAction::new(Rock, Rock), JointAction::new(Scissors, Paper)].into();
        assert_eq!(encode_observation(&h, 2), 7);
        assert_eq!(encode_observation(&h, 0), 0);
        assert_eq!(encode_observation(&History::new(), 3), 999);
        assert_eq!(encode_observation(&h, 3), 907);
    }

    #[test]
    fn shift_matches_encode() {
        let mut h = History::new();
        for r in 0..5 {
            let mut code = encode_observation(&h, r);
            let mut hh = h.clone();
            for i in 0..12 {
                let j = JointAction::from_index((i * 7 + r) % 9);
                code = shift_observation(code, j, r);
                hh.push(j);
                assert_eq!(code, encode_observation(&hh, r));
            }
        }
        h.push(JointAction::new(Paper, Paper));
        assert_eq!(encode_observation(&h, 1), 4);
    }
}

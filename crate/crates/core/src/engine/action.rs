use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the three stage-game moves. The discriminant doubles as the
/// tie-breaking order used everywhere in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Action {
    #[serde(rename = "R")]
    Rock = 0,
    #[serde(rename = "P")]
    Paper = 1,
    #[serde(rename = "S")]
    Scissors = 2,
}

pub const ACTIONS: [Action; 3] = [Action::Rock, Action::Paper, Action::Scissors];

impl Action {
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Maps any integer onto an action modulo 3.
    #[inline]
    pub fn from_index(i: usize) -> Action {
        ACTIONS[i % 3]
    }

    /// The move that beats `self`.
    #[inline]
    pub fn beat(self) -> Action {
        Action::from_index(self.index() + 1)
    }

    /// The move that `self` beats.
    #[inline]
    pub fn loses_to(self) -> Action {
        Action::from_index(self.index() + 2)
    }

    pub fn as_char(self) -> char {
        match self {
            Action::Rock => 'R',
            Action::Paper => 'P',
            Action::Scissors => 'S',
        }
    }

    pub fn from_char(c: char) -> Option<Action> {
        match c.to_ascii_uppercase() {
            'R' => Some(Action::Rock),
            'P' => Some(Action::Paper),
            'S' => Some(Action::Scissors),
            _ => None,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Stage-game rewards `(r0, r1)` for player 0 playing `a0` against `a1`.
#[inline]
pub fn payoff(a0: Action, a1: Action) -> (i32, i32) {
    let r0 = match (3 + a0.index() - a1.index()) % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    };
    (r0, -r0)
}

/// A step's pair of moves, seen from one player's seat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JointAction {
    pub mine: Action,
    pub theirs: Action,
}

impl JointAction {
    pub fn new(mine: Action, theirs: Action) -> Self {
        JointAction { mine, theirs }
    }

    /// `3 * mine + theirs`, in `0..9`.
    #[inline]
    pub fn index(self) -> usize {
        3 * self.mine.index() + self.theirs.index()
    }

    pub fn from_index(i: usize) -> Self {
        JointAction::new(Action::from_index(i / 3), Action::from_index(i % 3))
    }

    /// The same step from the opponent's seat.
    #[inline]
    pub fn flipped(self) -> Self {
        JointAction::new(self.theirs, self.mine)
    }

    /// Reward earned by the `mine` side.
    #[inline]
    pub fn reward(self) -> i32 {
        payoff(self.mine, self.theirs).0
    }
}

//! History experts for recall 1: besides the three actions, six arms
//! suggest the opponent's last move `o`, our last move `u`, `beat(o)`,
//! `beat(u)`, `loses_to(o)` and `loses_to(u)`.

use crate::engine::{Action, ActionDistribution, History, ACTIONS};

pub const EXPERT_ARMS: usize = 9;

/// Suggested distribution per arm. With no previous step the six history
/// experts suggest uniform play.
pub fn expert_suggestions(h: &History) -> [ActionDistribution; EXPERT_ARMS] {
    let mut arms = [ActionDistribution::UNIFORM; EXPERT_ARMS];
    for a in ACTIONS {
        arms[a.index()] = ActionDistribution::point(a);
    }
    if let Some(last) = h.last() {
        let (o, u) = (last.theirs, last.mine);
        let picks: [Action; 6] = [o, u, o.beat(), u.beat(), o.loses_to(), u.loses_to()];
        for (slot, a) in arms[3..].iter_mut().zip(picks) {
            *slot = ActionDistribution::point(a);
        }
    }
    arms
}

/// Action distribution induced by a distribution over arms.
pub fn combine(weights: &[f64], arms: &[ActionDistribution]) -> ActionDistribution {
    let mut p = [0.0; 3];
    for (w, d) in weights.iter().zip(arms) {
        for a in ACTIONS {
            p[a.index()] += w * d.prob(a);
        }
    }
    ActionDistribution::from_weights(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::JointAction;
    use Action::*;

    fn suggested(h: &History) -> Vec<Action> {
        expert_suggestions(h)[3..].iter().map(|d| d.argmax()).collect()
    }

    #[test]
    fn expert_algebra() {
        let h: History = vec![JointAction::new(Rock, Scissors)].into();
        assert_eq!(suggested(&h), vec![Scissors, Rock, Rock, Paper, Paper, Scissors]);
        let h: History = vec![JointAction::new(Paper, Paper)].into();
        assert_eq!(suggested(&h), vec![Paper, Paper, Scissors, Scissors, Rock, Rock]);
        let empty = expert_suggestions(&History::new());
        assert!(empty[3..].iter().all(|d| *d == ActionDistribution::UNIFORM));
        assert_eq!(empty[1], ActionDistribution::point(Paper));
    }
}

use std::collections::BTreeMap;

use super::learner::{Learner, RegretAlgorithm};

/// Independent learners keyed by observation code, created on first use.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextTable {
    algorithm: RegretAlgorithm,
    arms: usize,
    instances: BTreeMap<u64, Learner>,
}

impl ContextTable {
    pub fn new(algorithm: RegretAlgorithm, arms: usize) -> Self {
        ContextTable { algorithm, arms, instances: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn clear(&mut self) {
        self.instances.clear();
    }

    pub fn get(&self, context: u64) -> Option<&Learner> {
        self.instances.get(&context)
    }

    fn entry(&mut self, context: u64) -> &mut Learner {
        let (algorithm, arms) = (self.algorithm, self.arms);
        self.instances.entry(context).or_insert_with(|| Learner::new(algorithm, arms))
    }

    /// Average policy of the instance for `context`, uniform if unseen.
    pub fn average_policy(&self, context: u64) -> Vec<f64> {
        self.instances
            .get(&context)
            .map_or_else(|| vec![1.0 / self.arms as f64; self.arms], Learner::average_policy)
    }

    pub fn policy(&mut self, context: u64) -> Vec<f64> {
        self.entry(context).policy()
    }

    pub fn update(&mut self, context: u64, u: &[f64]) {
        self.entry(context).update(u);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contexts_are_isolated() {
        let mut table = ContextTable::new(RegretAlgorithm::RmPlus, 3);
        let mut alone_a = Learner::new(RegretAlgorithm::RmPlus, 3);
        let mut alone_b = Learner::new(RegretAlgorithm::RmPlus, 3);
        let feed = [[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [-1.0, 0.0, 1.0]];
        for t in 0..30 {
            let u = feed[t % 3];
            if t % 2 == 0 {
                table.policy(1);
                table.update(1, &u);
                alone_a.policy();
                alone_a.update(&u);
            } else {
                table.policy(7);
                table.update(7, &u);
                alone_b.policy();
                alone_b.update(&u);
            }
        }
        assert_eq!(table.len(), 2);
        assert_eq!(table.get(1), Some(&alone_a));
        assert_eq!(table.get(7), Some(&alone_b));
    }
}

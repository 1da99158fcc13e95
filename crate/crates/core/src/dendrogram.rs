//! Merge history as a binary forest over community ids.
//!
//! Leaves are the singleton communities `0..n`; the merge at step `s`
//! (1-based) creates community `n + s - 1`.

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::modularity::{Partition, ScaledQ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Merge {
    pub step: u32,
    pub left: u32,
    pub right: u32,
    pub new: u32,
    pub dq: ScaledQ,
    pub q_after: ScaledQ,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn new(n: usize) -> Self {
        Dendrogram {
            n,
            merges: Vec::new(),
        }
    }

    /// Rebuilds a dendrogram from recorded merges, checking it is a forest
    /// whose ids follow the numbering rule.
    pub fn from_merges(n: usize, merges: Vec<Merge>) -> Result<Self, EngineError> {
        let total = n + merges.len();
        let mut used = vec![false; total];
        for (idx, mg) in merges.iter().enumerate() {
            let expected = (n + idx) as u32;
            if mg.step as usize != idx + 1 || mg.new != expected {
                return Err(EngineError::Invariant(format!(
                    "merge {} creates {} but {} was expected",
                    mg.step, mg.new, expected
                )));
            }
            for child in [mg.left, mg.right] {
                if child >= mg.new || used[child as usize] {
                    return Err(EngineError::Invariant(format!(
                        "merge {} reuses or forward-references community {child}",
                        mg.step
                    )));
                }
                used[child as usize] = true;
            }
            if mg.left == mg.right {
                return Err(EngineError::Invariant(format!(
                    "merge {} joins {} with itself",
                    mg.step, mg.left
                )));
            }
        }
        Ok(Dendrogram { n, merges })
    }

    pub(crate) fn push(&mut self, merge: Merge) {
        debug_assert_eq!(merge.new as usize, self.n + self.merges.len());
        self.merges.push(merge);
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn len(&self) -> usize {
        self.merges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.merges.is_empty()
    }

    /// Partition after the first `steps` merges. Each node is labelled with
    /// the id of the community holding it at that point.
    pub fn partition_after(&self, steps: usize) -> Partition {
        let steps = steps.min(self.merges.len());
        let mut parent: Vec<u32> = (0..(self.n + steps) as u32).collect();
        for mg in &self.merges[..steps] {
            parent[mg.left as usize] = mg.new;
            parent[mg.right as usize] = mg.new;
        }
        // parents always have larger ids, so a descending sweep resolves roots
        for id in (0..parent.len()).rev() {
            let p = parent[id] as usize;
            if p != id {
                parent[id] = parent[p];
            }
        }
        parent.truncate(self.n);
        Partition::from_labels(parent)
    }

    pub fn final_partition(&self) -> Partition {
        self.partition_after(self.merges.len())
    }

    /// Longest root-to-leaf path in the forest; a lone singleton has height 0.
    pub fn height(&self) -> u32 {
        let mut height = vec![0u32; self.n + self.merges.len()];
        let mut best = 0;
        for mg in &self.merges {
            let h = 1 + height[mg.left as usize].max(height[mg.right as usize]);
            height[mg.new as usize] = h;
            best = best.max(h);
        }
        best
    }

    /// Step (0 = before any merge) with the highest `q_after`, earliest on
    /// ties, given the starting modularity.
    pub fn peak(&self, q_initial: ScaledQ) -> (usize, ScaledQ) {
        let mut peak = (0, q_initial);
        for mg in &self.merges {
            if mg.q_after > peak.1 {
                peak = (mg.step as usize, mg.q_after);
            }
        }
        peak
    }
}

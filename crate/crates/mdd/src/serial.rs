use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::store::{NodeId, NodeStore, FALSE, TRUE};
use crate::{MddError, Result};

/// Store-independent node list for a group of roots.
///
/// Nodes are listed deepest slot first (and, within a slot, by descending
/// value) so every `down`/`right` reference points to an earlier entry.
/// Ids 0 and 1 denote the FALSE and TRUE terminals; entry `i` has id `i + 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedForest {
    pub nodes: Vec<[u32; 4]>,
    pub roots: Vec<u32>,
}

impl NodeStore {
    pub fn export_forest(&self, roots: &[NodeId]) -> SerializedForest {
        let mut seen = FxHashSet::default();
        let mut stack: Vec<NodeId> = roots.iter().copied().filter(|&r| r > TRUE).collect();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            let node = self.node(n);
            for c in [node.down, node.right] {
                if c > TRUE {
                    stack.push(c);
                }
            }
        }
        // canonical order: deepest slot first, then descending value, then by
        // the already numbered children
        let mut order: Vec<NodeId> = seen.into_iter().collect();
        order.sort_unstable_by(|&a, &b| {
            let (na, nb) = (self.node(a), self.node(b));
            (nb.slot, nb.value).cmp(&(na.slot, na.value))
        });
        let mut ids: FxHashMap<NodeId, u32> = FxHashMap::default();
        ids.insert(FALSE, 0);
        ids.insert(TRUE, 1);
        let mut start = 0;
        while start < order.len() {
            let key = |n: NodeId| {
                let x = self.node(n);
                (x.slot, x.value)
            };
            let k = key(order[start]);
            let end = start + order[start..].iter().take_while(|&&n| key(n) == k).count();
            order[start..end].sort_unstable_by_key(|&n| {
                let x = self.node(n);
                (ids[&x.down], ids[&x.right])
            });
            for (i, &n) in order[start..end].iter().enumerate() {
                ids.insert(n, (start + i) as u32 + 2);
            }
            start = end;
        }
        let nodes = order
            .iter()
            .map(|&n| {
                let node = self.node(n);
                [node.slot, node.value, ids[&node.down], ids[&node.right]]
            })
            .collect();
        SerializedForest {
            nodes,
            roots: roots.iter().map(|r| ids[r]).collect(),
        }
    }

    /// Rebuilds the forest in this store and returns the local root ids.
    pub fn import_forest(&mut self, forest: &SerializedForest) -> Result<Vec<NodeId>> {
        let mut local: Vec<NodeId> = vec![FALSE, TRUE];
        for (i, &[slot, value, down, right]) in forest.nodes.iter().enumerate() {
            let here = i as u32 + 2;
            if down >= here || right >= here {
                return Err(MddError::Malformed(format!(
                    "node {here} refers forward to {down}/{right}"
                )));
            }
            if down == FALSE {
                return Err(MddError::Malformed(format!("node {here} has an empty child")));
            }
            let (d, r) = (local[down as usize], local[right as usize]);
            if r != FALSE {
                let rn = self.node(r);
                if rn.slot != slot || rn.value <= value {
                    return Err(MddError::Malformed(format!("node {here} breaks sibling order")));
                }
            }
            if d != TRUE && self.node(d).slot != slot + 1 {
                return Err(MddError::Malformed(format!("node {here} skips a slot")));
            }
            local.push(self.mk(slot, value, d, r));
        }
        forest
            .roots
            .iter()
            .map(|&r| {
                local
                    .get(r as usize)
                    .copied()
                    .ok_or_else(|| MddError::Malformed(format!("root {r} out of range")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forest_round_trip_across_stores() {
        let mut a = NodeStore::new();
        let mut s = a.empty(3);
        for v in [[0, 1, 2], [0, 2, 2], [3, 1, 0]] {
            s = a.insert(s, &v).unwrap();
        }
        let forest = a.export_forest(&[s.root()]);
        let mut b = NodeStore::new();
        let roots = b.import_forest(&forest).unwrap();
        let mut t = b.empty(3);
        t.root = roots[0];
        assert_eq!(a.enumerate(s, 100), b.enumerate(t, 100));
    }

    #[test]
    fn rejects_forward_references() {
        let forest = SerializedForest {
            nodes: vec![[0, 0, 3, 0]],
            roots: vec![2],
        };
        assert!(NodeStore::new().import_forest(&forest).is_err());
    }
}

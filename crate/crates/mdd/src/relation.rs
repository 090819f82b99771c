use crate::store::{MddSet, NodeId, NodeStore, FALSE, TRUE};
use crate::{MddError, Result};

/// A transition relation over the dependent slots of one transition group.
///
/// The underlying diagram stores vectors `old_0, new_0, old_1, new_1, ...`
/// where `old_k`/`new_k` are the values of slot `deps[k]` before and after
/// the transition. Slots outside `deps` are copied by [`NodeStore::rel_next`]
/// and [`NodeStore::rel_prev`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRelation {
    deps: Vec<u32>,
    deps_id: u32,
    root: NodeId,
}

impl GroupRelation {
    pub fn deps(&self) -> &[u32] {
        &self.deps
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn is_empty(&self) -> bool {
        self.root == FALSE
    }

    /// The interleaved pairs as a set of width `2 * deps.len()`.
    pub fn as_set(&self) -> MddSet {
        MddSet {
            root: self.root,
            width: 2 * self.deps.len(),
        }
    }
}

impl NodeStore {
    /// An empty relation over the given (strictly ascending) slots.
    pub fn new_relation(&mut self, deps: &[u32]) -> GroupRelation {
        assert!(
            deps.windows(2).all(|w| w[0] < w[1]),
            "relation slots must be strictly ascending"
        );
        GroupRelation {
            deps: deps.to_vec(),
            deps_id: self.deps_id(deps),
            root: FALSE,
        }
    }

    /// Rebuilds a relation handle from a stored root, e.g. after deserialising.
    pub fn relation_from_root(&mut self, deps: &[u32], root: NodeId) -> GroupRelation {
        let mut r = self.new_relation(deps);
        r.root = root;
        r
    }

    fn interleave(old: &[u32], new: &[u32]) -> Vec<u32> {
        old.iter().zip(new).flat_map(|(&o, &n)| [o, n]).collect()
    }

    pub fn rel_insert(&mut self, r: &GroupRelation, old: &[u32], new: &[u32]) -> Result<GroupRelation> {
        let k = r.deps.len();
        for len in [old.len(), new.len()] {
            if len != k {
                return Err(MddError::Dimension {
                    expected: k,
                    actual: len,
                });
            }
        }
        let single = self.vector_root(&Self::interleave(old, new));
        Ok(GroupRelation {
            deps: r.deps.clone(),
            deps_id: r.deps_id,
            root: self.union_rec(r.root, single),
        })
    }

    /// Inserts many (old, new) pairs at once.
    pub fn rel_insert_all<'a>(
        &mut self,
        r: &GroupRelation,
        pairs: impl IntoIterator<Item = (&'a [u32], &'a [u32])>,
    ) -> Result<GroupRelation> {
        let k = r.deps.len();
        let mut data = Vec::new();
        let mut any = false;
        for (old, new) in pairs {
            any = true;
            for len in [old.len(), new.len()] {
                if len != k {
                    return Err(MddError::Dimension {
                        expected: k,
                        actual: len,
                    });
                }
            }
            data.extend(old.iter().zip(new).flat_map(|(&o, &n)| [o, n]));
        }
        let mut out = r.clone();
        if k == 0 {
            if any {
                out.root = TRUE;
            }
            return Ok(out);
        }
        let batch = self.rows_root(2 * k, &data);
        out.root = self.union_rec(r.root, batch);
        Ok(out)
    }

    pub fn rel_union(&mut self, a: &GroupRelation, b: &GroupRelation) -> GroupRelation {
        assert_eq!(a.deps, b.deps, "union of relations over different slots");
        GroupRelation {
            deps: a.deps.clone(),
            deps_id: a.deps_id,
            root: self.union_rec(a.root, b.root),
        }
    }

    /// All (old, new) pairs in lexicographic order of the interleaved vector.
    pub fn rel_enumerate(&self, r: &GroupRelation, limit: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
        self.enumerate(r.as_set(), limit)
            .into_iter()
            .map(|v| {
                let old = v.iter().step_by(2).copied().collect();
                let new = v.iter().skip(1).step_by(2).copied().collect();
                (old, new)
            })
            .collect()
    }

    fn check_rel_width(s: MddSet, r: &GroupRelation) {
        if let Some(&last) = r.deps.last() {
            assert!(
                (last as usize) < s.width,
                "relation slot {last} outside vectors of width {}",
                s.width
            );
        }
    }

    /// Successors of `s` under `r`.
    pub fn rel_next(&mut self, s: MddSet, r: &GroupRelation) -> MddSet {
        Self::check_rel_width(s, r);
        let deps = self.deps_of(r.deps_id);
        let op = self.next_op(r.deps_id);
        let root = self.next_rec(s.root, r.root, &deps, op);
        MddSet { root, width: s.width }
    }

    /// Vectors with at least one successor in `s` under `r`.
    pub fn rel_prev(&mut self, s: MddSet, r: &GroupRelation) -> MddSet {
        Self::check_rel_width(s, r);
        let deps = self.deps_of(r.deps_id);
        let op = self.prev_op(r.deps_id);
        let root = self.prev_rec(s.root, r.root, &deps, op);
        MddSet { root, width: s.width }
    }

    /// The relation over all slots mapping each `v` in `s` to `v` with its
    /// first entry replaced by `first` (or unchanged when `first` is `None`).
    pub fn rel_rewrite_first(&mut self, s: MddSet, first: Option<u32>) -> GroupRelation {
        let deps: Vec<u32> = (0..s.width as u32).collect();
        let mut r = self.new_relation(&deps);
        if s.width == 0 {
            r.root = s.root;
            return r;
        }
        let mut memo = rustc_hash::FxHashMap::default();
        let mut entries = Vec::new();
        let mut cur = s.root;
        while cur != FALSE {
            let n = self.node(cur);
            let tail = self.identity_rec(n.down, &mut memo);
            let new = first.unwrap_or(n.value);
            let inner = self.mk(1, new, tail, FALSE);
            entries.push((n.value, inner));
            cur = n.right;
        }
        r.root = self.chain(0, entries);
        r
    }

    /// The identity relation on `s`, whose vectors are short vectors over
    /// `deps`.
    pub fn rel_identity(&mut self, s: MddSet, deps: &[u32]) -> Result<GroupRelation> {
        if s.width != deps.len() {
            return Err(MddError::Dimension {
                expected: deps.len(),
                actual: s.width,
            });
        }
        let mut r = self.new_relation(deps);
        r.root = self.identity_rec(s.root, &mut rustc_hash::FxHashMap::default());
        Ok(r)
    }

    /// The relation over all slots mapping every vector of `s` to `target`.
    pub fn rel_constant(&mut self, s: MddSet, target: &[u32]) -> Result<GroupRelation> {
        if s.width != target.len() {
            return Err(MddError::Dimension {
                expected: target.len(),
                actual: s.width,
            });
        }
        let deps: Vec<u32> = (0..s.width as u32).collect();
        let mut r = self.new_relation(&deps);
        r.root = self.constant_rec(s.root, target, &mut rustc_hash::FxHashMap::default());
        Ok(r)
    }

    fn constant_rec(&mut self, n: NodeId, target: &[u32], memo: &mut rustc_hash::FxHashMap<NodeId, NodeId>) -> NodeId {
        if n == FALSE || n == TRUE {
            return n;
        }
        if let Some(&r) = memo.get(&n) {
            return r;
        }
        let node = self.node(n);
        let down = self.constant_rec(node.down, target, memo);
        let right = self.constant_rec(node.right, target, memo);
        let inner = self.mk(2 * node.slot + 1, target[node.slot as usize], down, FALSE);
        let r = self.mk(2 * node.slot, node.value, inner, right);
        memo.insert(n, r);
        r
    }

    fn identity_rec(&mut self, n: NodeId, memo: &mut rustc_hash::FxHashMap<NodeId, NodeId>) -> NodeId {
        if n == FALSE || n == TRUE {
            return n;
        }
        if let Some(&r) = memo.get(&n) {
            return r;
        }
        let node = self.node(n);
        let down = self.identity_rec(node.down, memo);
        let right = self.identity_rec(node.right, memo);
        let inner = self.mk(2 * node.slot + 1, node.value, down, FALSE);
        let r = self.mk(2 * node.slot, node.value, inner, right);
        memo.insert(n, r);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_vector_storage() {
        let mut st = NodeStore::new();
        let r = st.new_relation(&[1, 3]);
        let r = st.rel_insert(&r, &[0, 1], &[2, 2]).unwrap();
        assert_eq!(st.enumerate(r.as_set(), 10), vec![vec![0, 2, 1, 2]]);
        let again = st.rel_insert(&r, &[0, 1], &[2, 2]).unwrap();
        assert_eq!(again.root(), r.root());
        assert!(st.rel_insert(&r, &[0], &[2, 2]).is_err());
    }

    #[test]
    fn next_and_prev_by_hand() {
        let mut st = NodeStore::new();
        let r = st.new_relation(&[0]);
        let r = st.rel_insert(&r, &[0], &[1]).unwrap();
        let s = st.singleton(&[0, 7, 9]);
        let n = st.rel_next(s, &r);
        assert_eq!(st.enumerate(n, 10), vec![vec![1, 7, 9]]);
        let e = st.empty(3);
        assert!(st.rel_next(e, &r).is_empty());

        let t = st.singleton(&[1, 7]);
        let p = st.rel_prev(t, &r);
        assert_eq!(st.enumerate(p, 10), vec![vec![0, 7]]);
    }

    #[test]
    fn rewrite_first_relation() {
        let mut st = NodeStore::new();
        let mut s = st.empty(3);
        for v in [[0, 1, 2], [4, 1, 3]] {
            s = st.insert(s, &v).unwrap();
        }
        let r = st.rel_rewrite_first(s, Some(9));
        let n = st.rel_next(s, &r);
        assert_eq!(st.enumerate(n, 10), vec![vec![9, 1, 2], vec![9, 1, 3]]);
        let id = st.rel_rewrite_first(s, None);
        assert_eq!(st.rel_next(s, &id), s);
        let other = st.singleton(&[0, 1, 3]);
        assert!(st.rel_next(other, &id).is_empty());
    }
}

use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::{MddError, Result};

/// Index of a node inside a [`NodeStore`]. Meaningless across stores.
pub type NodeId = u32;

/// The empty set.
pub const FALSE: NodeId = 0;
/// The set containing only the empty suffix.
pub const TRUE: NodeId = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Node {
    pub slot: u32,
    pub value: u32,
    pub down: NodeId,
    pub right: NodeId,
}

/// A set of integer vectors of a fixed width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MddSet {
    pub(crate) root: NodeId,
    pub(crate) width: usize,
}

impl MddSet {
    /// Rebuilds a handle from a stored root, e.g. after compaction.
    pub fn from_root(root: NodeId, width: usize) -> MddSet {
        MddSet { root, width }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_empty(&self) -> bool {
        self.root == FALSE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
}

const OP_UNION: u32 = 0;
const OP_INTERSECT: u32 = 1;
const OP_MINUS: u32 = 2;
const OP_NEXT: u32 = 3;
const OP_PREV: u32 = 4;
const OP_PROJECT: u32 = 5;

fn op_key(kind: u32, deps_id: u32) -> u32 {
    kind | (deps_id << 3)
}

/// Arena of hash-consed MDD nodes plus the operation cache.
pub struct NodeStore {
    pub(crate) nodes: Vec<Node>,
    unique: FxHashMap<Node, NodeId>,
    cache: FxHashMap<(u32, NodeId, NodeId), NodeId>,
    counts: FxHashMap<NodeId, BigUint>,
    deps: Vec<Rc<[u32]>>,
    deps_index: FxHashMap<Rc<[u32]>, u32>,
}

impl Default for NodeStore {
    fn default() -> Self {
        Self::new()
    }
}

impl NodeStore {
    pub fn new() -> Self {
        let terminal = |value| Node {
            slot: u32::MAX,
            value,
            down: FALSE,
            right: FALSE,
        };
        NodeStore {
            nodes: vec![terminal(0), terminal(1)],
            unique: FxHashMap::default(),
            cache: FxHashMap::default(),
            counts: FxHashMap::default(),
            deps: Vec::new(),
            deps_index: FxHashMap::default(),
        }
    }

    /// Number of nodes allocated so far, terminals included.
    pub fn allocated(&self) -> usize {
        self.nodes.len()
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub(crate) fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    pub(crate) fn mk(&mut self, slot: u32, value: u32, down: NodeId, right: NodeId) -> NodeId {
        if down == FALSE {
            return right;
        }
        debug_assert!(right == FALSE || {
            let r = self.node(right);
            r.slot == slot && r.value > value
        });
        let node = Node {
            slot,
            value,
            down,
            right,
        };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = NodeId::try_from(self.nodes.len()).expect("node store exhausted");
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    /// Builds a value chain at `slot` from (value, child) pairs in any order;
    /// duplicate values are merged by union.
    pub(crate) fn chain(&mut self, slot: u32, mut entries: Vec<(u32, NodeId)>) -> NodeId {
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u32, NodeId)> = Vec::with_capacity(entries.len());
        for (v, c) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 = self.union_rec(last.1, c),
                _ => merged.push((v, c)),
            }
        }
        let mut right = FALSE;
        for &(v, c) in merged.iter().rev() {
            right = self.mk(slot, v, c, right);
        }
        right
    }

    pub(crate) fn deps_id(&mut self, deps: &[u32]) -> u32 {
        if let Some(&id) = self.deps_index.get(deps) {
            return id;
        }
        let rc: Rc<[u32]> = deps.into();
        let id = self.deps.len() as u32;
        self.deps.push(rc.clone());
        self.deps_index.insert(rc, id);
        id
    }

    pub(crate) fn deps_of(&self, id: u32) -> Rc<[u32]> {
        self.deps[id as usize].clone()
    }

    pub fn empty(&self, width: usize) -> MddSet {
        MddSet { root: FALSE, width }
    }

    fn check_width(expected: usize, actual: usize) -> Result<()> {
        if expected != actual {
            return Err(MddError::Dimension { expected, actual });
        }
        Ok(())
    }

    pub(crate) fn vector_root(&mut self, v: &[u32]) -> NodeId {
        let mut node = TRUE;
        for (i, &x) in v.iter().enumerate().rev() {
            node = self.mk(i as u32, x, node, FALSE);
        }
        node
    }

    /// Set of the rows of `data`, read as consecutive vectors of `width`
    /// entries. Rows may repeat and come in any order.
    pub fn from_rows(&mut self, width: usize, data: &[u32]) -> Result<MddSet> {
        if width == 0 {
            return Ok(MddSet { root: if data.is_empty() { FALSE } else { TRUE }, width });
        }
        if data.len() % width != 0 {
            return Err(MddError::Dimension {
                expected: width,
                actual: data.len() % width,
            });
        }
        Ok(MddSet {
            root: self.rows_root(width, data),
            width,
        })
    }

    pub(crate) fn rows_root(&mut self, width: usize, data: &[u32]) -> NodeId {
        if data.is_empty() {
            return FALSE;
        }
        let row = |i: u32| &data[i as usize * width..(i as usize + 1) * width];
        let mut idx: Vec<u32> = (0..(data.len() / width) as u32).collect();
        idx.sort_unstable_by(|&a, &b| row(a).cmp(row(b)));
        idx.dedup_by(|a, b| row(*a) == row(*b));
        let rows: Vec<&[u32]> = idx.into_iter().map(row).collect();
        self.build_sorted(&rows, 0)
    }

    fn build_sorted(&mut self, rows: &[&[u32]], k: usize) -> NodeId {
        if k == rows[0].len() {
            return TRUE;
        }
        let mut groups = Vec::new();
        let mut i = 0;
        while i < rows.len() {
            let v = rows[i][k];
            let j = i + rows[i..].partition_point(|r| r[k] == v);
            groups.push((v, i, j));
            i = j;
        }
        let mut right = FALSE;
        for &(v, i, j) in groups.iter().rev() {
            let down = self.build_sorted(&rows[i..j], k + 1);
            right = self.mk(k as u32, v, down, right);
        }
        right
    }

    /// Forgets all cached operation results and counts.
    pub fn clear_cache(&mut self) {
        self.cache = FxHashMap::default();
        self.counts = FxHashMap::default();
    }

    /// Rebuilds the store keeping only the nodes reachable from `roots` and
    /// returns the new ids of `roots`. Every other id becomes invalid.
    pub fn compact(&mut self, roots: &[NodeId]) -> Vec<NodeId> {
        let forest = self.export_forest(roots);
        let deps = std::mem::take(&mut self.deps);
        let deps_index = std::mem::take(&mut self.deps_index);
        *self = NodeStore::new();
        self.deps = deps;
        self.deps_index = deps_index;
        self.import_forest(&forest).expect("forest exported from this store")
    }

    pub fn singleton(&mut self, v: &[u32]) -> MddSet {
        MddSet {
            root: self.vector_root(v),
            width: v.len(),
        }
    }

    pub fn insert(&mut self, s: MddSet, v: &[u32]) -> Result<MddSet> {
        Self::check_width(s.width, v.len())?;
        let single = self.vector_root(v);
        Ok(MddSet {
            root: self.union_rec(s.root, single),
            width: s.width,
        })
    }

    pub fn contains(&self, s: MddSet, v: &[u32]) -> bool {
        if v.len() != s.width {
            return false;
        }
        let mut node = s.root;
        for &x in v {
            loop {
                if node == FALSE || node == TRUE {
                    return false;
                }
                let n = self.node(node);
                if n.value == x {
                    node = n.down;
                    break;
                }
                if n.value > x {
                    return false;
                }
                node = n.right;
            }
        }
        node == TRUE
    }

    pub fn combine(&mut self, op: SetOp, a: MddSet, b: MddSet) -> Result<MddSet> {
        Self::check_width(a.width, b.width)?;
        let root = match op {
            SetOp::Union => self.union_rec(a.root, b.root),
            SetOp::Intersect => self.intersect_rec(a.root, b.root),
            SetOp::Difference => self.minus_rec(a.root, b.root),
        };
        Ok(MddSet {
            root,
            width: a.width,
        })
    }

    /// Panics on a width mismatch; use [`NodeStore::combine`] for a checked variant.
    pub fn union(&mut self, a: MddSet, b: MddSet) -> MddSet {
        self.combine(SetOp::Union, a, b).expect("union of sets with different widths")
    }

    pub fn intersect(&mut self, a: MddSet, b: MddSet) -> MddSet {
        self.combine(SetOp::Intersect, a, b)
            .expect("intersection of sets with different widths")
    }

    pub fn difference(&mut self, a: MddSet, b: MddSet) -> MddSet {
        self.combine(SetOp::Difference, a, b)
            .expect("difference of sets with different widths")
    }

    pub(crate) fn union_rec(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == b || b == FALSE {
            return a;
        }
        if a == FALSE {
            return b;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let key = (OP_UNION, a, b);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let (na, nb) = (self.node(a), self.node(b));
        debug_assert_eq!(na.slot, nb.slot);
        let r = if na.value < nb.value {
            let right = self.union_rec(na.right, b);
            self.mk(na.slot, na.value, na.down, right)
        } else if na.value > nb.value {
            let right = self.union_rec(a, nb.right);
            self.mk(nb.slot, nb.value, nb.down, right)
        } else {
            let down = self.union_rec(na.down, nb.down);
            let right = self.union_rec(na.right, nb.right);
            self.mk(na.slot, na.value, down, right)
        };
        self.cache.insert(key, r);
        r
    }

    pub(crate) fn intersect_rec(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == b {
            return a;
        }
        if a == FALSE || b == FALSE {
            return FALSE;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let key = (OP_INTERSECT, a, b);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let (na, nb) = (self.node(a), self.node(b));
        let r = if na.value < nb.value {
            self.intersect_rec(na.right, b)
        } else if na.value > nb.value {
            self.intersect_rec(a, nb.right)
        } else {
            let down = self.intersect_rec(na.down, nb.down);
            let right = self.intersect_rec(na.right, nb.right);
            self.mk(na.slot, na.value, down, right)
        };
        self.cache.insert(key, r);
        r
    }

    pub(crate) fn minus_rec(&mut self, a: NodeId, b: NodeId) -> NodeId {
        if a == b || a == FALSE {
            return FALSE;
        }
        if b == FALSE {
            return a;
        }
        let key = (OP_MINUS, a, b);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let (na, nb) = (self.node(a), self.node(b));
        let r = if na.value < nb.value {
            let right = self.minus_rec(na.right, b);
            self.mk(na.slot, na.value, na.down, right)
        } else if na.value > nb.value {
            self.minus_rec(a, nb.right)
        } else {
            let down = self.minus_rec(na.down, nb.down);
            let right = self.minus_rec(na.right, nb.right);
            self.mk(na.slot, na.value, down, right)
        };
        self.cache.insert(key, r);
        r
    }

    /// Exact cardinality.
    pub fn count(&mut self, s: MddSet) -> BigUint {
        self.count_rec(s.root)
    }

    fn count_rec(&mut self, n: NodeId) -> BigUint {
        match n {
            FALSE => return BigUint::zero(),
            TRUE => return BigUint::one(),
            _ => {}
        }
        if let Some(c) = self.counts.get(&n) {
            return c.clone();
        }
        let node = self.node(n);
        let c = self.count_rec(node.down) + self.count_rec(node.right);
        self.counts.insert(n, c.clone());
        c
    }

    /// The first `limit` vectors in lexicographic order.
    pub fn enumerate(&self, s: MddSet, limit: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        let mut prefix = Vec::with_capacity(s.width);
        self.enumerate_rec(s.root, &mut prefix, limit, &mut out);
        out
    }

    fn enumerate_rec(&self, n: NodeId, prefix: &mut Vec<u32>, limit: usize, out: &mut Vec<Vec<u32>>) {
        if n == FALSE || out.len() >= limit {
            return;
        }
        if n == TRUE {
            out.push(prefix.clone());
            return;
        }
        let mut cur = n;
        while cur != FALSE && out.len() < limit {
            let node = self.node(cur);
            prefix.push(node.value);
            self.enumerate_rec(node.down, prefix, limit, out);
            prefix.pop();
            cur = node.right;
        }
    }

    /// Calls `f` on every vector of the set, in lexicographic order.
    pub fn for_each(&self, s: MddSet, mut f: impl FnMut(&[u32])) {
        let mut prefix = Vec::with_capacity(s.width);
        self.for_each_rec(s.root, &mut prefix, &mut f);
    }

    fn for_each_rec(&self, n: NodeId, prefix: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if n == FALSE {
            return;
        }
        if n == TRUE {
            f(prefix);
            return;
        }
        let mut cur = n;
        while cur != FALSE {
            let node = self.node(cur);
            prefix.push(node.value);
            self.for_each_rec(node.down, prefix, f);
            prefix.pop();
            cur = node.right;
        }
    }

    /// Sorted vectors, one per line, values separated by single spaces.
    pub fn dump(&self, s: MddSet) -> String {
        let mut out = String::new();
        self.for_each(s, |v| {
            let line: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        });
        out
    }

    /// Number of distinct non-terminal nodes reachable from the given roots.
    pub fn node_count(&self, roots: &[NodeId]) -> usize {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack: Vec<NodeId> = roots.iter().copied().filter(|&r| r > TRUE).collect();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            let node = self.node(n);
            for c in [node.down, node.right] {
                if c > TRUE && !seen.contains(&c) {
                    stack.push(c);
                }
            }
        }
        seen.len()
    }

    /// Existential projection onto the (ascending) slots `deps`.
    pub fn project(&mut self, s: MddSet, deps: &[u32]) -> MddSet {
        debug_assert!(deps.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(deps.last().map_or(true, |&d| (d as usize) < s.width));
        let id = self.deps_id(deps);
        let deps = self.deps_of(id);
        let root = self.project_rec(s.root, &deps, 0, op_key(OP_PROJECT, id));
        MddSet {
            root,
            width: deps.len(),
        }
    }

    fn project_rec(&mut self, n: NodeId, deps: &[u32], k: usize, op: u32) -> NodeId {
        if n == FALSE || n == TRUE {
            return n;
        }
        if k == deps.len() {
            return TRUE;
        }
        let key = (op, n, FALSE);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let node = self.node(n);
        let r = if node.slot == deps[k] {
            let down = self.project_rec(node.down, deps, k + 1, op);
            let right = self.project_rec(node.right, deps, k, op);
            self.mk(k as u32, node.value, down, right)
        } else {
            let down = self.project_rec(node.down, deps, k, op);
            let right = self.project_rec(node.right, deps, k, op);
            self.union_rec(down, right)
        };
        self.cache.insert(key, r);
        r
    }

    /// Vectors of `s` whose first entry satisfies `keep`.
    pub fn select_first(&mut self, s: MddSet, keep: impl Fn(u32) -> bool) -> MddSet {
        if s.width == 0 {
            return s;
        }
        let mut entries = Vec::new();
        let mut cur = s.root;
        while cur != FALSE {
            let node = self.node(cur);
            if keep(node.value) {
                entries.push((node.value, node.down));
            }
            cur = node.right;
        }
        let root = self.chain(0, entries);
        MddSet { root, width: s.width }
    }

    /// Values occurring in the first slot, ascending.
    pub fn first_values(&self, s: MddSet) -> Vec<u32> {
        let mut out = Vec::new();
        if s.width == 0 {
            return out;
        }
        let mut cur = s.root;
        while cur != FALSE {
            let node = self.node(cur);
            out.push(node.value);
            cur = node.right;
        }
        out
    }

    /// `{ v[0 := value] | v in s }`.
    pub fn overwrite_first(&mut self, s: MddSet, value: u32) -> MddSet {
        assert!(s.width > 0, "overwrite_first on width-0 set");
        let mut rest = FALSE;
        let mut cur = s.root;
        while cur != FALSE {
            let node = self.node(cur);
            rest = self.union_rec(rest, node.down);
            cur = node.right;
        }
        let root = self.mk(0, value, rest, FALSE);
        MddSet { root, width: s.width }
    }

    pub(crate) fn next_rec(&mut self, s: NodeId, r: NodeId, deps: &[u32], op: u32) -> NodeId {
        if s == FALSE || r == FALSE {
            return FALSE;
        }
        if r == TRUE {
            return s;
        }
        let key = (op, s, r);
        if let Some(&res) = self.cache.get(&key) {
            return res;
        }
        let sn = self.node(s);
        let rn = self.node(r);
        let dep = deps[(rn.slot / 2) as usize];
        let res = if sn.slot < dep {
            let down = self.next_rec(sn.down, r, deps, op);
            let right = self.next_rec(sn.right, r, deps, op);
            self.mk(sn.slot, sn.value, down, right)
        } else {
            debug_assert_eq!(sn.slot, dep);
            let mut entries = Vec::new();
            let (mut a, mut b) = (s, r);
            while a != FALSE && b != FALSE {
                let (na, nb) = (self.node(a), self.node(b));
                if na.value < nb.value {
                    a = na.right;
                } else if na.value > nb.value {
                    b = nb.right;
                } else {
                    let mut c = nb.down;
                    while c != FALSE {
                        let nc = self.node(c);
                        let child = self.next_rec(na.down, nc.down, deps, op);
                        if child != FALSE {
                            entries.push((nc.value, child));
                        }
                        c = nc.right;
                    }
                    a = na.right;
                    b = nb.right;
                }
            }
            self.chain(sn.slot, entries)
        };
        self.cache.insert(key, res);
        res
    }

    pub(crate) fn prev_rec(&mut self, s: NodeId, r: NodeId, deps: &[u32], op: u32) -> NodeId {
        if s == FALSE || r == FALSE {
            return FALSE;
        }
        if r == TRUE {
            return s;
        }
        let key = (op, s, r);
        if let Some(&res) = self.cache.get(&key) {
            return res;
        }
        let sn = self.node(s);
        let rn = self.node(r);
        let dep = deps[(rn.slot / 2) as usize];
        let res = if sn.slot < dep {
            let down = self.prev_rec(sn.down, r, deps, op);
            let right = self.prev_rec(sn.right, r, deps, op);
            self.mk(sn.slot, sn.value, down, right)
        } else {
            debug_assert_eq!(sn.slot, dep);
            let mut entries = Vec::new();
            let mut b = r;
            while b != FALSE {
                let nb = self.node(b);
                let mut acc = FALSE;
                let (mut a, mut c) = (s, nb.down);
                while a != FALSE && c != FALSE {
                    let (na, nc) = (self.node(a), self.node(c));
                    if na.value < nc.value {
                        a = na.right;
                    } else if na.value > nc.value {
                        c = nc.right;
                    } else {
                        let child = self.prev_rec(na.down, nc.down, deps, op);
                        acc = self.union_rec(acc, child);
                        a = na.right;
                        c = nc.right;
                    }
                }
                if acc != FALSE {
                    entries.push((nb.value, acc));
                }
                b = nb.right;
            }
            let mut right = FALSE;
            for &(v, c) in entries.iter().rev() {
                right = self.mk(sn.slot, v, c, right);
            }
            right
        };
        self.cache.insert(key, res);
        res
    }

    pub(crate) fn next_op(&mut self, deps_id: u32) -> u32 {
        op_key(OP_NEXT, deps_id)
    }

    pub(crate) fn prev_op(&mut self, deps_id: u32) -> u32 {
        op_key(OP_PREV, deps_id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_and_idempotent_insert() {
        let mut st = NodeStore::new();
        let e = st.empty(2);
        let a = st.insert(e, &[0, 1]).unwrap();
        assert_eq!(st.count(a), BigUint::from(1u32));
        let b = st.insert(a, &[0, 1]).unwrap();
        assert_eq!(a.root(), b.root());
    }

    #[test]
    fn insertion_order_irrelevant() {
        let mut st = NodeStore::new();
        let e = st.empty(2);
        let a = st.insert(e, &[1, 0]).unwrap();
        let a = st.insert(a, &[0, 1]).unwrap();
        let b = st.insert(e, &[0, 1]).unwrap();
        let b = st.insert(b, &[1, 0]).unwrap();
        assert_eq!(a.root(), b.root());
    }

    #[test]
    fn width_mismatch() {
        let mut st = NodeStore::new();
        let e = st.empty(2);
        assert_eq!(
            st.insert(e, &[1, 2, 3]),
            Err(MddError::Dimension {
                expected: 2,
                actual: 3
            })
        );
        let f = st.empty(3);
        assert!(st.combine(SetOp::Union, e, f).is_err());
    }

    #[test]
    fn union_identity_and_intersect_example() {
        let mut st = NodeStore::new();
        let e = st.empty(2);
        let s = st.insert(e, &[3, 4]).unwrap();
        assert_eq!(st.union(s, e).root(), s.root());

        let a = st.insert(e, &[0, 0]).unwrap();
        let a = st.insert(a, &[1, 1]).unwrap();
        let b = st.insert(e, &[1, 1]).unwrap();
        let b = st.insert(b, &[2, 2]).unwrap();
        let i = st.intersect(a, b);
        assert_eq!(st.enumerate(i, 10), vec![vec![1, 1]]);
    }

    #[test]
    fn enumerate_sorted_and_limited() {
        let mut st = NodeStore::new();
        let e = st.empty(2);
        let s = st.insert(e, &[1, 0]).unwrap();
        let s = st.insert(s, &[0, 1]).unwrap();
        assert_eq!(st.enumerate(s, 10), vec![vec![0, 1], vec![1, 0]]);
        assert!(st.enumerate(s, 0).is_empty());
        assert_eq!(st.count(e), BigUint::zero());
        assert_eq!(st.dump(s), "0 1\n1 0\n");
    }

    #[test]
    fn width_zero_sets() {
        let mut st = NodeStore::new();
        let e = st.empty(0);
        let s = st.insert(e, &[]).unwrap();
        assert_eq!(s.root(), TRUE);
        assert_eq!(st.count(s), BigUint::one());
        assert_eq!(st.enumerate(s, 5), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn projection_and_first_slot_helpers() {
        let mut st = NodeStore::new();
        let mut s = st.empty(3);
        for v in [[0, 1, 2], [0, 5, 2], [1, 1, 3]] {
            s = st.insert(s, &v).unwrap();
        }
        let p = st.project(s, &[0, 2]);
        assert_eq!(st.enumerate(p, 10), vec![vec![0, 2], vec![1, 3]]);
        let sel = st.select_first(s, |v| v == 1);
        assert_eq!(st.enumerate(sel, 10), vec![vec![1, 1, 3]]);
        assert_eq!(st.first_values(s), vec![0, 1]);
        let o = st.overwrite_first(s, 7);
        assert_eq!(
            st.enumerate(o, 10),
            vec![vec![7, 1, 2], vec![7, 1, 3], vec![7, 5, 2]]
        );
        assert!(st.contains(s, &[0, 5, 2]));
        assert!(!st.contains(s, &[0, 5, 3]));
    }
}

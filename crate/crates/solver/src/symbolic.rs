use spg_builder::SymbolicParityGame;
use spg_mdd::{GroupRelation, MddSet, NodeStore};

use crate::{ExplicitGame, Player};

/// The part of a symbolic parity game the solver needs.
pub struct Game {
    pub store: NodeStore,
    pub v: MddSet,
    /// Vertices owned by Eloise; the rest of `v` belongs to Abelard.
    pub eloise: MddSet,
    /// Vertices by priority.
    pub prio: Vec<MddSet>,
    /// Applied in this order everywhere.
    pub relations: Vec<GroupRelation>,
    pub init: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WinningSets {
    pub eloise: MddSet,
    pub abelard: MddSet,
}

impl WinningSets {
    pub fn of(&self, p: Player) -> MddSet {
        match p {
            Player::Eloise => self.eloise,
            Player::Abelard => self.abelard,
        }
    }
}

/// Number of base-16 digits used for vertex ids of an imported game.
fn digits(n: usize) -> usize {
    let mut w = 1;
    while n > 16usize.pow(w as u32) {
        w += 1;
    }
    w
}

/// Vector of an explicit vertex id in a game of `n` vertices imported by
/// [`Game::from_explicit`].
pub fn id_vector(id: usize, n: usize) -> Vec<u32> {
    let w = digits(n);
    (0..w).rev().map(|k| ((id >> (4 * k)) & 15) as u32).collect()
}

impl Game {
    pub fn from_symbolic(g: SymbolicParityGame) -> Game {
        Game {
            store: g.store,
            v: g.v,
            eloise: g.eloise,
            prio: g.prio,
            relations: g.relations,
            init: g.init,
        }
    }

    /// Encodes an explicit game with vertex ids as base-16 digit vectors. The
    /// `k`-th successor of every vertex goes to relation `k % groups`.
    pub fn from_explicit(e: &ExplicitGame, groups: usize) -> Game {
        let n = e.vertices.len();
        let w = digits(n);
        let mut store = NodeStore::new();
        let vecs: Vec<Vec<u32>> = (0..n).map(|i| id_vector(i, n)).collect();
        let rows = |keep: &dyn Fn(usize) -> bool| -> Vec<u32> {
            (0..n).filter(|&i| keep(i)).flat_map(|i| vecs[i].iter().copied()).collect()
        };
        let v = store.from_rows(w, &rows(&|_| true)).expect("rows match the width");
        let eloise = store
            .from_rows(w, &rows(&|i| e.vertices[i].owner == Player::Eloise))
            .expect("rows match the width");
        let max = e.vertices.iter().map(|x| x.priority).max().unwrap_or(0);
        let prio = (0..=max)
            .map(|k| store.from_rows(w, &rows(&|i| e.vertices[i].priority == k)).expect("rows match the width"))
            .collect();
        let deps: Vec<u32> = (0..w as u32).collect();
        let groups = groups.max(1);
        let mut relations = Vec::with_capacity(groups);
        for g in 0..groups {
            let pairs: Vec<(&[u32], &[u32])> = e
                .vertices
                .iter()
                .enumerate()
                .flat_map(|(i, x)| {
                    x.succ
                        .iter()
                        .enumerate()
                        .filter(move |(k, _)| k % groups == g)
                        .map(move |(_, &t)| (i, t))
                })
                .map(|(i, t)| (vecs[i].as_slice(), vecs[t].as_slice()))
                .collect();
            let empty = store.new_relation(&deps);
            relations.push(store.rel_insert_all(&empty, pairs).expect("pairs match the width"));
        }
        let init = vecs.get(e.init).cloned().unwrap_or_else(|| vec![0; w]);
        Game {
            store,
            v,
            eloise,
            prio,
            relations,
            init,
        }
    }

    pub fn width(&self) -> usize {
        self.v.width()
    }

    fn owned(&mut self, p: Player, within: MddSet) -> MddSet {
        match p {
            Player::Eloise => self.store.intersect(within, self.eloise),
            Player::Abelard => self.store.difference(within, self.eloise),
        }
    }

    /// Vertices of `within` with a successor in `x`.
    fn prev(&mut self, x: MddSet, within: MddSet) -> MddSet {
        let mut out = self.store.empty(self.width());
        for i in 0..self.relations.len() {
            let p = self.store.rel_prev(x, &self.relations[i]);
            out = self.store.union(out, p);
        }
        self.store.intersect(out, within)
    }

    /// Vertices of `v` without successors.
    pub fn stuck(&mut self) -> MddSet {
        let p = self.prev(self.v, self.v);
        self.store.difference(self.v, p)
    }

    fn min_priority(&mut self, within: MddSet, from: usize) -> Option<usize> {
        (from..self.prio.len()).find(|&k| !self.store.intersect(self.prio[k], within).is_empty())
    }

    fn tidy(&mut self) {
        if self.store.cache_len() > 1 << 24 {
            self.store.clear_cache();
        }
    }
}

/// Adds two trap sinks with self-loops, vectors `[m+1, 0, ...]` (Eloise-owned,
/// priority 0) and `[m+2, 0, ...]` (Abelard-owned, priority 1) where `m` is the
/// largest first entry in use. Stuck Abelard vertices move to the first,
/// stuck Eloise vertices to the second.
pub fn totalize(mut g: Game) -> Game {
    let w = g.width();
    assert!(w > 0, "games need at least one slot");
    let stuck = g.stuck();
    if g.prio.len() < 2 {
        let e = g.store.empty(w);
        g.prio.resize(2, e);
    }
    let m = g.store.first_values(g.v).into_iter().max().unwrap_or(0);
    for (owner, value, prio) in [(Player::Eloise, m + 1, 0), (Player::Abelard, m + 2, 1)] {
        let mut sink = vec![0; w];
        sink[0] = value;
        let s = g.store.singleton(&sink);
        let from = g.owned(owner.opponent(), stuck);
        let src = g.store.union(from, s);
        let r = g.store.rel_constant(src, &sink).expect("sink matches the width");
        g.relations.push(r);
        g.v = g.store.union(g.v, s);
        if owner == Player::Eloise {
            g.eloise = g.store.union(g.eloise, s);
        }
        g.prio[prio] = g.store.union(g.prio[prio], s);
    }
    g
}

/// Least superset of `u` within the subgame `within` from which `p` forces a
/// visit to it. Requires every vertex of `within` to have a successor in
/// `within`.
pub fn attractor(g: &mut Game, within: MddSet, p: Player, u: MddSet) -> MddSet {
    let own = g.owned(p, within);
    let other = g.owned(p.opponent(), within);
    let mut a = g.store.intersect(u, within);
    let mut fresh = a;
    loop {
        let pre = g.prev(fresh, own);
        let outside = g.store.difference(within, a);
        let escape = g.prev(outside, other);
        let forced = g.store.difference(other, escape);
        let add = g.store.union(pre, forced);
        fresh = g.store.difference(add, a);
        if fresh.is_empty() {
            return a;
        }
        a = g.store.union(a, fresh);
        g.tidy();
    }
}

enum Frame {
    /// A subgame and a lower bound on its priorities.
    Enter(MddSet, usize),
    First { sub: MddSet, p: Player, d: usize },
    Second { p: Player, b: MddSet },
}

/// Zielonka's recursive algorithm with the min-parity convention, driven by
/// an explicit stack. `g` must be total.
pub fn zielonka(g: &mut Game) -> WinningSets {
    let empty = g.store.empty(g.width());
    let mut ret = [empty, empty];
    let mut stack = vec![Frame::Enter(g.v, 0)];
    while let Some(frame) = stack.pop() {
        match frame {
            Frame::Enter(sub, lo) => {
                let Some(d) = g.min_priority(sub, lo) else {
                    ret = [empty, empty];
                    continue;
                };
                let p = if d % 2 == 0 { Player::Eloise } else { Player::Abelard };
                let top = g.store.intersect(g.prio[d], sub);
                let a = attractor(g, sub, p, top);
                stack.push(Frame::First { sub, p, d });
                stack.push(Frame::Enter(g.store.difference(sub, a), d + 1));
            }
            Frame::First { sub, p, d } => {
                let q = p.opponent();
                let wq = ret[q.code() as usize];
                if wq.is_empty() {
                    ret[p.code() as usize] = sub;
                    ret[q.code() as usize] = empty;
                    continue;
                }
                let b = attractor(g, sub, q, wq);
                stack.push(Frame::Second { p, b });
                stack.push(Frame::Enter(g.store.difference(sub, b), d));
            }
            Frame::Second { p, b } => {
                let q = p.opponent().code() as usize;
                ret[q] = g.store.union(ret[q], b);
            }
        }
    }
    WinningSets {
        eloise: ret[0],
        abelard: ret[1],
    }
}

/// The player whose winning set holds the initial vertex.
pub fn winner(g: &Game, sets: &WinningSets) -> Player {
    let e = g.store.contains(sets.eloise, &g.init);
    let a = g.store.contains(sets.abelard, &g.init);
    assert!(e != a, "initial vertex must be in exactly one winning set");
    if e {
        Player::Eloise
    } else {
        Player::Abelard
    }
}

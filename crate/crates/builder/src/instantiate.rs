use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use spg_mdd::{GroupRelation, MddSet, NodeStore};
use spg_model::explore::for_each_assignment;
use spg_model::{DataExpr, Env, Param, Sort};
use spg_pbes::{AtomBody, Kind, Ppg};

use crate::groups::{dropped_slots, is_identity, TransitionGroup};
use crate::layout::Layout;
use crate::BuildError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    Eloise,
    Abelard,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eloise => Player::Abelard,
            Player::Abelard => Player::Eloise,
        }
    }

    /// Owner code in the explicit format: 0 for Eloise, 1 for Abelard.
    pub fn code(self) -> u8 {
        match self {
            Player::Eloise => 0,
            Player::Abelard => 1,
        }
    }
}

/// One value of slot 0: an equation or one of the two sinks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarInfo {
    pub name: String,
    pub owner: Player,
    pub priority: usize,
    /// Vector positions of the parameters.
    pub slots: Vec<u32>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Abort once more vertices than this are reached.
    pub max_states: Option<u64>,
}

pub struct SymbolicParityGame {
    pub store: NodeStore,
    pub layout: Layout,
    pub groups: Vec<TransitionGroup>,
    /// One relation per group, then the edges into the TRUE-sink and into
    /// the FALSE-sink.
    pub relations: Vec<GroupRelation>,
    pub vars: Vec<VarInfo>,
    pub v: MddSet,
    pub eloise: MddSet,
    pub abelard: MddSet,
    /// Vertices by priority.
    pub prio: Vec<MddSet>,
    pub init: Vec<u32>,
    /// `local_successors` calls per group.
    pub expansions: Vec<u64>,
    pub levels: usize,
}

impl SymbolicParityGame {
    pub fn true_sink(&self) -> u32 {
        self.vars.len() as u32 - 2
    }

    pub fn false_sink(&self) -> u32 {
        self.vars.len() as u32 - 1
    }

    /// `X(v1, ..., vn)` for a vertex vector; sinks print as `true`/`false`.
    pub fn label(&self, v: &[u32]) -> String {
        let var = &self.vars[v[0] as usize];
        if var.slots.is_empty() {
            return var.name.clone();
        }
        let args: Vec<String> = var
            .slots
            .iter()
            .map(|&s| match self.layout.table(s).decode(v[s as usize]) {
                Some(x) => x.to_string(),
                None => "?".into(),
            })
            .collect();
        format!("{}({})", var.name, args.join(", "))
    }

    /// Vertices whose slot 0 is one of the given variables.
    pub fn vertices_of(&mut self, keep: impl Fn(u32) -> bool) -> MddSet {
        self.store.select_first(self.v, keep)
    }

    /// Recomputes the owner and priority sets from `v`.
    pub fn refresh_partition(&mut self) {
        let owners: Vec<Player> = self.vars.iter().map(|x| x.owner).collect();
        let prios: Vec<usize> = self.vars.iter().map(|x| x.priority).collect();
        self.eloise = self.vertices_of(|x| owners[x as usize] == Player::Eloise);
        self.abelard = self.vertices_of(|x| owners[x as usize] == Player::Abelard);
        let max = prios.iter().copied().max().unwrap_or(0);
        self.prio = (0..=max).map(|k| self.vertices_of(|x| prios[x as usize] == k)).collect();
    }

    pub fn state_count(&mut self) -> BigUint {
        self.store.count(self.v)
    }
}

struct Write {
    pos: usize,
    slot: u32,
    expr: DataExpr,
    sort: Sort,
}

enum Body {
    Simple(DataExpr),
    Call {
        guard: Option<DataExpr>,
        callee: u32,
        writes: Vec<Write>,
        /// Short positions reset to 0.
        zeros: Vec<usize>,
    },
}

/// A transition group prepared for repeated evaluation on short vectors.
pub(crate) struct Compiled {
    conj: bool,
    /// (short position, slot, parameter name) of every parameter read.
    reads: Vec<(usize, u32, String)>,
    atoms: Vec<(Vec<Param>, Body)>,
    true_sink: u32,
    false_sink: u32,
}

impl Compiled {
    pub(crate) fn new(ppg: &Ppg, layout: &Layout, g: &TransitionGroup) -> Compiled {
        let e = &ppg.equations[g.equation];
        let pos = |slot: u32| g.deps.binary_search(&slot).expect("dependent slot");
        let mut reads = Vec::new();
        for (i, p) in e.params.iter().enumerate() {
            let slot = layout.eq_slots[g.equation][i];
            if let Ok(k) = g.deps.binary_search(&slot) {
                reads.push((k, slot, p.name.clone()));
            }
        }
        let atoms = g
            .atoms
            .iter()
            .map(|&a| {
                let atom = &e.atoms[a];
                let body = match &atom.body {
                    AtomBody::Simple(x) => Body::Simple(x.clone()),
                    AtomBody::Call { guard, name, args } => {
                        let ci = ppg.index(name).expect("call to a defined equation");
                        let callee = &ppg.equations[ci];
                        let writes = args
                            .iter()
                            .enumerate()
                            .filter(|(j, arg)| !is_identity(e, callee, &atom.vars, *j, arg))
                            .map(|(j, arg)| {
                                let slot = layout.eq_slots[ci][j];
                                Write {
                                    pos: pos(slot),
                                    slot,
                                    expr: arg.clone(),
                                    sort: callee.params[j].sort.clone(),
                                }
                            })
                            .collect();
                        Body::Call {
                            guard: guard.clone(),
                            callee: ci as u32,
                            writes,
                            zeros: dropped_slots(layout, g.equation, ci).into_iter().map(pos).collect(),
                        }
                    }
                };
                (atom.vars.clone(), body)
            })
            .collect();
        let n = ppg.equations.len() as u32;
        Compiled {
            conj: e.kind == Kind::Conj,
            reads,
            atoms,
            true_sink: n,
            false_sink: n + 1,
        }
    }

    /// Appends the short target vectors of `src` to `out` and flags edges
    /// into the TRUE-sink (`sinks[0]`) and the FALSE-sink (`sinks[1]`).
    pub(crate) fn successors(&self, layout: &mut Layout, src: &[u32], out: &mut Vec<u32>, sinks: &mut [bool; 2]) {
        let mut env = Env::new();
        for (k, slot, name) in &self.reads {
            let v = layout.table(*slot).decode(src[*k]).expect("encoded parameter value");
            env.push(name, v.clone());
        }
        *sinks = [false; 2];
        let start = out.len();
        let conj = self.conj;
        let mut sink = |k: usize| sinks[k] = true;
        for (vars, body) in &self.atoms {
            for_each_assignment(vars, &mut env, &mut |env| match body {
                Body::Simple(x) => {
                    let b = x.eval_bool(env);
                    if conj && !b {
                        sink(1);
                    } else if !conj && b {
                        sink(0);
                    }
                }
                Body::Call {
                    guard,
                    callee,
                    writes,
                    zeros,
                } => {
                    if let Some(g) = guard {
                        if !g.eval_bool(env) {
                            return;
                        }
                    }
                    let at = out.len();
                    out.extend_from_slice(src);
                    out[at] = *callee;
                    for &z in zeros {
                        out[at + z] = 0;
                    }
                    for w in writes {
                        match w.expr.eval(env) {
                            Ok(v) if w.sort.contains(&v) => {
                                out[at + w.pos] = layout.table_mut(w.slot).encode(&v);
                            }
                            _ => {
                                out.truncate(at);
                                if conj {
                                    sink(1);
                                }
                                return;
                            }
                        }
                    }
                }
            });
        }
        if out.len() == start && !sinks[0] && !sinks[1] {
            sinks[if conj { 0 } else { 1 }] = true;
        }
    }
}

/// Short target vectors of `group` from the short source vector `src`.
/// Empty when `src` does not belong to the group's equation.
pub fn local_successors(ppg: &Ppg, layout: &mut Layout, group: &TransitionGroup, src: &[u32]) -> Vec<Vec<u32>> {
    if src[0] as usize != group.equation {
        return Vec::new();
    }
    let c = Compiled::new(ppg, layout, group);
    let mut out = Vec::new();
    let mut sinks = [false; 2];
    c.successors(layout, src, &mut out, &mut sinks);
    let mut targets: Vec<Vec<u32>> = out.chunks(src.len()).map(|t| t.to_vec()).collect();
    for (k, sink) in [c.true_sink, c.false_sink].into_iter().enumerate() {
        if sinks[k] {
            let mut t = vec![0; src.len()];
            t[0] = sink;
            targets.push(t);
        }
    }
    targets
}

/// Nodes allocated before the store is compacted for the first time.
const COMPACT_AT: usize = 1 << 22;
/// Cached operation results kept between levels.
const CACHE_LIMIT: usize = 1 << 25;

/// Breadth-first exploration from the initial vertex, learning one short
/// vector relation per group. Each (group, short source) pair is expanded
/// once.
pub fn instantiate(
    ppg: &Ppg,
    mut layout: Layout,
    groups: Vec<TransitionGroup>,
    opts: BuildOptions,
) -> Result<SymbolicParityGame, BuildError> {
    let n = ppg.equations.len();
    let mut vars: Vec<VarInfo> = ppg
        .equations
        .iter()
        .enumerate()
        .map(|(i, e)| VarInfo {
            name: e.name.clone(),
            owner: if e.kind == Kind::Conj { Player::Abelard } else { Player::Eloise },
            priority: e.priority,
            slots: layout.eq_slots[i].clone(),
        })
        .collect();
    vars.push(VarInfo {
        name: "true".into(),
        owner: Player::Abelard,
        priority: 0,
        slots: Vec::new(),
    });
    vars.push(VarInfo {
        name: "false".into(),
        owner: Player::Eloise,
        priority: 1,
        slots: Vec::new(),
    });

    let width = layout.width();
    let (init_name, init_args) = &ppg.init;
    let ie = ppg
        .index(init_name)
        .ok_or_else(|| BuildError::Init(format!("unknown equation {init_name}")))?;
    let params = &ppg.equations[ie].params;
    if params.len() != init_args.len() || !params.iter().zip(init_args).all(|(p, v)| p.sort.contains(v)) {
        return Err(BuildError::Init(format!("arguments of {init_name} do not match its parameters")));
    }
    let mut init = vec![0u32; width];
    init[0] = ie as u32;
    for (i, v) in init_args.iter().enumerate() {
        let slot = layout.eq_slots[ie][i];
        init[slot as usize] = layout.table_mut(slot).encode(v);
    }

    let compiled: Vec<Compiled> = groups.iter().map(|g| Compiled::new(ppg, &layout, g)).collect();
    let mut by_eq: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, g) in groups.iter().enumerate() {
        by_eq[g.equation].push(i);
    }

    let mut store = NodeStore::new();
    let mut relations: Vec<GroupRelation> = groups.iter().map(|g| store.new_relation(&g.deps)).collect();
    let mut seen: Vec<MddSet> = groups.iter().map(|g| store.empty(g.deps.len())).collect();
    // short sources with an edge into the TRUE-sink, then the FALSE-sink
    let mut sink_src: Vec<MddSet> = groups
        .iter()
        .flat_map(|g| [store.empty(g.deps.len()), store.empty(g.deps.len())])
        .collect();
    let mut sink_rows: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
    let mut expansions = vec![0u64; groups.len()];
    let mut v = store.singleton(&init);
    let mut frontier = v;
    let mut levels = 0;
    let mut compact_at = COMPACT_AT;
    let mut olds: Vec<u32> = Vec::new();
    let mut news: Vec<u32> = Vec::new();

    while !frontier.is_empty() {
        levels += 1;
        let mut next = store.empty(width);
        for var in store.first_values(frontier) {
            if var as usize >= n {
                continue;
            }
            let fv = store.select_first(frontier, |x| x == var);
            for &g in &by_eq[var as usize] {
                let deps = &groups[g].deps;
                let short = store.project(fv, deps);
                let fresh = store.difference(short, seen[g]);
                if !fresh.is_empty() {
                    seen[g] = store.union(seen[g], fresh);
                    olds.clear();
                    news.clear();
                    sink_rows[0].clear();
                    sink_rows[1].clear();
                    let k = deps.len();
                    let mut sinks = [false; 2];
                    store.for_each(fresh, |u| {
                        expansions[g] += 1;
                        let before = news.len();
                        compiled[g].successors(&mut layout, u, &mut news, &mut sinks);
                        for _ in 0..(news.len() - before) / k {
                            olds.extend_from_slice(u);
                        }
                        for i in 0..2 {
                            if sinks[i] {
                                sink_rows[i].extend_from_slice(u);
                            }
                        }
                    });
                    relations[g] = store
                        .rel_insert_all(&relations[g], olds.chunks(k).zip(news.chunks(k)))
                        .expect("short vectors match the group width");
                    for i in 0..2 {
                        let rows = store.from_rows(k, &sink_rows[i]).expect("short vectors");
                        sink_src[2 * g + i] = store.union(sink_src[2 * g + i], rows);
                    }
                }
                let succ = store.rel_next(fv, &relations[g]);
                next = store.union(next, succ);
            }
        }
        frontier = store.difference(next, v);
        v = store.union(v, frontier);
        if let Some(cap) = opts.max_states {
            let count = store.count(v);
            if count > BigUint::from(cap) {
                return Err(BuildError::StateCap { cap, reached: count });
            }
        }
        if store.allocated() > compact_at {
            let mut roots = vec![v.root(), frontier.root()];
            roots.extend(seen.iter().map(|s| s.root()));
            roots.extend(relations.iter().map(|r| r.root()));
            roots.extend(sink_src.iter().map(|s| s.root()));
            let new = store.compact(&roots);
            v = rebase(v, new[0]);
            frontier = rebase(frontier, new[1]);
            for (i, s) in seen.iter_mut().enumerate() {
                *s = rebase(*s, new[2 + i]);
            }
            let off = 2 + seen.len();
            for (i, r) in relations.iter_mut().enumerate() {
                *r = store.relation_from_root(r.deps(), new[off + i]);
            }
            let off = off + relations.len();
            for (i, s) in sink_src.iter_mut().enumerate() {
                *s = rebase(*s, new[off + i]);
            }
            compact_at = compact_at.max(3 * store.allocated());
        } else if store.cache_len() > CACHE_LIMIT {
            store.clear_cache();
        }
    }

    for (i, sink) in [n as u32, n as u32 + 1].into_iter().enumerate() {
        let mut src = store.empty(width);
        for (g, group) in groups.iter().enumerate() {
            let short = sink_src[2 * g + i];
            if short.is_empty() {
                continue;
            }
            let eq = group.equation as u32;
            let of_eq = store.select_first(v, |x| x == eq);
            let id = store.rel_identity(short, &group.deps).expect("short vectors");
            let hit = store.rel_next(of_eq, &id);
            src = store.union(src, hit);
        }
        let mut target = vec![0; width];
        target[0] = sink;
        relations.push(store.rel_constant(src, &target).expect("full width"));
        if !src.is_empty() {
            v = store.insert(v, &target).expect("full width");
        }
    }

    let mut game = SymbolicParityGame {
        store,
        layout,
        groups,
        relations,
        vars,
        v,
        eloise: v,
        abelard: v,
        prio: Vec::new(),
        init,
        expansions,
        levels,
    };
    game.refresh_partition();
    Ok(game)
}

fn rebase(s: MddSet, root: spg_mdd::NodeId) -> MddSet {
    MddSet::from_root(root, s.width())
}

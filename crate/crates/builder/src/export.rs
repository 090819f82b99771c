use std::fmt::Write;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;

use crate::instantiate::SymbolicParityGame;
use crate::BuildError;

/// Explicit view of a symbolic game: vertices in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitEdges {
    pub vectors: Vec<Vec<u32>>,
    pub succ: Vec<Vec<usize>>,
    pub init: usize,
}

pub const DEFAULT_EXPLICIT_CAP: u64 = 1_000_000;

pub fn explicit_edges(g: &mut SymbolicParityGame, cap: u64) -> Result<ExplicitEdges, BuildError> {
    let states = g.state_count();
    if states > BigUint::from(cap) {
        return Err(BuildError::ExplicitCap { cap, states });
    }
    let vectors = g.store.enumerate(g.v, usize::MAX);
    let ids: FxHashMap<&[u32], usize> = vectors.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let maps: Vec<FxHashMap<Vec<u32>, Vec<Vec<u32>>>> = g
        .relations
        .iter()
        .map(|r| {
            let mut m: FxHashMap<Vec<u32>, Vec<Vec<u32>>> = FxHashMap::default();
            for (old, new) in g.store.rel_enumerate(r, usize::MAX) {
                m.entry(old).or_default().push(new);
            }
            m
        })
        .collect();
    let mut succ = Vec::with_capacity(vectors.len());
    for v in &vectors {
        let mut out = Vec::new();
        for (i, r) in g.relations.iter().enumerate() {
            if g.groups.get(i).is_some_and(|x| x.equation != v[0] as usize) {
                continue;
            }
            let short: Vec<u32> = r.deps().iter().map(|&d| v[d as usize]).collect();
            for t in maps[i].get(&short).into_iter().flatten() {
                let mut w = v.clone();
                for (&d, &x) in r.deps().iter().zip(t) {
                    w[d as usize] = x;
                }
                out.push(*ids.get(w.as_slice()).expect("edge target is a vertex"));
            }
        }
        out.sort_unstable();
        out.dedup();
        succ.push(out);
    }
    let init = ids[g.init.as_slice()];
    Ok(ExplicitEdges { vectors, succ, init })
}

/// PGSolver text: `parity <maxid>;` and one
/// `<id> <priority> <owner> <successors> "<label>";` record per vertex, with
/// owner 0 for Eloise and 1 for Abelard. A `start <id>;` line follows the
/// header when the initial vertex is not 0.
pub fn export_explicit(g: &mut SymbolicParityGame, cap: u64) -> Result<String, BuildError> {
    let e = explicit_edges(g, cap)?;
    let mut s = String::new();
    writeln!(s, "parity {};", e.vectors.len().saturating_sub(1)).unwrap();
    if e.init != 0 {
        writeln!(s, "start {};", e.init).unwrap();
    }
    for (i, (v, succ)) in e.vectors.iter().zip(&e.succ).enumerate() {
        let var = &g.vars[v[0] as usize];
        let succ: Vec<String> = succ.iter().map(|x| x.to_string()).collect();
        writeln!(
            s,
            "{i} {} {} {} \"{}\";",
            var.priority,
            var.owner.code(),
            succ.join(","),
            g.label(v)
        )
        .unwrap();
    }
    Ok(s)
}

use std::fmt;

use spg_model::{DataExpr, Param};
use spg_pbes::{Atom, AtomBody, Ppg, PpgEquation};

use crate::layout::Layout;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// One group per equation.
    #[default]
    Simple,
    /// One group per conjunct or disjunct.
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionGroup {
    /// 1-based.
    pub id: usize,
    pub equation: usize,
    /// Indices into the equation's atoms.
    pub atoms: Vec<usize>,
    pub label: String,
    /// Ascending dependent slots, always starting with 0.
    pub deps: Vec<u32>,
}

pub fn partition(ppg: &Ppg, layout: &Layout, strategy: Strategy) -> Vec<TransitionGroup> {
    let mut out = Vec::new();
    for (i, e) in ppg.equations.iter().enumerate() {
        let chunks: Vec<Vec<usize>> = match strategy {
            Strategy::Simple => vec![(0..e.atoms.len()).collect()],
            Strategy::Split if e.atoms.is_empty() => vec![vec![]],
            Strategy::Split => (0..e.atoms.len()).map(|k| vec![k]).collect(),
        };
        let single = chunks.len() == 1;
        for (k, atoms) in chunks.into_iter().enumerate() {
            let label = if single {
                e.name.clone()
            } else {
                format!("{}/{}", e.name, k + 1)
            };
            let deps = group_deps(ppg, layout, i, &atoms);
            out.push(TransitionGroup {
                id: out.len() + 1,
                equation: i,
                atoms,
                label,
                deps,
            });
        }
    }
    out
}

/// Position of parameter `name` of equation `eq` in the state vector.
fn slot_of(layout: &Layout, e: &PpgEquation, eq: usize, name: &str) -> Option<u32> {
    e.params.iter().position(|p| p.name == name).map(|i| layout.eq_slots[eq][i])
}

/// True when argument `j` of a call to `callee` just passes on the caller's
/// own parameter of the same name and sort, so the slot is left unchanged.
pub(crate) fn is_identity(caller: &PpgEquation, callee: &PpgEquation, atom_vars: &[Param], j: usize, arg: &DataExpr) -> bool {
    let target = &callee.params[j];
    matches!(arg, DataExpr::Var(x) if *x == target.name)
        && !atom_vars.iter().any(|v| v.name == target.name)
        && caller.params.iter().any(|p| p.name == target.name && p.sort == target.sort)
}

/// Slots of the caller's parameters that the callee does not have; a call
/// resets them to 0.
pub(crate) fn dropped_slots(layout: &Layout, caller: usize, callee: usize) -> Vec<u32> {
    let keep = &layout.eq_slots[callee];
    layout.eq_slots[caller].iter().copied().filter(|s| !keep.contains(s)).collect()
}

fn group_deps(ppg: &Ppg, layout: &Layout, eq: usize, atoms: &[usize]) -> Vec<u32> {
    let e = &ppg.equations[eq];
    let mut deps = vec![0u32];
    for &a in atoms {
        let Atom { vars, body } = &e.atoms[a];
        let read = |x: &DataExpr, deps: &mut Vec<u32>| {
            for v in x.free_vars() {
                if vars.iter().any(|b| b.name == v) {
                    continue;
                }
                if let Some(s) = slot_of(layout, e, eq, &v) {
                    deps.push(s);
                }
            }
        };
        match body {
            AtomBody::Simple(x) => read(x, &mut deps),
            AtomBody::Call { guard, name, args } => {
                if let Some(g) = guard {
                    read(g, &mut deps);
                }
                let ci = ppg.index(name).expect("call to a defined equation");
                let callee = &ppg.equations[ci];
                for (j, arg) in args.iter().enumerate() {
                    if !is_identity(e, callee, vars, j, arg) {
                        read(arg, &mut deps);
                        deps.push(layout.eq_slots[ci][j]);
                    }
                }
                deps.extend(dropped_slots(layout, eq, ci));
            }
        }
    }
    deps.sort_unstable();
    deps.dedup();
    deps
}

/// Group-by-slot boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyMatrix {
    pub slot_names: Vec<String>,
    pub rows: Vec<(String, Vec<bool>)>,
}

pub fn dependency_matrix(layout: &Layout, groups: &[TransitionGroup]) -> DependencyMatrix {
    let width = layout.width();
    let rows = groups
        .iter()
        .map(|g| {
            let mut row = vec![false; width];
            for &d in &g.deps {
                row[d as usize] = true;
            }
            (g.label.clone(), row)
        })
        .collect();
    DependencyMatrix {
        slot_names: layout.slot_names(),
        rows,
    }
}

impl DependencyMatrix {
    /// Dependent slot names of the row labelled `label`.
    pub fn row(&self, label: &str) -> Option<Vec<&str>> {
        let (_, row) = self.rows.iter().find(|(l, _)| l == label)?;
        Some(
            row.iter()
                .zip(&self.slot_names)
                .filter(|(b, _)| **b)
                .map(|(_, n)| n.as_str())
                .collect(),
        )
    }
}

impl fmt::Display for DependencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lw = self.rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        write!(f, "{:lw$}", "")?;
        for n in &self.slot_names {
            write!(f, " {n}")?;
        }
        writeln!(f)?;
        for (label, row) in &self.rows {
            let mut line = format!("{label:lw$}");
            for (b, n) in row.iter().zip(&self.slot_names) {
                line.push_str(&format!(" {:<w$}", if *b { "+" } else { "-" }, w = n.len()));
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}

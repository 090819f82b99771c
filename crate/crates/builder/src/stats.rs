use std::fmt;

use num_bigint::BigUint;

use crate::instantiate::SymbolicParityGame;

#[derive(Clone, Debug, PartialEq)]
pub struct Stats {
    pub states: BigUint,
    pub mdd_nodes: usize,
    /// Sum of the node counts of the group relations.
    pub relation_nodes: usize,
    /// Per group: label and fraction of dependent slots.
    pub density: Vec<(String, f64)>,
    pub expansions: u64,
    pub levels: usize,
}

pub fn stats(g: &mut SymbolicParityGame) -> Stats {
    let width = g.layout.width() as f64;
    Stats {
        states: g.state_count(),
        mdd_nodes: g.store.node_count(&[g.v.root()]),
        relation_nodes: g.relations.iter().map(|r| g.store.node_count(&[r.root()])).sum(),
        density: g
            .groups
            .iter()
            .map(|gr| (gr.label.clone(), gr.deps.len() as f64 / width))
            .collect(),
        expansions: g.expansions.iter().sum(),
        levels: g.levels,
    }
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states)?;
        writeln!(f, "mdd nodes: {}", self.mdd_nodes)?;
        writeln!(f, "relation nodes: {}", self.relation_nodes)?;
        writeln!(f, "groups: {}", self.density.len())?;
        writeln!(f, "expansions: {}", self.expansions)?;
        writeln!(f, "levels: {}", self.levels)
    }
}

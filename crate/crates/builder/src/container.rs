use serde::{Deserialize, Serialize};
use spg_mdd::{MddSet, NodeStore, SerializedForest};
use spg_model::Value;

use crate::groups::TransitionGroup;
use crate::instantiate::{SymbolicParityGame, VarInfo};
use crate::layout::{Layout, Slot, ValueTable};
use crate::BuildError;

pub const MAGIC: &str = "spg-symbolic-game/1";

#[derive(Serialize, Deserialize)]
struct Group {
    equation: usize,
    atoms: Vec<usize>,
    label: String,
    deps: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct Container {
    magic: String,
    slots: Vec<Slot>,
    tables: Vec<Vec<Value>>,
    eq_slots: Vec<Vec<u32>>,
    vars: Vec<VarInfo>,
    groups: Vec<Group>,
    init: Vec<u32>,
    expansions: Vec<u64>,
    levels: usize,
    /// Roots: the vertex set, one relation per group, then the two sink
    /// relations.
    forest: SerializedForest,
}

pub fn save_game(g: &SymbolicParityGame) -> String {
    let mut roots = vec![g.v.root()];
    roots.extend(g.relations.iter().map(|r| r.root()));
    let c = Container {
        magic: MAGIC.into(),
        slots: g.layout.slots.clone(),
        tables: g.layout.tables.iter().map(|t| t.values().to_vec()).collect(),
        eq_slots: g.layout.eq_slots.clone(),
        vars: g.vars.clone(),
        groups: g
            .groups
            .iter()
            .map(|x| Group {
                equation: x.equation,
                atoms: x.atoms.clone(),
                label: x.label.clone(),
                deps: x.deps.clone(),
            })
            .collect(),
        init: g.init.clone(),
        expansions: g.expansions.clone(),
        levels: g.levels,
        forest: g.store.export_forest(&roots),
    };
    serde_json::to_string(&c).expect("container serialises")
}

pub fn load_game(text: &str) -> Result<SymbolicParityGame, BuildError> {
    let bad = |m: String| BuildError::Container(m);
    let c: Container = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    if c.magic != MAGIC {
        return Err(bad(format!("unknown header {:?}", c.magic)));
    }
    if c.forest.roots.len() != c.groups.len() + 3 {
        return Err(bad("root count does not match the groups".into()));
    }
    let mut store = NodeStore::new();
    let roots = store.import_forest(&c.forest).map_err(|e| bad(e.to_string()))?;
    let layout = Layout {
        slots: c.slots,
        tables: c.tables.into_iter().map(ValueTable::from_values).collect(),
        eq_slots: c.eq_slots,
    };
    let width = layout.width();
    let groups: Vec<TransitionGroup> = c
        .groups
        .into_iter()
        .enumerate()
        .map(|(i, x)| TransitionGroup {
            id: i + 1,
            equation: x.equation,
            atoms: x.atoms,
            label: x.label,
            deps: x.deps,
        })
        .collect();
    let full: Vec<u32> = (0..width as u32).collect();
    let relations = roots[1..]
        .iter()
        .enumerate()
        .map(|(i, &r)| store.relation_from_root(groups.get(i).map_or(&full, |x| &x.deps), r))
        .collect();
    let v = MddSet::from_root(roots[0], width);
    let mut g = SymbolicParityGame {
        store,
        layout,
        groups,
        relations,
        vars: c.vars,
        v,
        eloise: v,
        abelard: v,
        prio: Vec::new(),
        init: c.init,
        expansions: c.expansions,
        levels: c.levels,
    };
    g.refresh_partition();
    Ok(g)
}

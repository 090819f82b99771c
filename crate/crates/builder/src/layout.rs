use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use spg_model::{Sort, Value};
use spg_pbes::Ppg;

/// Bijection between the values seen in one slot and dense integers,
/// numbered in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValueTable {
    values: Vec<Value>,
    index: FxHashMap<Value, u32>,
}

impl ValueTable {
    pub fn from_values(values: Vec<Value>) -> Self {
        let mut t = ValueTable::default();
        for v in values {
            t.encode(&v);
        }
        t
    }

    pub fn encode(&mut self, v: &Value) -> u32 {
        if let Some(&i) = self.index.get(v) {
            return i;
        }
        let i = self.values.len() as u32;
        self.values.push(v.clone());
        self.index.insert(v.clone(), i);
        i
    }

    pub fn lookup(&self, v: &Value) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn decode(&self, i: u32) -> Option<&Value> {
        self.values.get(i as usize)
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub name: String,
    pub sort: Sort,
}

/// State vector layout: slot 0 holds the predicate variable, slots `1..`
/// the unified equation parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    /// Parameter slots; `slots[i]` is vector position `i + 1`.
    pub slots: Vec<Slot>,
    pub tables: Vec<ValueTable>,
    /// Vector position of every parameter, per equation.
    pub eq_slots: Vec<Vec<u32>>,
}

impl Layout {
    pub fn width(&self) -> usize {
        self.slots.len() + 1
    }

    pub fn slot_names(&self) -> Vec<String> {
        std::iter::once("Var".to_string())
            .chain(self.slots.iter().map(|s| s.name.clone()))
            .collect()
    }

    pub fn table(&self, slot: u32) -> &ValueTable {
        &self.tables[slot as usize - 1]
    }

    pub fn table_mut(&mut self, slot: u32) -> &mut ValueTable {
        &mut self.tables[slot as usize - 1]
    }
}

/// Parameters with the same name and sort share a slot; the others get
/// fresh slots in order of first occurrence.
pub fn layout(ppg: &Ppg) -> Layout {
    let mut slots: Vec<Slot> = Vec::new();
    let mut eq_slots = Vec::new();
    for e in &ppg.equations {
        let mut mine = Vec::new();
        for p in &e.params {
            let pos = match slots.iter().position(|s| s.name == p.name && s.sort == p.sort) {
                Some(i) => i,
                None => {
                    slots.push(Slot {
                        name: p.name.clone(),
                        sort: p.sort.clone(),
                    });
                    slots.len() - 1
                }
            };
            mine.push(pos as u32 + 1);
        }
        eq_slots.push(mine);
    }
    // same name, different sort: keep column headers distinct
    for i in 0..slots.len() {
        while slots[..i].iter().any(|s| s.name == slots[i].name) {
            slots[i].name.push('\'');
        }
    }
    let tables = vec![ValueTable::default(); slots.len()];
    Layout {
        slots,
        tables,
        eq_slots,
    }
}

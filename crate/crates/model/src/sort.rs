use std::fmt;

use serde::{Deserialize, Serialize};

/// A concrete data value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Value {
    Bool(bool),
    Int(i64),
    /// A constant of an enumerated sort.
    Sym(String),
    List(Vec<Value>),
}

impl Value {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s),
            Value::List(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SortKind {
    Bool,
    Enum(Vec<String>),
    Int { lo: i64, hi: i64 },
    List { elem: Box<Sort>, max: usize },
}

/// A finite data sort. Anonymous sorts carry their own rendering as name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sort {
    pub name: String,
    pub kind: SortKind,
}

/// Coarse type used for checking expressions; bounds are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Bool,
    Int,
    Enum(String),
    List(Box<Ty>),
    /// Element type of `[]` before it is known.
    Unknown,
}

impl Ty {
    pub fn compatible(&self, other: &Ty) -> bool {
        match (self, other) {
            (Ty::Unknown, _) | (_, Ty::Unknown) => true,
            (Ty::List(a), Ty::List(b)) => a.compatible(b),
            (a, b) => a == b,
        }
    }

    /// The more specific of two compatible types.
    pub fn join(&self, other: &Ty) -> Ty {
        match (self, other) {
            (Ty::Unknown, t) | (t, Ty::Unknown) => t.clone(),
            (Ty::List(a), Ty::List(b)) => Ty::List(Box::new(a.join(b))),
            (a, _) => a.clone(),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Bool => f.write_str("Bool"),
            Ty::Int => f.write_str("Int"),
            Ty::Enum(n) => f.write_str(n),
            Ty::List(e) => write!(f, "List({e})"),
            Ty::Unknown => f.write_str("?"),
        }
    }
}

impl Sort {
    pub fn bool() -> Sort {
        Sort {
            name: "Bool".into(),
            kind: SortKind::Bool,
        }
    }

    pub fn int(lo: i64, hi: i64) -> Sort {
        Sort {
            name: format!("Int({lo}, {hi})"),
            kind: SortKind::Int { lo, hi },
        }
    }

    pub fn list(elem: Sort, max: usize) -> Sort {
        Sort {
            name: format!("List({}, {max})", elem.name),
            kind: SortKind::List {
                elem: Box::new(elem),
                max,
            },
        }
    }

    pub fn enumeration(name: &str, constants: &[&str]) -> Sort {
        Sort {
            name: name.into(),
            kind: SortKind::Enum(constants.iter().map(|c| c.to_string()).collect()),
        }
    }

    /// Renames the sort, e.g. when it is declared as an alias.
    pub fn named(mut self, name: &str) -> Sort {
        self.name = name.into();
        self
    }

    /// True when the sort is referred to by its structure rather than a declared name.
    pub fn is_anonymous(&self) -> bool {
        match &self.kind {
            SortKind::Bool => self.name == "Bool",
            SortKind::Int { lo, hi } => self.name == format!("Int({lo}, {hi})"),
            SortKind::List { elem, max } => self.name == format!("List({}, {max})", elem.name),
            SortKind::Enum(_) => false,
        }
    }

    pub fn ty(&self) -> Ty {
        match &self.kind {
            SortKind::Bool => Ty::Bool,
            SortKind::Int { .. } => Ty::Int,
            SortKind::Enum(_) => Ty::Enum(self.name.clone()),
            SortKind::List { elem, .. } => Ty::List(Box::new(elem.ty())),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (&self.kind, v) {
            (SortKind::Bool, Value::Bool(_)) => true,
            (SortKind::Int { lo, hi }, Value::Int(i)) => lo <= i && i <= hi,
            (SortKind::Enum(cs), Value::Sym(s)) => cs.iter().any(|c| c == s),
            (SortKind::List { elem, max }, Value::List(items)) => {
                items.len() <= *max && items.iter().all(|x| elem.contains(x))
            }
            _ => false,
        }
    }

    /// All values of the sort in a fixed order: declaration order for
    /// enumerations, ascending for integers, length then lexicographic for lists.
    pub fn values(&self) -> Vec<Value> {
        match &self.kind {
            SortKind::Bool => vec![Value::Bool(false), Value::Bool(true)],
            SortKind::Int { lo, hi } => (*lo..=*hi).map(Value::Int).collect(),
            SortKind::Enum(cs) => cs.iter().map(|c| Value::Sym(c.clone())).collect(),
            SortKind::List { elem, max } => {
                let elems = elem.values();
                let mut out = vec![Value::List(Vec::new())];
                let mut layer: Vec<Vec<Value>> = vec![Vec::new()];
                for _ in 0..*max {
                    let mut next = Vec::with_capacity(layer.len() * elems.len());
                    for prefix in &layer {
                        for e in &elems {
                            let mut l = prefix.clone();
                            l.push(e.clone());
                            next.push(l);
                        }
                    }
                    out.extend(next.iter().cloned().map(Value::List));
                    layer = next;
                }
                out
            }
        }
    }

    /// Number of values, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        match &self.kind {
            SortKind::Bool => 2,
            SortKind::Int { lo, hi } => (hi - lo + 1).max(0) as u64,
            SortKind::Enum(cs) => cs.len() as u64,
            SortKind::List { elem, max } => {
                let e = elem.size();
                let mut total: u64 = 0;
                let mut layer: u64 = 1;
                for _ in 0..=*max {
                    total = total.saturating_add(layer);
                    layer = layer.saturating_mul(e);
                }
                total
            }
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sorts() {
        let d = Sort::enumeration("D", &["d1", "d2"]);
        assert_eq!(d.values(), vec![Value::Sym("d1".into()), Value::Sym("d2".into())]);
        assert_eq!(
            Sort::int(0, 2).values(),
            vec![Value::Int(0), Value::Int(1), Value::Int(2)]
        );
        assert_eq!(Sort::int(3, 2).size(), 0);
    }

    #[test]
    fn list_order() {
        let d = Sort::enumeration("D", &["d1", "d2"]);
        let l = Sort::list(d, 2);
        let shown: Vec<String> = l.values().iter().map(|v| v.to_string()).collect();
        assert_eq!(
            shown,
            ["[]", "[d1]", "[d2]", "[d1, d1]", "[d1, d2]", "[d2, d1]", "[d2, d2]"]
        );
        assert_eq!(l.size(), 7);
        assert!(l.contains(&Value::List(vec![Value::Sym("d2".into())])));
        assert!(!l.contains(&Value::List(vec![Value::Sym("d2".into()); 3])));
    }
}

use crate::expr::DataExpr;
use crate::formula::MuFormula;
use crate::sort::{Sort, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
    pub sort: Sort,
}

impl Param {
    pub fn new(name: &str, sort: Sort) -> Param {
        Param {
            name: name.to_string(),
            sort,
        }
    }
}

/// `sum y . c -> a(f) . P(g)`; `next` has one entry per process parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Summand {
    pub sums: Vec<Param>,
    pub guard: DataExpr,
    pub action: String,
    pub args: Vec<DataExpr>,
    pub next: Vec<DataExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearProcess {
    pub name: String,
    pub params: Vec<Param>,
    pub summands: Vec<Summand>,
    pub init: Vec<Value>,
}

impl LinearProcess {
    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }

    /// True when `summand` leaves parameter `i` unchanged.
    pub fn keeps(&self, summand: &Summand, i: usize) -> bool {
        summand.next[i] == DataExpr::Var(self.params[i].name.clone())
    }
}

/// A parsed specification file: declared sorts, one process and any number
/// of named formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spec {
    pub sorts: Vec<Sort>,
    pub process: LinearProcess,
    pub formulas: Vec<(String, MuFormula)>,
}

impl Spec {
    pub fn formula(&self, name: &str) -> Option<&MuFormula> {
        self.formulas.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// The first formula in the file.
    pub fn main_formula(&self) -> Option<&MuFormula> {
        self.formulas.first().map(|(_, f)| f)
    }
}

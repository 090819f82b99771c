use std::fmt;

use spg_model::{DataExpr, Quant, Sort};

/// Predicate formulas: data conditions, predicate variable instances and
/// first-order connectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pred {
    Data(DataExpr),
    Call(String, Vec<DataExpr>),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    Imp(Box<Pred>, Box<Pred>),
    Quant(Quant, String, Sort, Box<Pred>),
}

impl Pred {
    pub fn tt() -> Pred {
        Pred::Data(DataExpr::bool(true))
    }

    pub fn ff() -> Pred {
        Pred::Data(DataExpr::bool(false))
    }

    pub fn and(a: Pred, b: Pred) -> Pred {
        Pred::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Pred, b: Pred) -> Pred {
        Pred::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Pred, b: Pred) -> Pred {
        Pred::Imp(Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quant, x: &str, sort: Sort, body: Pred) -> Pred {
        Pred::Quant(q, x.to_string(), sort, Box::new(body))
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn and_all(items: Vec<Pred>) -> Pred {
        items.into_iter().rev().reduce(|acc, x| Pred::and(x, acc)).unwrap_or_else(Pred::tt)
    }

    /// Right-nested disjunction; `false` when empty.
    pub fn or_all(items: Vec<Pred>) -> Pred {
        items.into_iter().rev().reduce(|acc, x| Pred::or(x, acc)).unwrap_or_else(Pred::ff)
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Pred::Data(e) => e.as_bool(),
            _ => None,
        }
    }

    /// True when no predicate variable occurs.
    pub fn is_simple(&self) -> bool {
        match self {
            Pred::Data(_) => true,
            Pred::Call(..) => false,
            Pred::Not(a) | Pred::Quant(_, _, _, a) => a.is_simple(),
            Pred::And(a, b) | Pred::Or(a, b) | Pred::Imp(a, b) => a.is_simple() && b.is_simple(),
        }
    }

    /// The data expression of a simple formula.
    pub fn to_data(&self) -> Option<DataExpr> {
        Some(match self {
            Pred::Data(e) => e.clone(),
            Pred::Call(..) => return None,
            Pred::Not(a) => DataExpr::not(a.to_data()?),
            Pred::And(a, b) => DataExpr::and(a.to_data()?, b.to_data()?),
            Pred::Or(a, b) => DataExpr::or(a.to_data()?, b.to_data()?),
            Pred::Imp(a, b) => DataExpr::imp(a.to_data()?, b.to_data()?),
            Pred::Quant(q, x, s, a) => DataExpr::quant(*q, x, s.clone(), a.to_data()?),
        })
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Pred::Data(e) => e.has_free(x),
            Pred::Call(_, args) => args.iter().any(|a| a.has_free(x)),
            Pred::Not(a) => a.has_free(x),
            Pred::And(a, b) | Pred::Or(a, b) | Pred::Imp(a, b) => a.has_free(x) || b.has_free(x),
            Pred::Quant(_, y, _, a) => y != x && a.has_free(x),
        }
    }

    /// Free data variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        fn go(p: &Pred, bound: &mut Vec<String>, out: &mut Vec<String>) {
            let mut add = |e: &DataExpr, bound: &Vec<String>| {
                for v in e.free_vars() {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            };
            match p {
                Pred::Data(e) => add(e, bound),
                Pred::Call(_, args) => args.iter().for_each(|a| add(a, bound)),
                Pred::Not(a) => go(a, bound, out),
                Pred::And(a, b) | Pred::Or(a, b) | Pred::Imp(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Pred::Quant(_, x, _, a) => {
                    bound.push(x.clone());
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self, out: &mut Vec<String>) {
        let mut add = |e: &DataExpr| {
            for v in data_vars(e) {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Pred::Data(e) => add(e),
            Pred::Call(_, args) => args.iter().for_each(add),
            Pred::Not(a) => a.all_vars(out),
            Pred::And(a, b) | Pred::Or(a, b) | Pred::Imp(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Pred::Quant(_, x, _, a) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
                a.all_vars(out);
            }
        }
    }

    /// Capture-avoiding simultaneous substitution of data variables.
    pub fn subst(&self, sigma: &[(String, DataExpr)]) -> Pred {
        if sigma.is_empty() {
            return self.clone();
        }
        match self {
            Pred::Data(e) => Pred::Data(e.subst(sigma)),
            Pred::Call(n, args) => Pred::Call(n.clone(), args.iter().map(|a| a.subst(sigma)).collect()),
            Pred::Not(a) => Pred::Not(Box::new(a.subst(sigma))),
            Pred::And(a, b) => Pred::and(a.subst(sigma), b.subst(sigma)),
            Pred::Or(a, b) => Pred::or(a.subst(sigma), b.subst(sigma)),
            Pred::Imp(a, b) => Pred::imp(a.subst(sigma), b.subst(sigma)),
            Pred::Quant(q, x, s, body) => {
                let inner: Vec<(String, DataExpr)> = sigma
                    .iter()
                    .filter(|(n, _)| n != x && body.has_free(n))
                    .cloned()
                    .collect();
                if inner.iter().any(|(_, e)| e.has_free(x)) {
                    let avoid = |c: &str| body.has_free(c) || inner.iter().any(|(_, e)| e.has_free(c));
                    let fresh = prime(x, avoid);
                    let renamed = body.subst(&[(x.clone(), DataExpr::var(&fresh))]);
                    Pred::quant(*q, &fresh, s.clone(), renamed.subst(&inner))
                } else {
                    Pred::quant(*q, x, s.clone(), body.subst(&inner))
                }
            }
        }
    }

    /// Renames predicate variables.
    pub fn map_calls(&self, f: &mut dyn FnMut(&str, &[DataExpr]) -> Pred) -> Pred {
        match self {
            Pred::Data(_) => self.clone(),
            Pred::Call(n, args) => f(n, args),
            Pred::Not(a) => Pred::Not(Box::new(a.map_calls(f))),
            Pred::And(a, b) => Pred::and(a.map_calls(f), b.map_calls(f)),
            Pred::Or(a, b) => Pred::or(a.map_calls(f), b.map_calls(f)),
            Pred::Imp(a, b) => Pred::imp(a.map_calls(f), b.map_calls(f)),
            Pred::Quant(q, x, s, a) => Pred::quant(*q, x, s.clone(), a.map_calls(f)),
        }
    }

    pub fn calls(&self, out: &mut Vec<(String, Vec<DataExpr>)>) {
        match self {
            Pred::Data(_) => {}
            Pred::Call(n, args) => out.push((n.clone(), args.clone())),
            Pred::Not(a) | Pred::Quant(_, _, _, a) => a.calls(out),
            Pred::And(a, b) | Pred::Or(a, b) | Pred::Imp(a, b) => {
                a.calls(out);
                b.calls(out);
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Pred::Quant(..) => 0,
            Pred::Imp(..) => 1,
            Pred::Or(..) => 2,
            Pred::And(..) => 3,
            Pred::Not(_) => 4,
            Pred::Data(e) => {
                if data_prec(e) <= 3 {
                    data_prec(e)
                } else {
                    5
                }
            }
            Pred::Call(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Pred::Data(e) => write!(f, "{e}"),
            Pred::Call(n, args) => {
                f.write_str(n)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            Pred::Not(a) => {
                f.write_str("!")?;
                a.fmt_prec(f, 4)
            }
            Pred::And(a, b) => {
                a.fmt_prec(f, 4)?;
                f.write_str(" && ")?;
                b.fmt_prec(f, 3)
            }
            Pred::Or(a, b) => {
                a.fmt_prec(f, 3)?;
                f.write_str(" || ")?;
                b.fmt_prec(f, 2)
            }
            Pred::Imp(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" => ")?;
                b.fmt_prec(f, 1)
            }
            Pred::Quant(q, x, s, a) => {
                write!(f, "{} {x}: {s} . ", q.keyword())?;
                a.fmt_prec(f, 0)
            }
        }
    }
}

fn data_prec(e: &DataExpr) -> u8 {
    use spg_model::BinOp;
    match e {
        DataExpr::Bin(BinOp::Imp, ..) => 1,
        DataExpr::Bin(BinOp::Or, ..) => 2,
        DataExpr::Bin(BinOp::And, ..) => 3,
        _ => 9,
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// `x'`, `x''`, ... until `taken` rejects it.
pub fn prime(x: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut fresh = format!("{x}'");
    while taken(&fresh) {
        fresh.push('\'');
    }
    fresh
}

/// Every variable name in a data expression, including bound ones.
pub fn data_vars(e: &DataExpr) -> Vec<String> {
    fn go(e: &DataExpr, out: &mut Vec<String>) {
        match e {
            DataExpr::Lit(_) => {}
            DataExpr::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            DataExpr::List(items) => items.iter().for_each(|i| go(i, out)),
            DataExpr::Un(_, a) => go(a, out),
            DataExpr::Bin(_, a, b) => {
                go(a, out);
                go(b, out);
            }
            DataExpr::If(c, a, b) => {
                go(c, out);
                go(a, out);
                go(b, out);
            }
            DataExpr::Quant(_, x, _, a) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
                go(a, out);
            }
        }
    }
    let mut out = Vec::new();
    go(e, &mut out);
    out
}

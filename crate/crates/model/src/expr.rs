use std::fmt;

use crate::sort::{Sort, Ty, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quant {
    Forall,
    Exists,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::Forall => Quant::Exists,
            Quant::Exists => Quant::Forall,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quant::Forall => "forall",
            Quant::Exists => "exists",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    Not,
    Neg,
    Len,
    Head,
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Imp,
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    /// list ++ element
    Append,
    /// list ++ list
    Concat,
    Add,
    Sub,
    Mul,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Imp => "=>",
            BinOp::Or => "||",
            BinOp::And => "&&",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Append | BinOp::Concat => "++",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
        }
    }

    pub(crate) fn prec(self) -> u8 {
        match self {
            BinOp::Imp => 1,
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Append | BinOp::Concat => 5,
            BinOp::Add | BinOp::Sub => 6,
            BinOp::Mul => 7,
        }
    }

    fn is_comparison(self) -> bool {
        self.prec() == 4
    }
}

/// Data expressions over finite sorts.
///
/// Evaluation is total: partial operations (head/tail of `[]`, integer
/// overflow) yield [`Undefined`], every comparison with an undefined operand
/// is false, and boolean connectives read undefined operands as false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DataExpr {
    Lit(Value),
    Var(String),
    List(Vec<DataExpr>),
    Un(UnOp, Box<DataExpr>),
    Bin(BinOp, Box<DataExpr>, Box<DataExpr>),
    If(Box<DataExpr>, Box<DataExpr>, Box<DataExpr>),
    Quant(Quant, String, Sort, Box<DataExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Undefined;

/// Variable bindings; later bindings shadow earlier ones.
#[derive(Clone, Debug, Default)]
pub struct Env {
    vars: Vec<(String, Value)>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn push(&mut self, name: &str, v: Value) {
        self.vars.push((name.to_string(), v));
    }

    pub fn pop(&mut self) {
        self.vars.pop();
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn truncate(&mut self, n: usize) {
        self.vars.truncate(n);
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.vars.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

impl FromIterator<(String, Value)> for Env {
    fn from_iter<I: IntoIterator<Item = (String, Value)>>(iter: I) -> Self {
        Env {
            vars: iter.into_iter().collect(),
        }
    }
}

impl DataExpr {
    pub fn var(name: &str) -> DataExpr {
        DataExpr::Var(name.to_string())
    }

    pub fn bool(b: bool) -> DataExpr {
        DataExpr::Lit(Value::Bool(b))
    }

    pub fn int(i: i64) -> DataExpr {
        DataExpr::Lit(Value::Int(i))
    }

    pub fn sym(s: &str) -> DataExpr {
        DataExpr::Lit(Value::Sym(s.to_string()))
    }

    pub fn un(op: UnOp, e: DataExpr) -> DataExpr {
        DataExpr::Un(op, Box::new(e))
    }

    pub fn bin(op: BinOp, a: DataExpr, b: DataExpr) -> DataExpr {
        DataExpr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn not(e: DataExpr) -> DataExpr {
        DataExpr::un(UnOp::Not, e)
    }

    pub fn and(a: DataExpr, b: DataExpr) -> DataExpr {
        DataExpr::bin(BinOp::And, a, b)
    }

    pub fn or(a: DataExpr, b: DataExpr) -> DataExpr {
        DataExpr::bin(BinOp::Or, a, b)
    }

    pub fn imp(a: DataExpr, b: DataExpr) -> DataExpr {
        DataExpr::bin(BinOp::Imp, a, b)
    }

    pub fn eq(a: DataExpr, b: DataExpr) -> DataExpr {
        DataExpr::bin(BinOp::Eq, a, b)
    }

    pub fn ne(a: DataExpr, b: DataExpr) -> DataExpr {
        DataExpr::bin(BinOp::Ne, a, b)
    }

    pub fn ite(c: DataExpr, a: DataExpr, b: DataExpr) -> DataExpr {
        DataExpr::If(Box::new(c), Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quant, var: &str, sort: Sort, body: DataExpr) -> DataExpr {
        DataExpr::Quant(q, var.to_string(), sort, Box::new(body))
    }

    /// Conjunction of all items; `true` when empty.
    pub fn and_all(items: impl IntoIterator<Item = DataExpr>) -> DataExpr {
        let mut items: Vec<DataExpr> = items.into_iter().collect();
        match items.len() {
            0 => DataExpr::bool(true),
            _ => {
                let mut acc = items.pop().unwrap();
                while let Some(x) = items.pop() {
                    acc = DataExpr::and(x, acc);
                }
                acc
            }
        }
    }

    /// Disjunction of all items; `false` when empty.
    pub fn or_all(items: impl IntoIterator<Item = DataExpr>) -> DataExpr {
        let mut items: Vec<DataExpr> = items.into_iter().collect();
        match items.len() {
            0 => DataExpr::bool(false),
            _ => {
                let mut acc = items.pop().unwrap();
                while let Some(x) = items.pop() {
                    acc = DataExpr::or(x, acc);
                }
                acc
            }
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            DataExpr::Lit(Value::Bool(b)) => Some(*b),
            _ => None,
        }
    }

    /// Evaluates under `env`, which must bind every free variable.
    pub fn eval(&self, env: &mut Env) -> Result<Value, Undefined> {
        Ok(match self {
            DataExpr::Lit(v) => v.clone(),
            DataExpr::Var(x) => env
                .get(x)
                .cloned()
                .unwrap_or_else(|| panic!("unbound variable `{x}` during evaluation")),
            DataExpr::List(items) => Value::List(
                items
                    .iter()
                    .map(|e| e.eval(env))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            DataExpr::Un(op, e) => match op {
                UnOp::Not => Value::Bool(!e.eval_bool(env)),
                UnOp::Neg => {
                    let i = e.eval(env)?.as_int().ok_or(Undefined)?;
                    Value::Int(i.checked_neg().ok_or(Undefined)?)
                }
                UnOp::Len => match e.eval(env)? {
                    Value::List(l) => Value::Int(l.len() as i64),
                    _ => return Err(Undefined),
                },
                UnOp::Head => match e.eval(env)? {
                    Value::List(l) => l.into_iter().next().ok_or(Undefined)?,
                    _ => return Err(Undefined),
                },
                UnOp::Tail => match e.eval(env)? {
                    Value::List(l) if !l.is_empty() => Value::List(l[1..].to_vec()),
                    _ => return Err(Undefined),
                },
            },
            DataExpr::Bin(op, a, b) => match op {
                BinOp::And => Value::Bool(a.eval_bool(env) && b.eval_bool(env)),
                BinOp::Or => Value::Bool(a.eval_bool(env) || b.eval_bool(env)),
                BinOp::Imp => Value::Bool(!a.eval_bool(env) || b.eval_bool(env)),
                op if op.is_comparison() => {
                    let (x, y) = match (a.eval(env), b.eval(env)) {
                        (Ok(x), Ok(y)) => (x, y),
                        _ => return Ok(Value::Bool(false)),
                    };
                    let r = match op {
                        BinOp::Eq => x == y,
                        BinOp::Ne => x != y,
                        _ => match (x, y) {
                            (Value::Int(x), Value::Int(y)) => match op {
                                BinOp::Lt => x < y,
                                BinOp::Le => x <= y,
                                BinOp::Gt => x > y,
                                _ => x >= y,
                            },
                            _ => false,
                        },
                    };
                    Value::Bool(r)
                }
                BinOp::Append => match a.eval(env)? {
                    Value::List(mut l) => {
                        l.push(b.eval(env)?);
                        Value::List(l)
                    }
                    _ => return Err(Undefined),
                },
                BinOp::Concat => match (a.eval(env)?, b.eval(env)?) {
                    (Value::List(mut l), Value::List(r)) => {
                        l.extend(r);
                        Value::List(l)
                    }
                    _ => return Err(Undefined),
                },
                _ => {
                    let x = a.eval(env)?.as_int().ok_or(Undefined)?;
                    let y = b.eval(env)?.as_int().ok_or(Undefined)?;
                    let r = match op {
                        BinOp::Add => x.checked_add(y),
                        BinOp::Sub => x.checked_sub(y),
                        _ => x.checked_mul(y),
                    };
                    Value::Int(r.ok_or(Undefined)?)
                }
            },
            DataExpr::If(c, a, b) => match c.eval(env)? {
                Value::Bool(true) => a.eval(env)?,
                Value::Bool(false) => b.eval(env)?,
                _ => return Err(Undefined),
            },
            DataExpr::Quant(q, x, sort, body) => {
                let want = *q == Quant::Exists;
                let mut found = false;
                for v in sort.values() {
                    env.push(x, v);
                    let r = body.eval_bool(env);
                    env.pop();
                    if r == want {
                        found = true;
                        break;
                    }
                }
                Value::Bool(found == want)
            }
        })
    }

    /// Boolean value with undefined read as false.
    pub fn eval_bool(&self, env: &mut Env) -> bool {
        matches!(self.eval(env), Ok(Value::Bool(true)))
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, name: &str) -> bool {
        match self {
            DataExpr::Lit(_) => false,
            DataExpr::Var(x) => x == name,
            DataExpr::List(items) => items.iter().any(|e| e.has_free(name)),
            DataExpr::Un(_, e) => e.has_free(name),
            DataExpr::Bin(_, a, b) => a.has_free(name) || b.has_free(name),
            DataExpr::If(c, a, b) => c.has_free(name) || a.has_free(name) || b.has_free(name),
            DataExpr::Quant(_, x, _, body) => x != name && body.has_free(name),
        }
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            DataExpr::Lit(_) => {}
            DataExpr::Var(x) => {
                if !bound.contains(x) && !out.contains(x) {
                    out.push(x.clone());
                }
            }
            DataExpr::List(items) => items.iter().for_each(|e| e.collect_free(bound, out)),
            DataExpr::Un(_, e) => e.collect_free(bound, out),
            DataExpr::Bin(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            DataExpr::If(c, a, b) => {
                c.collect_free(bound, out);
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            DataExpr::Quant(_, x, _, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn subst(&self, sigma: &[(String, DataExpr)]) -> DataExpr {
        if sigma.is_empty() {
            return self.clone();
        }
        match self {
            DataExpr::Lit(_) => self.clone(),
            DataExpr::Var(x) => sigma
                .iter()
                .find(|(n, _)| n == x)
                .map(|(_, e)| e.clone())
                .unwrap_or_else(|| self.clone()),
            DataExpr::List(items) => DataExpr::List(items.iter().map(|e| e.subst(sigma)).collect()),
            DataExpr::Un(op, e) => DataExpr::un(*op, e.subst(sigma)),
            DataExpr::Bin(op, a, b) => DataExpr::bin(*op, a.subst(sigma), b.subst(sigma)),
            DataExpr::If(c, a, b) => DataExpr::ite(c.subst(sigma), a.subst(sigma), b.subst(sigma)),
            DataExpr::Quant(q, x, sort, body) => {
                let (x, body, inner) = rebind(x, body.as_ref(), sigma, DataExpr::has_free, |b, s| b.subst(s));
                DataExpr::quant(*q, &x, sort.clone(), body.subst(&inner))
            }
        }
    }

    /// True when evaluation can never be undefined.
    pub fn is_total(&self) -> bool {
        match self {
            DataExpr::Lit(_) | DataExpr::Var(_) => true,
            DataExpr::List(items) => items.iter().all(DataExpr::is_total),
            DataExpr::Un(UnOp::Not, _) | DataExpr::Quant(..) => true,
            DataExpr::Un(UnOp::Len, e) => e.is_total(),
            DataExpr::Un(..) => false,
            DataExpr::Bin(op, a, b) => match op {
                BinOp::And | BinOp::Or | BinOp::Imp => true,
                op if op.is_comparison() => true,
                BinOp::Append | BinOp::Concat => a.is_total() && b.is_total(),
                _ => false,
            },
            DataExpr::If(c, a, b) => c.is_total() && a.is_total() && b.is_total(),
        }
    }

    /// Constant folding that preserves the value in boolean contexts.
    pub fn simplify(&self) -> DataExpr {
        match self {
            DataExpr::Lit(_) | DataExpr::Var(_) => self.clone(),
            DataExpr::List(items) => {
                let items: Vec<DataExpr> = items.iter().map(DataExpr::simplify).collect();
                if items.iter().all(|e| matches!(e, DataExpr::Lit(_))) {
                    let vals = items
                        .into_iter()
                        .map(|e| match e {
                            DataExpr::Lit(v) => v,
                            _ => unreachable!(),
                        })
                        .collect();
                    DataExpr::Lit(Value::List(vals))
                } else {
                    DataExpr::List(items)
                }
            }
            DataExpr::Un(op, e) => {
                let e = e.simplify();
                let folded = DataExpr::un(*op, e);
                fold_closed(&folded).unwrap_or(folded)
            }
            DataExpr::Bin(op, a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (op, a.as_bool(), b.as_bool()) {
                    (BinOp::And, Some(false), _) | (BinOp::And, _, Some(false)) => DataExpr::bool(false),
                    (BinOp::And, Some(true), _) => b,
                    (BinOp::And, _, Some(true)) => a,
                    (BinOp::Or, Some(true), _) | (BinOp::Or, _, Some(true)) => DataExpr::bool(true),
                    (BinOp::Or, Some(false), _) => b,
                    (BinOp::Or, _, Some(false)) => a,
                    (BinOp::Imp, Some(false), _) | (BinOp::Imp, _, Some(true)) => DataExpr::bool(true),
                    (BinOp::Imp, Some(true), _) => b,
                    (BinOp::Imp, _, Some(false)) => DataExpr::not(a).simplify(),
                    (BinOp::Eq, ..) | (BinOp::Ne, ..) if a == b && a.is_total() => {
                        DataExpr::bool(*op == BinOp::Eq)
                    }
                    _ => {
                        let e = DataExpr::bin(*op, a, b);
                        fold_closed(&e).unwrap_or(e)
                    }
                }
            }
            DataExpr::If(c, a, b) => {
                let c = c.simplify();
                match c.as_bool() {
                    Some(true) => a.simplify(),
                    Some(false) => b.simplify(),
                    None => DataExpr::ite(c, a.simplify(), b.simplify()),
                }
            }
            DataExpr::Quant(q, x, sort, body) => {
                let body = body.simplify();
                if !body.has_free(x) {
                    if sort.size() == 0 {
                        return DataExpr::bool(*q == Quant::Forall);
                    }
                    return body;
                }
                DataExpr::quant(*q, x, sort.clone(), body)
            }
        }
    }

    /// Checks sorts and returns the coarse type. `var_ty` resolves free
    /// variables; enumeration constants resolve through `const_ty` and are
    /// accepted as unknown when it returns `None`.
    pub fn infer(
        &self,
        var_ty: &dyn Fn(&str) -> Option<Ty>,
        const_ty: &dyn Fn(&str) -> Option<Ty>,
    ) -> Result<Ty, String> {
        let mut bound: Vec<(String, Ty)> = Vec::new();
        self.infer_in(&mut bound, var_ty, const_ty)
    }

    fn infer_in(
        &self,
        bound: &mut Vec<(String, Ty)>,
        var_ty: &dyn Fn(&str) -> Option<Ty>,
        const_ty: &dyn Fn(&str) -> Option<Ty>,
    ) -> Result<Ty, String> {
        let expect = |t: &Ty, want: &Ty, what: &str| -> Result<(), String> {
            if t.compatible(want) {
                Ok(())
            } else {
                Err(format!("{what}: expected {want}, found {t}"))
            }
        };
        Ok(match self {
            DataExpr::Lit(v) => value_ty(v, const_ty),
            DataExpr::Var(x) => match bound.iter().rev().find(|(n, _)| n == x) {
                Some((_, t)) => t.clone(),
                None => var_ty(x).ok_or_else(|| format!("unbound variable `{x}`"))?,
            },
            DataExpr::List(items) => {
                let mut elem = Ty::Unknown;
                for e in items {
                    let t = e.infer_in(bound, var_ty, const_ty)?;
                    expect(&t, &elem, "list element")?;
                    elem = elem.join(&t);
                }
                Ty::List(Box::new(elem))
            }
            DataExpr::Un(op, e) => {
                let t = e.infer_in(bound, var_ty, const_ty)?;
                match op {
                    UnOp::Not => {
                        expect(&t, &Ty::Bool, "operand of `!`")?;
                        Ty::Bool
                    }
                    UnOp::Neg => {
                        expect(&t, &Ty::Int, "operand of unary `-`")?;
                        Ty::Int
                    }
                    UnOp::Len | UnOp::Head | UnOp::Tail => {
                        let Ty::List(elem) = t.join(&Ty::List(Box::new(Ty::Unknown))) else {
                            return Err(format!("list operation applied to {t}"));
                        };
                        match op {
                            UnOp::Len => Ty::Int,
                            UnOp::Head => *elem,
                            _ => Ty::List(elem),
                        }
                    }
                }
            }
            DataExpr::Bin(op, a, b) => {
                let ta = a.infer_in(bound, var_ty, const_ty)?;
                let tb = b.infer_in(bound, var_ty, const_ty)?;
                match op {
                    BinOp::And | BinOp::Or | BinOp::Imp => {
                        expect(&ta, &Ty::Bool, "boolean operand")?;
                        expect(&tb, &Ty::Bool, "boolean operand")?;
                        Ty::Bool
                    }
                    BinOp::Eq | BinOp::Ne => {
                        expect(&tb, &ta, "comparison")?;
                        Ty::Bool
                    }
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        expect(&ta, &Ty::Int, "ordering operand")?;
                        expect(&tb, &Ty::Int, "ordering operand")?;
                        Ty::Bool
                    }
                    BinOp::Append => {
                        let list = Ty::List(Box::new(tb.clone()));
                        expect(&ta, &list, "append")?;
                        ta.join(&list)
                    }
                    BinOp::Concat => {
                        expect(&ta, &Ty::List(Box::new(Ty::Unknown)), "concatenation")?;
                        expect(&tb, &ta, "concatenation")?;
                        ta.join(&tb)
                    }
                    BinOp::Add | BinOp::Sub | BinOp::Mul => {
                        expect(&ta, &Ty::Int, "arithmetic operand")?;
                        expect(&tb, &Ty::Int, "arithmetic operand")?;
                        Ty::Int
                    }
                }
            }
            DataExpr::If(c, a, b) => {
                let tc = c.infer_in(bound, var_ty, const_ty)?;
                expect(&tc, &Ty::Bool, "condition")?;
                let ta = a.infer_in(bound, var_ty, const_ty)?;
                let tb = b.infer_in(bound, var_ty, const_ty)?;
                expect(&tb, &ta, "branches of if")?;
                ta.join(&tb)
            }
            DataExpr::Quant(_, x, sort, body) => {
                bound.push((x.clone(), sort.ty()));
                let t = body.infer_in(bound, var_ty, const_ty);
                bound.pop();
                expect(&t?, &Ty::Bool, "quantifier body")?;
                Ty::Bool
            }
        })
    }

    pub(crate) fn prec(&self) -> u8 {
        match self {
            DataExpr::Bin(op, ..) => op.prec(),
            DataExpr::Un(UnOp::Head | UnOp::Tail, _) => 9,
            DataExpr::Un(..) => 8,
            DataExpr::Lit(Value::Int(i)) if *i < 0 => 8,
            _ => 9,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            DataExpr::Lit(v) => write!(f, "{v}"),
            DataExpr::Var(x) => f.write_str(x),
            DataExpr::List(items) => {
                f.write_str("[")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    e.fmt_prec(f, 0)?;
                }
                f.write_str("]")
            }
            DataExpr::Un(op, e) => match op {
                UnOp::Not => {
                    f.write_str("!")?;
                    e.fmt_prec(f, 8)
                }
                UnOp::Neg => {
                    f.write_str("-")?;
                    e.fmt_prec(f, 9)
                }
                UnOp::Len => {
                    f.write_str("#")?;
                    e.fmt_prec(f, 8)
                }
                UnOp::Head | UnOp::Tail => {
                    f.write_str(if *op == UnOp::Head { "head(" } else { "tail(" })?;
                    e.fmt_prec(f, 0)?;
                    f.write_str(")")
                }
            },
            DataExpr::Bin(op, a, b) => {
                let p = op.prec();
                let (l, r) = match op {
                    BinOp::Imp => (p + 1, p),
                    op if op.is_comparison() => (p + 1, p + 1),
                    _ => (p, p + 1),
                };
                a.fmt_prec(f, l)?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_prec(f, r)
            }
            DataExpr::If(c, a, b) => {
                f.write_str("if(")?;
                c.fmt_prec(f, 0)?;
                f.write_str(", ")?;
                a.fmt_prec(f, 0)?;
                f.write_str(", ")?;
                b.fmt_prec(f, 0)?;
                f.write_str(")")
            }
            DataExpr::Quant(q, x, sort, body) => {
                write!(f, "({} {x}: {sort} . ", q.keyword())?;
                body.fmt_prec(f, 0)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for DataExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Prints `e` so that it reparses as a single operand at precedence `min`.
pub(crate) struct Prec<'a>(pub &'a DataExpr, pub u8);

impl fmt::Display for Prec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_prec(f, self.1)
    }
}

fn value_ty(v: &Value, const_ty: &dyn Fn(&str) -> Option<Ty>) -> Ty {
    match v {
        Value::Bool(_) => Ty::Bool,
        Value::Int(_) => Ty::Int,
        Value::Sym(s) => const_ty(s).unwrap_or(Ty::Unknown),
        Value::List(items) => Ty::List(Box::new(
            items
                .iter()
                .map(|x| value_ty(x, const_ty))
                .fold(Ty::Unknown, |a, b| a.join(&b)),
        )),
    }
}

fn fold_closed(e: &DataExpr) -> Option<DataExpr> {
    let closed = |x: &DataExpr| matches!(x, DataExpr::Lit(_));
    let all_lit = match e {
        DataExpr::Un(_, a) => closed(a),
        DataExpr::Bin(_, a, b) => closed(a) && closed(b),
        _ => false,
    };
    if !all_lit {
        return None;
    }
    e.eval(&mut Env::new()).ok().map(DataExpr::Lit)
}

/// Prepares a binder `x` for substitution `sigma` into `body`: drops `x` from
/// `sigma` and renames `x` when it would capture a variable of an image.
pub(crate) fn rebind<B>(
    x: &str,
    body: &B,
    sigma: &[(String, DataExpr)],
    has_free: impl Fn(&B, &str) -> bool,
    apply: impl Fn(&B, &[(String, DataExpr)]) -> B,
) -> (String, B, Vec<(String, DataExpr)>)
where
    B: Clone,
{
    let inner: Vec<(String, DataExpr)> = sigma
        .iter()
        .filter(|(n, _)| n != x && has_free(body, n))
        .cloned()
        .collect();
    let captures = inner.iter().any(|(_, e)| e.has_free(x));
    if !captures {
        return (x.to_string(), body.clone(), inner);
    }
    let mut fresh = format!("{x}'");
    while has_free(body, &fresh) || inner.iter().any(|(_, e)| e.has_free(&fresh)) {
        fresh.push('\'');
    }
    let renamed = apply(body, &[(x.to_string(), DataExpr::Var(fresh.clone()))]);
    (fresh, renamed, inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(items: &[&str]) -> Value {
        Value::List(items.iter().map(|s| Value::Sym(s.to_string())).collect())
    }

    #[test]
    fn list_operations() {
        let mut env: Env = [("q".to_string(), list(&["d1", "d2"])), ("d".to_string(), Value::Sym("d2".into()))]
            .into_iter()
            .collect();
        let head = DataExpr::un(UnOp::Head, DataExpr::var("q"));
        assert_eq!(head.eval(&mut env), Ok(Value::Sym("d1".into())));
        let short = DataExpr::bin(BinOp::Lt, DataExpr::un(UnOp::Len, DataExpr::var("q")), DataExpr::int(2));
        assert!(!short.eval_bool(&mut env));
        let app = DataExpr::bin(BinOp::Append, DataExpr::List(vec![DataExpr::sym("d1")]), DataExpr::var("d"));
        assert_eq!(app.eval(&mut env), Ok(list(&["d1", "d2"])));
    }

    #[test]
    fn undefined_is_contained() {
        let mut env: Env = [("q".to_string(), list(&[]))].into_iter().collect();
        let head = DataExpr::un(UnOp::Head, DataExpr::var("q"));
        assert_eq!(head.eval(&mut env), Err(Undefined));
        assert!(!DataExpr::eq(head.clone(), DataExpr::sym("d1")).eval_bool(&mut env));
        assert!(!DataExpr::ne(head.clone(), DataExpr::sym("d1")).eval_bool(&mut env));
        assert!(DataExpr::not(DataExpr::eq(head, DataExpr::sym("d1"))).eval_bool(&mut env));
    }

    #[test]
    fn substitution_avoids_capture() {
        let sort = Sort::enumeration("D", &["a", "b"]);
        let body = DataExpr::eq(DataExpr::var("x"), DataExpr::var("y"));
        let e = DataExpr::quant(Quant::Exists, "x", sort, body);
        let s = e.subst(&[("y".into(), DataExpr::var("x"))]);
        assert_eq!(s.to_string(), "(exists x': D . x' == x)");
        assert_eq!(s.free_vars(), vec!["x".to_string()]);
    }

    #[test]
    fn folding() {
        let e = DataExpr::and(DataExpr::bool(true), DataExpr::eq(DataExpr::sym("a"), DataExpr::sym("b")));
        assert_eq!(e.simplify(), DataExpr::bool(false));
        let h = DataExpr::un(UnOp::Head, DataExpr::Lit(Value::List(vec![])));
        assert_eq!(DataExpr::eq(h.clone(), h.clone()).simplify(), DataExpr::eq(h.clone(), h));
    }

    #[test]
    fn printing_respects_precedence() {
        let e = DataExpr::and(
            DataExpr::or(DataExpr::var("a"), DataExpr::var("b")),
            DataExpr::bin(BinOp::Sub, DataExpr::var("x"), DataExpr::bin(BinOp::Sub, DataExpr::var("y"), DataExpr::int(1))),
        );
        assert_eq!(e.to_string(), "(a || b) && x - (y - 1)");
    }
}

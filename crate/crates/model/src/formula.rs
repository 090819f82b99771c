use std::fmt;

use crate::expr::{DataExpr, Env, Quant};
use crate::sort::{Sort, Value};
use crate::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixpoint {
    Mu,
    Nu,
}

impl Fixpoint {
    pub fn dual(self) -> Fixpoint {
        match self {
            Fixpoint::Mu => Fixpoint::Nu,
            Fixpoint::Nu => Fixpoint::Mu,
        }
    }
}

impl fmt::Display for Fixpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fixpoint::Mu => "mu",
            Fixpoint::Nu => "nu",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ActionArg {
    Any,
    Expr(DataExpr),
}

/// Predicates on actions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ActionFormula {
    Const(bool),
    /// `name` alone matches every argument list; `name(args)` checks arity
    /// and compares each non-wildcard argument.
    Act { name: String, args: Option<Vec<ActionArg>> },
    Not(Box<ActionFormula>),
    And(Box<ActionFormula>, Box<ActionFormula>),
    Or(Box<ActionFormula>, Box<ActionFormula>),
}

impl ActionFormula {
    pub fn act(name: &str, args: Option<Vec<ActionArg>>) -> ActionFormula {
        ActionFormula::Act {
            name: name.to_string(),
            args,
        }
    }

    /// Truth of the predicate for a concrete action.
    pub fn matches(&self, name: &str, args: &[Value], env: &mut Env) -> Result<bool, ModelError> {
        Ok(match self {
            ActionFormula::Const(b) => *b,
            ActionFormula::Act { name: n, args: pat } => {
                if n != name {
                    return Ok(false);
                }
                match pat {
                    None => true,
                    Some(pat) => {
                        check_arity(n, pat.len(), args.len())?;
                        let mut ok = true;
                        for (p, v) in pat.iter().zip(args) {
                            if let ActionArg::Expr(e) = p {
                                if e.eval(env).ok().as_ref() != Some(v) {
                                    ok = false;
                                }
                            }
                        }
                        ok
                    }
                }
            }
            ActionFormula::Not(a) => !a.matches(name, args, env)?,
            ActionFormula::And(a, b) => a.matches(name, args, env)? && b.matches(name, args, env)?,
            ActionFormula::Or(a, b) => a.matches(name, args, env)? || b.matches(name, args, env)?,
        })
    }

    /// The predicate as a data condition on symbolic action arguments.
    pub fn condition(&self, name: &str, args: &[DataExpr]) -> Result<DataExpr, ModelError> {
        Ok(match self {
            ActionFormula::Const(b) => DataExpr::bool(*b),
            ActionFormula::Act { name: n, args: pat } => {
                if n != name {
                    return Ok(DataExpr::bool(false));
                }
                match pat {
                    None => DataExpr::bool(true),
                    Some(pat) => {
                        check_arity(n, pat.len(), args.len())?;
                        DataExpr::and_all(pat.iter().zip(args).filter_map(|(p, a)| match p {
                            ActionArg::Any => None,
                            ActionArg::Expr(e) => Some(DataExpr::eq(a.clone(), e.clone())),
                        }))
                    }
                }
            }
            ActionFormula::Not(a) => DataExpr::not(a.condition(name, args)?),
            ActionFormula::And(a, b) => DataExpr::and(a.condition(name, args)?, b.condition(name, args)?),
            ActionFormula::Or(a, b) => DataExpr::or(a.condition(name, args)?, b.condition(name, args)?),
        })
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            ActionFormula::Const(_) => {}
            ActionFormula::Act { args, .. } => {
                for a in args.iter().flatten() {
                    if let ActionArg::Expr(e) = a {
                        for v in e.free_vars() {
                            if !out.contains(&v) {
                                out.push(v);
                            }
                        }
                    }
                }
            }
            ActionFormula::Not(a) => a.free_vars(out),
            ActionFormula::And(a, b) | ActionFormula::Or(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
        }
    }

    pub fn subst(&self, sigma: &[(String, DataExpr)]) -> ActionFormula {
        match self {
            ActionFormula::Const(_) => self.clone(),
            ActionFormula::Act { name, args } => ActionFormula::Act {
                name: name.clone(),
                args: args.as_ref().map(|args| {
                    args.iter()
                        .map(|a| match a {
                            ActionArg::Any => ActionArg::Any,
                            ActionArg::Expr(e) => ActionArg::Expr(e.subst(sigma)),
                        })
                        .collect()
                }),
            },
            ActionFormula::Not(a) => ActionFormula::Not(Box::new(a.subst(sigma))),
            ActionFormula::And(a, b) => ActionFormula::And(Box::new(a.subst(sigma)), Box::new(b.subst(sigma))),
            ActionFormula::Or(a, b) => ActionFormula::Or(Box::new(a.subst(sigma)), Box::new(b.subst(sigma))),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            ActionFormula::Or(..) => 1,
            ActionFormula::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            ActionFormula::Const(b) => write!(f, "{b}"),
            ActionFormula::Act { name, args } => {
                f.write_str(name)?;
                if let Some(args) = args {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        match a {
                            ActionArg::Any => f.write_str("_")?,
                            ActionArg::Expr(e) => write!(f, "{e}")?,
                        }
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            ActionFormula::Not(a) => {
                f.write_str("!")?;
                a.fmt_prec(f, 3)
            }
            ActionFormula::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" && ")?;
                b.fmt_prec(f, 3)
            }
            ActionFormula::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" || ")?;
                b.fmt_prec(f, 2)
            }
        }
    }
}

impl fmt::Display for ActionFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn check_arity(name: &str, pattern: usize, actual: usize) -> Result<(), ModelError> {
    if pattern != actual {
        return Err(ModelError::Arity {
            action: name.to_string(),
            expected: pattern,
            actual,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixParam {
    pub name: String,
    pub sort: Sort,
    pub init: DataExpr,
}

/// First-order modal mu-calculus formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MuFormula {
    Data(DataExpr),
    Not(Box<MuFormula>),
    And(Box<MuFormula>, Box<MuFormula>),
    Or(Box<MuFormula>, Box<MuFormula>),
    Imp(Box<MuFormula>, Box<MuFormula>),
    Must(ActionFormula, Box<MuFormula>),
    May(ActionFormula, Box<MuFormula>),
    Quant(Quant, String, Sort, Box<MuFormula>),
    Var(String, Vec<DataExpr>),
    Fix {
        sigma: Fixpoint,
        name: String,
        params: Vec<FixParam>,
        body: Box<MuFormula>,
    },
}

impl MuFormula {
    pub fn and(a: MuFormula, b: MuFormula) -> MuFormula {
        MuFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: MuFormula, b: MuFormula) -> MuFormula {
        MuFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn must(a: ActionFormula, f: MuFormula) -> MuFormula {
        MuFormula::Must(a, Box::new(f))
    }

    pub fn may(a: ActionFormula, f: MuFormula) -> MuFormula {
        MuFormula::May(a, Box::new(f))
    }

    pub fn fix(sigma: Fixpoint, name: &str, body: MuFormula) -> MuFormula {
        MuFormula::Fix {
            sigma,
            name: name.to_string(),
            params: Vec::new(),
            body: Box::new(body),
        }
    }

    /// Checks that every propositional variable occurs under an even number
    /// of negations (the antecedent of `=>` counts as one) and is bound.
    pub fn check_positive(&self) -> Result<(), ModelError> {
        fn go<'a>(f: &'a MuFormula, neg: bool, scope: &mut Vec<(&'a str, bool)>) -> Result<(), ModelError> {
            match f {
                MuFormula::Data(_) => Ok(()),
                MuFormula::Not(a) => go(a, !neg, scope),
                MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                    go(a, neg, scope)?;
                    go(b, neg, scope)
                }
                MuFormula::Imp(a, b) => {
                    go(a, !neg, scope)?;
                    go(b, neg, scope)
                }
                MuFormula::Must(_, a) | MuFormula::May(_, a) | MuFormula::Quant(_, _, _, a) => go(a, neg, scope),
                MuFormula::Var(x, _) => match scope.iter().rev().find(|(n, _)| n == x) {
                    None => Err(ModelError::Unbound(x.clone())),
                    Some(&(_, at)) if at != neg => Err(ModelError::Positivity(x.clone())),
                    Some(_) => Ok(()),
                },
                MuFormula::Fix { name, body, .. } => {
                    scope.push((name, neg));
                    let r = go(body, neg, scope);
                    scope.pop();
                    r
                }
            }
        }
        go(self, false, &mut Vec::new())
    }

    /// Negation normal form: no `Not` or `Imp` above modalities, fixpoints or
    /// variables. Negations end up inside data expressions. Requires
    /// [`MuFormula::check_positive`] to hold.
    pub fn nnf(&self) -> MuFormula {
        self.nnf_in(false)
    }

    fn nnf_in(&self, neg: bool) -> MuFormula {
        match self {
            MuFormula::Data(e) => MuFormula::Data(if neg { DataExpr::not(e.clone()) } else { e.clone() }),
            MuFormula::Not(a) => a.nnf_in(!neg),
            MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                let (a, b) = (a.nnf_in(neg), b.nnf_in(neg));
                if matches!(self, MuFormula::And(..)) != neg {
                    MuFormula::and(a, b)
                } else {
                    MuFormula::or(a, b)
                }
            }
            MuFormula::Imp(a, b) => {
                let (a, b) = (a.nnf_in(!neg), b.nnf_in(neg));
                if neg {
                    MuFormula::and(a, b)
                } else {
                    MuFormula::or(a, b)
                }
            }
            MuFormula::Must(act, a) | MuFormula::May(act, a) => {
                let a = a.nnf_in(neg);
                if matches!(self, MuFormula::Must(..)) != neg {
                    MuFormula::must(act.clone(), a)
                } else {
                    MuFormula::may(act.clone(), a)
                }
            }
            MuFormula::Quant(q, x, s, a) => {
                let q = if neg { q.dual() } else { *q };
                MuFormula::Quant(q, x.clone(), s.clone(), Box::new(a.nnf_in(neg)))
            }
            // Under an odd number of negations the binder itself was negated,
            // so each occurrence carries a matching negation that cancels.
            MuFormula::Var(..) => self.clone(),
            MuFormula::Fix {
                sigma,
                name,
                params,
                body,
            } => MuFormula::Fix {
                sigma: if neg { sigma.dual() } else { *sigma },
                name: name.clone(),
                params: params.clone(),
                body: Box::new(body.nnf_in(neg)),
            },
        }
    }

    /// Free data variables in order of first occurrence.
    pub fn free_data_vars(&self) -> Vec<String> {
        fn add(out: &mut Vec<String>, bound: &[String], vars: Vec<String>) {
            for v in vars {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        fn go(f: &MuFormula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                MuFormula::Data(e) => add(out, bound, e.free_vars()),
                MuFormula::Not(a) => go(a, bound, out),
                MuFormula::And(a, b) | MuFormula::Or(a, b) | MuFormula::Imp(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                MuFormula::Must(act, a) | MuFormula::May(act, a) => {
                    let mut v = Vec::new();
                    act.free_vars(&mut v);
                    add(out, bound, v);
                    go(a, bound, out);
                }
                MuFormula::Quant(_, x, _, a) => {
                    bound.push(x.clone());
                    go(a, bound, out);
                    bound.pop();
                }
                MuFormula::Var(_, args) => {
                    for e in args {
                        add(out, bound, e.free_vars());
                    }
                }
                MuFormula::Fix { params, body, .. } => {
                    for p in params {
                        add(out, bound, p.init.free_vars());
                    }
                    let n = bound.len();
                    bound.extend(params.iter().map(|p| p.name.clone()));
                    go(body, bound, out);
                    bound.truncate(n);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn prec(&self) -> u8 {
        match self {
            MuFormula::Quant(..) | MuFormula::Fix { .. } => 0,
            MuFormula::Imp(..) => 1,
            MuFormula::Or(..) => 2,
            MuFormula::And(..) => 3,
            MuFormula::Not(_) | MuFormula::Must(..) | MuFormula::May(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            MuFormula::Data(e) => {
                // Data at formula level parses at comparison precedence.
                write!(f, "{}", crate::expr::Prec(e, 4))
            }
            MuFormula::Not(a) => {
                f.write_str("!")?;
                a.fmt_prec(f, 4)
            }
            MuFormula::And(a, b) => {
                a.fmt_prec(f, 4)?;
                f.write_str(" && ")?;
                b.fmt_prec(f, 3)
            }
            MuFormula::Or(a, b) => {
                a.fmt_prec(f, 3)?;
                f.write_str(" || ")?;
                b.fmt_prec(f, 2)
            }
            MuFormula::Imp(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" => ")?;
                b.fmt_prec(f, 1)
            }
            MuFormula::Must(act, a) => {
                write!(f, "[{act}]")?;
                a.fmt_prec(f, 4)
            }
            MuFormula::May(act, a) => {
                write!(f, "<{act}>")?;
                a.fmt_prec(f, 4)
            }
            MuFormula::Quant(q, x, s, a) => {
                write!(f, "{} {x}: {s} . ", q.keyword())?;
                a.fmt_prec(f, 0)
            }
            MuFormula::Var(x, args) => {
                f.write_str(x)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, e) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{e}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            MuFormula::Fix {
                sigma,
                name,
                params,
                body,
            } => {
                write!(f, "{sigma} {name}")?;
                if !params.is_empty() {
                    f.write_str("(")?;
                    for (i, p) in params.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{}: {} := {}", p.name, p.sort, p.init)?;
                    }
                    f.write_str(")")?;
                }
                f.write_str(" . ")?;
                body.fmt_prec(f, 0)
            }
        }
    }
}

impl fmt::Display for MuFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

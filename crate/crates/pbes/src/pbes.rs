use std::collections::HashMap;
use std::fmt;

use spg_model::{Fixpoint, Param, Sort, Ty, Value};

use crate::pred::Pred;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub sigma: Fixpoint,
    pub name: String,
    pub params: Vec<Param>,
    pub rhs: Pred,
}

/// An ordered system of fixpoint equations with an initial instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pbes {
    pub equations: Vec<Equation>,
    pub init: (String, Vec<Value>),
}

impl Pbes {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.equations.iter().position(|e| e.name == name)
    }

    pub fn equation(&self, name: &str) -> Option<&Equation> {
        self.equations.iter().find(|e| e.name == name)
    }
}

pub(crate) fn fmt_params(f: &mut fmt::Formatter<'_>, ps: &[Param]) -> fmt::Result {
    if ps.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, p) in ps.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}: {}", p.name, p.sort)?;
    }
    f.write_str(")")
}

pub(crate) fn fmt_init(f: &mut fmt::Formatter<'_>, init: &(String, Vec<Value>)) -> fmt::Result {
    write!(f, "init {}", init.0)?;
    if !init.1.is_empty() {
        let vals: Vec<String> = init.1.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", vals.join(", "))?;
    }
    f.write_str(";\n")
}

impl fmt::Display for Pbes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, eq) in self.equations.iter().enumerate() {
            f.write_str(if i == 0 { "pbes " } else { "     " })?;
            write!(f, "{} {}", eq.sigma, eq.name)?;
            fmt_params(f, &eq.params)?;
            writeln!(f, " = {};", eq.rhs)?;
        }
        fmt_init(f, &self.init)
    }
}

/// A problem found by [`check_wellformed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub equation: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.equation, self.message)
    }
}

/// Checks unique names, resolution and sorts of predicate variable
/// instances, closedness of right-hand sides and positivity.
pub fn check_wellformed(p: &Pbes) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut sigs: HashMap<&str, &[Param]> = HashMap::new();
    for eq in &p.equations {
        if sigs.insert(&eq.name, &eq.params).is_some() {
            out.push(Diagnostic {
                equation: eq.name.clone(),
                message: "duplicate equation name".into(),
            });
        }
    }
    for eq in &p.equations {
        let mut report = |m: String| {
            out.push(Diagnostic {
                equation: eq.name.clone(),
                message: m,
            })
        };
        let mut scope: Vec<(String, Sort)> = eq.params.iter().map(|x| (x.name.clone(), x.sort.clone())).collect();
        check_pred(&eq.rhs, false, &mut scope, &sigs, &mut report);
    }
    match sigs.get(p.init.0.as_str()) {
        None => out.push(Diagnostic {
            equation: p.init.0.clone(),
            message: "initial variable is not defined".into(),
        }),
        Some(ps) => {
            if ps.len() != p.init.1.len() || !ps.iter().zip(&p.init.1).all(|(x, v)| x.sort.contains(v)) {
                out.push(Diagnostic {
                    equation: p.init.0.clone(),
                    message: "initial values do not match the parameters".into(),
                });
            }
        }
    }
    out
}

fn check_pred(
    p: &Pred,
    negated: bool,
    scope: &mut Vec<(String, Sort)>,
    sigs: &HashMap<&str, &[Param]>,
    report: &mut dyn FnMut(String),
) {
    let ty_of = |scope: &Vec<(String, Sort)>, e: &spg_model::DataExpr| -> Result<Ty, String> {
        e.infer(
            &|x| scope.iter().rev().find(|(n, _)| n == x).map(|(_, s)| s.ty()),
            &|_| None,
        )
    };
    match p {
        Pred::Data(e) => match ty_of(scope, e) {
            Ok(t) if t.compatible(&Ty::Bool) => {}
            Ok(t) => report(format!("condition `{e}` has sort {t}")),
            Err(m) => report(m),
        },
        Pred::Call(n, args) => {
            if negated {
                report(format!("`{n}` occurs negatively"));
            }
            match sigs.get(n.as_str()) {
                None => report(format!("undefined predicate variable `{n}`")),
                Some(ps) if ps.len() != args.len() => {
                    report(format!("`{n}` expects {} arguments, found {}", ps.len(), args.len()))
                }
                Some(ps) => {
                    for (a, x) in args.iter().zip(ps.iter()) {
                        match ty_of(scope, a) {
                            Ok(t) if t.compatible(&x.sort.ty()) => {}
                            Ok(t) => report(format!("argument `{a}` of `{n}` has sort {t}, expected {}", x.sort)),
                            Err(m) => report(m),
                        }
                    }
                }
            }
        }
        Pred::Not(a) => check_pred(a, !negated, scope, sigs, report),
        Pred::And(a, b) | Pred::Or(a, b) => {
            check_pred(a, negated, scope, sigs, report);
            check_pred(b, negated, scope, sigs, report);
        }
        Pred::Imp(a, b) => {
            check_pred(a, !negated, scope, sigs, report);
            check_pred(b, negated, scope, sigs, report);
        }
        Pred::Quant(_, x, s, a) => {
            scope.push((x.clone(), s.clone()));
            check_pred(a, negated, scope, sigs, report);
            scope.pop();
        }
    }
}

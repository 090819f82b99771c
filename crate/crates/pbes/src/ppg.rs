//! Parameterised parity games: PBESs whose equations are purely conjunctive
//! or purely disjunctive lists of atoms.
//!
//! In a conjunctive equation an atom reads `forall vars . guard => X(args)`,
//! in a disjunctive one `exists vars . guard && X(args)`. Simple atoms are
//! plain conditions and never carry variables.

use std::collections::HashSet;
use std::fmt;

use spg_model::{DataExpr, Fixpoint, Param, Quant, Value};

use crate::pbes::{fmt_init, fmt_params, Equation, Pbes};
use crate::pred::{prime, Pred};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PpgError {
    #[error("{0}: predicate variable occurs under a negation")]
    NonMonotone(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Conj,
    Disj,
}

impl Kind {
    fn quant(self) -> Quant {
        match self {
            Kind::Conj => Quant::Forall,
            Kind::Disj => Quant::Exists,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AtomBody {
    Simple(DataExpr),
    Call {
        guard: Option<DataExpr>,
        name: String,
        args: Vec<DataExpr>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub vars: Vec<Param>,
    pub body: AtomBody,
}

impl Atom {
    fn to_pred(&self, kind: Kind) -> Pred {
        let mut p = match &self.body {
            AtomBody::Simple(e) => return Pred::Data(e.clone()),
            AtomBody::Call { guard, name, args } => {
                let call = Pred::Call(name.clone(), args.clone());
                match (guard, kind) {
                    (None, _) => call,
                    (Some(g), Kind::Conj) => Pred::imp(Pred::Data(g.clone()), call),
                    (Some(g), Kind::Disj) => Pred::and(Pred::Data(g.clone()), call),
                }
            }
        };
        for v in self.vars.iter().rev() {
            p = Pred::quant(kind.quant(), &v.name, v.sort.clone(), p);
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpgEquation {
    pub sigma: Fixpoint,
    pub name: String,
    pub params: Vec<Param>,
    pub kind: Kind,
    pub atoms: Vec<Atom>,
    pub priority: usize,
}

impl PpgEquation {
    pub fn to_pred(&self) -> Pred {
        let items: Vec<Pred> = self.atoms.iter().map(|a| a.to_pred(self.kind)).collect();
        match self.kind {
            Kind::Conj => Pred::and_all(items),
            Kind::Disj => Pred::or_all(items),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ppg {
    pub equations: Vec<PpgEquation>,
    pub init: (String, Vec<Value>),
}

impl Ppg {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.equations.iter().position(|e| e.name == name)
    }

    pub fn to_pbes(&self) -> Pbes {
        Pbes {
            equations: self
                .equations
                .iter()
                .map(|e| Equation {
                    sigma: e.sigma,
                    name: e.name.clone(),
                    params: e.params.clone(),
                    rhs: e.to_pred(),
                })
                .collect(),
            init: self.init.clone(),
        }
    }
}

impl fmt::Display for Ppg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, eq) in self.equations.iter().enumerate() {
            f.write_str(if i == 0 { "ppg " } else { "    " })?;
            write!(f, "{} {}", eq.sigma, eq.name)?;
            fmt_params(f, &eq.params)?;
            let kind = match eq.kind {
                Kind::Conj => "conj",
                Kind::Disj => "disj",
            };
            writeln!(f, " = {}; % {kind} {}", eq.to_pred(), eq.priority)?;
        }
        fmt_init(f, &self.init)
    }
}

/// Block ranks: 0 for a leading greatest fixpoint, 1 otherwise, increased
/// whenever the fixpoint symbol changes.
pub fn assign_priorities(mut p: Ppg) -> Ppg {
    let mut rank = 0;
    let mut prev: Option<Fixpoint> = None;
    for eq in &mut p.equations {
        rank = match prev {
            None if eq.sigma == Fixpoint::Nu => 0,
            None => 1,
            Some(s) if s == eq.sigma => rank,
            Some(_) => rank + 1,
        };
        prev = Some(eq.sigma);
        eq.priority = rank;
    }
    p
}

/// Rewrites every equation into a conjunctive or disjunctive list of atoms,
/// moving mixed subformulas into fresh equations that directly follow their
/// parent, and assigns priorities.
pub fn normalize_ppg(p: &Pbes) -> Result<Ppg, PpgError> {
    let mut taken: HashSet<String> = p.equations.iter().map(|e| e.name.clone()).collect();
    let mut equations = Vec::new();
    for eq in &p.equations {
        let rhs = positive(&eq.rhs, false).map_err(|()| PpgError::NonMonotone(eq.name.clone()))?;
        normalize_eq(eq.sigma, &eq.name, &eq.params, &rhs, &mut taken, &mut equations);
    }
    Ok(assign_priorities(Ppg {
        equations,
        init: p.init.clone(),
    }))
}

/// Pushes negations into conditions. The result has no `Not`, every maximal
/// simple subformula is a single `Data`, and implications have a simple
/// antecedent.
fn positive(p: &Pred, neg: bool) -> Result<Pred, ()> {
    if p.is_simple() {
        let e = p.to_data().unwrap();
        return Ok(Pred::Data(if neg { DataExpr::not(e) } else { e }));
    }
    Ok(match p {
        Pred::Data(_) => unreachable!(),
        Pred::Call(..) if neg => return Err(()),
        Pred::Call(..) => p.clone(),
        Pred::Not(a) => positive(a, !neg)?,
        Pred::And(a, b) | Pred::Or(a, b) => {
            let (a, b) = (positive(a, neg)?, positive(b, neg)?);
            if matches!(p, Pred::And(..)) != neg {
                Pred::and(a, b)
            } else {
                Pred::or(a, b)
            }
        }
        Pred::Imp(a, b) => match (a.is_simple(), neg) {
            (true, false) => Pred::imp(positive(a, false)?, positive(b, false)?),
            (true, true) => Pred::and(positive(a, false)?, positive(b, true)?),
            (false, false) => Pred::or(positive(a, true)?, positive(b, false)?),
            (false, true) => Pred::and(positive(a, false)?, positive(b, true)?),
        },
        Pred::Quant(q, x, s, a) => Pred::quant(if neg { q.dual() } else { *q }, x, s.clone(), positive(a, neg)?),
    })
}

fn chain<'a>(p: &'a Pred, conj: bool, out: &mut Vec<&'a Pred>) {
    match p {
        Pred::And(a, b) if conj => {
            chain(a, conj, out);
            chain(b, conj, out);
        }
        Pred::Or(a, b) if !conj => {
            chain(a, conj, out);
            chain(b, conj, out);
        }
        _ => out.push(p),
    }
}

fn top_kind(p: &Pred) -> Kind {
    match p {
        Pred::Data(_) | Pred::Call(..) | Pred::Or(..) | Pred::Quant(Quant::Exists, ..) => Kind::Disj,
        Pred::Quant(Quant::Forall, ..) | Pred::Imp(..) | Pred::Not(_) => Kind::Conj,
        Pred::And(..) => {
            let mut items = Vec::new();
            chain(p, true, &mut items);
            let mixed: Vec<&&Pred> = items.iter().filter(|i| !i.is_simple()).collect();
            if mixed.len() == 1 && top_kind(mixed[0]) == Kind::Disj {
                Kind::Disj
            } else {
                Kind::Conj
            }
        }
    }
}

struct Flat<'a> {
    name: &'a str,
    params: &'a [Param],
    taken: &'a mut HashSet<String>,
    hoisted: Vec<(String, Vec<Param>, Pred)>,
}

impl Flat<'_> {
    fn bind(&self, x: &str, body: &Pred, prefix: &[Param], guard: &Option<DataExpr>) -> (String, Pred) {
        let clash = |c: &str| {
            self.params.iter().any(|p| p.name == c)
                || prefix.iter().any(|p| p.name == c)
                || guard.as_ref().is_some_and(|g| g.has_free(c))
        };
        if !clash(x) {
            return (x.to_string(), body.clone());
        }
        let mut used = Vec::new();
        body.all_vars(&mut used);
        let fresh = prime(x, |c| clash(c) || used.iter().any(|u| u == c));
        let body = body.subst(&[(x.to_string(), DataExpr::var(&fresh))]);
        (fresh, body)
    }

    fn call(prefix: &[Param], guard: Option<DataExpr>, name: String, args: Vec<DataExpr>) -> Atom {
        let vars = prefix
            .iter()
            .filter(|v| guard.as_ref().is_some_and(|g| g.has_free(&v.name)) || args.iter().any(|a| a.has_free(&v.name)))
            .cloned()
            .collect();
        Atom {
            vars,
            body: AtomBody::Call { guard, name, args },
        }
    }

    fn simple(kind: Kind, prefix: &[Param], guard: Option<DataExpr>, e: DataExpr) -> Atom {
        let mut e = match (guard, kind) {
            (None, _) => e,
            (Some(g), Kind::Conj) => DataExpr::imp(g, e),
            (Some(g), Kind::Disj) => DataExpr::and(g, e),
        };
        for v in prefix.iter().rev() {
            if e.has_free(&v.name) {
                e = DataExpr::quant(kind.quant(), &v.name, v.sort.clone(), e);
            }
        }
        Atom {
            vars: Vec::new(),
            body: AtomBody::Simple(e),
        }
    }

    /// Moves `p` into a fresh equation over its free variables.
    fn hoist(&mut self, p: &Pred, prefix: &[Param], guard: Option<DataExpr>, out: &mut Vec<Atom>) {
        let free = p.free_vars();
        let mut params: Vec<Param> = self.params.iter().filter(|x| free.contains(&x.name)).cloned().collect();
        for v in prefix {
            if free.contains(&v.name) && !params.iter().any(|x| x.name == v.name) {
                params.push(v.clone());
            }
        }
        let mut k = 1;
        let name = loop {
            let n = format!("{}'{k}", self.name);
            if !self.taken.contains(&n) {
                break n;
            }
            k += 1;
        };
        self.taken.insert(name.clone());
        let args = params.iter().map(|x| DataExpr::var(&x.name)).collect();
        self.hoisted.push((name.clone(), params, p.clone()));
        out.push(Self::call(prefix, guard, name, args));
    }

    fn flatten(&mut self, kind: Kind, p: &Pred, prefix: &mut Vec<Param>, guard: Option<DataExpr>, out: &mut Vec<Atom>) {
        let conj = kind == Kind::Conj;
        let strengthen = |g: DataExpr| {
            Some(match &guard {
                None => g,
                Some(h) => DataExpr::and(h.clone(), g),
            })
        };
        match p {
            Pred::Data(e) => out.push(Self::simple(kind, prefix, guard, e.clone())),
            Pred::Call(n, args) => out.push(Self::call(prefix, guard, n.clone(), args.clone())),
            Pred::And(..) | Pred::Or(..) if conj == matches!(p, Pred::And(..)) => {
                let mut items = Vec::new();
                chain(p, conj, &mut items);
                for i in items {
                    self.flatten(kind, i, prefix, guard.clone(), out);
                }
            }
            Pred::Quant(q, x, s, body) if *q == kind.quant() => {
                let (x, body) = self.bind(x, body, prefix, &guard);
                prefix.push(Param::new(&x, s.clone()));
                self.flatten(kind, &body, prefix, guard, out);
                prefix.pop();
            }
            Pred::Imp(g, b) if conj => {
                let g = g.to_data().unwrap();
                self.flatten(kind, b, prefix, strengthen(g), out);
            }
            Pred::Imp(g, b) => {
                let g = g.to_data().unwrap();
                out.push(Self::simple(kind, prefix, guard.clone(), DataExpr::not(g)));
                self.flatten(kind, b, prefix, guard, out);
            }
            Pred::Or(..) | Pred::And(..) => {
                // a chain of the other connective with exactly one
                // non-simple part folds its simple parts into the guard
                let mut items = Vec::new();
                chain(p, !conj, &mut items);
                let (simple, rest): (Vec<&Pred>, Vec<&Pred>) = items.into_iter().partition(|i| i.is_simple());
                if rest.len() == 1 && top_kind(rest[0]) == kind {
                    let s = simple.iter().map(|i| i.to_data().unwrap());
                    let g = if conj {
                        DataExpr::not(DataExpr::or_all(s))
                    } else {
                        DataExpr::and_all(s)
                    };
                    self.flatten(kind, rest[0], prefix, strengthen(g), out);
                } else {
                    self.hoist(p, prefix, guard, out);
                }
            }
            Pred::Quant(..) => self.hoist(p, prefix, guard, out),
            Pred::Not(_) => unreachable!("negations were removed"),
        }
    }
}

fn normalize_eq(
    sigma: Fixpoint,
    name: &str,
    params: &[Param],
    rhs: &Pred,
    taken: &mut HashSet<String>,
    out: &mut Vec<PpgEquation>,
) {
    let mut kind = top_kind(rhs);
    let mut flat = Flat {
        name,
        params,
        taken,
        hoisted: Vec::new(),
    };
    let mut atoms = Vec::new();
    flat.flatten(kind, rhs, &mut Vec::new(), None, &mut atoms);
    let hoisted = std::mem::take(&mut flat.hoisted);

    // all simple atoms become one, at the position of the first
    let simples: Vec<DataExpr> = atoms
        .iter()
        .filter_map(|a| match &a.body {
            AtomBody::Simple(e) => Some(e.clone()),
            _ => None,
        })
        .collect();
    if simples.len() > 1 {
        let merged = match kind {
            Kind::Conj => DataExpr::and_all(simples),
            Kind::Disj => DataExpr::or_all(simples),
        };
        let first = atoms.iter().position(|a| matches!(a.body, AtomBody::Simple(_))).unwrap();
        atoms.retain(|a| !matches!(a.body, AtomBody::Simple(_)));
        atoms.insert(
            first,
            Atom {
                vars: Vec::new(),
                body: AtomBody::Simple(merged),
            },
        );
    }

    if kind == Kind::Conj {
        let calls: Vec<&Atom> = atoms.iter().filter(|a| !matches!(a.body, AtomBody::Simple(_))).collect();
        let simple = atoms.iter().find_map(|a| match &a.body {
            AtomBody::Simple(e) => Some(e.clone()),
            _ => None,
        });
        match calls.as_slice() {
            [] => {
                kind = Kind::Disj;
                atoms = vec![Atom {
                    vars: Vec::new(),
                    body: AtomBody::Simple(simple.unwrap_or_else(|| DataExpr::bool(true))),
                }];
            }
            [Atom {
                vars,
                body: AtomBody::Call { guard: None, name, args },
            }] if vars.is_empty() => {
                kind = Kind::Disj;
                atoms = vec![Atom {
                    vars: Vec::new(),
                    body: AtomBody::Call {
                        guard: simple,
                        name: name.clone(),
                        args: args.clone(),
                    },
                }];
            }
            _ => {}
        }
    }

    out.push(PpgEquation {
        sigma,
        name: name.to_string(),
        params: params.to_vec(),
        kind,
        atoms,
        priority: 0,
    });
    for (n, ps, p) in hoisted {
        normalize_eq(sigma, &n, &ps, &p, taken, out);
    }
}

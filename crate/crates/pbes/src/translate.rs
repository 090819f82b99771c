//! Translation of "process satisfies formula" into a PBES.
//!
//! Every fixpoint subformula `sigma Z(x_f := d) . phi` becomes an equation
//! `sigma Z(x_f, x_p, ..) = rhs(phi)`. In structured mode a modality `[a]phi`
//! or `<a>phi` becomes a call to a fresh header equation whose right-hand side
//! combines one fresh equation per summand; in unstructured mode the
//! per-summand formulas are combined in place.

use std::collections::{HashMap, HashSet};

use spg_model::{
    ActionFormula, DataExpr, Env, FixParam, Fixpoint, LinearProcess, ModelError, MuFormula, Param, Quant,
    SortKind, Value,
};

use crate::pbes::{Equation, Pbes};
use crate::pred::{prime, Pred};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("the formula must start with a fixpoint")]
    NotFixpoint,
    #[error("unbound propositional variable `{0}`")]
    Unbound(String),
    #[error("data variable `{0}` is bound inside the scope of another variable with the same name")]
    Shadowing(String),
    #[error("undefined initial value for `{0}`")]
    InitUndefined(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslateOptions {
    /// One equation per summand for every modality.
    pub structured: bool,
    /// Fold constants, match actions statically, apply the one-point rule,
    /// inline trivial equations, drop unreachable equations and unused
    /// parameters.
    pub simplify: bool,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            structured: true,
            simplify: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Role {
    Fix,
    Header { owner: String },
    Child { header: String },
}

#[derive(Clone, Debug)]
struct Raw {
    eq: Equation,
    role: Role,
    /// Parameters that are never pruned.
    kept: Vec<bool>,
}

struct FixInfo {
    outer: Vec<Param>,
}

struct Gen<'a> {
    lps: &'a LinearProcess,
    structured: bool,
    avoid: Vec<String>,
    fix: HashMap<String, FixInfo>,
    eqs: Vec<Raw>,
    fresh: usize,
}

fn vars_of(ps: &[Param]) -> Vec<DataExpr> {
    ps.iter().map(|p| DataExpr::var(&p.name)).collect()
}

fn formula_vars(f: &MuFormula, out: &mut Vec<String>) {
    match f {
        MuFormula::Data(_) | MuFormula::Var(..) => {}
        MuFormula::Not(a) | MuFormula::Must(_, a) | MuFormula::May(_, a) => formula_vars(a, out),
        MuFormula::And(a, b) | MuFormula::Or(a, b) | MuFormula::Imp(a, b) => {
            formula_vars(a, out);
            formula_vars(b, out);
        }
        MuFormula::Quant(_, x, _, a) => {
            out.push(x.clone());
            formula_vars(a, out);
        }
        MuFormula::Fix { params, body, .. } => {
            out.extend(params.iter().map(|p| p.name.clone()));
            formula_vars(body, out);
        }
    }
}

/// Translates `lps |= phi` into a PBES.
pub fn translate(lps: &LinearProcess, phi: &MuFormula, opts: TranslateOptions) -> Result<Pbes, TranslateError> {
    phi.check_positive()?;
    let phi = phi.nnf();
    let MuFormula::Fix { name: top, params: top_params, .. } = &phi else {
        return Err(TranslateError::NotFixpoint);
    };
    let mut avoid = Vec::new();
    formula_vars(&phi, &mut avoid);
    let mut g = Gen {
        lps,
        structured: opts.structured,
        avoid,
        fix: HashMap::new(),
        eqs: Vec::new(),
        fresh: 0,
    };
    g.e(&phi, &[])?;

    let mut init_vals = Vec::new();
    for p in top_params {
        match p.init.eval(&mut Env::new()) {
            Ok(v) if p.sort.contains(&v) => init_vals.push(v),
            _ => return Err(TranslateError::InitUndefined(p.name.clone())),
        }
    }
    init_vals.extend(lps.init.iter().cloned());
    let mut eqs = g.eqs;
    let mut init = (top.clone(), init_vals);
    if opts.simplify {
        simplify_system(&mut eqs);
        remove_unreachable(&mut eqs, &init.0);
        prune_params(&mut eqs);
    }
    rename(&mut eqs, &mut init);
    Ok(Pbes {
        equations: eqs.into_iter().map(|r| r.eq).collect(),
        init,
    })
}

impl Gen<'_> {
    fn fresh(&mut self, tag: &str) -> String {
        self.fresh += 1;
        format!("#{tag}{}", self.fresh)
    }

    fn check_unbound(&self, x: &str, ctx: &[Param]) -> Result<(), TranslateError> {
        if ctx.iter().any(|p| p.name == x) {
            return Err(TranslateError::Shadowing(x.to_string()));
        }
        Ok(())
    }

    /// Emits the equations for every fixpoint subformula, outermost first.
    fn e(&mut self, phi: &MuFormula, ctx: &[Param]) -> Result<(), TranslateError> {
        match phi {
            MuFormula::Data(_) | MuFormula::Var(..) => Ok(()),
            MuFormula::Not(a) | MuFormula::Must(_, a) | MuFormula::May(_, a) => self.e(a, ctx),
            MuFormula::And(a, b) | MuFormula::Or(a, b) | MuFormula::Imp(a, b) => {
                self.e(a, ctx)?;
                self.e(b, ctx)
            }
            MuFormula::Quant(_, x, s, a) => {
                self.check_unbound(x, ctx)?;
                let mut inner = ctx.to_vec();
                inner.push(Param::new(x, s.clone()));
                self.e(a, &inner)
            }
            MuFormula::Fix {
                sigma,
                name,
                params,
                body,
            } => {
                for p in params {
                    self.check_unbound(&p.name, ctx)?;
                }
                let x_f: Vec<Param> = params.iter().map(|p| Param::new(&p.name, p.sort.clone())).collect();
                let mut vbar = x_f.clone();
                vbar.extend(self.lps.params.iter().cloned());
                vbar.extend(ctx.iter().cloned());
                self.fix.insert(name.clone(), FixInfo { outer: ctx.to_vec() });
                let mut kept = vec![true; x_f.len() + self.lps.params.len()];
                kept.resize(vbar.len(), false);
                let slot = self.eqs.len();
                self.eqs.push(Raw {
                    eq: Equation {
                        sigma: *sigma,
                        name: name.clone(),
                        params: vbar.clone(),
                        rhs: Pred::tt(),
                    },
                    role: Role::Fix,
                    kept,
                });
                let (psi, zs) = self.rhs(body, &vbar, *sigma, name)?;
                self.eqs[slot].eq.rhs = psi;
                self.eqs.extend(zs);
                let mut inner = x_f;
                inner.extend(ctx.iter().cloned());
                self.e(body, &inner)
            }
        }
    }

    fn ctx_of(&self, vbar: &[Param]) -> Vec<Param> {
        vbar.iter()
            .filter(|p| self.lps.param_index(&p.name).is_none())
            .cloned()
            .collect()
    }

    fn rhs(&mut self, phi: &MuFormula, vbar: &[Param], sigma: Fixpoint, owner: &str) -> Result<(Pred, Vec<Raw>), TranslateError> {
        Ok(match phi {
            MuFormula::Data(b) => (Pred::Data(b.clone()), Vec::new()),
            MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                let (pa, mut za) = self.rhs(a, vbar, sigma, owner)?;
                let (pb, zb) = self.rhs(b, vbar, sigma, owner)?;
                za.extend(zb);
                let p = if matches!(phi, MuFormula::And(..)) {
                    Pred::and(pa, pb)
                } else {
                    Pred::or(pa, pb)
                };
                (p, za)
            }
            MuFormula::Quant(q, x, s, a) => {
                let mut inner = vbar.to_vec();
                inner.push(Param::new(x, s.clone()));
                let (p, z) = self.rhs(a, &inner, sigma, owner)?;
                (Pred::quant(*q, x, s.clone(), p), z)
            }
            MuFormula::Must(alpha, a) | MuFormula::May(alpha, a) => {
                let is_box = matches!(phi, MuFormula::Must(..));
                let (psi, z) = self.rhs(a, vbar, sigma, owner)?;
                let mut parts = Vec::new();
                for i in 0..self.lps.summands.len() {
                    parts.push(self.apply_group(i, &psi, alpha, is_box, vbar)?);
                }
                if !self.structured {
                    let p = if is_box { Pred::and_all(parts) } else { Pred::or_all(parts) };
                    return Ok((p, z));
                }
                let header = self.fresh("h");
                let kept: Vec<bool> = vbar.iter().map(|p| self.lps.param_index(&p.name).is_some()).collect();
                let args = vars_of(vbar);
                let mut out = Vec::new();
                let mut calls = Vec::new();
                let mut children = Vec::new();
                for part in parts {
                    let child = self.fresh("c");
                    calls.push(Pred::Call(child.clone(), args.clone()));
                    children.push(Raw {
                        eq: Equation {
                            sigma,
                            name: child,
                            params: vbar.to_vec(),
                            rhs: part,
                        },
                        role: Role::Child { header: header.clone() },
                        kept: kept.clone(),
                    });
                }
                out.push(Raw {
                    eq: Equation {
                        sigma,
                        name: header.clone(),
                        params: vbar.to_vec(),
                        rhs: if is_box { Pred::and_all(calls) } else { Pred::or_all(calls) },
                    },
                    role: Role::Header {
                        owner: owner.to_string(),
                    },
                    kept,
                });
                out.extend(children);
                out.extend(z);
                (Pred::Call(header, args), out)
            }
            MuFormula::Var(z, e) => {
                let info = self.fix.get(z).ok_or_else(|| TranslateError::Unbound(z.clone()))?;
                let mut args = e.clone();
                args.extend(vars_of(&self.lps.params));
                args.extend(vars_of(&info.outer));
                (Pred::Call(z.clone(), args), Vec::new())
            }
            MuFormula::Fix { name, params, .. } => {
                let mut args: Vec<DataExpr> = params.iter().map(|p: &FixParam| p.init.clone()).collect();
                args.extend(vars_of(&self.lps.params));
                args.extend(vars_of(&self.ctx_of(vbar)));
                (Pred::Call(name.clone(), args), Vec::new())
            }
            MuFormula::Not(_) | MuFormula::Imp(..) => unreachable!("formula is in negation normal form"),
        })
    }

    /// `forall y . (a_i(f_i) in alpha && c_i) => psi[x_p := g_i]` for a box,
    /// `exists y . (a_i(f_i) in alpha && c_i) && psi[x_p := g_i]` for a diamond.
    fn apply_group(
        &self,
        i: usize,
        psi: &Pred,
        alpha: &ActionFormula,
        is_box: bool,
        vbar: &[Param],
    ) -> Result<Pred, TranslateError> {
        let s = &self.lps.summands[i];
        let mut taken: Vec<String> = self.avoid.clone();
        taken.extend(vbar.iter().map(|p| p.name.clone()));
        psi.all_vars(&mut taken);
        let mut ren: Vec<(String, DataExpr)> = Vec::new();
        let mut sums = Vec::new();
        for y in &s.sums {
            let name = if taken.contains(&y.name) {
                prime(&y.name, |c| taken.iter().any(|t| t == c))
            } else {
                y.name.clone()
            };
            taken.push(name.clone());
            if name != y.name {
                ren.push((y.name.clone(), DataExpr::var(&name)));
            }
            sums.push(Param::new(&name, y.sort.clone()));
        }
        let guard = s.guard.subst(&ren);
        let args: Vec<DataExpr> = s.args.iter().map(|a| a.subst(&ren)).collect();
        let cond = alpha.condition(&s.action, &args)?;
        let update: Vec<(String, DataExpr)> = self
            .lps
            .params
            .iter()
            .zip(&s.next)
            .filter(|(p, g)| **g != DataExpr::var(&p.name) || !ren.is_empty())
            .map(|(p, g)| (p.name.clone(), g.subst(&ren)))
            .filter(|(n, g)| *g != DataExpr::var(n))
            .collect();
        let cond = Pred::Data(DataExpr::and(cond, guard));
        let body = psi.subst(&update);
        let (q, mut p) = if is_box {
            (Quant::Forall, Pred::imp(cond, body))
        } else {
            (Quant::Exists, Pred::and(cond, body))
        };
        for y in sums.iter().rev() {
            p = Pred::quant(q, &y.name, y.sort.clone(), p);
        }
        Ok(p)
    }
}

// ---- simplification ----

fn fold_value(e: &DataExpr) -> DataExpr {
    if matches!(e, DataExpr::Lit(_) | DataExpr::Var(_)) || !e.free_vars().is_empty() {
        return e.clone();
    }
    match e.eval(&mut Env::new()) {
        Ok(v) => DataExpr::Lit(v),
        Err(_) => e.clone(),
    }
}

fn conjuncts(e: &DataExpr, out: &mut Vec<DataExpr>) {
    match e {
        DataExpr::Bin(spg_model::BinOp::And, a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(e.clone()),
    }
}

/// A value `e` such that the quantified variable must equal `e` for the body
/// to matter, and `e` is guaranteed to lie in the variable's sort.
fn one_point(q: Quant, x: &str, sort: &spg_model::Sort, body: &Pred) -> Option<DataExpr> {
    let g = match (q, body) {
        (Quant::Forall, Pred::Imp(g, _)) => g,
        (Quant::Exists, Pred::And(g, _)) => g,
        _ => return None,
    };
    let Pred::Data(g) = g.as_ref() else { return None };
    let mut cs = Vec::new();
    conjuncts(g, &mut cs);
    for c in cs {
        let DataExpr::Bin(spg_model::BinOp::Eq, a, b) = &c else { continue };
        let e = match (a.as_ref(), b.as_ref()) {
            (DataExpr::Var(v), e) | (e, DataExpr::Var(v)) if v == x && !e.has_free(x) => e,
            _ => continue,
        };
        let safe = match e {
            DataExpr::Lit(v) => sort.contains(v),
            DataExpr::Var(_) => matches!(sort.kind, SortKind::Enum(_) | SortKind::Bool),
            _ => false,
        };
        if safe {
            return Some(e.clone());
        }
    }
    None
}

/// Constant folding, the one-point rule and removal of vacuous quantifiers.
pub fn simplify_pred(p: &Pred) -> Pred {
    match p {
        Pred::Data(e) => Pred::Data(e.simplify()),
        Pred::Call(n, args) => Pred::Call(n.clone(), args.iter().map(fold_value).collect()),
        Pred::Not(a) => match simplify_pred(a) {
            Pred::Data(e) => Pred::Data(DataExpr::not(e).simplify()),
            a => Pred::Not(Box::new(a)),
        },
        Pred::And(a, b) => {
            let (a, b) = (simplify_pred(a), simplify_pred(b));
            match (a.as_bool(), b.as_bool(), a, b) {
                (Some(false), ..) | (_, Some(false), ..) => Pred::ff(),
                (Some(true), _, _, b) => b,
                (_, Some(true), a, _) => a,
                (_, _, Pred::Data(x), Pred::Data(y)) => Pred::Data(DataExpr::and(x, y)),
                (_, _, a, b) => Pred::and(a, b),
            }
        }
        Pred::Or(a, b) => {
            let (a, b) = (simplify_pred(a), simplify_pred(b));
            match (a.as_bool(), b.as_bool(), a, b) {
                (Some(true), ..) | (_, Some(true), ..) => Pred::tt(),
                (Some(false), _, _, b) => b,
                (_, Some(false), a, _) => a,
                (_, _, Pred::Data(x), Pred::Data(y)) => Pred::Data(DataExpr::or(x, y)),
                (_, _, a, b) => Pred::or(a, b),
            }
        }
        Pred::Imp(a, b) => {
            let (a, b) = (simplify_pred(a), simplify_pred(b));
            match (a.as_bool(), b.as_bool(), a, b) {
                (Some(false), ..) | (_, Some(true), ..) => Pred::tt(),
                (Some(true), _, _, b) => b,
                (_, Some(false), Pred::Data(x), _) => Pred::Data(DataExpr::not(x).simplify()),
                (_, _, Pred::Data(x), Pred::Data(y)) => Pred::Data(DataExpr::imp(x, y)),
                (_, _, a, b) => Pred::imp(a, b),
            }
        }
        Pred::Quant(q, x, s, body) => {
            let body = simplify_pred(body);
            if !body.has_free(x) {
                return body;
            }
            if let Some(e) = one_point(*q, x, s, &body) {
                return simplify_pred(&body.subst(&[(x.clone(), e)]));
            }
            match body {
                Pred::Data(e) => Pred::Data(DataExpr::quant(*q, x, s.clone(), e)),
                body => Pred::quant(*q, x, s.clone(), body),
            }
        }
    }
}

fn inline_calls(p: &Pred, inline: &HashMap<String, (Vec<Param>, Pred)>) -> Pred {
    p.map_calls(&mut |n, args| match inline.get(n) {
        Some((params, rhs)) => {
            let sigma: Vec<(String, DataExpr)> =
                params.iter().zip(args).map(|(p, a)| (p.name.clone(), a.clone())).collect();
            rhs.subst(&sigma)
        }
        None => Pred::Call(n.to_string(), args.to_vec()),
    })
}

fn simplify_system(eqs: &mut [Raw]) {
    let mut inline: HashMap<String, (Vec<Param>, Pred)> = HashMap::new();
    for i in (0..eqs.len()).rev() {
        let rhs = simplify_pred(&inline_calls(&eqs[i].eq.rhs, &inline));
        eqs[i].eq.rhs = rhs.clone();
        let name = eqs[i].eq.name.clone();
        match &eqs[i].role {
            Role::Fix => {}
            Role::Child { .. } => {
                if rhs.as_bool().is_some() {
                    inline.insert(name, (eqs[i].eq.params.clone(), rhs));
                }
            }
            Role::Header { .. } => {
                if rhs.as_bool().is_some() {
                    inline.insert(name, (eqs[i].eq.params.clone(), rhs));
                } else if let Pred::Call(c, args) = &rhs {
                    let child = eqs[i + 1..]
                        .iter()
                        .find(|r| r.eq.name == *c && r.role == Role::Child { header: name.clone() });
                    if let Some(child) = child {
                        if *args == vars_of(&child.eq.params) && child.eq.params == eqs[i].eq.params {
                            inline.insert(name, (child.eq.params.clone(), child.eq.rhs.clone()));
                        }
                    }
                }
            }
        }
    }
}

fn remove_unreachable(eqs: &mut Vec<Raw>, init: &str) {
    let index: HashMap<String, usize> = eqs.iter().enumerate().map(|(i, r)| (r.eq.name.clone(), i)).collect();
    let mut seen = vec![false; eqs.len()];
    let mut stack = vec![index[init]];
    seen[index[init]] = true;
    while let Some(i) = stack.pop() {
        let mut calls = Vec::new();
        eqs[i].eq.rhs.calls(&mut calls);
        for (n, _) in calls {
            let j = index[&n];
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    let mut k = 0;
    eqs.retain(|_| {
        k += 1;
        seen[k - 1]
    });
}

/// Free variables of `p` that matter, given which parameters of each
/// equation survive.
fn used_vars(p: &Pred, live: &HashMap<String, Vec<bool>>, bound: &mut Vec<String>, out: &mut HashSet<String>) {
    let mut add = |e: &DataExpr, bound: &Vec<String>| {
        for v in e.free_vars() {
            if !bound.contains(&v) {
                out.insert(v);
            }
        }
    };
    match p {
        Pred::Data(e) => add(e, bound),
        Pred::Call(n, args) => {
            for (a, l) in args.iter().zip(&live[n]) {
                if *l {
                    add(a, bound);
                }
            }
        }
        Pred::Not(a) => used_vars(a, live, bound, out),
        Pred::And(a, b) | Pred::Or(a, b) | Pred::Imp(a, b) => {
            used_vars(a, live, bound, out);
            used_vars(b, live, bound, out);
        }
        Pred::Quant(_, x, _, a) => {
            bound.push(x.clone());
            used_vars(a, live, bound, out);
            bound.pop();
        }
    }
}

/// Drops parameters that are not kept and not needed (least fixpoint).
fn prune_params(eqs: &mut [Raw]) {
    let mut live: HashMap<String, Vec<bool>> = eqs.iter().map(|r| (r.eq.name.clone(), r.kept.clone())).collect();
    loop {
        let mut changed = false;
        for r in eqs.iter() {
            let mut used = HashSet::new();
            used_vars(&r.eq.rhs, &live, &mut Vec::new(), &mut used);
            let l = live.get_mut(&r.eq.name).unwrap();
            for (j, p) in r.eq.params.iter().enumerate() {
                if !l[j] && used.contains(&p.name) {
                    l[j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for r in eqs.iter_mut() {
        let l = &live[&r.eq.name];
        let mut j = 0;
        r.eq.params.retain(|_| {
            j += 1;
            l[j - 1]
        });
        let mut j = 0;
        r.kept.retain(|_| {
            j += 1;
            l[j - 1]
        });
        r.eq.rhs = r.eq.rhs.map_calls(&mut |n, args| {
            let ln = &live[n];
            Pred::Call(
                n.to_string(),
                args.iter().zip(ln).filter(|(_, l)| **l).map(|(a, _)| a.clone()).collect(),
            )
        });
    }
}

/// Headers are named after their fixpoint variable with a running number,
/// summand equations after their header with the summand's position among
/// the surviving ones.
fn rename(eqs: &mut [Raw], init: &mut (String, Vec<Value>)) {
    let mut taken: HashSet<String> = eqs
        .iter()
        .filter(|r| r.role == Role::Fix)
        .map(|r| r.eq.name.clone())
        .collect();
    let mut map: HashMap<String, String> = HashMap::new();
    let mut header_count: HashMap<String, usize> = HashMap::new();
    let mut child_count: HashMap<String, usize> = HashMap::new();
    let claim = |base: String, taken: &mut HashSet<String>| {
        let mut n = base;
        while taken.contains(&n) {
            n.push('\'');
        }
        taken.insert(n.clone());
        n
    };
    for r in eqs.iter() {
        match &r.role {
            Role::Fix => {}
            Role::Header { owner } => {
                let k = header_count.entry(owner.clone()).or_insert(0);
                *k += 1;
                let n = claim(format!("{owner}{k}"), &mut taken);
                map.insert(r.eq.name.clone(), n);
            }
            Role::Child { header } => {
                let k = child_count.entry(header.clone()).or_insert(0);
                *k += 1;
                let base = match map.get(header) {
                    Some(h) => format!("{h}{k}"),
                    None => format!("{}_{k}", header.trim_start_matches('#')),
                };
                let n = claim(base, &mut taken);
                map.insert(r.eq.name.clone(), n);
            }
        }
    }
    for r in eqs.iter_mut() {
        if let Some(n) = map.get(&r.eq.name) {
            r.eq.name = n.clone();
        }
        r.eq.rhs = r.eq.rhs.map_calls(&mut |n, args| {
            Pred::Call(map.get(n).cloned().unwrap_or_else(|| n.to_string()), args.to_vec())
        });
    }
    if let Some(n) = map.get(&init.0) {
        init.0 = n.clone();
    }
}

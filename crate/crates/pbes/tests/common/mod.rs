//! Explicit BES expansion solved by Gauss elimination, and a generator of
//! small random PBESs.

#![allow(dead_code)]

use std::collections::HashMap;
use std::rc::Rc;

use rand::rngs::StdRng;
use rand::Rng;
use spg_model::{BinOp, DataExpr, Env, Fixpoint, Param, Quant, Sort, Value};
use spg_pbes::{Equation, Pbes, Pred};

#[derive(Debug)]
enum F {
    Const(bool),
    Var(usize),
    And(Vec<Rc<F>>),
    Or(Vec<Rc<F>>),
}

fn junction(and: bool, items: Vec<Rc<F>>) -> Rc<F> {
    let mut out = Vec::new();
    for i in items {
        match &*i {
            F::Const(b) if *b == and => {}
            F::Const(_) => return Rc::new(F::Const(!and)),
            _ => out.push(i),
        }
    }
    match out.len() {
        0 => Rc::new(F::Const(and)),
        1 => out.pop().unwrap(),
        _ => Rc::new(if and { F::And(out) } else { F::Or(out) }),
    }
}

fn subst(f: &Rc<F>, x: usize, by: &Rc<F>, memo: &mut HashMap<*const F, Rc<F>>) -> Rc<F> {
    if let Some(r) = memo.get(&Rc::as_ptr(f)) {
        return r.clone();
    }
    let r = match &**f {
        F::Const(_) => f.clone(),
        F::Var(y) if *y == x => by.clone(),
        F::Var(_) => f.clone(),
        F::And(items) | F::Or(items) => {
            let new: Vec<Rc<F>> = items.iter().map(|i| subst(i, x, by, memo)).collect();
            if new.iter().zip(items).all(|(a, b)| Rc::ptr_eq(a, b)) {
                f.clone()
            } else {
                junction(matches!(&**f, F::And(_)), new)
            }
        }
    };
    memo.insert(Rc::as_ptr(f), r.clone());
    r
}

fn eval(f: &Rc<F>, vals: &[Option<bool>], memo: &mut HashMap<*const F, bool>) -> bool {
    if let Some(&b) = memo.get(&Rc::as_ptr(f)) {
        return b;
    }
    let r = match &**f {
        F::Const(b) => *b,
        F::Var(y) => vals[*y].expect("variable is solved"),
        F::And(items) => items.iter().all(|i| eval(i, vals, memo)),
        F::Or(items) => items.iter().any(|i| eval(i, vals, memo)),
    };
    memo.insert(Rc::as_ptr(f), r);
    r
}

struct Expander<'a> {
    p: &'a Pbes,
    ids: HashMap<(usize, Vec<Value>), usize>,
    vars: Vec<(usize, Vec<Value>)>,
}

impl Expander<'_> {
    fn var(&mut self, name: &str, vals: Vec<Value>) -> Rc<F> {
        let eq = self.p.index(name).expect("defined");
        if vals.len() != self.p.equations[eq].params.len()
            || !vals.iter().zip(&self.p.equations[eq].params).all(|(v, x)| x.sort.contains(v))
        {
            return Rc::new(F::Const(false));
        }
        let key = (eq, vals);
        let id = match self.ids.get(&key) {
            Some(&i) => i,
            None => {
                let i = self.vars.len();
                self.ids.insert(key.clone(), i);
                self.vars.push(key);
                i
            }
        };
        Rc::new(F::Var(id))
    }

    fn expand(&mut self, p: &Pred, env: &mut Env, neg: bool) -> Rc<F> {
        match p {
            Pred::Data(e) => Rc::new(F::Const(e.eval_bool(env) != neg)),
            Pred::Call(n, args) => {
                assert!(!neg, "negative occurrence of {n}");
                let vals: Result<Vec<Value>, _> = args.iter().map(|a| a.eval(env)).collect();
                match vals {
                    Ok(vals) => self.var(n, vals),
                    Err(_) => Rc::new(F::Const(false)),
                }
            }
            Pred::Not(a) => self.expand(a, env, !neg),
            Pred::And(a, b) | Pred::Or(a, b) => {
                let items = vec![self.expand(a, env, neg), self.expand(b, env, neg)];
                junction(matches!(p, Pred::And(..)) != neg, items)
            }
            Pred::Imp(a, b) => {
                let items = vec![self.expand(a, env, !neg), self.expand(b, env, neg)];
                junction(neg, items)
            }
            Pred::Quant(q, x, s, a) => {
                let mut items = Vec::new();
                for v in s.values() {
                    env.push(x, v);
                    items.push(self.expand(a, env, neg));
                    env.pop();
                }
                junction((*q == Quant::Forall) != neg, items)
            }
        }
    }
}

/// Truth value of the initial instance, or `None` when more than `max_vars`
/// boolean variables are reachable.
pub fn solve_pbes(p: &Pbes, max_vars: usize) -> Option<bool> {
    let mut x = Expander {
        p,
        ids: HashMap::new(),
        vars: Vec::new(),
    };
    let init = x.var(&p.init.0, p.init.1.clone());
    let F::Var(init) = *init else {
        return Some(false);
    };
    let mut rhs: Vec<Rc<F>> = Vec::new();
    let mut i = 0;
    while i < x.vars.len() {
        if x.vars.len() > max_vars {
            return None;
        }
        let (eq, vals) = x.vars[i].clone();
        let e = &p.equations[eq];
        let mut env: Env = e.params.iter().zip(vals).map(|(x, v)| (x.name.clone(), v)).collect();
        rhs.push(x.expand(&e.rhs, &mut env, false));
        i += 1;
    }

    // eliminate in equation order, last first
    let n = x.vars.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| x.vars[v].0);
    for k in (0..n).rev() {
        let v = order[k];
        let own = Rc::new(F::Const(p.equations[x.vars[v].0].sigma == Fixpoint::Nu));
        rhs[v] = subst(&rhs[v], v, &own, &mut HashMap::new());
        let by = rhs[v].clone();
        let mut memo = HashMap::new();
        for &w in &order[..k] {
            rhs[w] = subst(&rhs[w], v, &by, &mut memo);
        }
    }
    let mut vals = vec![None; n];
    let mut memo = HashMap::new();
    for &v in &order {
        vals[v] = Some(eval(&rhs[v], &vals, &mut memo));
    }
    vals[init]
}

// ---- random systems ----

fn sorts() -> [Sort; 2] {
    [Sort::bool(), Sort::int(0, 2)]
}

fn rand_expr(rng: &mut StdRng, sort: &Sort, scope: &[Param]) -> DataExpr {
    let vars: Vec<&Param> = scope
        .iter()
        .enumerate()
        .filter(|(i, p)| p.sort == *sort && !scope[i + 1..].iter().any(|q| q.name == p.name))
        .map(|(_, p)| p)
        .collect();
    if !vars.is_empty() && rng.gen_bool(0.6) {
        let v = DataExpr::var(&vars[rng.gen_range(0..vars.len())].name);
        if sort.kind != spg_model::SortKind::Bool && rng.gen_bool(0.3) {
            return DataExpr::bin(BinOp::Add, v, DataExpr::int(1));
        }
        return v;
    }
    let vals = sort.values();
    DataExpr::Lit(vals[rng.gen_range(0..vals.len())].clone())
}

fn rand_cond(rng: &mut StdRng, scope: &[Param]) -> DataExpr {
    let [b, i] = sorts();
    match rng.gen_range(0..4) {
        0 => rand_expr(rng, &b, scope),
        1 => DataExpr::bin(BinOp::Lt, rand_expr(rng, &i, scope), rand_expr(rng, &i, scope)),
        2 => DataExpr::eq(rand_expr(rng, &i, scope), rand_expr(rng, &i, scope)),
        _ => DataExpr::not(rand_expr(rng, &b, scope)),
    }
}

fn rand_pred(rng: &mut StdRng, depth: usize, eqs: &[(String, Vec<Param>)], scope: &mut Vec<Param>) -> Pred {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return if rng.gen_bool(0.3) {
            Pred::Data(rand_cond(rng, scope))
        } else {
            let (n, ps) = &eqs[rng.gen_range(0..eqs.len())];
            let args = ps.iter().map(|p| rand_expr(rng, &p.sort, scope)).collect();
            Pred::Call(n.clone(), args)
        };
    }
    match rng.gen_range(0..8) {
        0 | 1 => Pred::and(rand_pred(rng, depth - 1, eqs, scope), rand_pred(rng, depth - 1, eqs, scope)),
        2 | 3 => Pred::or(rand_pred(rng, depth - 1, eqs, scope), rand_pred(rng, depth - 1, eqs, scope)),
        4 => Pred::imp(Pred::Data(rand_cond(rng, scope)), rand_pred(rng, depth - 1, eqs, scope)),
        5 => Pred::Not(Box::new(Pred::Not(Box::new(rand_pred(rng, depth - 1, eqs, scope))))),
        _ => {
            let q = if rng.gen_bool(0.5) { Quant::Forall } else { Quant::Exists };
            let s = sorts()[rng.gen_range(0..2)].clone();
            let x = ["u", "v", "a"][rng.gen_range(0..3)];
            scope.push(Param::new(x, s.clone()));
            let body = rand_pred(rng, depth - 1, eqs, scope);
            scope.pop();
            Pred::quant(q, x, s, body)
        }
    }
}

/// A closed, monotone PBES with one to four equations over Bool and
/// Int(0, 2) parameters.
pub fn random_pbes(rng: &mut StdRng) -> Pbes {
    let n = rng.gen_range(1..=4);
    let names = ["a", "b", "c"];
    let eqs: Vec<(String, Vec<Param>)> = (0..n)
        .map(|k| {
            let np = rng.gen_range(0..=2);
            let ps = (0..np)
                .map(|j| Param::new(names[j], sorts()[rng.gen_range(0..2)].clone()))
                .collect();
            (format!("X{k}"), ps)
        })
        .collect();
    let equations = eqs
        .iter()
        .map(|(name, ps)| {
            let mut scope = ps.clone();
            Equation {
                sigma: if rng.gen_bool(0.5) { Fixpoint::Mu } else { Fixpoint::Nu },
                name: name.clone(),
                params: ps.clone(),
                rhs: rand_pred(rng, 3, &eqs, &mut scope),
            }
        })
        .collect();
    let init_vals = eqs[0]
        .1
        .iter()
        .map(|p| {
            let vals = p.sort.values();
            vals[rng.gen_range(0..vals.len())].clone()
        })
        .collect();
    Pbes {
        equations,
        init: (eqs[0].0.clone(), init_vals),
    }
}

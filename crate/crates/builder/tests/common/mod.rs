//! Explicit instantiation of a parity-game-form PBES, written directly from
//! the atom semantics, plus its truth value via the BES oracle.

#![allow(dead_code)]

#[path = "../../../pbes/tests/common/mod.rs"]
pub mod bes;

use std::collections::{BTreeSet, HashMap};

use spg_model::{Env, Fixpoint, Value};
use spg_pbes::{AtomBody, Equation, Kind, Pbes, Ppg, Pred};

pub struct Oracle {
    pub labels: Vec<String>,
    pub index: HashMap<String, usize>,
    pub succ: Vec<BTreeSet<usize>>,
    /// 0 Eloise, 1 Abelard.
    pub owner: Vec<u8>,
    pub prio: Vec<usize>,
    pub init: usize,
}

fn label(name: &str, vals: &[Value]) -> String {
    if vals.is_empty() {
        return name.to_string();
    }
    let vs: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    format!("{name}({})", vs.join(", "))
}

impl Oracle {
    fn id(&mut self, l: String, owner: u8, prio: usize, todo: &mut Vec<(usize, Vec<Value>)>, eq: Option<usize>, vals: Vec<Value>) -> usize {
        if let Some(&i) = self.index.get(&l) {
            return i;
        }
        let i = self.labels.len();
        self.index.insert(l.clone(), i);
        self.labels.push(l);
        self.succ.push(BTreeSet::new());
        self.owner.push(owner);
        self.prio.push(prio);
        if let Some(e) = eq {
            todo.push((e, vals));
        } else {
            todo.push((usize::MAX, vals));
        }
        i
    }

    pub fn new(ppg: &Ppg, cap: usize) -> Option<Oracle> {
        let mut o = Oracle {
            labels: Vec::new(),
            index: HashMap::new(),
            succ: Vec::new(),
            owner: Vec::new(),
            prio: Vec::new(),
            init: 0,
        };
        let owner_of = |k: Kind| if k == Kind::Conj { 1 } else { 0 };
        let mut todo = Vec::new();
        let ie = ppg.index(&ppg.init.0).unwrap();
        let e0 = &ppg.equations[ie];
        o.init = o.id(label(&e0.name, &ppg.init.1), owner_of(e0.kind), e0.priority, &mut todo, Some(ie), ppg.init.1.clone());
        let mut done = 0;
        while done < todo.len() {
            if o.labels.len() > cap {
                return None;
            }
            let (ei, vals) = todo[done].clone();
            let me = done;
            done += 1;
            if ei == usize::MAX {
                continue;
            }
            let e = &ppg.equations[ei];
            let conj = e.kind == Kind::Conj;
            let mut targets: Vec<Result<(usize, Vec<Value>), bool>> = Vec::new();
            for atom in &e.atoms {
                let mut envs: Vec<Env> = vec![e.params.iter().zip(&vals).map(|(p, v)| (p.name.clone(), v.clone())).collect()];
                for x in &atom.vars {
                    envs = envs
                        .into_iter()
                        .flat_map(|env| {
                            x.sort.values().into_iter().map(move |v| {
                                let mut env2 = env.clone();
                                env2.push(&x.name, v);
                                env2
                            })
                        })
                        .collect();
                }
                for mut env in envs {
                    match &atom.body {
                        AtomBody::Simple(b) => {
                            let t = b.eval_bool(&mut env);
                            if t != conj {
                                targets.push(Err(t));
                            }
                        }
                        AtomBody::Call { guard, name, args } => {
                            if let Some(g) = guard {
                                if !g.eval_bool(&mut env) {
                                    continue;
                                }
                            }
                            let ci = ppg.index(name).unwrap();
                            let callee = &ppg.equations[ci];
                            let vs: Option<Vec<Value>> = args
                                .iter()
                                .zip(&callee.params)
                                .map(|(a, p)| a.eval(&mut env).ok().filter(|v| p.sort.contains(v)))
                                .collect();
                            match vs {
                                Some(vs) => targets.push(Ok((ci, vs))),
                                None if conj => targets.push(Err(false)),
                                None => {}
                            }
                        }
                    }
                }
            }
            if targets.is_empty() {
                targets.push(Err(conj));
            }
            for t in targets {
                let id = match t {
                    Ok((ci, vs)) => {
                        let c = &ppg.equations[ci];
                        o.id(label(&c.name, &vs), owner_of(c.kind), c.priority, &mut todo, Some(ci), vs)
                    }
                    Err(true) => o.id("true".into(), 1, 0, &mut todo, None, vec![]),
                    Err(false) => o.id("false".into(), 0, 1, &mut todo, None, vec![]),
                };
                o.succ[me].insert(id);
            }
        }
        Some(o)
    }

    /// Truth value of the initial vertex: the game read as a BES, one
    /// equation per vertex ordered by priority.
    pub fn solve(&self) -> bool {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by_key(|&v| self.prio[v]);
        let equations = order
            .iter()
            .map(|&v| {
                let calls: Vec<Pred> = self.succ[v].iter().map(|s| Pred::Call(format!("V{s}"), vec![])).collect();
                let rhs = if self.owner[v] == 1 { Pred::and_all(calls) } else { Pred::or_all(calls) };
                Equation {
                    sigma: if self.prio[v] % 2 == 0 { Fixpoint::Nu } else { Fixpoint::Mu },
                    name: format!("V{v}"),
                    params: vec![],
                    rhs,
                }
            })
            .collect();
        let p = Pbes {
            equations,
            init: (format!("V{}", self.init), vec![]),
        };
        bes::solve_pbes(&p, usize::MAX).unwrap()
    }
}

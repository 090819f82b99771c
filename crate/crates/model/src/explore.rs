//! Explicit state-space exploration of a linear process.

use std::collections::HashMap;

use crate::expr::Env;
use crate::lps::{LinearProcess, Param, Summand};
use crate::sort::Value;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: usize,
    pub summand: usize,
    pub action: String,
    pub args: Vec<Value>,
    pub target: usize,
}

/// Reachable states in discovery order (state 0 is initial) and all transitions.
#[derive(Clone, Debug, Default)]
pub struct Lts {
    pub states: Vec<Vec<Value>>,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("state space exceeds {0} states")]
pub struct StateLimit(pub usize);

/// Calls `f` for every assignment to `vars`, in sort order.
pub fn for_each_assignment(vars: &[Param], env: &mut Env, f: &mut dyn FnMut(&mut Env)) {
    match vars.split_first() {
        None => f(env),
        Some((v, rest)) => {
            for val in v.sort.values() {
                env.push(&v.name, val);
                for_each_assignment(rest, env, f);
                env.pop();
            }
        }
    }
}

/// Enabled transitions of one summand from `state`: (action arguments, next state).
/// A combination whose arguments or next state are undefined or outside the
/// parameter sorts is not enabled.
pub fn summand_steps(proc: &LinearProcess, summand: &Summand, state: &[Value]) -> Vec<(Vec<Value>, Vec<Value>)> {
    let mut env: Env = proc
        .params
        .iter()
        .zip(state)
        .map(|(p, v)| (p.name.clone(), v.clone()))
        .collect();
    let mut out = Vec::new();
    for_each_assignment(&summand.sums, &mut env, &mut |env| {
        if !summand.guard.eval_bool(env) {
            return;
        }
        let Ok(args) = summand.args.iter().map(|a| a.eval(env)).collect::<Result<Vec<_>, _>>() else {
            return;
        };
        let Ok(next) = summand.next.iter().map(|e| e.eval(env)).collect::<Result<Vec<_>, _>>() else {
            return;
        };
        if next.iter().zip(&proc.params).all(|(v, p)| p.sort.contains(v)) {
            out.push((args, next));
        }
    });
    out
}

/// Breadth-first exploration from the initial state.
pub fn explore_lts(proc: &LinearProcess, max_states: usize) -> Result<Lts, StateLimit> {
    let mut index: HashMap<Vec<Value>, usize> = HashMap::new();
    let mut lts = Lts::default();
    index.insert(proc.init.clone(), 0);
    lts.states.push(proc.init.clone());
    let mut i = 0;
    while i < lts.states.len() {
        let state = lts.states[i].clone();
        for (k, s) in proc.summands.iter().enumerate() {
            for (args, next) in summand_steps(proc, s, &state) {
                let target = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        if lts.states.len() >= max_states {
                            return Err(StateLimit(max_states));
                        }
                        let t = lts.states.len();
                        index.insert(next.clone(), t);
                        lts.states.push(next);
                        t
                    }
                };
                lts.transitions.push(Transition {
                    source: i,
                    summand: k,
                    action: s.action.clone(),
                    args,
                    target,
                });
            }
        }
        i += 1;
    }
    Ok(lts)
}

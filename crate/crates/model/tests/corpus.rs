use std::collections::HashSet;

use proptest::prelude::*;
use spg_model::explore::explore_lts;
use spg_model::generate::{gen_buffer, gen_connect_four, gen_tictactoe};
use spg_model::print::print_spec;
use spg_model::{parse_spec, ActionArg, ActionFormula, DataExpr, Env, Sort, Value};

fn corpus() -> Vec<String> {
    let mut out = vec![gen_tictactoe()];
    for (c, d) in [(1, 1), (2, 2), (3, 2), (2, 4)] {
        out.push(gen_buffer(c, d).unwrap());
    }
    for (c, r) in [(1, 1), (3, 3), (4, 4), (5, 4), (6, 4), (7, 6)] {
        out.push(gen_connect_four(c, r).unwrap());
    }
    out.push(
        "sort N = Int(-2, 3);
sort L = List(Bool, 2);
proc P(n: N, l: L, b: Bool) =
    sum k: N . n + k < 3 && !(n == k) -> step(k, -1) . P(n := n + k * 2, b := !b)
  + sum x: Bool . #l < 2 => x -> push(x) . P(l := l ++ x)
  + l != [] -> pop(head(l)) . P(l := tail(l) ++ [true])
  + exists m: N . m * m == n -> square . P(n, [], if(b, false, true))
  + tau . P();
init P(0, [true], false);
form f = nu X(k: N := 1 - 2) . (k >= -2 => [step(_, -1) || pop(true)]X(k)) && mu Z . <!tau>Z || k == 0;
form g = forall v: N . exists w: Bool . (w && v > 0 || !w) && [push(w)] nu Y . !(v == 2) => Y && [true]Y;
"
        .to_string(),
    );
    out
}

#[test]
fn print_parse_round_trip() {
    for text in corpus() {
        let a = parse_spec(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        let printed = print_spec(&a);
        let b = parse_spec(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_eq!(a, b, "{printed}");
        assert_eq!(printed, print_spec(&b));
    }
}

#[test]
fn buffer_example() {
    let spec = parse_spec(&gen_buffer(2, 2).unwrap()).unwrap();
    let p = &spec.process;
    assert_eq!(p.summands.len(), 2);
    assert_eq!(p.params.len(), 1);
    assert_eq!(p.init, vec![Value::List(vec![])]);
    let guard = &p.summands[0].guard;
    assert_eq!(guard.to_string(), "#q < 2");
    let d1 = Value::Sym("d1".into());
    let d2 = Value::Sym("d2".into());
    let mut env: Env = [("q".to_string(), Value::List(vec![d1.clone()]))].into_iter().collect();
    assert!(guard.eval_bool(&mut env));
    env.push("d", d2.clone());
    let next = &p.summands[0].next[0];
    assert_eq!(next.eval(&mut env), Ok(Value::List(vec![d1.clone(), d2])));
}

#[test]
fn tictactoe_shape() {
    let spec = parse_spec(&gen_tictactoe()).unwrap();
    let p = &spec.process;
    let names: Vec<&str> = p.params.iter().map(|x| x.name.as_str()).collect();
    assert_eq!(names, ["b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9", "p"]);
    assert_eq!(p.summands.iter().filter(|s| s.action == "move").count(), 9);
    assert_eq!(p.summands.iter().filter(|s| s.action == "wins").count(), 8);
    for (k, s) in p.summands.iter().take(9).enumerate() {
        let changed: Vec<usize> = (0..10).filter(|&i| !p.keeps(s, i)).collect();
        assert_eq!(changed, vec![k, 9]);
    }
}

#[test]
fn connect_four_shape() {
    let spec = parse_spec(&gen_connect_four(4, 4).unwrap()).unwrap();
    assert_eq!(spec.process.params.len(), 17);
    assert_eq!(spec.process.summands.iter().filter(|s| s.action == "move").count(), 4);
    assert_eq!(spec.process.summands.len(), 6);
    let spec = parse_spec(&gen_connect_four(6, 4).unwrap()).unwrap();
    assert_eq!(spec.process.summands.len(), 12);
    for s in spec.process.summands.iter().filter(|s| s.action == "wins") {
        let mut cols: Vec<usize> = s.guard.free_vars().iter().filter_map(|v| v[1..].parse::<usize>().ok()).map(|k| (k - 1) / 4).collect();
        cols.sort();
        cols.dedup();
        assert!(cols.len() <= 4 && cols[cols.len() - 1] - cols[0] <= 3);
    }
}

/// Plays Connect Four directly on a byte board; moves continue after a line
/// is completed, as in the generated model.
fn board_states(cols: usize, rows: usize) -> usize {
    let start = vec![0u8; cols * rows];
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    let mut turn = 1u8;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in &frontier {
            for c in 0..cols {
                if let Some(r) = (0..rows).find(|&r| b[c * rows + r] == 0) {
                    let mut nb = b.clone();
                    nb[c * rows + r] = turn;
                    if seen.insert(nb.clone()) {
                        next.push(nb);
                    }
                }
            }
        }
        frontier = next;
        turn = 3 - turn;
    }
    seen.len()
}

#[test]
fn connect_four_state_count_matches_board_simulation() {
    for (c, r) in [(3, 3), (4, 3), (4, 4)] {
        let spec = parse_spec(&gen_connect_four(c, r).unwrap()).unwrap();
        let lts = explore_lts(&spec.process, 1 << 22).unwrap();
        assert_eq!(lts.states.len(), board_states(c, r), "{c}x{r}");
    }
}

#[test]
fn positivity_rejection() {
    let text = format!("{}form bad = mu X . !X;\n", gen_buffer(1, 1).unwrap());
    assert!(parse_spec(&text).is_err());
    let text = format!("{}form ok = mu X . !!X;\n", gen_buffer(1, 1).unwrap());
    assert!(parse_spec(&text).is_ok());
}

fn arb_value() -> impl Strategy<Value = Value> {
    prop_oneof![
        (0u8..3).prop_map(|i| Value::Sym(["a", "b", "c"][i as usize].into())),
        (0u8..2).prop_map(|i| Value::Sym(["a", "b"][i as usize].into())),
    ]
}

fn arb_action() -> impl Strategy<Value = ActionFormula> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(ActionFormula::Const),
        Just(ActionFormula::act("send", None)),
        Just(ActionFormula::act("read", None)),
        Just(ActionFormula::act("send", Some(vec![ActionArg::Any]))),
        arb_value().prop_map(|v| ActionFormula::act("send", Some(vec![ActionArg::Expr(DataExpr::Lit(v))]))),
        Just(ActionFormula::act("read", Some(vec![ActionArg::Expr(DataExpr::var("d"))]))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| ActionFormula::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ActionFormula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| ActionFormula::Or(Box::new(a), Box::new(b))),
        ]
    })
}

proptest! {
    #[test]
    fn negation_flips_matching(a in arb_action(), name in prop_oneof![Just("send"), Just("read")], v in arb_value(), d in arb_value()) {
        let mut env: Env = [("d".to_string(), d)].into_iter().collect();
        let args = [v];
        let pos = a.matches(name, &args, &mut env).unwrap();
        let neg = ActionFormula::Not(Box::new(a.clone())).matches(name, &args, &mut env).unwrap();
        prop_assert_eq!(pos, !neg);
        // the symbolic condition agrees with direct matching
        let cond = a.condition(name, &[DataExpr::Lit(args[0].clone())]).unwrap();
        prop_assert_eq!(cond.eval_bool(&mut env), pos);
    }

    #[test]
    fn list_sorts_enumerate_exactly(n in 1usize..4, k in 0usize..4) {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let sort = Sort::list(Sort::enumeration("E", &refs), k);
        let vals = sort.values();
        let expected: usize = (0..=k).map(|j| n.pow(j as u32)).sum();
        prop_assert_eq!(vals.len(), expected);
        prop_assert_eq!(sort.size(), expected as u64);
        let distinct: HashSet<&Value> = vals.iter().collect();
        prop_assert_eq!(distinct.len(), vals.len());
        prop_assert!(vals.iter().all(|v| sort.contains(v)));
        prop_assert_eq!(sort.values(), vals);
    }
}

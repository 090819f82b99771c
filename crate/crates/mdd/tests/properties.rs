use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spg_mdd::{GroupRelation, MddSet, NodeStore};

type Vecs = BTreeSet<Vec<u32>>;

fn build(st: &mut NodeStore, width: usize, vs: &Vecs) -> MddSet {
    let mut s = st.empty(width);
    for v in vs {
        s = st.insert(s, v).unwrap();
    }
    s
}

fn collect(st: &NodeStore, s: MddSet) -> Vecs {
    st.enumerate(s, usize::MAX).into_iter().collect()
}

fn random_vecs(rng: &mut StdRng, n: usize, width: usize, dom: u32) -> Vecs {
    (0..n)
        .map(|_| (0..width).map(|_| rng.gen_range(0..dom)).collect())
        .collect()
}

fn random_deps(rng: &mut StdRng, width: usize) -> Vec<u32> {
    let mut deps: Vec<u32> = (0..width as u32).filter(|_| rng.gen_bool(0.5)).collect();
    if deps.is_empty() {
        deps.push(rng.gen_range(0..width as u32));
    }
    deps
}

fn random_relation(
    st: &mut NodeStore,
    rng: &mut StdRng,
    deps: &[u32],
    pairs: usize,
    dom: u32,
) -> (GroupRelation, Vec<(Vec<u32>, Vec<u32>)>) {
    let mut r = st.new_relation(deps);
    let mut list = Vec::new();
    for _ in 0..pairs {
        let old: Vec<u32> = deps.iter().map(|_| rng.gen_range(0..dom)).collect();
        let new: Vec<u32> = deps.iter().map(|_| rng.gen_range(0..dom)).collect();
        r = st.rel_insert(&r, &old, &new).unwrap();
        list.push((old, new));
    }
    (r, list)
}

fn brute_next(vs: &Vecs, deps: &[u32], pairs: &[(Vec<u32>, Vec<u32>)]) -> Vecs {
    let mut out = Vecs::new();
    for v in vs {
        for (old, new) in pairs {
            if deps.iter().zip(old).all(|(&d, &o)| v[d as usize] == o) {
                let mut w = v.clone();
                for (&d, &n) in deps.iter().zip(new) {
                    w[d as usize] = n;
                }
                out.insert(w);
            }
        }
    }
    out
}

fn all_vectors(width: usize, dom: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..width {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..dom).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

#[test]
fn difference_matches_hash_set_oracle() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut st = NodeStore::new();
    let a = random_vecs(&mut rng, 1000, 4, 8);
    let b = random_vecs(&mut rng, 1000, 4, 8);
    let (sa, sb) = (build(&mut st, 4, &a), build(&mut st, 4, &b));
    let d = st.difference(sa, sb);
    let expected: Vecs = a.difference(&b).cloned().collect();
    assert_eq!(collect(&st, d), expected);
}

#[test]
fn enumerate_of_inserts_is_sorted_dedup() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut st = NodeStore::new();
    let raw: Vec<Vec<u32>> = (0..500)
        .map(|_| (0..3).map(|_| rng.gen_range(0..6)).collect())
        .collect();
    let mut s = st.empty(3);
    for v in &raw {
        s = st.insert(s, v).unwrap();
    }
    let mut expected = raw.clone();
    expected.sort();
    expected.dedup();
    assert_eq!(st.enumerate(s, usize::MAX), expected);
    assert_eq!(st.count(s), BigUint::from(expected.len()));
}

#[test]
fn relation_enumeration_matches_inserted_pairs() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut st = NodeStore::new();
    let deps = [0u32, 2, 3];
    let (r, pairs) = random_relation(&mut st, &mut rng, &deps, 100, 4);
    let expected: BTreeSet<(Vec<u32>, Vec<u32>)> = pairs.into_iter().collect();
    let got: BTreeSet<(Vec<u32>, Vec<u32>)> = st.rel_enumerate(&r, usize::MAX).into_iter().collect();
    assert_eq!(got, expected);
}

#[test]
fn next_and_prev_match_brute_force() {
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..300 {
        let mut st = NodeStore::new();
        let width = rng.gen_range(1..=5);
        let dom = rng.gen_range(1..=4);
        let deps = random_deps(&mut rng, width);
        let n_pairs = rng.gen_range(0..12);
        let (r, pairs) = random_relation(&mut st, &mut rng, &deps, n_pairs, dom);
        let n_vecs = rng.gen_range(0..30);
        let vs = random_vecs(&mut rng, n_vecs, width, dom);
        let s = build(&mut st, width, &vs);

        let next = st.rel_next(s, &r);
        assert_eq!(collect(&st, next), brute_next(&vs, &deps, &pairs));

        let prev = st.rel_prev(s, &r);
        let expected: Vecs = all_vectors(width, dom)
            .into_iter()
            .filter(|v| {
                let single: Vecs = [v.clone()].into();
                !brute_next(&single, &deps, &pairs).is_disjoint(&vs)
            })
            .collect();
        assert_eq!(collect(&st, prev), expected);
    }
}

#[test]
fn full_width_relation_is_naive_image() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut st = NodeStore::new();
    let deps = [0u32, 1, 2];
    let (r, pairs) = random_relation(&mut st, &mut rng, &deps, 40, 3);
    let vs = random_vecs(&mut rng, 15, 3, 3);
    let s = build(&mut st, 3, &vs);
    let image: Vecs = pairs
        .iter()
        .filter(|(old, _)| vs.contains(old))
        .map(|(_, new)| new.clone())
        .collect();
    let next = st.rel_next(s, &r);
    assert_eq!(collect(&st, next), image);
}

#[test]
fn prev_of_next_contains_source() {
    let mut st = NodeStore::new();
    let r = st.new_relation(&[1]);
    let r = st.rel_insert(&r, &[2], &[5]).unwrap();
    let v = st.singleton(&[0, 2, 1]);
    let n = st.rel_next(v, &r);
    let back = st.rel_prev(n, &r);
    let both = st.intersect(back, v);
    assert_eq!(both, v);
}

fn small_sets() -> impl Strategy<Value = (Vecs, Vecs, Vecs)> {
    let v = prop::collection::vec(0u32..3, 3);
    let s = prop::collection::btree_set(v, 0..12);
    (s.clone(), s.clone(), s)
}

proptest! {
    #[test]
    fn canonical_and_boolean_algebra((a, b, c) in small_sets()) {
        let mut st = NodeStore::new();
        let (sa, sb, sc) = (build(&mut st, 3, &a), build(&mut st, 3, &b), build(&mut st, 3, &c));

        // root equality iff enumeration equality
        prop_assert_eq!(sa == sb, a == b);

        let ab = st.union(sa, sb);
        let ba = st.union(sb, sa);
        prop_assert_eq!(ab, ba);
        let aa = st.union(sa, sa);
        prop_assert_eq!(aa, sa);
        let ab_c = st.union(ab, sc);
        let bc = st.union(sb, sc);
        let a_bc = st.union(sa, bc);
        prop_assert_eq!(ab_c, a_bc);

        let lhs = st.intersect(sa, bc);
        let ab_i = st.intersect(sa, sb);
        let ac_i = st.intersect(sa, sc);
        let rhs = st.union(ab_i, ac_i);
        prop_assert_eq!(lhs, rhs);

        prop_assert!(st.difference(sa, sa).is_empty());
        let expected: Vecs = a.union(&b).cloned().collect();
        prop_assert_eq!(collect(&st, ab), expected);
        prop_assert_eq!(st.count(ab_c), BigUint::from(collect(&st, ab_c).len()));
    }
}

#[test]
fn bulk_construction_matches_single_inserts() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..300 {
        let width = rng.gen_range(1..5);
        let mut st = NodeStore::new();
        let vs: Vec<Vec<u32>> = (0..rng.gen_range(0..30))
            .map(|_| (0..width).map(|_| rng.gen_range(0..4)).collect())
            .collect();
        let set: Vecs = vs.iter().cloned().collect();
        let flat: Vec<u32> = vs.concat();
        let bulk = st.from_rows(width, &flat).unwrap();
        assert_eq!(bulk, build(&mut st, width, &set));

        let deps = random_deps(&mut rng, 5);
        let n = rng.gen_range(0..20);
        let (r, pairs) = random_relation(&mut st, &mut rng, &deps, n, 3);
        let empty = st.new_relation(&deps);
        let all = st
            .rel_insert_all(&empty, pairs.iter().map(|(o, n)| (o.as_slice(), n.as_slice())))
            .unwrap();
        assert_eq!(all, r);
    }
}

#[test]
fn compaction_keeps_live_sets() {
    let mut rng = StdRng::seed_from_u64(12);
    let mut st = NodeStore::new();
    let a = random_vecs(&mut rng, 40, 4, 3);
    let b = random_vecs(&mut rng, 40, 4, 3);
    let sa = build(&mut st, 4, &a);
    build(&mut st, 4, &b);
    let deps = [1, 3];
    let (r, _) = random_relation(&mut st, &mut rng, &deps, 10, 3);
    let next = st.rel_next(sa, &r);
    let expected = collect(&st, next);
    let before = st.allocated();
    let roots = st.compact(&[sa.root(), r.root()]);
    assert!(st.allocated() <= before);
    assert_eq!(st.cache_len(), 0);
    let sa2 = st.from_rows(4, &a.iter().flatten().copied().collect::<Vec<_>>()).unwrap();
    assert_eq!(sa2.root(), roots[0]);
    let r2 = st.relation_from_root(&deps, roots[1]);
    let next2 = st.rel_next(sa2, &r2);
    assert_eq!(collect(&st, next2), expected);
    let sb2 = build(&mut st, 4, &b);
    assert_eq!(collect(&st, sb2), b);
}

#[test]
fn identity_and_constant_relations() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..300 {
        let mut st = NodeStore::new();
        let width = 4;
        let n = rng.gen_range(0..20);
        let vs = random_vecs(&mut rng, n, width, 3);
        let s = build(&mut st, width, &vs);
        let deps = random_deps(&mut rng, width);
        let n = rng.gen_range(0..8);
        let short = random_vecs(&mut rng, n, deps.len(), 3);
        let ss = build(&mut st, deps.len(), &short);
        let id = st.rel_identity(ss, &deps).unwrap();
        let kept: Vecs = vs
            .iter()
            .filter(|v| short.contains(&deps.iter().map(|&d| v[d as usize]).collect::<Vec<u32>>()))
            .cloned()
            .collect();
        let next = st.rel_next(s, &id);
        assert_eq!(collect(&st, next), kept);

        let target: Vec<u32> = (0..width).map(|_| rng.gen_range(0..3)).collect();
        let c = st.rel_constant(s, &target).unwrap();
        let all = build(&mut st, width, &all_vectors(width, 3).into_iter().collect());
        let img = st.rel_next(all, &c);
        let expected: Vecs = if vs.is_empty() { Vecs::new() } else { [target.clone()].into() };
        assert_eq!(collect(&st, img), expected);
        let pre = st.rel_prev(img, &c);
        assert_eq!(pre, s);
    }
}

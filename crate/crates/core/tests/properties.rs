use hyperfactor::combinatorics::{count_types, enumerate_types, LevelSet, Subset};
use hyperfactor::factorization::Factorization;
use hyperfactor::flow::FlowNetwork;
use hyperfactor::format::{parse_factorization, write_factorization};
use hyperfactor::pipeline::construct;
use hyperfactor::verifier::verify_factorization;
use proptest::prelude::*;

/// Partitions of `n` with parts in `levels`, by the coin-change recurrence.
fn partitions(n: usize, levels: &[usize]) -> u128 {
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for &part in levels {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

fn level_set(mask: u8) -> LevelSet {
    LevelSet::new((1..=8).filter(|l| mask & (1 << (l - 1)) != 0)).unwrap()
}

proptest! {
    #[test]
    fn type_count_matches_partition_count(n in 1usize..=25, mask in 1u8..=255) {
        let levels = level_set(mask);
        prop_assume!(levels.max() <= n);
        let want = partitions(n, levels.levels());
        prop_assert_eq!(count_types(n, &levels), want);
        prop_assert_eq!(enumerate_types(n, &levels).len() as u128, want);
    }

    #[test]
    fn types_are_distinct_and_canonically_ordered(n in 1usize..=20, mask in 1u8..=255) {
        let levels = level_set(mask);
        prop_assume!(levels.max() <= n);
        let types = enumerate_types(n, &levels);
        for t in &types {
            prop_assert!(t.is_type_of(n, &levels), "{} is not a type", t);
        }
        for w in types.windows(2) {
            // Lexicographically decreasing when read from the largest part.
            let a: Vec<u32> = w[0].as_slice().iter().rev().copied().collect();
            let b: Vec<u32> = w[1].as_slice().iter().rev().copied().collect();
            prop_assert!(a > b, "{} before {}", w[0], w[1]);
        }
    }

    #[test]
    fn max_flow_equals_min_cut(
        nodes in 2usize..=6,
        arcs in prop::collection::vec((0usize..6, 0usize..6, 0u128..10), 0..20),
    ) {
        let mut net = FlowNetwork::new(nodes);
        let arcs: Vec<_> = arcs.into_iter().map(|(a, b, c)| (a % nodes, b % nodes, c)).collect();
        for &(a, b, c) in &arcs {
            net.add_arc(a, b, c);
        }
        let (s, t) = (0, nodes - 1);
        let flow = net.max_flow(s, t);
        prop_assert_eq!(net.check_flow(s, t).unwrap(), flow);
        // Every cut with s on the source side and t on the other.
        let mut best = u128::MAX;
        for side in 0u32..(1 << nodes) {
            if side & 1 == 0 || side & (1 << t) != 0 {
                continue;
            }
            let cut = arcs
                .iter()
                .filter(|&&(a, b, _)| side & (1 << a) != 0 && side & (1 << b) == 0)
                .map(|&(_, _, c)| c)
                .sum();
            best = best.min(cut);
        }
        prop_assert_eq!(flow, best);
    }

    #[test]
    fn subset_order_is_colex(a in 0u64..4096, b in 0u64..4096) {
        let (x, y) = (Subset::from_bits(a), Subset::from_bits(b));
        let colex = |s: Subset| {
            let mut e: Vec<usize> = s.elements().collect();
            e.reverse();
            e
        };
        prop_assert_eq!(x.cmp(&y), colex(x).cmp(&colex(y)));
    }
}

fn small_factorizations() -> Vec<Factorization> {
    [(4, 2), (6, 2), (6, 3), (5, 4)]
        .into_iter()
        .map(|(n, k)| construct(n, k).unwrap())
        .collect()
}

#[derive(Debug, Clone)]
enum Corruption {
    Drop { factor: usize, set: usize },
    Move { factor: usize, set: usize, to: usize },
    Duplicate { factor: usize, set: usize, to: usize },
    Flip { factor: usize, set: usize, element: usize },
    DropFactor { factor: usize },
}

fn corruption() -> impl Strategy<Value = Corruption> {
    prop_oneof![
        (any::<usize>(), any::<usize>()).prop_map(|(factor, set)| Corruption::Drop { factor, set }),
        (any::<usize>(), any::<usize>(), any::<usize>()).prop_map(|(factor, set, to)| Corruption::Move { factor, set, to }),
        (any::<usize>(), any::<usize>(), any::<usize>())
            .prop_map(|(factor, set, to)| Corruption::Duplicate { factor, set, to }),
        (any::<usize>(), any::<usize>(), any::<usize>())
            .prop_map(|(factor, set, element)| Corruption::Flip { factor, set, element }),
        any::<usize>().prop_map(|factor| Corruption::DropFactor { factor }),
    ]
}

fn corrupt(f: &Factorization, c: &Corruption) -> Option<Factorization> {
    let n = f.n();
    let mut factors = f.factors().to_vec();
    let m = factors.len();
    match *c {
        Corruption::Drop { factor, set } => {
            let fi = factor % m;
            let len = factors[fi].len();
            factors[fi].remove(set % len);
        }
        Corruption::Move { factor, set, to } => {
            let (fi, ti) = (factor % m, to % m);
            if fi == ti {
                return None;
            }
            let len = factors[fi].len();
            let s = factors[fi].remove(set % len);
            factors[ti].push(s);
        }
        Corruption::Duplicate { factor, set, to } => {
            let fi = factor % m;
            let s = factors[fi][set % factors[fi].len()];
            factors[to % m].push(s);
        }
        Corruption::Flip { factor, set, element } => {
            let fi = factor % m;
            let si = set % factors[fi].len();
            let e = element % n + 1;
            let mut s = factors[fi][si];
            if s.contains(e) {
                s.remove(e);
            } else {
                s.insert(e);
            }
            if s.is_empty() {
                return None;
            }
            factors[fi][si] = s;
        }
        Corruption::DropFactor { factor } => {
            factors.remove(factor % m);
        }
    }
    factors.retain(|f| !f.is_empty());
    Some(Factorization::new(n, f.levels().clone(), factors))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verifier_rejects_any_corruption(which in 0usize..4, c in corruption()) {
        let f = &small_factorizations()[which];
        prop_assert!(verify_factorization(f).unwrap().is_empty());
        if let Some(bad) = corrupt(f, &c) {
            prop_assert!(!verify_factorization(&bad).unwrap().is_empty(), "{:?} went unnoticed", c);
        }
    }

    #[test]
    fn writing_is_canonical(which in 0usize..4, seed in any::<u64>()) {
        let f = &small_factorizations()[which];
        // Shuffle factor contents; the written text must not change.
        let mut factors = f.factors().to_vec();
        let mut state = seed | 1;
        for factor in factors.iter_mut() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let len = factor.len();
            factor.rotate_left(state as usize % len);
        }
        let shuffled = Factorization::new(f.n(), f.levels().clone(), factors);
        let text = write_factorization(f);
        prop_assert_eq!(write_factorization(&shuffled), text.clone());
        prop_assert_eq!(write_factorization(&parse_factorization(&text).unwrap()), text);
    }
}

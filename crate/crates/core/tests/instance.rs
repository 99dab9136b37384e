mod common;

use common::{random_edges, random_instance};
use proptest::prelude::*;
use psched_core::order::count_inversions;
use psched_core::{Error, Instance, JobSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn reachable(n: usize, edges: &[(usize, usize)], from: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            if a == u && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}

/// Longest chain inside `set` by enumerating every chain.
fn chains_max(inst: &Instance, set: &[usize]) -> usize {
    fn extend(inst: &Instance, set: &[usize], last: usize) -> usize {
        1 + set.iter().filter(|&&k| inst.precedes(last, k)).map(|&k| extend(inst, set, k)).max().unwrap_or(0)
    }
    set.iter().map(|&j| extend(inst, set, j)).max().unwrap_or(0)
}

#[test]
fn closure_matches_dfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(1..=12);
        let density = rng.gen_range(0.0..0.4);
        let edges = random_edges(&mut rng, n, density);
        let inst = Instance::new(n, 2, &edges).unwrap();
        for u in 0..n {
            let r = reachable(n, &edges, u);
            for (v, &reach) in r.iter().enumerate() {
                assert_eq!(inst.precedes(u, v), reach, "{u} {v}");
            }
            let (pred, succ) = inst.preds_succs(&inst.all_jobs(), u).unwrap();
            assert_eq!(succ.iter().collect::<Vec<_>>(), (0..n).filter(|&v| r[v]).collect::<Vec<_>>());
            assert!(!pred.contains(u) && !succ.contains(u) && !pred.intersects(&succ));
        }
        let again = Instance::new(n, 2, &inst.closure_pairs()).unwrap();
        assert_eq!(again.closure_pairs(), inst.closure_pairs());
    }
}

#[test]
fn closure_examples() {
    let inst = Instance::new(3, 1, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(inst.closure_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    assert!(matches!(Instance::new(2, 1, &[(0, 1), (1, 0)]), Err(Error::Cycle(_))));
    assert!(matches!(Instance::new(2, 1, &[(0, 2)]), Err(Error::Index { .. })));
}

#[test]
fn delta_and_depth_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let density = rng.gen_range(0.0..0.6);
        let inst = random_instance(&mut rng, n, 2, density);
        let set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
        let js = JobSet::from_jobs(n, set.iter().copied());
        assert_eq!(inst.delta(&js), chains_max(&inst, &set));
        // depth through a DP over the topological order
        let mut dp = vec![0usize; n];
        for &j in inst.topological_order() {
            if js.contains(j) {
                dp[j] = 1 + set.iter().filter(|&&p| inst.precedes(p, j)).map(|&p| dp[p]).max().unwrap_or(0);
            }
        }
        for &j in &set {
            assert_eq!(inst.depth(&js, j).unwrap(), dp[j]);
        }
        if let Some(out) = (0..n).find(|j| !js.contains(*j)) {
            assert!(matches!(inst.depth(&js, out), Err(Error::NotInSet(_))));
        }
    }
    let chain = Instance::new(3, 1, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(chain.delta(&JobSet::new(3)), 0);
    assert_eq!(chain.delta(&chain.all_jobs()), 3);
    assert_eq!(chain.depth(&chain.all_jobs(), 2).unwrap(), 3);
}

fn inversion_oracle(inst: &Instance, pi: &[i64]) -> u64 {
    let n = pi.len();
    let mut c = 0;
    for a in 0..n {
        for b in 0..n {
            if inst.precedes(a, b) && pi[b] < pi[a] {
                c += 1;
            }
        }
    }
    c
}

fn instance_strategy() -> impl Strategy<Value = Instance> {
    (1usize..=9, any::<u64>(), 0.0f64..0.6).prop_map(|(n, seed, d)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_instance(&mut rng, n, 2, d)
    })
}

proptest! {
    #[test]
    fn delta_is_subadditive(inst in instance_strategy(), labels in prop::collection::vec(0usize..4, 9)) {
        let n = inst.n();
        let parts: Vec<JobSet> = (0..4).map(|p| JobSet::from_jobs(n, (0..n).filter(|&j| labels[j] == p))).collect();
        let sum: usize = parts.iter().map(|p| inst.delta(p)).sum();
        prop_assert!(inst.delta(&inst.all_jobs()) <= sum);
    }

    #[test]
    fn depth_increases_along_chains(inst in instance_strategy(), mask in any::<u16>()) {
        let n = inst.n();
        let js = JobSet::from_jobs(n, (0..n).filter(|&j| mask >> j & 1 == 1));
        let full = inst.all_jobs();
        for a in js.iter() {
            let da = inst.depth(&js, a).unwrap();
            prop_assert!(da <= inst.depth(&full, a).unwrap());
            for b in js.iter() {
                if inst.precedes(a, b) {
                    prop_assert!(da < inst.depth(&js, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn lengths_add_up(
        inst in instance_strategy(),
        labels in prop::collection::vec(-2i64..=2, 9),
        cuts in prop::collection::vec(any::<bool>(), 9),
        keep in prop::collection::vec(prop::bool::weighted(0.8), 9),
    ) {
        let n = inst.n();
        let full = inst.all_jobs();
        let mut jobs: Vec<usize> = (0..n).collect();
        jobs.sort_by_key(|&j| (labels[j], inst.depth(&full, j).unwrap()));
        // consecutive runs of the sorted order, with some jobs left out
        let mut groups = vec![JobSet::new(n)];
        for (i, &j) in jobs.iter().enumerate() {
            if i > 0 && cuts[i] {
                groups.push(JobSet::new(n));
            }
            if keep[i] {
                groups.last_mut().unwrap().insert(j);
            }
        }
        let mut z: Vec<i64> = labels[..n].to_vec();
        z.sort_unstable();
        z.dedup();
        let sum: usize = groups.iter().map(|g| inst.delta(g)).sum();
        prop_assert!(sum < z.len() * inst.delta(&full) + groups.len());
    }

    #[test]
    fn inversion_swaps_decrease(inst in instance_strategy(), pi in prop::collection::vec(-3i64..=3, 9)) {
        let n = inst.n();
        let pi = &pi[..n];
        let count = count_inversions(n, |a, b| inst.precedes(a, b), pi);
        prop_assert_eq!(count, inversion_oracle(&inst, pi));
        for a in 0..n {
            for b in 0..n {
                if inst.precedes(a, b) && pi[b] < pi[a] {
                    let mut swapped = pi.to_vec();
                    swapped.swap(a, b);
                    prop_assert!(count_inversions(n, |x, y| inst.precedes(x, y), &swapped) < count);
                }
            }
        }
    }
}

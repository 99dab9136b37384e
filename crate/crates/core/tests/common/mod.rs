#![allow(dead_code)]

use psched_core::baselines::exact_opt;
use psched_core::dyadic::{compute_params, Overrides, Params, Rational};
use psched_core::{Instance, Schedule};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize, density: f64) -> Instance {
    Instance::new(n, m, &random_edges(rng, n, density)).unwrap()
}

/// Random DAG as an explicit edge list: pairs of a shuffled order, each
/// kept with probability `density`.
pub fn random_edges(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((perm[a], perm[b]));
            }
        }
    }
    edges
}

pub fn desk_params(t: u32, m: usize, h: u32, hp: u32) -> Params {
    let o: Overrides = format!("h={h},hp={hp},delta=1/4,deltap=1/8").parse().unwrap();
    compute_params(t, m, Rational::new(1, 2), &o).unwrap()
}

/// A random instance with an optimal schedule fitting a horizon of 8 or 16,
/// and desk parameters for that horizon.
pub fn desk_case(rng: &mut ChaCha8Rng) -> (Instance, Schedule, Params) {
    loop {
        let n = rng.gen_range(1..=10);
        let m = rng.gen_range(1..=3);
        let density = rng.gen_range(0.0..0.5);
        let inst = random_instance(rng, n, m, density);
        let (opt, mut sched) = exact_opt(&inst).unwrap();
        let t = if rng.gen_bool(0.5) { 8 } else { 16 };
        if opt > t {
            continue;
        }
        sched.set_horizon(t);
        let h = rng.gen_range(1..=2);
        let hp = rng.gen_range(0..=1);
        return (inst, sched, desk_params(t, m, h, hp));
    }
}

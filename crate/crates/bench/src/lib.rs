//! Seeded instances shared by the benchmarks.

use psched_cli::{gen_instance, Family, GenParams};
use psched_core::baselines::exact_opt;
use psched_core::Instance;

/// A random DAG with `n` jobs on `m` machines.
pub fn random_dag(n: usize, m: usize, seed: u64) -> Instance {
    gen_instance(&GenParams {
        family: Family::RandomDag,
        n,
        m,
        density: 0.3,
        layers: 1,
        seed,
    })
    .expect("valid generator parameters")
}

/// First seeded random DAG, counting up from `seed`, whose optimum fits `horizon`.
pub fn fitting(n: usize, m: usize, horizon: u32, seed: u64) -> Instance {
    (seed..)
        .map(|s| random_dag(n, m, s))
        .find(|inst| exact_opt(inst).is_ok_and(|(opt, _)| opt <= horizon))
        .expect("some seed fits")
}

//! Seeded instance generators.

use std::fmt;
use std::str::FromStr;

use psched_core::{Error, Instance, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Chain,
    Antichain,
    Layered,
    RandomDag,
    Forest,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Chain,
        Family::Antichain,
        Family::Layered,
        Family::RandomDag,
        Family::Forest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::Antichain => "antichain",
            Family::Layered => "layered",
            Family::RandomDag => "random-dag",
            Family::Forest => "forest",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    /// Edge probability for `layered` and `random-dag`, attachment
    /// probability for `forest`.
    pub density: f64,
    /// Number of layers for `layered`.
    pub layers: usize,
    pub seed: u64,
}

/// Deterministic in all of `params`.
pub fn gen_instance(params: &GenParams) -> Result<Instance> {
    let GenParams {
        family,
        n,
        m,
        density,
        layers,
        seed,
    } = *params;
    if m == 0 {
        return Err(Error::InvalidParam("m must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParam(format!("density {density} is not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    match family {
        Family::Chain => edges.extend((1..n).map(|i| (i - 1, i))),
        Family::Antichain => {}
        Family::Layered => {
            if layers == 0 || (layers > n && n > 0) {
                return Err(Error::InvalidParam(format!("cannot split {n} jobs into {layers} layers")));
            }
            // job i lies in layer ⌊i·k/n⌋; edges only go to the next layer
            let layer = |i: usize| i * layers / n.max(1);
            for u in 0..n {
                for v in u + 1..n {
                    if layer(v) == layer(u) + 1 && rng.gen_bool(density) {
                        edges.push((u, v));
                    }
                }
            }
        }
        Family::RandomDag => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(density) {
                        edges.push((order[a], order[b]));
                    }
                }
            }
        }
        Family::Forest => {
            for v in 1..n {
                if rng.gen_bool(density) {
                    edges.push((rng.gen_range(0..v), v));
                }
            }
        }
    }
    Instance::new(n, m, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(family: Family, n: usize) -> GenParams {
        GenParams {
            family,
            n,
            m: 2,
            density: 0.3,
            layers: 3,
            seed: 1,
        }
    }

    #[test]
    fn chain_and_antichain() {
        let chain = gen_instance(&params(Family::Chain, 5)).unwrap();
        assert_eq!(chain.cover_pairs(), vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
        let anti = gen_instance(&params(Family::Antichain, 5)).unwrap();
        assert_eq!(anti.delta(&anti.all_jobs()), 1);
    }

    #[test]
    fn same_seed_same_instance() {
        for family in Family::ALL {
            let a = gen_instance(&params(family, 12)).unwrap();
            let b = gen_instance(&params(family, 12)).unwrap();
            assert_eq!(a.closure_pairs(), b.closure_pairs(), "{family}");
        }
    }

    #[test]
    fn layered_edges_join_adjacent_layers() {
        let mut p = params(Family::Layered, 9);
        p.density = 1.0;
        let inst = gen_instance(&p).unwrap();
        assert_eq!(inst.delta(&inst.all_jobs()), 3);
        assert_eq!(inst.cover_pairs().len(), 18);
    }

    #[test]
    fn forest_has_one_parent() {
        let mut p = params(Family::Forest, 20);
        p.density = 0.8;
        let inst = gen_instance(&p).unwrap();
        for v in 0..20 {
            let parents = inst.cover_pairs().iter().filter(|&&(_, w)| w == v).count();
            assert!(parents <= 1);
        }
    }

    #[test]
    fn bad_params() {
        let mut p = params(Family::RandomDag, 4);
        p.density = 1.5;
        assert!(gen_instance(&p).is_err());
        let mut p = params(Family::Layered, 4);
        p.layers = 5;
        assert!(gen_instance(&p).is_err());
        let mut p = params(Family::Chain, 4);
        p.m = 0;
        assert!(gen_instance(&p).is_err());
    }
}

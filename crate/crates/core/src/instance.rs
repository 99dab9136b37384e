//! Problem instances: `n` unit jobs, `m` identical machines and a strict
//! partial order stored as its transitive closure.

use crate::error::{Error, Result};
use crate::jobset::JobSet;

/// A scheduling instance. Jobs are the dense ids `0..n`.
///
/// The precedence relation is kept transitively closed, one reachability row
/// per job in each direction, so "no precedence from A to B" is a bitset
/// intersection test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    m: usize,
    succ: Vec<JobSet>,
    pred: Vec<JobSet>,
    topo: Vec<usize>,
}

impl Instance {
    /// Builds an instance from arbitrary edges `(u, v)` meaning `u ≺ v`.
    ///
    /// The stored order is the transitive closure of `edges`. Cyclic input
    /// is rejected because it cannot be a strict partial order.
    pub fn new(n: usize, m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("machine count must be at least 1".into()));
        }
        let mut out_edges = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(u, v) in edges {
            for job in [u, v] {
                if job >= n {
                    return Err(Error::Index { job, n });
                }
            }
            if u == v {
                return Err(Error::Cycle(u));
            }
            out_edges[u].push(v);
            indeg[v] += 1;
        }

        // Kahn's algorithm, smallest ready id first so the order is canonical.
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&j| indeg[j] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(j) = ready.pop_first() {
            topo.push(j);
            for &v in &out_edges[j] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&j| indeg[j] > 0).unwrap_or(0);
            return Err(Error::Cycle(stuck));
        }

        let mut succ = vec![JobSet::new(n); n];
        for &j in topo.iter().rev() {
            let mut row = JobSet::new(n);
            for &v in &out_edges[j] {
                row.insert(v);
                row.union_with(&succ[v]);
            }
            succ[j] = row;
        }
        let mut pred = vec![JobSet::new(n); n];
        for (j, row) in succ.iter().enumerate() {
            for v in row.iter() {
                pred[v].insert(j);
            }
        }
        Ok(Instance {
            n,
            m,
            succ,
            pred,
            topo,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `a ≺ b` in the closed order.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    /// All (transitive) successors of `j`.
    pub fn successors(&self, j: usize) -> &JobSet {
        &self.succ[j]
    }

    /// All (transitive) predecessors of `j`.
    pub fn predecessors(&self, j: usize) -> &JobSet {
        &self.pred[j]
    }

    /// A topological order of all jobs (smallest ready id first).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Every closed pair `(a, b)` with `a ≺ b`, ascending.
    pub fn closure_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for a in 0..self.n {
            pairs.extend(self.succ[a].iter().map(|b| (a, b)));
        }
        pairs
    }

    /// The covering relation (transitive reduction), ascending.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for a in 0..self.n {
            for b in self.succ[a].iter() {
                let mut between = self.succ[a].clone();
                between.intersect_with(&self.pred[b]);
                if between.is_empty() {
                    pairs.push((a, b));
                }
            }
        }
        pairs
    }

    pub fn all_jobs(&self) -> JobSet {
        JobSet::full(self.n)
    }

    /// True if some job of `from` precedes some job of `to`.
    pub fn has_precedence_from(&self, from: &JobSet, to: &JobSet) -> bool {
        from.iter().any(|a| self.succ[a].intersects(to))
    }

    /// `depth_J(j)` for every `j ∈ J` (0 for jobs outside `J`).
    pub fn depths(&self, set: &JobSet) -> Vec<usize> {
        let mut depth = vec![0usize; self.n];
        for &j in &self.topo {
            if !set.contains(j) {
                continue;
            }
            let best = self.pred[j]
                .iter()
                .filter(|&p| set.contains(p))
                .map(|p| depth[p])
                .max()
                .unwrap_or(0);
            depth[j] = best + 1;
        }
        depth
    }

    /// Δ(J): the number of jobs in a longest chain inside `set`; 0 if empty.
    pub fn delta(&self, set: &JobSet) -> usize {
        if set.is_empty() {
            return 0;
        }
        self.depths(set).into_iter().max().unwrap_or(0)
    }

    /// Longest chain inside `set` ending at `job`.
    pub fn depth(&self, set: &JobSet, job: usize) -> Result<usize> {
        if job >= self.n || !set.contains(job) {
            return Err(Error::NotInSet(job));
        }
        Ok(self.depths(set)[job])
    }

    /// `(N⁻_J(j), N⁺_J(j))`.
    pub fn preds_succs(&self, set: &JobSet, job: usize) -> Result<(JobSet, JobSet)> {
        if job >= self.n || !set.contains(job) {
            return Err(Error::NotInSet(job));
        }
        Ok((
            self.pred[job].intersection(set),
            self.succ[job].intersection(set),
        ))
    }

    /// The instance restricted to `keep`, relabelled densely in ascending
    /// order. Returns the map new id -> old id.
    pub fn induced(&self, keep: &JobSet) -> (Instance, Vec<usize>) {
        let old: Vec<usize> = keep.iter().collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &j) in old.iter().enumerate() {
            new_id[j] = i;
        }
        let mut edges = Vec::new();
        for &a in &old {
            for b in self.succ[a].iter().filter(|&b| keep.contains(b)) {
                edges.push((new_id[a], new_id[b]));
            }
        }
        let inst = Instance::new(old.len(), self.m, &edges).expect("restriction of a partial order is acyclic");
        (inst, old)
    }

    /// Same order with a different machine count.
    pub fn with_machines(&self, m: usize) -> Instance {
        assert!(m >= 1);
        Instance { m, ..self.clone() }
    }
}

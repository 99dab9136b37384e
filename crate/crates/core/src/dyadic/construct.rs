//! Building the reference system from a known schedule, and the guess-driven
//! push-down step that replays it.

use std::collections::BTreeMap;
use std::fmt;

use super::interval::Interval;
use super::params::{Kind, Params, Rational};
use super::system::{check_valid_for_system, PartialDyadicSystem};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::schedule::Schedule;

/// Which half of an interval a pivot goes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

pub type GuessVector = Vec<Side>;

/// Renders a guess vector as a string over `{L, R}`.
pub fn format_guess(g: &[Side]) -> String {
    g.iter().map(Side::to_string).collect()
}

/// Result of splitting `K` at one interval: `J` stays, `K_L` and `K_R`
/// move down. `used` is the number of loop iterations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Split {
    pub kept: JobSet,
    pub left: JobSet,
    pub right: JobSet,
    pub used: usize,
}

fn too_long(inst: &Instance, set: &JobSet, bound: Rational) -> bool {
    Rational::from_integer(inst.delta(set) as i128) > bound
}

/// Smallest job id `j ∈ set` with `|N⁺(j)|, |N⁻(j)| ≥ bound/2 − 1`.
///
/// # Panics
/// If no job qualifies; whenever `Δ(set) > bound ≥ 0` the lowest job of a
/// longest chain qualifies.
pub fn choose_pivot(inst: &Instance, set: &JobSet, bound: Rational) -> usize {
    for j in set.iter() {
        let below = inst.predecessors(j).intersection_count(set);
        let above = inst.successors(j).intersection_count(set);
        let enough = |c: usize| Rational::from_integer(2 * c as i128 + 2) >= bound;
        if enough(below) && enough(above) {
            return j;
        }
    }
    panic!("no pivot with enough neighbours although the chain bound is exceeded");
}

/// Runs the splitting loop at `iv`, asking `decide` for the side of each
/// pivot. `decide(step, pivot)` returning `None` aborts with
/// [`Error::GuessExhausted`].
pub fn split_with<F>(inst: &Instance, params: &Params, iv: Interval, k: &JobSet, mut decide: F) -> Result<Split>
where
    F: FnMut(usize, usize) -> Option<Side>,
{
    let mut kept = k.clone();
    let mut left = JobSet::new(k.universe());
    let mut right = JobSet::new(k.universe());
    let mut used = 0;
    loop {
        let bound = params.chain_bound(iv, kept.len());
        if !too_long(inst, &kept, bound) {
            break;
        }
        let j = choose_pivot(inst, &kept, bound);
        let side = decide(used, j).ok_or(Error::GuessExhausted {
            interval: iv,
            len: used,
        })?;
        let (moved, dest) = match side {
            Side::L => (inst.predecessors(j).intersection(&kept), &mut left),
            Side::R => (inst.successors(j).intersection(&kept), &mut right),
        };
        dest.union_with(&moved);
        dest.insert(j);
        kept.difference_with(&moved);
        kept.remove(j);
        used += 1;
    }
    Ok(Split { kept, left, right, used })
}

/// Splits `k` at a top or middle interval following the guess vector `g`.
pub fn push_down(inst: &Instance, params: &Params, iv: Interval, k: &JobSet, g: &[Side]) -> Result<Split> {
    if !matches!(params.kind(iv), Some(Kind::Top | Kind::Middle)) {
        return Err(Error::InvalidInput(format!("push-down needs a top or middle interval, got {iv}")));
    }
    split_with(inst, params, iv, k, |q, _| g.get(q).copied())
}

/// Every distinct outcome of [`push_down`] over all guess vectors of length
/// `max_len`, paired with the consumed prefix, in lexicographic order
/// (`L < R`) of the guess vectors.
///
/// The outcome depends only on the consumed prefix, so this covers the full
/// `2^max_len` enumeration without repeating identical outcomes.
pub fn push_down_outcomes(
    inst: &Instance,
    params: &Params,
    iv: Interval,
    k: &JobSet,
    max_len: usize,
) -> Vec<(GuessVector, Split)> {
    let mut out = Vec::new();
    let start = Split {
        kept: k.clone(),
        left: JobSet::new(k.universe()),
        right: JobSet::new(k.universe()),
        used: 0,
    };
    expand(inst, params, iv, start, &mut Vec::new(), max_len, &mut out);
    out
}

fn expand(
    inst: &Instance,
    params: &Params,
    iv: Interval,
    state: Split,
    prefix: &mut GuessVector,
    max_len: usize,
    out: &mut Vec<(GuessVector, Split)>,
) {
    let bound = params.chain_bound(iv, state.kept.len());
    if !too_long(inst, &state.kept, bound) {
        out.push((prefix.clone(), state));
        return;
    }
    if prefix.len() == max_len {
        return;
    }
    let j = choose_pivot(inst, &state.kept, bound);
    for side in [Side::L, Side::R] {
        let mut next = state.clone();
        let moved = match side {
            Side::L => inst.predecessors(j).intersection(&next.kept),
            Side::R => inst.successors(j).intersection(&next.kept),
        };
        let dest = if side == Side::L { &mut next.left } else { &mut next.right };
        dest.union_with(&moved);
        dest.insert(j);
        next.kept.difference_with(&moved);
        next.kept.remove(j);
        next.used += 1;
        prefix.push(side);
        expand(inst, params, iv, next, prefix, max_len, out);
        prefix.pop();
    }
}

/// The reference system built from a complete valid schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub system: PartialDyadicSystem,
    /// `K*_I = J*_{⊆I}` for every tree interval reached.
    pub pools: BTreeMap<Interval, JobSet>,
    /// Pivot sides recorded at every top and middle interval.
    pub guesses: BTreeMap<Interval, GuessVector>,
}

/// Assigns every job to a tree interval so that `sched` is valid for the
/// resulting full system, recording the pivot sides as guess vectors.
pub fn construct_jstar(inst: &Instance, sched: &Schedule, params: &Params) -> Result<Construction> {
    let report = crate::schedule::verify_valid(inst, sched);
    if !report.is_valid() || report.discards > 0 || sched.makespan() > params.horizon() {
        return Err(Error::InvalidInput(format!(
            "reference schedule must be valid, complete and within T = {}",
            params.horizon()
        )));
    }
    let root = params.root();
    let mut system = PartialDyadicSystem::new(inst.n(), root);
    let mut pools = BTreeMap::new();
    let mut guesses = BTreeMap::new();
    pools.insert(root, inst.all_jobs());
    for iv in params.subtree(root) {
        let k = pools.get(&iv).cloned().unwrap_or_else(|| JobSet::new(inst.n()));
        if params.is_bottom(iv) {
            system.assign(iv, &k);
            continue;
        }
        let center = iv.center();
        let mut g = Vec::new();
        let split = split_with(inst, params, iv, &k, |_, j| {
            let side = if sched.slot(j).is_some_and(|t| t <= center) { Side::L } else { Side::R };
            g.push(side);
            Some(side)
        })?;
        system.assign(iv, &split.kept);
        pools.insert(iv.left(), split.left);
        pools.insert(iv.right(), split.right);
        guesses.insert(iv, g);
    }
    debug_assert!(check_valid_for_system(inst, &system, sched).is_valid());
    Ok(Construction { system, pools, guesses })
}

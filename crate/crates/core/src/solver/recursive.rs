//! The recursive guessing algorithm, the outer enumeration over top-level
//! guesses, and the hinted replay that follows a known optimum.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::bottom::bottom_solve;
use super::partition::{enumerate_partitions, Partition};
use crate::convert::{valid_to_virtually_valid, VirtualConversion};
use crate::dyadic::{
    construct_jstar, push_down, push_down_outcomes, window_begin, window_end, AncestorWindows, Construction,
    GuessVector, Interval, Params, PartialDyadicSystem, Side, Split,
};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::schedule::Schedule;

/// Default cap on recursion nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

const CACHE_LIMIT: usize = 1 << 18;

/// Input of one recursion node.
///
/// `assigned` holds `J_I` for tree intervals less than `h − 1` levels below
/// `root`; `pending` holds `K_I = J_{⊆I}` for intervals exactly `h − 1`
/// levels below. Empty sets are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubproblemInput {
    pub root: Interval,
    pub anc: AncestorWindows,
    pub assigned: BTreeMap<Interval, JobSet>,
    pub pending: BTreeMap<Interval, JobSet>,
}

impl SubproblemInput {
    /// `|J_{⊆root}| + |K_{⊆root}|`.
    pub fn own_jobs(&self) -> usize {
        self.assigned.values().chain(self.pending.values()).map(JobSet::len).sum()
    }
}

fn insert_nonempty(map: &mut BTreeMap<Interval, JobSet>, iv: Interval, jobs: JobSet) {
    if !jobs.is_empty() {
        map.insert(iv, jobs);
    }
}

/// Windows of the jobs of `J_root`, computed from the sets assigned down to
/// `h − 1` levels below `root` (`assigned`) and the pools one level further
/// (`pools`).
pub fn anc_windows(
    inst: &Instance,
    params: &Params,
    root: Interval,
    assigned: &BTreeMap<Interval, JobSet>,
    pools: &BTreeMap<Interval, JobSet>,
) -> AncestorWindows {
    let mut owner = vec![None; inst.n()];
    for (&iv, s) in assigned.iter().chain(pools.iter()) {
        for j in s.iter() {
            owner[j] = Some(iv);
        }
    }
    let unit = params.window_unit(root);
    let mut out = AncestorWindows::new();
    if let Some(jobs) = assigned.get(&root) {
        for j in jobs.iter() {
            out.insert(j, (window_begin(inst, root, unit, j, &owner), window_end(inst, root, unit, j, &owner)));
        }
    }
    out
}

/// Replay information taken from a known virtually-valid schedule.
#[derive(Debug, Clone)]
pub struct Hints {
    pub guesses: BTreeMap<Interval, GuessVector>,
    pub schedule: Schedule,
}

/// A system with a virtually-valid schedule for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub system: PartialDyadicSystem,
    pub schedule: Schedule,
}

impl Solution {
    pub fn scheduled(&self) -> usize {
        self.schedule.scheduled_count()
    }
}

/// Recursion state shared by every node of one run.
pub struct Solver<'a> {
    inst: &'a Instance,
    params: &'a Params,
    hints: Option<&'a Hints>,
    budget: u64,
    nodes: u64,
    cache: HashMap<SubproblemInput, Option<Rc<Solution>>>,
}

impl<'a> Solver<'a> {
    pub fn new(inst: &'a Instance, params: &'a Params, budget: u64) -> Self {
        Solver {
            inst,
            params,
            hints: None,
            budget,
            nodes: 0,
            cache: HashMap::new(),
        }
    }

    pub fn with_hints(inst: &'a Instance, params: &'a Params, hints: &'a Hints, budget: u64) -> Self {
        Solver {
            hints: Some(hints),
            ..Solver::new(inst, params, budget)
        }
    }

    /// Recursion nodes evaluated so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Best system and schedule over `input.root`, `None` when the node is
    /// infeasible by size or no guess applies.
    pub fn schedule(&mut self, input: &SubproblemInput) -> Result<Option<Rc<Solution>>> {
        if let Some(hit) = self.cache.get(input) {
            return Ok(hit.clone());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        let out = self.solve_node(input)?.map(Rc::new);
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(input.clone(), out.clone());
        Ok(out)
    }

    fn solve_node(&mut self, input: &SubproblemInput) -> Result<Option<Solution>> {
        let (inst, params) = (self.inst, self.params);
        let n = inst.n();
        let root = input.root;
        let cap = inst.m() * root.len() as usize;
        let own = input.own_jobs();
        if input.anc.len() > cap || own > cap {
            return Ok(None);
        }
        if params.is_bottom(root) {
            let mut jobs = JobSet::new(n);
            for s in input.assigned.values().chain(input.pending.values()) {
                jobs.union_with(s);
            }
            let schedule = bottom_solve(inst, root, &input.anc, &jobs, params.horizon())?;
            let mut system = PartialDyadicSystem::with_ancestors(n, root, input.anc.clone());
            system.assign(root, &jobs);
            return Ok(Some(Solution { system, schedule }));
        }

        let upper = cap.min(input.anc.len() + own);
        let h = params.h() as i64;
        let frontier = params.relative_level(root, h - 1);
        let mut options: Vec<Vec<Split>> = Vec::with_capacity(frontier.len());
        for &iv in &frontier {
            let k = input.pending.get(&iv).cloned().unwrap_or_else(|| JobSet::new(n));
            let opts = if params.is_bottom(iv) {
                vec![Split {
                    kept: k,
                    left: JobSet::new(n),
                    right: JobSet::new(n),
                    used: 0,
                }]
            } else if let Some(hints) = self.hints {
                let g = hints.guesses.get(&iv).cloned().unwrap_or_default();
                match push_down(inst, params, iv, &k, &pad_guess(&g, params.guess_len(iv))) {
                    Ok(split) => vec![split],
                    Err(Error::GuessExhausted { .. }) => Vec::new(),
                    Err(e) => return Err(e),
                }
            } else {
                push_down_outcomes(inst, params, iv, &k, params.guess_len(iv)).into_iter().map(|(_, s)| s).collect()
            };
            if opts.is_empty() {
                return Ok(None);
            }
            options.push(opts);
        }

        let mut best: Option<Solution> = None;
        let mut choice = vec![0usize; frontier.len()];
        loop {
            let mut assigned = input.assigned.clone();
            let mut pools = BTreeMap::new();
            for (i, &iv) in frontier.iter().enumerate() {
                let split = &options[i][choice[i]];
                insert_nonempty(&mut assigned, iv, split.kept.clone());
                if !params.is_bottom(iv) {
                    insert_nonempty(&mut pools, iv.left(), split.left.clone());
                    insert_nonempty(&mut pools, iv.right(), split.right.clone());
                }
            }
            if self.try_partitions(input, &assigned, &pools, upper, &mut best)? {
                break;
            }
            if !advance(&mut choice, &options) {
                break;
            }
        }
        Ok(best)
    }

    /// Runs every partition for one guess combination; true once `best`
    /// reaches `upper`.
    fn try_partitions(
        &mut self,
        input: &SubproblemInput,
        assigned: &BTreeMap<Interval, JobSet>,
        pools: &BTreeMap<Interval, JobSet>,
        upper: usize,
        best: &mut Option<Solution>,
    ) -> Result<bool> {
        let (inst, params) = (self.inst, self.params);
        let n = inst.n();
        let root = input.root;
        let own = anc_windows(inst, params, root, assigned, pools);
        let mut pool = input.anc.clone();
        pool.extend(own.iter().map(|(&j, &w)| (j, w)));

        let partitions = match self.hints {
            Some(hints) => vec![hinted_partition(&pool, root, &hints.schedule, n)],
            None => enumerate_partitions(&pool, root, n, true),
        };
        let children = [root.left(), root.right()];
        let child_inputs: Vec<(BTreeMap<Interval, JobSet>, BTreeMap<Interval, JobSet>)> = children
            .iter()
            .map(|&c| {
                let inside = |iv: &Interval| c.contains_interval(iv);
                let a = assigned.iter().filter(|(iv, _)| inside(iv)).map(|(iv, s)| (*iv, s.clone())).collect();
                let p = pools.iter().filter(|(iv, _)| inside(iv)).map(|(iv, s)| (*iv, s.clone())).collect();
                (a, p)
            })
            .collect();

        for part in partitions {
            let mut halves = Vec::with_capacity(2);
            for (side, &c) in children.iter().enumerate() {
                let jobs = if side == 0 { &part.left } else { &part.right };
                let sub = SubproblemInput {
                    root: c,
                    anc: jobs.iter().map(|j| (j, pool[&j])).collect(),
                    assigned: child_inputs[side].0.clone(),
                    pending: child_inputs[side].1.clone(),
                };
                match self.schedule(&sub)? {
                    Some(sol) => halves.push(sol),
                    None => break,
                }
            }
            if halves.len() < 2 {
                continue;
            }
            let count = halves[0].scheduled() + halves[1].scheduled();
            if best.as_ref().is_none_or(|b| count > b.scheduled()) {
                let mut schedule = Schedule::all_discarded(n, params.horizon());
                for half in &halves {
                    for (j, &t) in half.schedule.slots().iter().enumerate() {
                        if t.is_some() {
                            schedule.set(j, t);
                        }
                    }
                }
                let mut system = PartialDyadicSystem::with_ancestors(n, root, input.anc.clone());
                if let Some(jr) = assigned.get(&root) {
                    system.assign(root, jr);
                }
                for half in &halves {
                    system.absorb(&half.system);
                }
                *best = Some(Solution { system, schedule });
                if count >= upper {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

fn hinted_partition(pool: &AncestorWindows, root: Interval, sigma: &Schedule, n: usize) -> Partition {
    let mut part = Partition {
        left: JobSet::new(n),
        right: JobSet::new(n),
        disc: JobSet::new(n),
    };
    for &j in pool.keys() {
        match sigma.slot(j) {
            Some(t) if root.left().contains(t) => part.left.insert(j),
            Some(t) if root.right().contains(t) => part.right.insert(j),
            _ => part.disc.insert(j),
        }
    }
    part
}

/// Odometer step over the option lists, last position fastest.
fn advance<T>(choice: &mut [usize], options: &[Vec<T>]) -> bool {
    for i in (0..choice.len()).rev() {
        choice[i] += 1;
        if choice[i] < options[i].len() {
            return true;
        }
        choice[i] = 0;
    }
    false
}

/// `g` extended with `L` up to `len`; longer vectors are kept whole.
pub fn pad_guess(g: &[Side], len: usize) -> GuessVector {
    let mut out = g.to_vec();
    if out.len() < len {
        out.resize(len, Side::L);
    }
    out
}

/// Result of [`main_solve`] or [`solve_hinted`].
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub system: PartialDyadicSystem,
    pub schedule: Schedule,
    /// Recursion nodes evaluated.
    pub nodes: u64,
    /// Top-level guess combinations that reached the recursion.
    pub branches: u64,
}

impl SolveOutcome {
    pub fn discards(&self) -> usize {
        self.schedule.discard_count()
    }
}

/// Enumerates the guesses for all intervals less than `h − 1` levels deep,
/// pushes the jobs down accordingly and keeps the best recursion result.
pub fn main_solve(inst: &Instance, params: &Params, budget: u64) -> Result<SolveOutcome> {
    let mut solver = Solver::new(inst, params, budget);
    run_main(&mut solver, inst, params)
}

fn run_main(solver: &mut Solver<'_>, inst: &Instance, params: &Params) -> Result<SolveOutcome> {
    let n = inst.n();
    let root = params.root();
    let upper_levels: Vec<Interval> = (0..params.h() as i64 - 1).flat_map(|l| params.level_intervals(l)).collect();
    let mut pools = BTreeMap::new();
    insert_nonempty(&mut pools, root, inst.all_jobs());
    let mut state = Cascade {
        levels: &upper_levels,
        assigned: BTreeMap::new(),
        pools,
        best: None,
        branches: 0,
    };
    cascade(solver, &mut state, 0)?;
    let branches = state.branches;
    let sol = state.best.ok_or(Error::Infeasible)?;
    let mut schedule = sol.schedule.clone();
    schedule.set_horizon(params.horizon());
    debug_assert_eq!(schedule.n(), n);
    Ok(SolveOutcome {
        system: sol.system.clone(),
        schedule,
        nodes: solver.nodes(),
        branches,
    })
}

struct Cascade<'l> {
    levels: &'l [Interval],
    assigned: BTreeMap<Interval, JobSet>,
    pools: BTreeMap<Interval, JobSet>,
    best: Option<Rc<Solution>>,
    branches: u64,
}

fn cascade(solver: &mut Solver<'_>, st: &mut Cascade<'_>, idx: usize) -> Result<()> {
    let (inst, params) = (solver.inst, solver.params);
    let n = inst.n();
    if idx == st.levels.len() {
        let frontier_level = params.h() as i64 - 1;
        let pending = st
            .pools
            .iter()
            .filter(|(iv, _)| params.level(**iv).map(i64::from) == Some(frontier_level))
            .map(|(iv, s)| (*iv, s.clone()))
            .collect();
        let input = SubproblemInput {
            root: params.root(),
            anc: AncestorWindows::new(),
            assigned: st.assigned.clone(),
            pending,
        };
        st.branches += 1;
        if let Some(sol) = solver.schedule(&input)? {
            if st.best.as_ref().is_none_or(|b| sol.scheduled() > b.scheduled()) {
                st.best = Some(sol);
            }
        }
        return Ok(());
    }
    let iv = st.levels[idx];
    let k = st.pools.remove(&iv).unwrap_or_else(|| JobSet::new(n));
    if params.is_bottom(iv) {
        insert_nonempty(&mut st.assigned, iv, k.clone());
        cascade(solver, st, idx + 1)?;
        st.assigned.remove(&iv);
        insert_nonempty(&mut st.pools, iv, k);
        return Ok(());
    }
    let splits: Vec<Split> = match solver.hints {
        Some(hints) => {
            let g = hints.guesses.get(&iv).cloned().unwrap_or_default();
            match push_down(inst, params, iv, &k, &pad_guess(&g, params.guess_len(iv))) {
                Ok(s) => vec![s],
                Err(Error::GuessExhausted { .. }) => Vec::new(),
                Err(e) => return Err(e),
            }
        }
        None => push_down_outcomes(inst, params, iv, &k, params.guess_len(iv)).into_iter().map(|(_, s)| s).collect(),
    };
    let half_cap = inst.m() * iv.len() as usize;
    for split in splits {
        if 2 * split.left.len() > half_cap || 2 * split.right.len() > half_cap {
            continue;
        }
        insert_nonempty(&mut st.assigned, iv, split.kept);
        insert_nonempty(&mut st.pools, iv.left(), split.left);
        insert_nonempty(&mut st.pools, iv.right(), split.right);
        cascade(solver, st, idx + 1)?;
        st.assigned.remove(&iv);
        st.pools.remove(&iv.left());
        st.pools.remove(&iv.right());
    }
    insert_nonempty(&mut st.pools, iv, k);
    Ok(())
}

/// Result of [`solve_hinted`]: the replayed solution plus the reference
/// objects it was derived from.
#[derive(Debug, Clone)]
pub struct HintedOutcome {
    pub outcome: SolveOutcome,
    pub construction: Construction,
    pub reference: VirtualConversion,
}

/// Replays the recursion along the guesses and the split read off the
/// virtually-valid schedule derived from the complete valid schedule
/// `optimum`.
pub fn solve_hinted(inst: &Instance, optimum: &Schedule, params: &Params, budget: u64) -> Result<HintedOutcome> {
    let construction = construct_jstar(inst, optimum, params)?;
    let reference = valid_to_virtually_valid(inst, &construction.system, optimum, params)?;
    let hints = Hints {
        guesses: construction.guesses.clone(),
        schedule: reference.schedule.clone(),
    };
    let mut solver = Solver::with_hints(inst, params, &hints, budget);
    let outcome = run_main(&mut solver, inst, params)?;
    Ok(HintedOutcome {
        outcome,
        construction,
        reference,
    })
}

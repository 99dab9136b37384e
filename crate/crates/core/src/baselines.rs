//! Classical baselines: Graham's list scheduling, list scheduling against a
//! capacity profile, and exact makespan search for small instances.

use std::collections::{BTreeSet, HashMap};

use crate::dyadic::Interval;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::schedule::Schedule;

/// Default job limit for [`exact_opt`].
pub const EXACT_LIMIT: usize = 16;

/// Greedy non-idling list schedule: at every slot run up to `m` ready jobs,
/// smallest id first. The horizon of the result is its makespan.
pub fn graham_list(inst: &Instance) -> Schedule {
    let n = inst.n();
    let mut missing: Vec<usize> = (0..n).map(|j| inst.predecessors(j).len()).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&j| missing[j] == 0).collect();
    let mut slots = vec![None; n];
    let mut t = 0u32;
    let mut done = 0;
    while done < n {
        t += 1;
        let batch: Vec<usize> = ready.iter().take(inst.m()).copied().collect();
        for &j in &batch {
            ready.remove(&j);
            slots[j] = Some(t);
            done += 1;
        }
        for &j in &batch {
            for s in inst.successors(j).iter() {
                missing[s] -= 1;
                if missing[s] == 0 {
                    ready.insert(s);
                }
            }
        }
    }
    Schedule::new(t, slots)
}

/// Per-slot capacities over an interval `(begin, end]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityProfile {
    interval: Interval,
    caps: Vec<usize>,
}

impl CapacityProfile {
    /// `caps[i]` is the capacity of slot `begin + 1 + i`.
    pub fn new(interval: Interval, caps: Vec<usize>) -> Result<Self> {
        if caps.len() != interval.len() as usize {
            return Err(Error::InvalidInput(format!(
                "profile has {} capacities for {} slots",
                caps.len(),
                interval.len()
            )));
        }
        Ok(CapacityProfile { interval, caps })
    }

    pub fn uniform(interval: Interval, cap: usize) -> Self {
        CapacityProfile {
            interval,
            caps: vec![cap; interval.len() as usize],
        }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn cap(&self, slot: u32) -> usize {
        self.caps[(slot - self.interval.begin() - 1) as usize]
    }

    pub fn total(&self) -> u64 {
        self.caps.iter().map(|&c| c as u64).sum()
    }
}

/// Schedules `jobs` inside the profile's interval, respecting precedence
/// among `jobs` and the per-slot capacities; leftovers are discarded.
///
/// Capacities are first trimmed from the latest slots down until they sum to
/// `|jobs|`. The number of discarded jobs is at most `m·Δ(jobs)`.
pub fn capacity_list_schedule(inst: &Instance, jobs: &JobSet, profile: &CapacityProfile) -> Result<Schedule> {
    let total = profile.total();
    if total < jobs.len() as u64 {
        return Err(Error::CapacityDeficit {
            available: total,
            required: jobs.len(),
        });
    }
    if let Some(&c) = profile.caps.iter().find(|&&c| c > inst.m()) {
        return Err(Error::InvalidInput(format!("capacity {c} exceeds machine count {}", inst.m())));
    }
    let mut caps = profile.caps.clone();
    let mut excess = total - jobs.len() as u64;
    for c in caps.iter_mut().rev() {
        if excess == 0 {
            break;
        }
        let cut = (*c as u64).min(excess);
        *c -= cut as usize;
        excess -= cut;
    }

    let mut sched = Schedule::all_discarded(inst.n(), profile.interval.end());
    let mut missing: Vec<usize> = vec![0; inst.n()];
    for j in jobs.iter() {
        missing[j] = inst.predecessors(j).intersection_count(jobs);
    }
    let mut ready: BTreeSet<usize> = jobs.iter().filter(|&j| missing[j] == 0).collect();
    for (offset, &cap) in caps.iter().enumerate() {
        let t = profile.interval.begin() + 1 + offset as u32;
        let batch: Vec<usize> = ready.iter().take(cap).copied().collect();
        for &j in &batch {
            ready.remove(&j);
            sched.set(j, Some(t));
        }
        for &j in &batch {
            for s in inst.successors(j).iter().filter(|&s| jobs.contains(s)) {
                missing[s] -= 1;
                if missing[s] == 0 {
                    ready.insert(s);
                }
            }
        }
    }
    Ok(sched)
}

/// Bitmask view of a small instance.
struct MaskOrder {
    n: usize,
    m: usize,
    pred: Vec<u64>,
    topo: Vec<usize>,
}

impl MaskOrder {
    fn new(inst: &Instance) -> Self {
        let pred = (0..inst.n())
            .map(|j| inst.predecessors(j).iter().fold(0u64, |acc, p| acc | 1 << p))
            .collect();
        MaskOrder {
            n: inst.n(),
            m: inst.m(),
            pred,
            topo: inst.topological_order().to_vec(),
        }
    }

    /// Longest chain inside `set`.
    fn delta(&self, set: u64) -> u32 {
        let mut depth = [0u32; 64];
        let mut best = 0;
        for &j in &self.topo {
            if set >> j & 1 == 0 {
                continue;
            }
            let mut d = 0;
            let mut preds = self.pred[j] & set;
            while preds != 0 {
                let p = preds.trailing_zeros() as usize;
                d = d.max(depth[p]);
                preds &= preds - 1;
            }
            depth[j] = d + 1;
            best = best.max(d + 1);
        }
        best
    }

    fn lower_bound(&self, remaining: u64) -> u32 {
        let count = remaining.count_ones();
        self.delta(remaining).max(count.div_ceil(self.m as u32))
    }
}

/// Memoised branch and bound over completed-job sets, restricted to
/// non-idling slot choices (some optimal schedule of unit jobs is non-idling).
struct ExactSearch<'a> {
    order: &'a MaskOrder,
    universe: u64,
    memo: HashMap<u64, (u32, u64)>,
}

impl ExactSearch<'_> {
    fn solve(&mut self, done: u64) -> u32 {
        if done == self.universe {
            return 0;
        }
        if let Some(&(v, _)) = self.memo.get(&done) {
            return v;
        }
        let remaining = self.universe & !done;
        let lb = self.order.lower_bound(remaining);
        let ready: Vec<usize> = (0..self.order.n)
            .filter(|&j| remaining >> j & 1 == 1 && self.order.pred[j] & !done == 0)
            .collect();
        let take = ready.len().min(self.order.m);
        let mut best = (u32::MAX, 0u64);
        for_each_combination(&ready, take, &mut |choice| {
            if best.0 == lb {
                return;
            }
            let next = done | choice;
            let bound = 1 + self.order.lower_bound(self.universe & !next);
            if bound >= best.0 {
                return;
            }
            let v = 1 + self.solve(next);
            if v < best.0 {
                best = (v, choice);
            }
        });
        self.memo.insert(done, best);
        best.0
    }

    fn reconstruct(&mut self) -> Vec<Option<u32>> {
        let mut slots = vec![None; self.order.n];
        let mut done = 0u64;
        let mut t = 0;
        while done != self.universe {
            self.solve(done);
            let (_, choice) = self.memo[&done];
            t += 1;
            let mut c = choice;
            while c != 0 {
                let j = c.trailing_zeros() as usize;
                slots[j] = Some(t);
                c &= c - 1;
            }
            done |= choice;
        }
        slots
    }
}

/// Calls `f` with the bitmask of every `k`-subset of `items`, in
/// lexicographic order of positions.
fn for_each_combination(items: &[usize], k: usize, f: &mut dyn FnMut(u64)) {
    fn rec(items: &[usize], k: usize, start: usize, acc: u64, f: &mut dyn FnMut(u64)) {
        if k == 0 {
            f(acc);
            return;
        }
        for i in start..=items.len() - k {
            rec(items, k - 1, i + 1, acc | 1 << items[i], f);
        }
    }
    rec(items, k, 0, 0, f)
}

/// Minimum makespan with no discards, and a schedule achieving it.
pub fn exact_opt(inst: &Instance) -> Result<(u32, Schedule)> {
    exact_opt_with_limit(inst, EXACT_LIMIT)
}

pub fn exact_opt_with_limit(inst: &Instance, limit: usize) -> Result<(u32, Schedule)> {
    let limit = limit.min(63);
    if inst.n() > limit {
        return Err(Error::TooLarge { n: inst.n(), limit });
    }
    let order = MaskOrder::new(inst);
    let universe = if inst.n() == 0 { 0 } else { u64::MAX >> (64 - inst.n()) };
    let mut search = ExactSearch {
        order: &order,
        universe,
        memo: HashMap::new(),
    };
    let t = search.solve(0);
    let slots = search.reconstruct();
    Ok((t, Schedule::new(t, slots)))
}

/// Largest number of jobs a valid schedule (discards allowed) can fit in
/// `1..=horizon`, with such a schedule.
///
/// Discarded jobs impose nothing, so this is the largest subset whose induced
/// order has optimum makespan at most `horizon`.
pub fn max_schedulable(inst: &Instance, horizon: u32) -> Result<(usize, Schedule)> {
    if inst.n() > EXACT_LIMIT {
        return Err(Error::TooLarge { n: inst.n(), limit: EXACT_LIMIT });
    }
    let n = inst.n();
    let mut subsets: Vec<u64> = (0..1u64 << n).collect();
    subsets.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
    let mut failed_size = None;
    for s in subsets {
        let size = s.count_ones() as usize;
        if failed_size.is_some_and(|f| size < f) {
            // every subset of the previous size failed; keep scanning this size
            failed_size = None;
        }
        let keep = JobSet::from_jobs(n, (0..n).filter(|&j| s >> j & 1 == 1));
        let (sub, old) = inst.induced(&keep);
        if sub.n() > 0 && (sub.n() as u32).div_ceil(sub.m() as u32) > horizon {
            continue;
        }
        let (t, sched) = exact_opt(&sub)?;
        if t <= horizon {
            let mut slots = vec![None; n];
            for (new, &j) in old.iter().enumerate() {
                slots[j] = sched.slot(new);
            }
            return Ok((size, Schedule::new(horizon, slots)));
        }
        failed_size = Some(size);
    }
    Ok((0, Schedule::all_discarded(n, horizon)))
}

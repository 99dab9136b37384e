//! Reductions around the core solver: padding the horizon to a power of
//! two, re-inserting discarded jobs, and searching for the makespan.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::schedule::{verify_valid, Schedule};

/// An instance whose horizon was padded to a power of two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Padded {
    pub instance: Instance,
    /// `T′`, the smallest power of two at least `T`.
    pub horizon: u32,
    /// The added jobs, ids `n..n + m(T′ − T)`.
    pub padded: JobSet,
}

/// Adds `m(T′ − T)` jobs, each preceded by every original job, so that an
/// optimum of `T` becomes an optimum of `T′`.
pub fn pad_to_power_of_two(inst: &Instance, t: u32) -> Result<Padded> {
    if t == 0 {
        return Err(Error::InvalidInput("horizon must be at least 1".into()));
    }
    pad_to_horizon(inst, t, t.next_power_of_two())
}

/// Like [`pad_to_power_of_two`] with an explicit target `t_prime ≥ t`.
pub fn pad_to_horizon(inst: &Instance, t: u32, t_prime: u32) -> Result<Padded> {
    if t == 0 || t_prime < t {
        return Err(Error::InvalidInput(format!("cannot pad horizon {t} to {t_prime}")));
    }
    let extra = inst.m() * (t_prime - t) as usize;
    let n = inst.n();
    let total = n + extra;
    let mut edges: Vec<(usize, usize)> = inst.cover_pairs();
    for pad in n..total {
        edges.extend((0..n).map(|j| (j, pad)));
    }
    let instance = Instance::new(total, inst.m(), &edges)?;
    Ok(Padded {
        instance,
        horizon: t_prime,
        padded: JobSet::from_jobs(total, n..total),
    })
}

/// Schedules every discarded job, one fresh slot each.
///
/// Discarded jobs are taken in topological order; each goes right after
/// its latest scheduled predecessor (slot 0 if none) and the rest of the
/// schedule shifts right by one. The makespan grows by at most the number
/// of discarded jobs.
pub fn insert_discarded(inst: &Instance, sched: &Schedule) -> Result<Schedule> {
    let report = verify_valid(inst, sched);
    if !report.is_valid() {
        return Err(Error::InvalidInput(format!("schedule is not valid: {}", report.violations[0])));
    }
    let mut out = sched.clone();
    let discarded = sched.discarded();
    let added = discarded.len() as u32;
    for &j in inst.topological_order() {
        if !discarded.contains(j) {
            continue;
        }
        let t = inst.predecessors(j).iter().filter_map(|p| out.slot(p)).max().unwrap_or(0);
        for k in 0..out.n() {
            if let Some(s) = out.slot(k) {
                if s > t {
                    out.set(k, Some(s + 1));
                }
            }
        }
        out.set(j, Some(t + 1));
    }
    out.set_horizon(sched.horizon() + added);
    Ok(out)
}

/// Smallest horizon in `[max(Δ, ⌈n/m⌉), n]` at which `solver` succeeds,
/// assuming success is monotone in the horizon.
pub fn binary_search_makespan<F>(inst: &Instance, mut solver: F) -> Result<(u32, Schedule)>
where
    F: FnMut(u32) -> Result<Option<Schedule>>,
{
    let n = inst.n() as u32;
    if n == 0 {
        return Ok((0, Schedule::all_discarded(0, 0)));
    }
    let lower = (inst.delta(&inst.all_jobs()) as u32).max(n.div_ceil(inst.m() as u32));
    let Some(mut best) = solver(n)? else {
        return Err(Error::NoSolution(n));
    };
    let (mut lo, mut hi) = (lower, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match solver(mid)? {
            Some(s) => {
                best = s;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Ok((hi, best))
}

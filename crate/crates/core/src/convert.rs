//! Conversions between valid and virtually-valid schedules of a full
//! dyadic system.

use std::collections::{BTreeMap, VecDeque};

use crate::baselines::{capacity_list_schedule, CapacityProfile};
use crate::dyadic::{check_valid_for_system, windows, Interval, Params, PartialDyadicSystem, Side};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::order::count_inversions;
use crate::schedule::Schedule;

/// Output of [`valid_to_virtually_valid`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualConversion {
    pub schedule: Schedule,
    /// Jobs discarded per top interval, `(left half, right half)`.
    pub discards: BTreeMap<Interval, (usize, usize)>,
}

impl VirtualConversion {
    pub fn total_discards(&self) -> usize {
        self.discards.values().map(|(l, r)| l + r).sum()
    }
}

/// Turns a schedule valid for a full system into a virtually-valid one.
///
/// Bottom jobs keep their slots. The top jobs of each half of a top
/// interval are swept block by block (blocks of one window unit): a block's
/// slots go to jobs carried over from earlier blocks, and the block's own
/// jobs are carried forward. Left halves sweep left to right, right halves
/// right to left; whatever is still carried at the end is discarded.
pub fn valid_to_virtually_valid(
    inst: &Instance,
    sys: &PartialDyadicSystem,
    sched: &Schedule,
    params: &Params,
) -> Result<VirtualConversion> {
    let report = check_valid_for_system(inst, sys, sched);
    if !report.is_valid() {
        return Err(Error::InvalidInput(format!("schedule is not valid for the system: {}", report.violations[0])));
    }
    let mut out = sched.clone();
    let mut discards = BTreeMap::new();
    for (iv, jobs) in sys.assignments() {
        if !params.is_top(iv) {
            continue;
        }
        let unit = params.window_unit(iv);
        let left = sweep(&mut out, sched, jobs, iv.left(), unit, false);
        let right = sweep(&mut out, sched, jobs, iv.right(), unit, true);
        discards.insert(iv, (left, right));
    }
    Ok(VirtualConversion { schedule: out, discards })
}

fn sweep(out: &mut Schedule, sched: &Schedule, jobs: &JobSet, half: Interval, unit: u32, reverse: bool) -> usize {
    let mut mine: Vec<(u32, usize)> =
        jobs.iter().filter_map(|j| sched.slot(j).filter(|&t| half.contains(t)).map(|t| (t, j))).collect();
    if reverse {
        mine.sort_unstable_by_key(|&(t, j)| (std::cmp::Reverse(t), j));
    } else {
        mine.sort_unstable();
    }
    for &(_, j) in &mine {
        out.set(j, None);
    }
    let mut blocks: Vec<Interval> =
        (0..half.len() / unit).map(|k| Interval::new(half.begin() + k * unit, half.begin() + (k + 1) * unit)).collect();
    if reverse {
        blocks.reverse();
    }
    let mut carried: VecDeque<usize> = VecDeque::new();
    for block in blocks {
        let here: Vec<(u32, usize)> = mine.iter().copied().filter(|&(t, _)| block.contains(t)).collect();
        let take = carried.len().min(here.len());
        for &(t, _) in &here[..take] {
            let j = carried.pop_front().expect("carried job");
            out.set(j, Some(t));
        }
        carried.extend(here.iter().map(|&(_, j)| j));
    }
    carried.len()
}

/// Scheduled top jobs with their owner, side and comparison key.
#[derive(Debug, Clone)]
pub struct SideOrder {
    jobs: Vec<usize>,
    owner: Vec<Option<Interval>>,
    window: BTreeMap<usize, (u32, u32)>,
    depth: Vec<usize>,
}

impl SideOrder {
    /// `J#` of `sched`, grouped by owning top interval.
    pub fn new(inst: &Instance, sys: &PartialDyadicSystem, params: &Params, sched: &Schedule) -> Self {
        let mut owner = vec![None; inst.n()];
        let mut depth = vec![0; inst.n()];
        let mut jobs = Vec::new();
        for (iv, s) in sys.assignments() {
            if !params.is_top(iv) {
                continue;
            }
            let scheduled = JobSet::from_jobs(inst.n(), s.iter().filter(|&j| sched.slot(j).is_some()));
            let d = inst.depths(&scheduled);
            for j in scheduled.iter() {
                owner[j] = Some(iv);
                depth[j] = d[j];
                jobs.push(j);
            }
        }
        jobs.sort_unstable();
        SideOrder {
            jobs,
            owner,
            window: windows(inst, sys, params),
            depth,
        }
    }

    /// `J#` in ascending id order.
    pub fn jobs(&self) -> &[usize] {
        &self.jobs
    }

    pub fn owner(&self, j: usize) -> Option<Interval> {
        self.owner[j]
    }

    pub fn window(&self, j: usize) -> (u32, u32) {
        self.window[&j]
    }

    pub fn side(&self, j: usize, sched: &Schedule) -> Side {
        let iv = self.owner[j].expect("job of J#");
        match sched.slot(j) {
            Some(t) if t <= iv.center() => Side::L,
            _ => Side::R,
        }
    }

    /// `⟨b_j, depth⟩` on the left side, `⟨e_j, depth⟩` on the right.
    pub fn key(&self, j: usize, sched: &Schedule) -> (u32, usize) {
        let (b, e) = self.window(j);
        match self.side(j, sched) {
            Side::L => (b, self.depth[j]),
            Side::R => (e, self.depth[j]),
        }
    }

    /// `j <_side j′` under the sides induced by `sched`.
    pub fn less(&self, j: usize, k: usize, sched: &Schedule) -> bool {
        self.owner[j] == self.owner[k]
            && self.side(j, sched) == self.side(k, sched)
            && self.key(j, sched) < self.key(k, sched)
    }

    /// First pair breaking a canonical-order condition: precedence pairs
    /// first, then side-order pairs, each in ascending `(id, id)`.
    pub fn first_violation(&self, inst: &Instance, sched: &Schedule) -> Option<(usize, usize)> {
        let slot = |j: usize| sched.slot(j).expect("job of J#");
        for &j in &self.jobs {
            for &k in &self.jobs {
                if inst.precedes(j, k) && slot(j) > slot(k) {
                    return Some((j, k));
                }
            }
        }
        for &j in &self.jobs {
            for &k in &self.jobs {
                if self.less(j, k, sched) && slot(j) > slot(k) {
                    return Some((j, k));
                }
            }
        }
        None
    }

    /// The potential that every canonicalizing swap decreases.
    pub fn dif_vector(&self, inst: &Instance, sched: &Schedule) -> DifVector {
        let slot = |j: usize| sched.slot(j).expect("job of J#");
        let dif1 = self
            .jobs
            .iter()
            .map(|&j| {
                let iv = self.owner[j].expect("job of J#");
                iv.len() as u64 * slot(j).abs_diff(iv.center()) as u64
            })
            .sum();
        let n = self.jobs.len();
        let sides: Vec<i64> = self.jobs.iter().map(|&j| (self.side(j, sched) == Side::R) as i64).collect();
        let dif2 = count_inversions(n, |a, b| inst.precedes(self.jobs[a], self.jobs[b]), &sides);
        let slots: Vec<i64> = self.jobs.iter().map(|&j| slot(j) as i64).collect();
        let dif3 = count_inversions(n, |a, b| self.less(self.jobs[a], self.jobs[b], sched), &slots);
        DifVector { dif1, dif2, dif3 }
    }
}

/// Lexicographically ordered potential `(dif₁, dif₂, dif₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DifVector {
    /// `Σ |I(j)|·|σ_j − center(I(j))|`.
    pub dif1: u64,
    /// Inversions of the side function (`L < R`) with respect to `≺`.
    pub dif2: u64,
    /// Inversions of the slots with respect to `<_side`.
    pub dif3: u64,
}

/// Output of [`canonicalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub schedule: Schedule,
    pub swaps: usize,
    /// The potential before the first swap and after every swap.
    pub trace: Vec<DifVector>,
}

/// Swaps slots of violating top-job pairs until both conditions hold:
/// `j ≺ j′ ⇒ σ_j ≤ σ_j′` and `j <_side j′ ⇒ σ_j ≤ σ_j′`.
///
/// # Panics
/// If a swap moves a job out of its window or fails to decrease the
/// potential, which cannot happen for a virtually-valid input.
pub fn canonicalize(inst: &Instance, sys: &PartialDyadicSystem, params: &Params, sched: &Schedule) -> Canonical {
    let order = SideOrder::new(inst, sys, params, sched);
    let mut cur = sched.clone();
    let mut trace = vec![order.dif_vector(inst, &cur)];
    while let Some((j, k)) = order.first_violation(inst, &cur) {
        let (sj, sk) = (cur.slot(j), cur.slot(k));
        cur.set(j, sk);
        cur.set(k, sj);
        for x in [j, k] {
            let (b, e) = order.window(x);
            let t = cur.slot(x).expect("job of J#");
            assert!(b < t && t <= e, "swap of {j} and {k} moved job {x} to {t} outside ({b}, {e}]");
        }
        let next = order.dif_vector(inst, &cur);
        assert!(next < *trace.last().expect("trace"), "swap of {j} and {k} did not decrease the potential");
        trace.push(next);
    }
    Canonical {
        schedule: cur,
        swaps: trace.len() - 1,
        trace,
    }
}

/// Top jobs scheduled by `sched` inside each bottom interval.
pub fn top_jobs_per_bottom(
    inst: &Instance,
    sys: &PartialDyadicSystem,
    params: &Params,
    sched: &Schedule,
) -> Vec<(Interval, JobSet)> {
    let top = sys.top_jobs(params);
    params
        .bottom_intervals()
        .into_iter()
        .map(|b| {
            let mut x = sched.jobs_in(b);
            x.grow(inst.n());
            x.intersect_with(&top);
            (b, x)
        })
        .collect()
}

/// `m · Σ Δ(J# ∩ σ⁻¹(I′))` over bottom intervals `I′`.
pub fn extra_discard_bound(inst: &Instance, sys: &PartialDyadicSystem, params: &Params, sched: &Schedule) -> usize {
    top_jobs_per_bottom(inst, sys, params, sched).iter().map(|(_, x)| inst.delta(x)).sum::<usize>() * inst.m()
}

/// Turns a canonical virtually-valid schedule into a valid one, re-listing
/// the top jobs of every bottom interval into the slots they occupied.
pub fn virtually_valid_to_valid(
    inst: &Instance,
    sys: &PartialDyadicSystem,
    params: &Params,
    sched: &Schedule,
) -> Result<Schedule> {
    let order = SideOrder::new(inst, sys, params, sched);
    if let Some((j, k)) = order.first_violation(inst, sched) {
        return Err(Error::PrecongruenceViolated(j, k));
    }
    let mut out = sched.clone();
    for (b, x) in top_jobs_per_bottom(inst, sys, params, sched) {
        if x.is_empty() {
            continue;
        }
        let caps = b.slots().map(|t| x.iter().filter(|&j| sched.slot(j) == Some(t)).count()).collect();
        let local = capacity_list_schedule(inst, &x, &CapacityProfile::new(b, caps)?)?;
        for j in x.iter() {
            out.set(j, local.slot(j));
        }
    }
    Ok(out)
}

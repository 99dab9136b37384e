//! Schedules with discards and the diagnostic validity report.

use std::fmt;

use crate::dyadic::Interval;
use crate::instance::Instance;
use crate::jobset::JobSet;

/// An assignment of every job to a slot in `1..=horizon` or to `disc`
/// (`None`).
///
/// Schedules over a subset of jobs use the same representation; jobs outside
/// the domain are simply left at `None` and ignored by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    horizon: u32,
    slots: Vec<Option<u32>>,
}

impl Schedule {
    pub fn new(horizon: u32, slots: Vec<Option<u32>>) -> Self {
        Schedule { horizon, slots }
    }

    pub fn all_discarded(n: usize, horizon: u32) -> Self {
        Schedule {
            horizon,
            slots: vec![None; n],
        }
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn set_horizon(&mut self, horizon: u32) {
        self.horizon = horizon;
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, job: usize) -> Option<u32> {
        self.slots[job]
    }

    pub fn set(&mut self, job: usize, slot: Option<u32>) {
        self.slots[job] = slot;
    }

    pub fn slots(&self) -> &[Option<u32>] {
        &self.slots
    }

    pub fn discarded(&self) -> JobSet {
        JobSet::from_jobs(self.n(), (0..self.n()).filter(|&j| self.slots[j].is_none()))
    }

    pub fn discard_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_none()).count()
    }

    pub fn scheduled_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// Number of jobs of `domain` that are scheduled.
    pub fn scheduled_in(&self, domain: &JobSet) -> usize {
        domain.iter().filter(|&j| self.slots[j].is_some()).count()
    }

    /// Latest occupied slot, 0 if nothing is scheduled.
    pub fn makespan(&self) -> u32 {
        self.slots.iter().flatten().copied().max().unwrap_or(0)
    }

    /// `σ⁻¹(I)`: jobs scheduled inside `interval`.
    pub fn jobs_in(&self, interval: Interval) -> JobSet {
        JobSet::from_jobs(
            self.n(),
            (0..self.n()).filter(|&j| matches!(self.slots[j], Some(t) if interval.contains(t))),
        )
    }

    /// Per-slot load, index `t - 1` for slot `t`, over `1..=horizon`.
    pub fn loads(&self) -> Vec<usize> {
        let mut load = vec![0usize; self.horizon as usize];
        for &t in self.slots.iter().flatten() {
            if t >= 1 && t <= self.horizon {
                load[t as usize - 1] += 1;
            }
        }
        load
    }
}

/// One violated constraint, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The schedule does not cover exactly the instance's jobs.
    JobCount { expected: usize, found: usize },
    OutOfHorizon { job: usize, slot: u32 },
    Capacity { slot: u32, load: usize, capacity: usize },
    /// `before ≺ after` but `after` is not strictly later.
    Precedence { before: usize, after: usize },
    /// A job sits outside the interval it is assigned to.
    Interval { job: usize, slot: u32, interval: Interval },
    /// A top or ancestor job sits outside its window `(begin, end]`.
    Window { job: usize, slot: u32, begin: u32, end: u32 },
    /// A job belongs to more than one set of a dyadic system.
    Overlap { job: usize },
    /// A top interval whose job set has a chain that is too long.
    ChainLength { interval: Interval, delta: usize, bound: String },
    MiddleNonEmpty { interval: Interval, jobs: usize },
    /// `from ≺ to` although `to` is owned by an earlier interval in in-order.
    InOrder { from: usize, to: usize },
    /// A full system must assign every job.
    Unassigned { job: usize },
    /// A full system must be rooted at `[T]` without ancestor jobs.
    NotFull,
    /// An assignment to an interval that is not inside the root.
    ForeignInterval { interval: Interval },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::JobCount { expected, found } => {
                write!(f, "job count: expected {expected}, schedule has {found}")
            }
            Violation::OutOfHorizon { job, slot } => {
                write!(f, "horizon: job {job} at slot {slot} is outside the horizon")
            }
            Violation::Capacity { slot, load, capacity } => {
                write!(f, "capacity: slot {slot} holds {load} jobs, capacity {capacity}")
            }
            Violation::Precedence { before, after } => {
                write!(f, "precedence: job {before} must run before job {after}")
            }
            Violation::Interval { job, slot, interval } => {
                write!(f, "interval: job {job} at slot {slot} is outside {interval}")
            }
            Violation::Window { job, slot, begin, end } => {
                write!(f, "window: job {job} at slot {slot} is outside ({begin}, {end}]")
            }
            Violation::Overlap { job } => write!(f, "disjointness: job {job} assigned twice"),
            Violation::ChainLength { interval, delta, bound } => {
                write!(f, "chain length: {interval} has chain {delta} > {bound}")
            }
            Violation::MiddleNonEmpty { interval, jobs } => {
                write!(f, "middle: {interval} owns {jobs} jobs")
            }
            Violation::InOrder { from, to } => {
                write!(f, "in-order: job {from} precedes job {to} owned by an earlier interval")
            }
            Violation::Unassigned { job } => write!(f, "coverage: job {job} is unassigned"),
            Violation::NotFull => write!(f, "coverage: system is not rooted at the full horizon"),
            Violation::ForeignInterval { interval } => {
                write!(f, "structure: {interval} is not below the root")
            }
        }
    }
}

/// Exhaustive list of violations plus the discard count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
    pub discards: usize,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "valid")?;
        } else {
            writeln!(f, "invalid: {} violation(s)", self.violations.len())?;
        }
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        write!(f, "discarded: {}", self.discards)
    }
}

pub(crate) fn capacity_violations(sched: &Schedule, domain: Option<&JobSet>, m: usize) -> Vec<Violation> {
    let mut load = std::collections::BTreeMap::<u32, usize>::new();
    for j in 0..sched.n() {
        if domain.is_some_and(|d| !d.contains(j)) {
            continue;
        }
        if let Some(t) = sched.slot(j) {
            *load.entry(t).or_default() += 1;
        }
    }
    load.into_iter()
        .filter(|&(_, l)| l > m)
        .map(|(slot, load)| Violation::Capacity { slot, load, capacity: m })
        .collect()
}

/// Precedence violations among the scheduled jobs of `among`.
pub(crate) fn precedence_violations(inst: &Instance, sched: &Schedule, among: &JobSet) -> Vec<Violation> {
    let mut out = Vec::new();
    for a in among.iter() {
        let Some(ta) = sched.slot(a) else { continue };
        for b in inst.successors(a).iter() {
            if !among.contains(b) {
                continue;
            }
            if let Some(tb) = sched.slot(b) {
                if ta >= tb {
                    out.push(Violation::Precedence { before: a, after: b });
                }
            }
        }
    }
    out
}

/// Checks capacity and precedence on the whole horizon; discarded jobs are
/// exempt from precedence.
pub fn verify_valid(inst: &Instance, sched: &Schedule) -> ValidityReport {
    let mut violations = Vec::new();
    if sched.n() != inst.n() {
        violations.push(Violation::JobCount {
            expected: inst.n(),
            found: sched.n(),
        });
        return ValidityReport {
            violations,
            discards: sched.discard_count(),
        };
    }
    for j in 0..sched.n() {
        if let Some(t) = sched.slot(j) {
            if t == 0 || t > sched.horizon() {
                violations.push(Violation::OutOfHorizon { job: j, slot: t });
            }
        }
    }
    violations.extend(capacity_violations(sched, None, inst.m()));
    violations.extend(precedence_violations(inst, sched, &inst.all_jobs()));
    ValidityReport {
        violations,
        discards: sched.discard_count(),
    }
}

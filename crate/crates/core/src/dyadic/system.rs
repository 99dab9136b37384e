//! Partial dyadic systems, their structural check, top-job windows and
//! virtual validity.

use std::collections::BTreeMap;

use super::interval::Interval;
use super::params::{Kind, Params, Rational};
use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::schedule::{capacity_violations, precedence_violations, verify_valid, Schedule, ValidityReport, Violation};

/// Ancestor jobs with their windows `(b, e]`.
pub type AncestorWindows = BTreeMap<usize, (u32, u32)>;

/// An assignment of jobs to the tree intervals below `root`, plus ancestor
/// jobs carrying fixed windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDyadicSystem {
    n: usize,
    root: Interval,
    anc: AncestorWindows,
    assign: BTreeMap<Interval, JobSet>,
}

impl PartialDyadicSystem {
    pub fn new(n: usize, root: Interval) -> Self {
        PartialDyadicSystem {
            n,
            root,
            anc: BTreeMap::new(),
            assign: BTreeMap::new(),
        }
    }

    pub fn with_ancestors(n: usize, root: Interval, anc: AncestorWindows) -> Self {
        PartialDyadicSystem {
            n,
            root,
            anc,
            assign: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Interval {
        self.root
    }

    pub fn ancestors(&self) -> &AncestorWindows {
        &self.anc
    }

    pub fn ancestor_set(&self) -> JobSet {
        JobSet::from_jobs(self.n, self.anc.keys().copied())
    }

    /// Adds `jobs` to `J_iv`.
    pub fn assign(&mut self, iv: Interval, jobs: &JobSet) {
        if jobs.is_empty() {
            return;
        }
        self.assign.entry(iv).or_insert_with(|| JobSet::new(self.n)).union_with(jobs);
    }

    /// `J_iv`, empty if nothing is assigned.
    pub fn jobs(&self, iv: Interval) -> JobSet {
        self.assign.get(&iv).cloned().unwrap_or_else(|| JobSet::new(self.n))
    }

    /// Non-empty assignments in interval order.
    pub fn assignments(&self) -> impl Iterator<Item = (Interval, &JobSet)> {
        self.assign.iter().filter(|(_, s)| !s.is_empty()).map(|(i, s)| (*i, s))
    }

    /// `J_{⊆W}`.
    pub fn jobs_within(&self, w: Interval) -> JobSet {
        let mut out = JobSet::new(self.n);
        for (iv, s) in self.assignments() {
            if w.contains_interval(&iv) {
                out.union_with(s);
            }
        }
        out
    }

    /// Owning interval of every job (`None` for ancestors and unassigned
    /// jobs). If a job is assigned twice the in-order-first owner wins.
    pub fn owners(&self) -> Vec<Option<Interval>> {
        let mut owner = vec![None; self.n];
        for (iv, s) in self.assignments() {
            for j in s.iter() {
                owner[j].get_or_insert(iv);
            }
        }
        owner
    }

    /// Jobs assigned to top intervals.
    pub fn top_jobs(&self, params: &Params) -> JobSet {
        self.jobs_of_kind(params, Kind::Top)
    }

    /// Jobs assigned to bottom intervals.
    pub fn bottom_jobs(&self, params: &Params) -> JobSet {
        self.jobs_of_kind(params, Kind::Bottom)
    }

    fn jobs_of_kind(&self, params: &Params, kind: Kind) -> JobSet {
        let mut out = JobSet::new(self.n);
        for (iv, s) in self.assignments() {
            if params.kind(iv) == Some(kind) {
                out.union_with(s);
            }
        }
        out
    }

    /// Every job the system talks about: `J_{⊆root} ∪ J_anc`.
    pub fn domain(&self) -> JobSet {
        let mut d = self.ancestor_set();
        for (_, s) in self.assignments() {
            d.union_with(s);
        }
        d
    }

    /// Merges the assignments and ancestors of `other` into `self`.
    pub fn absorb(&mut self, other: &PartialDyadicSystem) {
        for (iv, s) in other.assignments() {
            self.assign(iv, s);
        }
    }
}

fn exceeds(delta: usize, bound: Rational) -> bool {
    Rational::from_integer(delta as i128) > bound
}

/// Checks clauses (a)–(d) of a partial dyadic system; exhaustive.
pub fn check_system(inst: &Instance, sys: &PartialDyadicSystem, params: &Params) -> ValidityReport {
    let mut violations = Vec::new();
    let mut seen = sys.ancestor_set();
    for (iv, s) in sys.assignments() {
        if params.level(iv).is_none() || !sys.root.contains_interval(&iv) {
            violations.push(Violation::ForeignInterval { interval: iv });
        }
        for j in s.iter() {
            if seen.contains(j) {
                violations.push(Violation::Overlap { job: j });
            }
            seen.insert(j);
        }
        match params.kind(iv) {
            Some(Kind::Top) => {
                let delta = inst.delta(s);
                let bound = params.chain_bound(iv, s.len());
                if exceeds(delta, bound) {
                    violations.push(Violation::ChainLength {
                        interval: iv,
                        delta,
                        bound: bound.to_string(),
                    });
                }
            }
            Some(Kind::Middle) => violations.push(Violation::MiddleNonEmpty {
                interval: iv,
                jobs: s.len(),
            }),
            _ => {}
        }
    }
    let owner = sys.owners();
    for a in 0..sys.n {
        let Some(ia) = owner[a] else { continue };
        for b in inst.successors(a).iter() {
            if let Some(ib) = owner[b] {
                if ib.center2() < ia.center2() {
                    violations.push(Violation::InOrder { from: a, to: b });
                }
            }
        }
    }
    ValidityReport { violations, discards: 0 }
}

/// [`check_system`] plus the requirements of a full system: rooted at
/// `[T]`, no ancestors, every job assigned.
pub fn check_full_system(inst: &Instance, sys: &PartialDyadicSystem, params: &Params) -> ValidityReport {
    let mut report = check_system(inst, sys, params);
    if sys.root != params.root() || !sys.anc.is_empty() {
        report.violations.push(Violation::NotFull);
    }
    let covered = sys.domain();
    for j in 0..inst.n() {
        if !covered.contains(j) {
            report.violations.push(Violation::Unassigned { job: j });
        }
    }
    report
}

/// Validity of `sched` for a full system: ordinary validity plus interval
/// constraints.
pub fn check_valid_for_system(inst: &Instance, sys: &PartialDyadicSystem, sched: &Schedule) -> ValidityReport {
    let mut report = verify_valid(inst, sched);
    if sched.n() != inst.n() {
        return report;
    }
    for (iv, s) in sys.assignments() {
        for j in s.iter() {
            if let Some(t) = sched.slot(j) {
                if !iv.contains(t) {
                    report.violations.push(Violation::Interval { job: j, slot: t, interval: iv });
                }
            }
        }
    }
    report
}

/// Left window boundary of a job owned by `iv` with alignment `unit`:
/// the least multiple `b` of `unit` in `(begin, center]` such that no
/// predecessor of `job` is owned by an interval inside `(b, center]`.
///
/// `owner` maps jobs to the interval their ownership is recorded at;
/// jobs without an owner impose nothing.
pub fn window_begin(inst: &Instance, iv: Interval, unit: u32, job: usize, owner: &[Option<Interval>]) -> u32 {
    let center = iv.center();
    // Any candidate b must exceed the begin of every predecessor block that
    // lies inside (begin, center].
    let mut floor = iv.begin();
    for p in inst.predecessors(job).iter() {
        if let Some(w) = owner[p] {
            if w.end() <= center && w.begin() > iv.begin() {
                floor = floor.max(w.begin());
            }
        }
    }
    (floor / unit + 1) * unit
}

/// Right window boundary, symmetric to [`window_begin`]: the greatest
/// multiple `e` of `unit` in `[center, end)` such that no successor of
/// `job` is owned by an interval inside `(center, e]`.
pub fn window_end(inst: &Instance, iv: Interval, unit: u32, job: usize, owner: &[Option<Interval>]) -> u32 {
    let center = iv.center();
    let mut ceil = iv.end();
    for s in inst.successors(job).iter() {
        if let Some(w) = owner[s] {
            if w.begin() >= center && w.end() < iv.end() {
                ceil = ceil.min(w.end());
            }
        }
    }
    (ceil - 1) / unit * unit
}

/// Windows `(b_j, e_j]` of all top jobs of the system.
pub fn windows(inst: &Instance, sys: &PartialDyadicSystem, params: &Params) -> BTreeMap<usize, (u32, u32)> {
    let owner = sys.owners();
    let mut out = BTreeMap::new();
    for (iv, s) in sys.assignments() {
        if !params.is_top(iv) {
            continue;
        }
        let unit = params.window_unit(iv);
        for j in s.iter() {
            out.insert(j, (window_begin(inst, iv, unit, j, &owner), window_end(inst, iv, unit, j, &owner)));
        }
    }
    out
}

/// Checks the five constraint families of a virtually-valid schedule;
/// `sched` covers `J_{⊆root} ∪ J_anc`, other jobs are ignored.
pub fn check_virtually_valid(
    inst: &Instance,
    sys: &PartialDyadicSystem,
    params: &Params,
    sched: &Schedule,
) -> ValidityReport {
    let domain = sys.domain();
    let mut violations = Vec::new();
    if sched.n() != inst.n() {
        violations.push(Violation::JobCount {
            expected: inst.n(),
            found: sched.n(),
        });
        return ValidityReport { violations, discards: 0 };
    }
    for j in domain.iter() {
        if let Some(t) = sched.slot(j) {
            if !sys.root.contains(t) {
                violations.push(Violation::Interval {
                    job: j,
                    slot: t,
                    interval: sys.root,
                });
            }
        }
    }
    violations.extend(capacity_violations(sched, Some(&domain), inst.m()));

    let bottom = sys.bottom_jobs(params);
    violations.extend(precedence_violations(inst, sched, &bottom));
    for (iv, s) in sys.assignments() {
        if params.is_bottom(iv) {
            for j in s.iter() {
                if let Some(t) = sched.slot(j) {
                    if !iv.contains(t) {
                        violations.push(Violation::Interval { job: j, slot: t, interval: iv });
                    }
                }
            }
        }
    }
    let top_windows = windows(inst, sys, params);
    for (&j, &(b, e)) in top_windows.iter().chain(sys.anc.iter()) {
        if let Some(t) = sched.slot(j) {
            if t <= b || t > e {
                violations.push(Violation::Window {
                    job: j,
                    slot: t,
                    begin: b,
                    end: e,
                });
            }
        }
    }
    let discards = domain.iter().filter(|&j| sched.slot(j).is_none()).count();
    ValidityReport { violations, discards }
}

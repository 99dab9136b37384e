//! Dense job-id sets backed by a fixed-size bitset.

use std::fmt;

use fixedbitset::FixedBitSet;

/// A set of job ids drawn from `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JobSet {
    bits: FixedBitSet,
}

impl JobSet {
    pub fn new(universe: usize) -> Self {
        JobSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    /// The set `{0, .., universe - 1}`.
    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        JobSet { bits }
    }

    pub fn from_jobs<I: IntoIterator<Item = usize>>(universe: usize, jobs: I) -> Self {
        let mut set = JobSet::new(universe);
        for j in jobs {
            set.insert(j);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    /// Grows the universe; existing members are kept.
    pub fn grow(&mut self, universe: usize) {
        self.bits.grow(universe);
    }

    pub fn insert(&mut self, job: usize) {
        self.bits.insert(job);
    }

    pub fn remove(&mut self, job: usize) {
        self.bits.set(job, false);
    }

    pub fn contains(&self, job: usize) -> bool {
        self.bits.contains(job)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn union_with(&mut self, other: &JobSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &JobSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &JobSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &JobSet) -> JobSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &JobSet) -> JobSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &JobSet) -> JobSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn intersects(&self, other: &JobSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &JobSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection_count(&self, other: &JobSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }
}

impl fmt::Debug for JobSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Extend<usize> for JobSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        for j in iter {
            self.insert(j);
        }
    }
}

//! Splitting the ancestor pool of a recursion node into left, right and
//! discarded jobs, one representative per equivalence class.

use std::collections::{BTreeMap, BTreeSet};

use crate::dyadic::{AncestorWindows, Interval};
use crate::jobset::JobSet;

/// One split `(J^L, J^R, J_disc)` of the pool.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    pub left: JobSet,
    pub right: JobSet,
    pub disc: JobSet,
}

/// `(b, e] ∩ half`, `None` when empty.
pub fn clip(window: (u32, u32), half: Interval) -> Option<Interval> {
    if window.0 >= window.1 {
        return None;
    }
    Interval::new(window.0, window.1).intersect(&half)
}

type Signature = (BTreeMap<Option<Interval>, usize>, BTreeMap<Option<Interval>, usize>);

/// The class of a partition: multisets of clipped windows on each side.
pub fn signature(pool: &AncestorWindows, root: Interval, part: &Partition) -> Signature {
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for j in part.left.iter() {
        *left.entry(clip(pool[&j], root.left())).or_insert(0) += 1;
    }
    for j in part.right.iter() {
        *right.entry(clip(pool[&j], root.right())).or_insert(0) += 1;
    }
    (left, right)
}

/// One partition per equivalence class, in lexicographic order of the
/// per-group count vectors `(to left, to right)`. Groups collect jobs with
/// equal clipped windows on both halves; inside a group the smallest ids go
/// left, the next ones right, the rest are discarded.
///
/// With `prune_empty`, no job is sent to a half its window misses.
pub fn enumerate_partitions(pool: &AncestorWindows, root: Interval, n: usize, prune_empty: bool) -> Vec<Partition> {
    let mut groups: BTreeMap<(Option<Interval>, Option<Interval>), Vec<usize>> = BTreeMap::new();
    for (&j, &w) in pool {
        groups.entry((clip(w, root.left()), clip(w, root.right()))).or_default().push(j);
    }
    let groups: Vec<_> = groups.into_iter().collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut counts = Vec::with_capacity(groups.len());
    expand(&groups, n, prune_empty, &mut counts, &mut seen, &mut out);
    out
}

type Group = ((Option<Interval>, Option<Interval>), Vec<usize>);

fn expand(
    groups: &[Group],
    n: usize,
    prune_empty: bool,
    counts: &mut Vec<(usize, usize)>,
    seen: &mut BTreeSet<Signature>,
    out: &mut Vec<Partition>,
) {
    let depth = counts.len();
    if depth == groups.len() {
        let mut left: BTreeMap<Option<Interval>, usize> = BTreeMap::new();
        let mut right: BTreeMap<Option<Interval>, usize> = BTreeMap::new();
        for (((cl, cr), _), &(a, b)) in groups.iter().zip(counts.iter()) {
            if a > 0 {
                *left.entry(*cl).or_insert(0) += a;
            }
            if b > 0 {
                *right.entry(*cr).or_insert(0) += b;
            }
        }
        if seen.insert((left, right)) {
            let mut part = Partition {
                left: JobSet::new(n),
                right: JobSet::new(n),
                disc: JobSet::new(n),
            };
            for ((_, jobs), &(a, b)) in groups.iter().zip(counts.iter()) {
                for (i, &j) in jobs.iter().enumerate() {
                    if i < a {
                        part.left.insert(j);
                    } else if i < a + b {
                        part.right.insert(j);
                    } else {
                        part.disc.insert(j);
                    }
                }
            }
            out.push(part);
        }
        return;
    }
    let ((cl, cr), jobs) = &groups[depth];
    let k = jobs.len();
    let max_a = if prune_empty && cl.is_none() { 0 } else { k };
    for a in 0..=max_a {
        let max_b = if prune_empty && cr.is_none() { 0 } else { k - a };
        for b in 0..=max_b {
            counts.push((a, b));
            expand(groups, n, prune_empty, counts, seen, out);
            counts.pop();
        }
    }
}

//! Exact search for the best virtually-valid schedule of one bottom
//! interval.

use std::collections::HashMap;

use crate::dyadic::{AncestorWindows, Interval};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::jobset::JobSet;
use crate::schedule::Schedule;

const MASK_BITS: usize = 64;

/// Arguments of `Search::best`.
type State = (usize, u64, u64, u64);
/// Best count, then the bottom jobs and ancestors placed at this slot.
type Choice = (u32, u64, u64);

struct Search {
    slots: Vec<u32>,
    m: usize,
    /// Predecessors among the bottom jobs, as local masks.
    pred: Vec<u64>,
    /// Ancestor windows in earliest-deadline order.
    anc: Vec<(u32, u32)>,
    memo: HashMap<State, Choice>,
}

impl Search {
    /// Best count from slot index `i` on. `placed` bottom jobs are
    /// scheduled, `forbidden` ones must stay discarded because a successor
    /// was already placed, `used` ancestors are scheduled.
    fn best(&mut self, i: usize, placed: u64, forbidden: u64, used: u64) -> u32 {
        if i == self.slots.len() {
            return 0;
        }
        let key = (i, placed, forbidden, used);
        if let Some(&(v, _, _)) = self.memo.get(&key) {
            return v;
        }
        let t = self.slots[i];
        let n = self.pred.len();
        let cand: Vec<usize> = (0..n).filter(|&j| (placed | forbidden) >> j & 1 == 0).collect();
        let mut best = (0u32, 0u64, 0u64);
        let mut first = true;
        let mut chosen = Vec::with_capacity(self.m);
        self.each_antichain(&cand, 0, &mut chosen, &mut |search, x| {
            let size = x.count_ones() as usize;
            let fill = search.fill(t, used, search.m - size);
            let preds = (0..n).filter(|&j| x >> j & 1 == 1).fold(0u64, |acc, j| acc | search.pred[j]);
            let value = size as u32
                + fill.count_ones()
                + search.best(i + 1, placed | x, forbidden | (preds & !placed), used | fill);
            if first || value > best.0 {
                best = (value, x, fill);
                first = false;
            }
        });
        self.memo.insert(key, best);
        best.0
    }

    fn each_antichain<F>(&mut self, cand: &[usize], from: usize, chosen: &mut Vec<usize>, f: &mut F)
    where
        F: FnMut(&mut Search, u64),
    {
        let mask = chosen.iter().fold(0u64, |acc, &j| acc | 1 << j);
        f(self, mask);
        if chosen.len() == self.m {
            return;
        }
        for k in from..cand.len() {
            let j = cand[k];
            if self.pred[j] & mask != 0 || chosen.iter().any(|&c| self.pred[c] >> j & 1 == 1) {
                continue;
            }
            chosen.push(j);
            self.each_antichain(cand, k + 1, chosen, f);
            chosen.pop();
        }
    }

    /// Up to `cap` unused ancestors whose window contains `t`, earliest
    /// deadline first.
    fn fill(&self, t: u32, used: u64, cap: usize) -> u64 {
        let mut out = 0u64;
        let mut left = cap;
        for (a, &(b, e)) in self.anc.iter().enumerate() {
            if left == 0 {
                break;
            }
            if used >> a & 1 == 0 && b < t && t <= e {
                out |= 1 << a;
                left -= 1;
            }
        }
        out
    }
}

/// A virtually-valid schedule of one bottom interval maximizing the number
/// of scheduled jobs: `bottom` jobs obey precedence among themselves and
/// stay inside `interval`, ancestors obey only their windows, and each slot
/// holds at most `m` jobs.
pub fn bottom_solve(
    inst: &Instance,
    interval: Interval,
    anc: &AncestorWindows,
    bottom: &JobSet,
    horizon: u32,
) -> Result<Schedule> {
    if bottom.len() > MASK_BITS || anc.len() > MASK_BITS {
        return Err(Error::TooLarge {
            n: bottom.len().max(anc.len()),
            limit: MASK_BITS,
        });
    }
    let jobs: Vec<usize> = bottom.iter().collect();
    let pred = jobs
        .iter()
        .map(|&j| {
            jobs.iter()
                .enumerate()
                .filter(|&(_, &p)| inst.precedes(p, j))
                .fold(0u64, |acc, (k, _)| acc | 1 << k)
        })
        .collect();
    let mut anc_jobs: Vec<(usize, (u32, u32))> = anc.iter().map(|(&j, &w)| (j, w)).collect();
    anc_jobs.sort_by_key(|&(j, (_, e))| (e, j));
    let mut search = Search {
        slots: interval.slots().collect(),
        m: inst.m(),
        pred,
        anc: anc_jobs.iter().map(|&(_, w)| w).collect(),
        memo: HashMap::new(),
    };
    search.best(0, 0, 0, 0);

    let mut sched = Schedule::all_discarded(inst.n(), horizon);
    let (mut placed, mut forbidden, mut used) = (0u64, 0u64, 0u64);
    for i in 0..search.slots.len() {
        let (_, x, fill) = search.memo[&(i, placed, forbidden, used)];
        let t = search.slots[i];
        let mut preds = 0u64;
        for (k, &j) in jobs.iter().enumerate() {
            if x >> k & 1 == 1 {
                sched.set(j, Some(t));
                preds |= search.pred[k];
            }
        }
        for (a, &(j, _)) in anc_jobs.iter().enumerate() {
            if fill >> a & 1 == 1 {
                sched.set(j, Some(t));
            }
        }
        forbidden |= preds & !placed;
        placed |= x;
        used |= fill;
    }
    Ok(sched)
}

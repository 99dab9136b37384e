//! Solving at a horizon, the makespan search, and the full pipeline back to
//! a valid schedule.

use psched_core::baselines::exact_opt;
use psched_core::convert::{canonicalize, virtually_valid_to_valid};
use psched_core::dyadic::{compute_params, Overrides, Params, Rational};
use psched_core::solver::{main_solve, solve_hinted, SolveOutcome, DEFAULT_BUDGET};
use psched_core::transform::{binary_search_makespan, insert_discarded, pad_to_horizon, Padded};
use psched_core::{Error, Instance, Result, Schedule};

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub epsilon: Rational,
    pub overrides: Overrides,
    /// Replay the guesses of an optimal schedule instead of enumerating.
    pub hinted: bool,
    /// Recursion nodes allowed per horizon.
    pub budget: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            epsilon: Rational::new(1, 2),
            overrides: Overrides::default(),
            hinted: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// The solver run on the padded instance at one horizon.
#[derive(Debug, Clone)]
pub struct HorizonRun {
    /// The requested horizon `T`.
    pub horizon: u32,
    pub padded: Padded,
    pub params: Params,
    pub outcome: SolveOutcome,
}

impl HorizonRun {
    pub fn padded_horizon(&self) -> u32 {
        self.padded.horizon
    }

    /// Discards allowed by `⌊εT⌋`.
    pub fn allowance(&self) -> usize {
        (self.params.epsilon() * Rational::from_integer(self.horizon as i128)).floor().to_integer() as usize
    }

    pub fn accepted(&self) -> bool {
        self.outcome.discards() <= self.allowance()
    }

    /// The solver schedule restricted to the original jobs.
    pub fn original_schedule(&self, n: usize) -> Schedule {
        restrict(&self.outcome.schedule, n)
    }
}

fn restrict(sched: &Schedule, n: usize) -> Schedule {
    Schedule::new(sched.horizon(), sched.slots()[..n].to_vec())
}

/// `T′`: the smallest power of two at least `max(T, 2)`.
pub fn padded_horizon(t: u32) -> u32 {
    t.max(2).next_power_of_two()
}

/// An optimal schedule of the padded instance with every padding job
/// after `t`, or `None` when the optimum of `inst` exceeds `t`.
fn padded_optimum(inst: &Instance, padded: &Padded, t: u32) -> Result<Option<Schedule>> {
    let (opt, sched) = exact_opt(inst)?;
    if opt > t {
        return Ok(None);
    }
    let mut slots = sched.slots().to_vec();
    let m = inst.m();
    slots.extend(padded.padded.iter().enumerate().map(|(i, _)| Some(t + 1 + (i / m) as u32)));
    Ok(Some(Schedule::new(padded.horizon, slots)))
}

/// Runs the solver at horizon `t`; `None` when no branch survives or the
/// hinted optimum does not fit.
pub fn solve_at(inst: &Instance, t: u32, cfg: &SolveConfig) -> Result<Option<HorizonRun>> {
    if t == 0 {
        return Err(Error::InvalidInput("horizon must be at least 1".into()));
    }
    let padded = pad_to_horizon(inst, t, padded_horizon(t))?;
    let params = compute_params(padded.horizon, inst.m(), cfg.epsilon, &cfg.overrides)?;
    let outcome = if cfg.hinted {
        let Some(opt) = padded_optimum(inst, &padded, t)? else {
            return Ok(None);
        };
        solve_hinted(&padded.instance, &opt, &params, cfg.budget).map(|h| h.outcome)
    } else {
        main_solve(&padded.instance, &params, cfg.budget)
    };
    match outcome {
        Ok(outcome) => Ok(Some(HorizonRun {
            horizon: t,
            padded,
            params,
            outcome,
        })),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Solves at `horizon`, or at the smallest accepted horizon when `None`.
pub fn solve(inst: &Instance, horizon: Option<u32>, cfg: &SolveConfig) -> Result<HorizonRun> {
    if let Some(t) = horizon {
        return solve_at(inst, t, cfg)?.ok_or(Error::NoSolution(t));
    }
    if inst.n() == 0 {
        return solve_at(inst, 1, cfg)?.ok_or(Error::NoSolution(1));
    }
    let mut runs = Vec::new();
    let (t, _) = binary_search_makespan(inst, |t| {
        let run = solve_at(inst, t, cfg)?.filter(HorizonRun::accepted);
        let sched = run.as_ref().map(|r| r.original_schedule(inst.n()));
        runs.extend(run);
        Ok(sched)
    })?;
    Ok(runs.into_iter().rev().find(|r| r.horizon == t).expect("accepted run is kept"))
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub solve: HorizonRun,
    pub swaps: usize,
    /// Jobs discarded while turning the virtually-valid schedule valid.
    pub conversion_discards: usize,
    /// Valid, zero-discard schedule of the original jobs; its horizon is
    /// its makespan.
    pub schedule: Schedule,
}

impl PipelineRun {
    pub fn solver_discards(&self) -> usize {
        self.solve.outcome.discards()
    }

    pub fn total_discards(&self) -> usize {
        self.solver_discards() + self.conversion_discards
    }

    pub fn makespan(&self) -> u32 {
        self.schedule.makespan()
    }
}

/// solve → canonicalize → virtually-valid to valid → insert discarded.
pub fn run_pipeline(inst: &Instance, horizon: Option<u32>, cfg: &SolveConfig) -> Result<PipelineRun> {
    let solve = solve(inst, horizon, cfg)?;
    finish(inst, solve)
}

pub fn finish(inst: &Instance, solve: HorizonRun) -> Result<PipelineRun> {
    let padded = &solve.padded.instance;
    let out = &solve.outcome;
    let canonical = canonicalize(padded, &out.system, &solve.params, &out.schedule);
    let valid = virtually_valid_to_valid(padded, &out.system, &solve.params, &canonical.schedule)?;
    let conversion_discards = valid.discard_count() - out.discards();
    let full = insert_discarded(padded, &valid)?;
    let mut schedule = restrict(&full, inst.n());
    schedule.set_horizon(schedule.makespan());
    Ok(PipelineRun {
        solve,
        swaps: canonical.swaps,
        conversion_discards,
        schedule,
    })
}

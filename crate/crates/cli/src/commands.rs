//! Argument parsing and the subcommands of `psched`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psched_core::baselines::{exact_opt, graham_list};
use psched_core::dyadic::{parse_rational, Overrides};
use psched_core::{verify_valid, Error, Instance};
use rayon::prelude::*;

use crate::format::{parse_instance, parse_schedule, write_instance, write_schedule};
use crate::generate::{gen_instance, Family, GenParams};
use crate::pipeline::{finish, solve, solve_at, HorizonRun, PipelineRun, SolveConfig};

/// Column order of `psched bench`.
pub const BENCH_COLUMNS: &str = "instance,family,n,m,opt,graham,solver_discards,final_makespan,ratio,wall_ms";

#[derive(Parser, Debug)]
#[command(name = "psched", version, about = "Scheduling unit jobs with precedence constraints on identical machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance
    Gen(GenArgs),
    /// Check a schedule against an instance
    Verify {
        instance: PathBuf,
        schedule: PathBuf,
    },
    /// Greedy list schedule
    Graham(ScheduleArgs),
    /// Exact minimum makespan (at most 16 jobs)
    Oracle(ScheduleArgs),
    /// Run the recursive solver; searches the horizon when --horizon is absent
    Solve(SolveArgs),
    /// Solve, then convert to a valid schedule with every job placed
    Pipeline(SolveArgs),
    /// Oracle, greedy and pipeline over a family of seeded instances
    #[command(after_help = format!("CSV columns: {BENCH_COLUMNS}\nwall_ms is `-` unless --timing is given."))]
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    /// Layer count for the layered family
    #[arg(long, default_value_t = 3)]
    layers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScheduleArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the schedule file here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SolverOpts {
    /// Accuracy, a decimal or a fraction such as 1/4
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// Override a derived parameter: h, hp, p, delta or deltap
    #[arg(long = "param-override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Replay the guesses of an optimal schedule (at most 16 jobs)
    #[arg(long)]
    hinted: bool,
    /// Recursion nodes allowed per horizon
    #[arg(long, default_value_t = psched_core::solver::DEFAULT_BUDGET)]
    budget: u64,
}

impl SolverOpts {
    fn config(&self) -> Result<SolveConfig, String> {
        let epsilon = parse_rational(&self.epsilon).map_err(|e| e.to_string())?;
        let mut overrides = Overrides::default();
        for pair in &self.overrides {
            overrides.apply(pair).map_err(|e| e.to_string())?;
        }
        Ok(SolveConfig {
            epsilon,
            overrides,
            hinted: self.hinted,
            budget: self.budget,
        })
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long)]
    horizon: Option<u32>,
    #[command(flatten)]
    solver: SolverOpts,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the resulting schedule file here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report wall time
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_parser = parse_family, default_value = "random-dag")]
    family: Family,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long, default_value_t = 3)]
    layers: usize,
    /// Number of instances; instance i uses seed + i
    #[arg(long, default_value_t = 10)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverOpts,
    /// Fill the wall_ms column
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure { code: 1, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::BudgetExhausted { .. }) { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs `psched` with `argv` (program name first). Reports go to `out`,
/// diagnostics to `err`. Returns the exit code: 0 on success, 1 on bad input
/// or an invalid schedule, 2 when the recursion budget runs out.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut report = String::new();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args, &mut report),
        Command::Verify { instance, schedule } => cmd_verify(&instance, &schedule, &mut report),
        Command::Graham(args) => cmd_baseline(args, false, &mut report),
        Command::Oracle(args) => cmd_baseline(args, true, &mut report),
        Command::Solve(args) => cmd_solve(args, false, &mut report),
        Command::Pipeline(args) => cmd_solve(args, true, &mut report),
        Command::Bench(args) => cmd_bench(args, &mut report),
    };
    let _ = out.write_all(report.as_bytes());
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "psched: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn cmd_gen(args: GenArgs, report: &mut String) -> CmdResult {
    let inst = gen_instance(&GenParams {
        family: args.family,
        n: args.n,
        m: args.m,
        density: args.density,
        layers: args.layers,
        seed: args.seed,
    })?;
    let text = write_instance(&inst);
    match args.out {
        Some(path) => write_file(&path, &text)?,
        None => report.push_str(&text),
    }
    Ok(0)
}

fn cmd_verify(instance: &Path, schedule: &Path, report: &mut String) -> CmdResult {
    let inst = load_instance(instance)?;
    let sched = parse_schedule(&read(schedule)?).map_err(|e| format!("{}: {e}", schedule.display()))?;
    let r = verify_valid(&inst, &sched);
    writeln!(report, "{r}").unwrap();
    Ok(if r.is_valid() { 0 } else { 1 })
}

fn cmd_baseline(args: ScheduleArgs, exact: bool, report: &mut String) -> CmdResult {
    let inst = load_instance(&args.instance)?;
    let sched = if exact {
        exact_opt(&inst)?.1
    } else {
        graham_list(&inst)
    };
    let delta = inst.delta(&inst.all_jobs());
    let lower = delta.max(inst.n().div_ceil(inst.m()));
    match args.format {
        Format::Text => {
            writeln!(report, "jobs: {} machines: {}", inst.n(), inst.m()).unwrap();
            writeln!(report, "longest chain: {delta}").unwrap();
            writeln!(report, "lower bound: {lower}").unwrap();
            writeln!(report, "makespan: {}", sched.makespan()).unwrap();
        }
        Format::Csv => {
            writeln!(report, "n,m,delta,lower_bound,makespan").unwrap();
            writeln!(report, "{},{},{delta},{lower},{}", inst.n(), inst.m(), sched.makespan()).unwrap();
        }
    }
    if let Some(path) = args.out {
        let mut s = sched.clone();
        s.set_horizon(s.makespan());
        write_file(&path, &write_schedule(&s))?;
    }
    Ok(0)
}

fn solve_report(inst: &Instance, run: &HorizonRun, format: Format, report: &mut String) {
    let o = &run.outcome;
    let scheduled = run.original_schedule(inst.n()).scheduled_count();
    match format {
        Format::Text => {
            writeln!(report, "horizon: {} (padded to {})", run.horizon, run.padded_horizon()).unwrap();
            writeln!(report, "params: {}", run.params).unwrap();
            writeln!(report, "jobs: {} ({} padding)", run.padded.instance.n(), run.padded.padded.len()).unwrap();
            writeln!(report, "scheduled: {scheduled} of {} original", inst.n()).unwrap();
            writeln!(report, "discarded: {} (allowance {})", o.discards(), run.allowance()).unwrap();
            writeln!(report, "nodes: {}", o.nodes).unwrap();
            writeln!(report, "branches: {}", o.branches).unwrap();
        }
        Format::Csv => {
            writeln!(report, "horizon,padded_horizon,scheduled,discarded,allowance,nodes,branches").unwrap();
            writeln!(
                report,
                "{},{},{scheduled},{},{},{},{}",
                run.horizon,
                run.padded_horizon(),
                o.discards(),
                run.allowance(),
                o.nodes,
                o.branches
            )
            .unwrap();
        }
    }
}

fn pipeline_report(run: &PipelineRun, format: Format, report: &mut String) {
    match format {
        Format::Text => {
            writeln!(report, "solver discards: {}", run.solver_discards()).unwrap();
            writeln!(report, "canonical swaps: {}", run.swaps).unwrap();
            writeln!(report, "conversion discards: {}", run.conversion_discards).unwrap();
            writeln!(report, "final makespan: {}", run.makespan()).unwrap();
        }
        Format::Csv => {
            writeln!(report, "solver_discards,swaps,conversion_discards,final_makespan").unwrap();
            writeln!(
                report,
                "{},{},{},{}",
                run.solver_discards(),
                run.swaps,
                run.conversion_discards,
                run.makespan()
            )
            .unwrap();
        }
    }
}

fn cmd_solve(args: SolveArgs, full: bool, report: &mut String) -> CmdResult {
    let inst = load_instance(&args.instance)?;
    let cfg = args.solver.config()?;
    let start = Instant::now();
    let run = solve(&inst, args.horizon, &cfg)?;
    solve_report(&inst, &run, args.format, report);
    let sched = if full {
        let p = finish(&inst, run)?;
        pipeline_report(&p, args.format, report);
        p.schedule
    } else {
        run.original_schedule(inst.n())
    };
    if args.timing {
        writeln!(report, "wall time: {} ms", start.elapsed().as_millis()).unwrap();
    }
    if let Some(path) = args.out {
        write_file(&path, &write_schedule(&sched))?;
    }
    Ok(0)
}

struct BenchRow {
    index: u64,
    n: usize,
    opt: u32,
    graham: u32,
    solver_discards: usize,
    final_makespan: u32,
    wall_ms: f64,
}

fn bench_one(args: &BenchArgs, cfg: &SolveConfig, index: u64) -> Result<BenchRow, Error> {
    let inst = gen_instance(&GenParams {
        family: args.family,
        n: args.n,
        m: args.m,
        density: args.density,
        layers: args.layers,
        seed: args.seed.wrapping_add(index),
    })?;
    let start = Instant::now();
    let (opt, _) = exact_opt(&inst)?;
    let graham = graham_list(&inst).makespan();
    let (solver_discards, final_makespan) = if inst.n() == 0 {
        (0, 0)
    } else {
        let run = solve_at(&inst, opt, cfg)?.ok_or(Error::NoSolution(opt))?;
        let p = finish(&inst, run)?;
        (p.solver_discards(), p.makespan())
    };
    Ok(BenchRow {
        index,
        n: inst.n(),
        opt,
        graham,
        solver_discards,
        final_makespan,
        wall_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

fn cmd_bench(args: BenchArgs, report: &mut String) -> CmdResult {
    let cfg = args.solver.config()?;
    let results: Vec<Result<BenchRow, Error>> = (0..args.count).into_par_iter().map(|i| bench_one(&args, &cfg, i)).collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(r?);
    }
    rows.sort_by_key(|r| r.index);
    let mut csv = format!("{BENCH_COLUMNS}\n");
    for r in &rows {
        let ratio = if r.opt == 0 { 1.0 } else { r.graham as f64 / r.opt as f64 };
        let wall = if args.timing { format!("{:.3}", r.wall_ms) } else { "-".into() };
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{ratio:.4},{wall}",
            r.index, args.family, r.n, args.m, r.opt, r.graham, r.solver_discards, r.final_makespan
        )
        .unwrap();
    }
    match args.out {
        Some(path) => write_file(&path, &csv)?,
        None => report.push_str(&csv),
    }
    Ok(0)
}

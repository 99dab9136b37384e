//! Library side of the `psched` command: file formats, generators, the
//! solve pipeline and the subcommands.

pub mod commands;
pub mod format;
pub mod generate;
pub mod pipeline;

pub use commands::{run_command, BENCH_COLUMNS};
pub use format::{parse_instance, parse_schedule, write_instance, write_schedule, ParseError};
pub use generate::{gen_instance, Family, GenParams};
pub use pipeline::{run_pipeline, solve, solve_at, HorizonRun, PipelineRun, SolveConfig};

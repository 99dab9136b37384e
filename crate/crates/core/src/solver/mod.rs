//! The recursive guess-and-divide solver.

pub mod bottom;
pub mod partition;
pub mod recursive;

pub use bottom::bottom_solve;
pub use partition::{clip, enumerate_partitions, signature, Partition};
pub use recursive::{
    anc_windows, main_solve, pad_guess, solve_hinted, HintedOutcome, Hints, Solution, SolveOutcome, Solver,
    SubproblemInput, DEFAULT_BUDGET,
};

use thiserror::Error;

use crate::dyadic::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precedence edges contain a directed cycle through job {0}")]
    Cycle(usize),
    #[error("job id {job} out of range for {n} jobs")]
    Index { job: usize, n: usize },
    #[error("job {0} is not in the given set")]
    NotInSet(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("capacity profile offers {available} slots for {required} jobs")]
    CapacityDeficit { available: u64, required: usize },
    #[error("instance has {n} jobs, exact search is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("guess vector of length {len} exhausted while pushing down {interval}")]
    GuessExhausted { interval: Interval, len: usize },
    #[error("schedule breaks the ordering precondition: jobs {0} and {1}")]
    PrecongruenceViolated(usize, usize),
    #[error("no schedule found up to horizon {0}")]
    NoSolution(u32),
    #[error("every search branch was rejected")]
    Infeasible,
    #[error("recursion budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

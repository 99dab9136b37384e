//! The dyadic interval tree, parameters, dyadic systems and push-down.

pub mod construct;
pub mod interval;
pub mod params;
pub mod system;

pub use construct::{
    choose_pivot, construct_jstar, format_guess, push_down, push_down_outcomes, split_with, Construction, GuessVector,
    Side, Split,
};
pub use interval::Interval;
pub use params::{compute_params, iteration_bound, parse_rational, Kind, Overrides, Params, Rational};
pub use system::{
    check_full_system, check_system, check_valid_for_system, check_virtually_valid, window_begin, window_end, windows,
    AncestorWindows, PartialDyadicSystem,
};

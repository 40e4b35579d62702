//! Brute-force reference checkers and the randomized suite that compares them with the library.

mod filters;
mod literal;
mod naive;
mod sheaf;
mod suite;
mod sweep;

pub use filters::filters;
pub use literal::{is_regular_epi_literal, literal_classify, LiteralVerdict};
pub use naive::{injective_by_functions, NaiveEval};
pub use sheaf::amalgamates;
pub use suite::{oracle_suite, run_check, CHECK_IDS, CORPUS_ATTEMPTS, DEFAULT_BUDGET};
pub use sweep::{sweep_counterexample, sweep_solutions};

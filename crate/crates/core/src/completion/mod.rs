//! Set-valued functors on finite categories, regular objects and the exact completion.
//!
//! Presheaves are contravariant [`SetFunctor`]s with carriers `0..n`. The completion of a
//! lex category is built from quotients of representables whose kernel pair is again
//! covered by a representable.

mod exlex;
mod functor;
mod points;
mod regular;

use thiserror::Error;

pub use exlex::{congruences, ex_lex_completion, quotient, Completion, CompletionObject, Congruence};
pub use functor::{
    corepresentable, element_map, for_each_set_functor, is_epi_presheaf, yoneda, Presheaf, PresheafError,
    PresheafMorphism, SetFunctor, Variance,
};
pub use points::{is_lex_functor, lex_functors_bounded, lex_points, LexWitnesses, PointCategory};
pub(crate) use points::point_category;
pub use regular::{generates, generator, is_regular_object, is_supercompact, kernel_pair_of_element};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionError {
    #[error("category is not lex")]
    NotLex,
}

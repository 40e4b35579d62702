//! Finite categories, functors and natural transformations given by explicit tables.
//!
//! Objects and morphisms are dense integer ids. A [`FinCategory`] can only be obtained
//! from tables that pass [`validate`], so every other operation in the crate may assume
//! the category axioms hold.

mod category;
mod functor;
mod json;

pub use category::{
    classify_morphism, opposite, validate, CategoryError, CategoryTables, FinCategory,
    Morphism, MorphismFlags, ValidationReport, Violation,
};
pub use functor::{is_equivalence, FinFunctor, FunctorError, NatTransform};
pub use json::{RawCategory, RawMorphism};

/// Index of an object inside a [`FinCategory`].
pub type ObjId = usize;
/// Index of a morphism inside a [`FinCategory`].
pub type MorId = usize;

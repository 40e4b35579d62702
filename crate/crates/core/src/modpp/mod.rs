//! Finite rings and modules, pp formulas as linear systems, and definable classes.

mod abelian;
mod corpus;
mod defclass;
mod formula;
mod module;
mod purity;
mod reduced;
mod ring;
mod solve;

pub use abelian::{GroupBasis, Howell};
pub use corpus::{small_modules, test_rings};
pub use defclass::{
    chain_colimit, closure_audit, closure_audit_with, defclass_membership, ClosureKind, ClosureReport, Orientation, PairError, PpPair,
    Violation, AUDIT_MAX_SIZE,
};
pub use formula::{LinearPp, PpError};
pub use module::{find_isomorphism, for_each_hom, homs, is_linear, FiniteModule, ModuleError, ModuleMap, RawModule, RingSpec};
pub use purity::{find_retraction, is_pure_embedding, pp_reflection_failure, small_formulas};
pub use reduced::{
    directed_posets, distributivity_probe, reduced_product, Chain, DiagramError, DirectedPoset, DistributivityReport, ModuleDiagram,
    ReducedProduct,
};
pub use ring::{FiniteRing, RawRing, RingError};
pub use solve::{free_realization, implication_counterexample, pp_equivalent, pp_implies, pp_solution_set, pp_subgroup, SolutionSet};

//! Regular logic: the `.rth` language, pp normal form, finite structures and injectivity.

mod injectivity;
mod linear;
mod normal;
mod parser;
mod semantics;
mod syntax;

pub use injectivity::{
    for_each_homomorphism, homomorphisms, is_injective, theory_from_injectivity, MorphismError, StructureMorphism,
};
pub use linear::{parse_linear, Coef, LinearSyntax};
pub use normal::{compile_functions, pp_normalize, relational_signature, PpFormula};
pub use parser::{parse_formula_with, parse_theory, ParseError};
pub use semantics::{
    eval, eval_set, find_counterexample, models, Counterexample, Evaluator, FinStructure, RawStructure, SemanticsError,
};
pub use syntax::{Formula, FunSymbol, Printer, RelSymbol, Sequent, Signature, Term, Theory, Var};

//! Seeded generators for the test corpora: small categories, lattices, formulas,
//! digraphs and pp data over finite rings.
//!
//! Every generator takes a [`ChaCha8Rng`](rand_chacha::ChaCha8Rng), so a corpus is a
//! pure function of its seed.

mod categories;
mod logic;
mod pp;

pub use categories::{are_isomorphic, category_corpus, lattices, preorders, random_concrete};
pub use logic::{
    digraph_signature, digraphs, formula_signature, formula_structures, random_digraph_morphism, random_formula, random_morphism_set,
};
pub use pp::{random_implication_pair, random_linear_pp, random_module_diagram, random_pp_morphism, random_pp_object, random_theory};

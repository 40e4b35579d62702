//! Pp pairs over a finite ring as an abelian category, evaluated at finite modules.

mod category;
mod ev;
mod script;

pub use category::{MorphismCondition, PpCatError, PpCategory, PpMorphism, PpObject};
pub use ev::{cokernel_exact, ev_morphism, ev_object, ev_summary, kernel_exact, serre_membership, EvGroup, EvMap, EvSummary};
pub use script::{run_script, ScriptError, ScriptEvent, CERTIFY_MAX_SIZE};

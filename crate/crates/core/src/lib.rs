//! Finite-scale categorical logic.

pub mod fincat;
pub mod gen;
pub mod completion;
pub mod limits;
pub mod modpp;
pub mod oracle;
pub mod ppcat;
pub mod reglogic;
pub mod report;
pub mod sites;

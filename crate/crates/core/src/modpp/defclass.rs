use serde::Serialize;

use super::formula::{LinearPp, PpError};
use super::module::{for_each_hom, FiniteModule, ModuleMap};
use super::purity::find_retraction;
use super::ring::FiniteRing;
use super::solve::{pp_implies, pp_solution_set};

/// Which of the two formulas entails the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `φ ⊢ ψ`: the pair cuts out `ψ(M)/φ(M)`.
    PhiEntailsPsi,
    /// `ψ ⊢ φ`: the pair cuts out `φ(M)/ψ(M)`.
    PsiEntailsPhi,
}

/// A pair of pp formulas of equal arity, one entailing the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpPair {
    phi: LinearPp,
    psi: LinearPp,
    orientation: Orientation,
}

impl PpPair {
    /// Requires `φ ⊢ ψ`.
    pub fn new(ring: &FiniteRing, phi: LinearPp, psi: LinearPp) -> Result<Self, PairError> {
        Self::with_orientation(ring, phi, psi, Orientation::PhiEntailsPsi)
    }

    pub fn with_orientation(ring: &FiniteRing, phi: LinearPp, psi: LinearPp, orientation: Orientation) -> Result<Self, PairError> {
        let holds = match orientation {
            Orientation::PhiEntailsPsi => pp_implies(ring, &phi, &psi)?,
            Orientation::PsiEntailsPhi => pp_implies(ring, &psi, &phi)?,
        };
        if !holds {
            return Err(PairError::NotEntailed(orientation));
        }
        Ok(PpPair { phi, psi, orientation })
    }

    /// Whichever orientation holds, preferring `ψ ⊢ φ` when both do.
    pub fn either(ring: &FiniteRing, phi: LinearPp, psi: LinearPp) -> Result<Self, PairError> {
        if pp_implies(ring, &psi, &phi)? {
            Ok(PpPair { phi, psi, orientation: Orientation::PsiEntailsPhi })
        } else if pp_implies(ring, &phi, &psi)? {
            Ok(PpPair { phi, psi, orientation: Orientation::PhiEntailsPsi })
        } else {
            Err(PairError::Incomparable)
        }
    }

    pub fn phi(&self) -> &LinearPp {
        &self.phi
    }

    pub fn psi(&self) -> &LinearPp {
        &self.psi
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn arity(&self) -> usize {
        self.phi.free()
    }

    /// `(larger, smaller)` formula.
    pub fn upper_lower(&self) -> (&LinearPp, &LinearPp) {
        match self.orientation {
            Orientation::PhiEntailsPsi => (&self.psi, &self.phi),
            Orientation::PsiEntailsPhi => (&self.phi, &self.psi),
        }
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum PairError {
    #[error("the pair is not oriented as {0:?}")]
    NotEntailed(Orientation),
    #[error("neither formula entails the other")]
    Incomparable,
    #[error(transparent)]
    Pp(#[from] PpError),
}

/// `M` lies in the class cut out by `T` when `φ(M) = ψ(M)` for every pair.
pub fn defclass_membership(theory: &[PpPair], m: &FiniteModule) -> Result<bool, PpError> {
    for p in theory {
        if pp_solution_set(m, &p.phi)? != pp_solution_set(m, &p.psi)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureKind {
    Product,
    DirectSummand,
    SplitSubmodule,
    ChainColimit,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ClosureKind,
    /// Corpus indices of the member modules involved.
    pub members: Vec<usize>,
    /// Size of the constructed module that left the class.
    pub size: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClosureReport {
    pub members: Vec<usize>,
    pub products: usize,
    pub summands: usize,
    pub split_submodules: usize,
    pub chains: usize,
    pub violations: Vec<Violation>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest product or chain-colimit module built by the audit.
pub const AUDIT_MAX_SIZE: usize = 256;
/// Maps used per pair of members when building chains.
const CHAIN_MAPS: usize = 4;

/// Colimit of `a → b → b → …` built as `(a ⊕ b)/{(x, −d(x))}`.
pub fn chain_colimit(a: &FiniteModule, b: &FiniteModule, d: &ModuleMap) -> FiniteModule {
    let ring = a.ring();
    let sum = FiniteModule::direct_sum(ring, &[a, b]).expect("small sum");
    let code = |x: usize, y: usize| x * b.size() + y;
    let gens: Vec<usize> = (0..a.size()).map(|x| code(x, b.neg(d.apply(x)))).collect();
    let rel = sum.span(&gens);
    sum.quotient(&rel).0
}

/// Checks that the members of `modules` (those satisfying `member`) are closed under
/// binary products, direct summands (images of idempotents), split submodules and colimits
/// of eventually constant chains of length two.
pub fn closure_audit_with<E>(modules: &[FiniteModule], member: impl Fn(&FiniteModule) -> Result<bool, E>) -> Result<ClosureReport, E> {
    let mut report = ClosureReport::default();
    for (i, m) in modules.iter().enumerate() {
        if member(m)? {
            report.members.push(i);
        }
    }
    let members = report.members.clone();
    let mut violations = Vec::new();
    let mut fail = |kind, members: Vec<usize>, size| violations.push(Violation { kind, members, size });
    let mut counts = [0usize; 4];
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a..] {
            let (x, y) = (&modules[i], &modules[j]);
            if x.size() * y.size() <= AUDIT_MAX_SIZE {
                let p = FiniteModule::product(x, y).expect("small product");
                counts[0] += 1;
                if !member(&p)? {
                    fail(ClosureKind::Product, vec![i, j], p.size());
                }
            }
        }
        for &j in &members {
            let (x, y) = (&modules[i], &modules[j]);
            if x.size() * y.size() <= AUDIT_MAX_SIZE {
                let mut maps = Vec::new();
                for_each_hom(x, y, &mut |t| {
                    maps.push(t.to_vec());
                    maps.len() < CHAIN_MAPS
                });
                for t in maps {
                    let d = ModuleMap::new(x, y, t).expect("hom");
                    let c = chain_colimit(x, y, &d);
                    counts[3] += 1;
                    if !member(&c)? {
                        fail(ClosureKind::ChainColimit, vec![i, j], c.size());
                    }
                }
            }
        }
        let m = &modules[i];
        let mut idempotents = Vec::new();
        for_each_hom(m, m, &mut |e| {
            if (0..m.size()).all(|x| e[e[x]] == e[x]) {
                idempotents.push(e.to_vec());
            }
            true
        });
        for e in idempotents {
            let image: Vec<bool> = {
                let mut s = vec![false; m.size()];
                e.iter().for_each(|&y| s[y] = true);
                s
            };
            let (s, _) = m.submodule(&image);
            counts[1] += 1;
            if !member(&s)? {
                fail(ClosureKind::DirectSummand, vec![i], s.size());
            }
        }
        for mask in m.submodules() {
            let (s, incl) = m.submodule(&mask);
            if find_retraction(&incl).is_some() {
                counts[2] += 1;
                if !member(&s)? {
                    fail(ClosureKind::SplitSubmodule, vec![i], s.size());
                }
            }
        }
    }
    report.products = counts[0];
    report.summands = counts[1];
    report.split_submodules = counts[2];
    report.chains = counts[3];
    report.violations = violations;
    Ok(report)
}

pub fn closure_audit(theory: &[PpPair], modules: &[FiniteModule]) -> Result<ClosureReport, PpError> {
    closure_audit_with(modules, |m| defclass_membership(theory, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpp::corpus::small_modules;

    fn pp(ring: &FiniteRing, s: &str) -> LinearPp {
        LinearPp::parse(ring, s, Some(&["x".to_string()])).unwrap().0
    }

    #[test]
    fn membership_examples() {
        let z4 = FiniteRing::zn(4);
        let t = vec![PpPair::new(&z4, pp(&z4, "E y: x = 2*y"), pp(&z4, "2*x = 0")).unwrap()];
        assert_eq!(defclass_membership(&t, &FiniteModule::regular(&z4)), Ok(true));
        assert_eq!(defclass_membership(&t, &FiniteModule::cyclic(&z4, 2)), Ok(false));
        assert_eq!(defclass_membership(&[], &FiniteModule::cyclic(&z4, 2)), Ok(true));
        assert!(PpPair::new(&z4, pp(&z4, "2*x = 0"), pp(&z4, "E y: x = 2*y")).is_err());
        let p = PpPair::either(&z4, pp(&z4, "2*x = 0"), pp(&z4, "E y: x = 2*y")).unwrap();
        assert_eq!(p.orientation(), Orientation::PsiEntailsPhi);
    }

    #[test]
    fn audit_and_negative_control() {
        let z4 = FiniteRing::zn(4);
        let corpus = small_modules(&z4, 8);
        let t = vec![PpPair::new(&z4, pp(&z4, "E y: x = 2*y"), pp(&z4, "2*x = 0")).unwrap()];
        let r = closure_audit(&t, &corpus).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.products > 0 && r.chains > 0 && r.summands > 0);
        assert!(closure_audit(&[], &corpus).unwrap().passed());
        let small = closure_audit_with(&corpus, |m| Ok::<_, PpError>(m.size() <= 2)).unwrap();
        assert!(small.violations.iter().any(|v| v.kind == ClosureKind::Product && v.size == 4));
    }

    #[test]
    fn chain_colimit_is_the_stable_value() {
        let z4 = FiniteRing::zn(4);
        let a = FiniteModule::cyclic(&z4, 2);
        let b = FiniteModule::regular(&z4);
        let d = ModuleMap::new(&a, &b, vec![0, 2]).unwrap();
        let c = chain_colimit(&a, &b, &d);
        assert!(crate::modpp::module::find_isomorphism(&c, &b).is_some());
    }
}

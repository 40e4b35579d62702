use thiserror::Error;

use crate::modpp::{pp_implies, FiniteRing, LinearPp, PairError, PpError, PpPair};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PpCatError {
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Pp(#[from] PpError),
    #[error("graph has {found} free variables, expected {expected}")]
    GraphArity { expected: usize, found: usize },
    #[error("not a morphism: {0} fails")]
    NotMorphism(MorphismCondition),
    #[error("morphisms do not share endpoints")]
    Endpoints,
}

/// The side conditions a graph must meet to present a morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismCondition {
    /// `φ(x̄) ⊢ ∃x̄′ Γ(x̄, x̄′)`.
    Total,
    /// `Γ(0̄, x̄′) ⊢ ψ′(x̄′)`.
    Functional,
    /// `ψ(x̄) ∧ Γ(x̄, x̄′) ⊢ ψ′(x̄′)`.
    Preserves,
}

impl std::fmt::Display for MorphismCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MorphismCondition::Total => "totality",
            MorphismCondition::Functional => "functionality",
            MorphismCondition::Preserves => "preservation of the lower formula",
        })
    }
}

/// An object `upper/lower` with `lower ⊢ upper`; evaluated at `M` it is `upper(M)/lower(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpObject {
    pair: PpPair,
}

impl PpObject {
    pub fn from_pair(pair: PpPair) -> Self {
        PpObject { pair }
    }

    pub fn pair(&self) -> &PpPair {
        &self.pair
    }

    pub fn upper(&self) -> &LinearPp {
        self.pair.upper_lower().0
    }

    pub fn lower(&self) -> &LinearPp {
        self.pair.upper_lower().1
    }

    pub fn arity(&self) -> usize {
        self.pair.arity()
    }
}

/// A morphism presented by the pp graph `Γ(x̄, x̄′)`, stored already restricted to
/// `upper(x̄) ∧ upper′(x̄′)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpMorphism {
    source: PpObject,
    target: PpObject,
    graph: LinearPp,
}

impl PpMorphism {
    pub fn source(&self) -> &PpObject {
        &self.source
    }

    pub fn target(&self) -> &PpObject {
        &self.target
    }

    pub fn graph(&self) -> &LinearPp {
        &self.graph
    }
}

/// The abelian category of pp pairs over a finite ring. Objects and morphisms are built on
/// demand; every hom-level question reduces to pp implication.
#[derive(Clone, Debug)]
pub struct PpCategory {
    ring: FiniteRing,
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

impl PpCategory {
    pub fn new(ring: FiniteRing) -> Self {
        PpCategory { ring }
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    /// `φ/ψ` in whichever orientation holds.
    pub fn object(&self, phi: LinearPp, psi: LinearPp) -> Result<PpObject, PpCatError> {
        Ok(PpObject { pair: PpPair::either(&self.ring, phi, psi)? })
    }

    /// `θ(x̄)/(x̄ = 0)`.
    pub fn representable(&self, theta: LinearPp) -> PpObject {
        let zero = LinearPp::zero(&self.ring, theta.free());
        self.object(theta, zero).expect("0 satisfies every pp formula")
    }

    pub fn zero_object(&self, n: usize) -> PpObject {
        let z = LinearPp::zero(&self.ring, n);
        self.object(z.clone(), z).expect("trivially oriented")
    }

    pub fn is_zero(&self, x: &PpObject) -> Result<bool, PpCatError> {
        Ok(pp_implies(&self.ring, x.upper(), x.lower())?)
    }

    fn at(&self, p: &LinearPp, total: usize, cols: &[usize]) -> LinearPp {
        LinearPp::conjoin(&self.ring, total, &[(p, cols)])
    }

    fn all(&self, total: usize, parts: &[(&LinearPp, &[usize])]) -> LinearPp {
        LinearPp::conjoin(&self.ring, total, parts)
    }

    /// `ψ(x̄_plus − x̄_minus)` as a formula in `total` variables.
    fn at_difference(&self, psi: &LinearPp, total: usize, plus: &[usize], minus: &[usize]) -> LinearPp {
        let ring = &self.ring;
        let n = psi.free();
        let z: Vec<usize> = range(total, total + n);
        let mut rows = Vec::new();
        for i in 0..n {
            let mut row = vec![ring.zero(); total + n];
            row[z[i]] = ring.one();
            row[plus[i]] = ring.sub(row[plus[i]], ring.one());
            row[minus[i]] = ring.add(row[minus[i]], ring.one());
            rows.push(row);
        }
        let link = LinearPp::new(ring, total + n, 0, rows).expect("entries in range");
        let all = range(0, total + n);
        self.all(total + n, &[(&link, &all), (psi, &z)]).project(&range(0, total))
    }

    /// `x̄′ = x̄` on `2n` columns.
    fn diagonal(&self, n: usize) -> LinearPp {
        let ring = &self.ring;
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![ring.zero(); 2 * n];
                row[i] = ring.neg(ring.one());
                row[n + i] = ring.one();
                row
            })
            .collect();
        LinearPp::new(ring, 2 * n, 0, rows).expect("entries in range")
    }

    /// Checks the side conditions for `ρ(x̄, x̄′)` between `source` and `target`.
    pub fn morphism(&self, source: &PpObject, target: &PpObject, rho: &LinearPp) -> Result<PpMorphism, PpCatError> {
        let (n, k) = (source.arity(), target.arity());
        if rho.free() != n + k {
            return Err(PpCatError::GraphArity { expected: n + k, found: rho.free() });
        }
        let (xs, ys) = (range(0, n), range(n, n + k));
        let all = range(0, n + k);
        let graph = self.all(n + k, &[(rho, &all), (source.upper(), &xs), (target.upper(), &ys)]).simplify(&self.ring);
        let ring = &self.ring;
        let require = |ok: bool, c| if ok { Ok(()) } else { Err(PpCatError::NotMorphism(c)) };
        require(pp_implies(ring, source.upper(), &graph.project(&xs))?, MorphismCondition::Total)?;
        let at_zero = self.all(n + k, &[(&graph, &all), (&LinearPp::zero(ring, n), &xs)]).project(&ys);
        require(pp_implies(ring, &at_zero, target.lower())?, MorphismCondition::Functional)?;
        let lhs = self.all(n + k, &[(&graph, &all), (source.lower(), &xs)]);
        require(pp_implies(ring, &lhs, &self.at(target.lower(), n + k, &ys))?, MorphismCondition::Preserves)?;
        Ok(PpMorphism { source: source.clone(), target: target.clone(), graph })
    }

    pub fn identity(&self, x: &PpObject) -> PpMorphism {
        self.morphism(x, x, &self.diagonal(x.arity())).expect("the diagonal is a morphism")
    }

    pub fn zero_morphism(&self, source: &PpObject, target: &PpObject) -> PpMorphism {
        let (n, k) = (source.arity(), target.arity());
        let zero = LinearPp::zero(&self.ring, k);
        let rho = self.at(&zero, n + k, &range(n, n + k));
        self.morphism(source, target, &rho).expect("the zero map is a morphism")
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &PpMorphism, f: &PpMorphism) -> Result<PpMorphism, PpCatError> {
        if f.target != g.source {
            return Err(PpCatError::Endpoints);
        }
        let (n, k, l) = (f.source.arity(), f.target.arity(), g.target.arity());
        let total = n + k + l;
        let fc: Vec<usize> = range(0, n + k);
        let gc: Vec<usize> = range(n, total);
        let joined = self.all(total, &[(&f.graph, &fc), (&g.graph, &gc)]);
        let keep: Vec<usize> = range(0, n).into_iter().chain(range(n + k, total)).collect();
        let rho = joined.project(&keep);
        self.morphism(&f.source, &g.target, &rho)
    }

    /// Equal when the graphs agree modulo the target's lower formula.
    pub fn mor_equal(&self, f: &PpMorphism, g: &PpMorphism) -> Result<bool, PpCatError> {
        if f.source != g.source || f.target != g.target {
            return Err(PpCatError::Endpoints);
        }
        let (n, k) = (f.source.arity(), f.target.arity());
        let total = n + 2 * k;
        let fc: Vec<usize> = range(0, n + k);
        let gc: Vec<usize> = range(0, n).into_iter().chain(range(n + k, total)).collect();
        let lhs = self.all(total, &[(&f.graph, &fc), (&g.graph, &gc)]);
        let rhs = self.at_difference(f.target.lower(), total, &range(n, n + k), &range(n + k, total));
        Ok(pp_implies(&self.ring, &lhs, &rhs)?)
    }

    pub fn is_zero_morphism(&self, f: &PpMorphism) -> Result<bool, PpCatError> {
        self.mor_equal(f, &self.zero_morphism(&f.source, &f.target))
    }

    /// `(upper ∧ ∃x̄′(Γ ∧ lower′))/lower` with the inclusion.
    pub fn kernel(&self, f: &PpMorphism) -> Result<(PpObject, PpMorphism), PpCatError> {
        let (n, k) = (f.source.arity(), f.target.arity());
        let all = range(0, n + k);
        let meets = self.all(n + k, &[(&f.graph, &all), (f.target.lower(), &range(n, n + k))]).project(&range(0, n));
        let upper = LinearPp::and(&self.ring, f.source.upper(), &meets)?.simplify(&self.ring);
        let obj = self.object(upper, f.source.lower().clone())?;
        let incl = self.morphism(&obj, &f.source, &self.diagonal(n))?;
        Ok((obj, incl))
    }

    /// `upper′/(lower′ + ∃x̄ Γ)` with the projection.
    pub fn cokernel(&self, f: &PpMorphism) -> Result<(PpObject, PpMorphism), PpCatError> {
        let (n, k) = (f.source.arity(), f.target.arity());
        let image = f.graph.project(&range(n, n + k));
        let lower = LinearPp::sum(&self.ring, f.target.lower(), &image)?.simplify(&self.ring);
        let obj = self.object(f.target.upper().clone(), lower)?;
        let proj = self.morphism(&f.target, &obj, &self.diagonal(k))?;
        Ok((obj, proj))
    }

    pub fn is_mono(&self, f: &PpMorphism) -> Result<bool, PpCatError> {
        let (k, _) = self.kernel(f)?;
        self.is_zero(&k)
    }

    pub fn is_epi(&self, f: &PpMorphism) -> Result<bool, PpCatError> {
        let (c, _) = self.cokernel(f)?;
        self.is_zero(&c)
    }

    /// Is `θ/(x̄=0)` with `θ` free of existential quantifiers.
    pub fn is_representable(&self, x: &PpObject) -> Result<bool, PpCatError> {
        let n = x.arity();
        Ok(x.upper().simplify(&self.ring).bound() == 0 && pp_implies(&self.ring, x.lower(), &LinearPp::zero(&self.ring, n))?)
    }

    /// An epimorphism onto `x` from a representable object: `upper = ∃ȳ θ(x̄, ȳ)` is covered
    /// by `θ(x̄, ȳ)/(x̄ȳ = 0)` through the projection to `x̄`.
    pub fn representable_cover(&self, x: &PpObject) -> Result<PpMorphism, PpCatError> {
        if self.is_representable(x)? {
            return Ok(self.identity(x));
        }
        let n = x.arity();
        if self.is_zero(x)? {
            return Ok(self.zero_morphism(&self.zero_object(n), x));
        }
        let upper = x.upper().simplify(&self.ring);
        let w = upper.width();
        let theta = LinearPp::new(&self.ring, w, 0, upper.rows().to_vec())?;
        let source = self.representable(theta);
        let proj = self.diagonal(n);
        let cols: Vec<usize> = range(0, n).into_iter().chain(range(w, w + n)).collect();
        let rho = self.at(&proj, w + n, &cols);
        self.morphism(&source, x, &rho)
    }

    /// `X ⊕ Y` on the concatenated variables.
    pub fn direct_sum(&self, x: &PpObject, y: &PpObject) -> Result<PpObject, PpCatError> {
        let (n, k) = (x.arity(), y.arity());
        let (xs, ys) = (range(0, n), range(n, n + k));
        let upper = self.all(n + k, &[(x.upper(), &xs), (y.upper(), &ys)]);
        let lower = self.all(n + k, &[(x.lower(), &xs), (y.lower(), &ys)]);
        self.object(upper, lower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(ring: &FiniteRing, s: &str) -> LinearPp {
        LinearPp::parse(ring, s, Some(&["x".to_string()])).unwrap().0
    }

    fn graph(ring: &FiniteRing, s: &str) -> LinearPp {
        LinearPp::parse(ring, s, Some(&["x".to_string(), "x'".to_string()])).unwrap().0
    }

    fn setup() -> (PpCategory, PpObject) {
        let z4 = FiniteRing::zn(4);
        let c = PpCategory::new(z4.clone());
        let a = c.object(pp(&z4, "x = x"), pp(&z4, "x = 0")).unwrap();
        (c, a)
    }

    #[test]
    fn kernel_and_cokernel_of_doubling() {
        let (c, a) = setup();
        let z4 = c.ring().clone();
        let double = c.morphism(&a, &a, &graph(&z4, "x' = 2*x")).unwrap();
        let (k, incl) = c.kernel(&double).unwrap();
        assert!(crate::modpp::pp_equivalent(&z4, k.upper(), &pp(&z4, "2*x = 0")).unwrap());
        assert!(c.is_mono(&incl).unwrap());
        assert!(c.is_zero_morphism(&c.compose(&double, &incl).unwrap()).unwrap());
        let (q, proj) = c.cokernel(&double).unwrap();
        assert!(crate::modpp::pp_equivalent(&z4, q.lower(), &pp(&z4, "E y: x = 2*y")).unwrap());
        assert!(c.is_epi(&proj).unwrap());
        let id = c.identity(&a);
        assert!(c.is_zero(&c.kernel(&id).unwrap().0).unwrap());
        assert!(c.is_zero(&c.cokernel(&id).unwrap().0).unwrap());
        let zero = c.zero_morphism(&a, &a);
        let (k, incl) = c.kernel(&zero).unwrap();
        assert!(crate::modpp::pp_equivalent(&z4, k.upper(), a.upper()).unwrap());
        assert!(c.is_mono(&incl).unwrap() && c.is_epi(&incl).unwrap());
    }

    #[test]
    fn equality_modulo_lower() {
        let z4 = FiniteRing::zn(4);
        let c = PpCategory::new(z4.clone());
        let b = c.object(pp(&z4, "x = x"), pp(&z4, "2*x = 0")).unwrap();
        let one = c.morphism(&b, &b, &graph(&z4, "x' = x")).unwrap();
        let three = c.morphism(&b, &b, &graph(&z4, "x' = 3*x")).unwrap();
        assert!(c.mor_equal(&one, &three).unwrap());
        let a = c.object(pp(&z4, "x = x"), pp(&z4, "x = 0")).unwrap();
        let one_a = c.identity(&a);
        let three_a = c.morphism(&a, &a, &graph(&z4, "x' = 3*x")).unwrap();
        assert!(!c.mor_equal(&one_a, &three_a).unwrap());
        assert_eq!(c.mor_equal(&one, &one_a), Err(PpCatError::Endpoints));
    }

    #[test]
    fn invalid_graphs_are_rejected() {
        let (c, a) = setup();
        let z4 = c.ring().clone();
        // x ↦ {x' : 2x' = x} is not total
        assert_eq!(c.morphism(&a, &a, &graph(&z4, "2*x' = x")).unwrap_err(), PpCatError::NotMorphism(MorphismCondition::Total));
        // x ↦ {x' : 2x' = 2x} is not single valued
        assert_eq!(c.morphism(&a, &a, &graph(&z4, "2*x' = 2*x")).unwrap_err(), PpCatError::NotMorphism(MorphismCondition::Functional));
    }

    #[test]
    fn covers() {
        let (c, a) = setup();
        let z4 = c.ring().clone();
        assert_eq!(c.representable_cover(&a).unwrap(), c.identity(&a));
        let div = c.object(pp(&z4, "E y: x = 2*y"), pp(&z4, "x = 0")).unwrap();
        let cover = c.representable_cover(&div).unwrap();
        assert!(c.is_epi(&cover).unwrap());
        assert!(c.is_representable(cover.source()).unwrap());
        let z = c.zero_object(1);
        assert!(c.is_epi(&c.representable_cover(&z).unwrap()).unwrap());
    }
}

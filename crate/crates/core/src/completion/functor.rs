use serde::Serialize;
use thiserror::Error;

use crate::fincat::{FinCategory, MorId, ObjId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresheafError {
    #[error("expected {expected} carrier sizes, found {found}")]
    SizeCount { expected: usize, found: usize },
    #[error("expected {expected} action tables, found {found}")]
    ActionCount { expected: usize, found: usize },
    #[error("action of morphism {0} has the wrong shape")]
    ActionShape(MorId),
    #[error("identity at object {0} does not act trivially")]
    Identity(ObjId),
    #[error("action does not respect the composite {g}∘{f}")]
    Composition { g: MorId, f: MorId },
    #[error("functors live on different categories or have different variance")]
    Mismatch,
    #[error("component at object {0} has the wrong shape")]
    ComponentShape(ObjId),
    #[error("naturality fails at morphism {0}")]
    Naturality(MorId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// A functor from a finite category into finite sets `{0..n}`.
///
/// `actions[f]` is the function `F(f)` as a table; for a contravariant functor it runs
/// from `F(cod f)` to `F(dom f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunctor {
    base: FinCategory,
    variance: Variance,
    sizes: Vec<usize>,
    actions: Vec<Vec<usize>>,
}

/// Contravariant set-valued functors.
pub type Presheaf = SetFunctor;

/// Source and target of `F(f)` under the given variance.
#[inline]
pub(crate) fn ends(c: &FinCategory, variance: Variance, f: MorId) -> (ObjId, ObjId) {
    match variance {
        Variance::Covariant => (c.dom(f), c.cod(f)),
        Variance::Contravariant => (c.cod(f), c.dom(f)),
    }
}

impl SetFunctor {
    pub fn new(
        base: FinCategory,
        variance: Variance,
        sizes: Vec<usize>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        if sizes.len() != base.num_objects() {
            return Err(PresheafError::SizeCount { expected: base.num_objects(), found: sizes.len() });
        }
        if actions.len() != base.num_morphisms() {
            return Err(PresheafError::ActionCount { expected: base.num_morphisms(), found: actions.len() });
        }
        for f in base.morphisms() {
            let (s, t) = ends(&base, variance, f);
            if actions[f].len() != sizes[s] || actions[f].iter().any(|&y| y >= sizes[t]) {
                return Err(PresheafError::ActionShape(f));
            }
        }
        for x in base.objects() {
            if actions[base.id(x)].iter().enumerate().any(|(i, &j)| i != j) {
                return Err(PresheafError::Identity(x));
            }
        }
        let out = SetFunctor { base, variance, sizes, actions };
        if let Some((g, f)) = out.composition_failure() {
            return Err(PresheafError::Composition { g, f });
        }
        Ok(out)
    }

    pub fn presheaf(base: FinCategory, sizes: Vec<usize>, actions: Vec<Vec<usize>>) -> Result<Self, PresheafError> {
        Self::new(base, Variance::Contravariant, sizes, actions)
    }

    pub fn covariant(base: FinCategory, sizes: Vec<usize>, actions: Vec<Vec<usize>>) -> Result<Self, PresheafError> {
        Self::new(base, Variance::Covariant, sizes, actions)
    }

    pub(crate) fn new_unchecked(base: FinCategory, variance: Variance, sizes: Vec<usize>, actions: Vec<Vec<usize>>) -> Self {
        let out = SetFunctor { base, variance, sizes, actions };
        debug_assert!(out.composition_failure().is_none());
        out
    }

    fn composition_failure(&self) -> Option<(MorId, MorId)> {
        let c = &self.base;
        for g in c.morphisms() {
            for f in c.into_obj(c.dom(g)) {
                let gf = c.comp(g, f);
                let (first, second) = match self.variance {
                    Variance::Covariant => (f, g),
                    Variance::Contravariant => (g, f),
                };
                let ok = (0..self.actions[first].len())
                    .all(|x| self.actions[gf][x] == self.actions[second][self.actions[first][x]]);
                if !ok {
                    return Some((g, f));
                }
            }
        }
        None
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    #[inline]
    pub fn size(&self, x: ObjId) -> usize {
        self.sizes[x]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn action(&self, f: MorId) -> &[usize] {
        &self.actions[f]
    }

    #[inline]
    pub fn act(&self, f: MorId, x: usize) -> usize {
        self.actions[f][x]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.actions
    }

    /// Source and target objects of `F(f)`.
    pub fn ends(&self, f: MorId) -> (ObjId, ObjId) {
        ends(&self.base, self.variance, f)
    }

    pub fn is_subterminal(&self) -> bool {
        self.sizes.iter().all(|&n| n <= 1)
    }

    /// Is `F(f)` a bijection?
    pub fn is_bijective_on(&self, f: MorId) -> bool {
        let (s, t) = self.ends(f);
        self.sizes[s] == self.sizes[t] && self.is_surjective_on(f)
    }

    pub fn is_surjective_on(&self, f: MorId) -> bool {
        let (_, t) = self.ends(f);
        let mut hit = vec![false; self.sizes[t]];
        for &y in &self.actions[f] {
            hit[y] = true;
        }
        hit.into_iter().all(|b| b)
    }
}

/// The representable presheaf `hom(-, x)`; element `i` at `y` is `hom(y, x)[i]`.
pub fn yoneda(c: &FinCategory, x: ObjId) -> Presheaf {
    let sizes = c.objects().map(|y| c.hom(y, x).len()).collect();
    let actions = c
        .morphisms()
        .map(|f| c.hom(c.cod(f), x).iter().map(|&u| hom_pos(c, c.comp(u, f))).collect())
        .collect();
    SetFunctor::new_unchecked(c.clone(), Variance::Contravariant, sizes, actions)
}

/// The covariant representable `hom(x, -)`.
pub fn corepresentable(c: &FinCategory, x: ObjId) -> SetFunctor {
    let sizes = c.objects().map(|y| c.hom(x, y).len()).collect();
    let actions = c
        .morphisms()
        .map(|f| c.hom(x, c.dom(f)).iter().map(|&u| hom_pos(c, c.comp(f, u))).collect())
        .collect();
    SetFunctor::new_unchecked(c.clone(), Variance::Covariant, sizes, actions)
}

/// Position of `f` inside `hom(dom f, cod f)`.
#[inline]
pub(crate) fn hom_pos(c: &FinCategory, f: MorId) -> usize {
    c.hom(c.dom(f), c.cod(f)).iter().position(|&u| u == f).expect("morphism lies in its hom-set")
}

/// A natural transformation between set-valued functors on the same category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMorphism {
    source: SetFunctor,
    target: SetFunctor,
    components: Vec<Vec<usize>>,
}

impl PresheafMorphism {
    pub fn new(source: SetFunctor, target: SetFunctor, components: Vec<Vec<usize>>) -> Result<Self, PresheafError> {
        if source.base != target.base || source.variance != target.variance {
            return Err(PresheafError::Mismatch);
        }
        if components.len() != source.base.num_objects() {
            return Err(PresheafError::SizeCount { expected: source.base.num_objects(), found: components.len() });
        }
        for x in source.base.objects() {
            if components[x].len() != source.size(x) || components[x].iter().any(|&y| y >= target.size(x)) {
                return Err(PresheafError::ComponentShape(x));
            }
        }
        for f in source.base.morphisms() {
            let (s, t) = source.ends(f);
            for a in 0..source.size(s) {
                if components[t][source.act(f, a)] != target.act(f, components[s][a]) {
                    return Err(PresheafError::Naturality(f));
                }
            }
        }
        Ok(PresheafMorphism { source, target, components })
    }

    pub fn identity(f: &SetFunctor) -> Self {
        let components = f.sizes.iter().map(|&n| (0..n).collect()).collect();
        PresheafMorphism { source: f.clone(), target: f.clone(), components }
    }

    pub fn source(&self) -> &SetFunctor {
        &self.source
    }

    pub fn target(&self) -> &SetFunctor {
        &self.target
    }

    pub fn component(&self, x: ObjId) -> &[usize] {
        &self.components[x]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }
}

/// Epimorphisms of presheaves are the objectwise surjections.
pub fn is_epi_presheaf(alpha: &PresheafMorphism) -> bool {
    alpha.source.base.objects().all(|x| {
        let mut hit = vec![false; alpha.target.size(x)];
        for &y in &alpha.components[x] {
            hit[y] = true;
        }
        hit.into_iter().all(|b| b)
    })
}

/// Components of the map `y(x) -> F` picking out `a ∈ F(x)`: `u ↦ F(u)(a)`.
pub fn element_map(f: &Presheaf, x: ObjId, a: usize) -> Vec<Vec<usize>> {
    let c = f.base();
    c.objects().map(|y| c.hom(y, x).iter().map(|&u| f.act(u, a)).collect()).collect()
}

/// Calls `visit` on every functor with values of size at most `max_size` whose size
/// vector passes `sizes_ok`. Stops early when `visit` returns `false`.
pub fn for_each_set_functor(
    c: &FinCategory,
    variance: Variance,
    max_size: usize,
    sizes_ok: &dyn Fn(&[usize]) -> bool,
    visit: &mut dyn FnMut(&SetFunctor) -> bool,
) {
    let n = c.num_objects();
    let gens: Vec<MorId> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let mut position = vec![usize::MAX; c.num_morphisms()];
    for (p, &f) in gens.iter().enumerate() {
        position[f] = p;
    }
    // constraint (g, f, g∘f) is checked once its last non-identity member is assigned
    let mut checks: Vec<Vec<(MorId, MorId)>> = vec![Vec::new(); gens.len()];
    for g in c.morphisms() {
        for f in c.into_obj(c.dom(g)) {
            let last = [g, f, c.comp(g, f)].iter().filter(|&&m| !c.is_identity(m)).map(|&m| position[m]).max();
            if let Some(p) = last {
                checks[p].push((g, f));
            }
        }
    }
    let mut sizes = vec![0usize; n];
    loop {
        if sizes_ok(&sizes) {
            let mut actions: Vec<Vec<usize>> = vec![Vec::new(); c.num_morphisms()];
            for x in c.objects() {
                actions[c.id(x)] = (0..sizes[x]).collect();
            }
            let mut st = Search { c, variance, gens: &gens, checks: &checks, sizes: &sizes, actions, stop: false };
            st.go(0, visit);
            if st.stop {
                return;
            }
        }
        // odometer over size vectors
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            sizes[i] += 1;
            if sizes[i] <= max_size {
                break;
            }
            sizes[i] = 0;
            i += 1;
        }
    }
}

struct Search<'a> {
    c: &'a FinCategory,
    variance: Variance,
    gens: &'a [MorId],
    checks: &'a [Vec<(MorId, MorId)>],
    sizes: &'a [usize],
    actions: Vec<Vec<usize>>,
    stop: bool,
}

impl Search<'_> {
    fn go(&mut self, p: usize, visit: &mut dyn FnMut(&SetFunctor) -> bool) {
        if self.stop {
            return;
        }
        if p == self.gens.len() {
            let f = SetFunctor::new_unchecked(self.c.clone(), self.variance, self.sizes.to_vec(), self.actions.clone());
            if !visit(&f) {
                self.stop = true;
            }
            return;
        }
        let f = self.gens[p];
        let (s, t) = ends(self.c, self.variance, f);
        let (ns, nt) = (self.sizes[s], self.sizes[t]);
        if ns > 0 && nt == 0 {
            return;
        }
        let mut table = vec![0usize; ns];
        loop {
            self.actions[f].clone_from(&table);
            if self.consistent(p) {
                self.go(p + 1, visit);
                if self.stop {
                    return;
                }
            }
            let mut i = 0;
            loop {
                if i == ns {
                    return;
                }
                table[i] += 1;
                if table[i] < nt {
                    break;
                }
                table[i] = 0;
                i += 1;
            }
        }
    }

    fn consistent(&self, p: usize) -> bool {
        self.checks[p].iter().all(|&(g, f)| {
            let gf = self.c.comp(g, f);
            let (first, second) = match self.variance {
                Variance::Covariant => (f, g),
                Variance::Contravariant => (g, f),
            };
            let a = &self.actions;
            (0..a[first].len()).all(|x| a[gf][x] == a[second][a[first][x]])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> FinCategory {
        FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap()
    }

    #[test]
    fn yoneda_on_chain() {
        let c = chain2();
        assert_eq!(yoneda(&c, 1).sizes(), &[1, 1]);
        assert_eq!(yoneda(&c, 0).sizes(), &[1, 0]);
    }

    #[test]
    fn yoneda_is_fully_faithful_on_chain() {
        let c = chain2();
        for x in c.objects() {
            for y in c.objects() {
                let (fx, fy) = (yoneda(&c, x), yoneda(&c, y));
                // a transformation y(x) -> y(y) is fixed by the image of id_x
                let nats = (0..fy.size(x))
                    .filter(|&b| PresheafMorphism::new(fx.clone(), fy.clone(), element_map(&fy, x, b)).is_ok())
                    .count();
                assert_eq!(nats, c.hom(x, y).len());
            }
        }
    }

    #[test]
    fn epi_checks() {
        let c = chain2();
        let top = yoneda(&c, 1);
        assert!(is_epi_presheaf(&PresheafMorphism::identity(&top)));
        let bottom = yoneda(&c, 0);
        let inc = PresheafMorphism::new(bottom.clone(), top.clone(), vec![vec![0], vec![]]).unwrap();
        assert!(!is_epi_presheaf(&inc));
        // two points at each stage collapsed onto one
        let two = SetFunctor::presheaf(c.clone(), vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![0, 1]]).unwrap();
        let q = PresheafMorphism::new(two, top, vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(is_epi_presheaf(&q));
    }

    #[test]
    fn functoriality_is_enforced() {
        let c = FinCategory::preorder(&["0", "1", "2"], |a, b| a <= b).unwrap();
        // shift maps: F(0->1) and F(1->2) swap, F(0->2) is the identity: swap∘swap = id, fine
        let ok = |g: &[usize]| g.to_vec();
        let mut actions = vec![vec![]; c.num_morphisms()];
        for f in c.morphisms() {
            actions[f] = if c.is_identity(f) { vec![0, 1] } else if c.dom(f) == 0 && c.cod(f) == 2 { ok(&[0, 1]) } else { ok(&[1, 0]) };
        }
        assert!(SetFunctor::covariant(c.clone(), vec![2, 2, 2], actions.clone()).is_ok());
        let f02 = c.hom(0, 2)[0];
        actions[f02] = vec![1, 0];
        assert!(matches!(
            SetFunctor::covariant(c, vec![2, 2, 2], actions),
            Err(PresheafError::Composition { .. })
        ));
    }

    #[test]
    fn enumeration_counts_functors_on_chain() {
        // functors C2 -> {sets of size ≤ 2}: Σ_{a,b} b^a with 0^0 = 1
        let c = chain2();
        let mut count = 0;
        for_each_set_functor(&c, Variance::Covariant, 2, &|_| true, &mut |_| {
            count += 1;
            true
        });
        let expect: usize = (0..=2u32).flat_map(|a| (0..=2u32).map(move |b| b.pow(a) as usize)).sum();
        assert_eq!(count, expect);
    }
}

use serde::Serialize;
use thiserror::Error;

use super::{coequalizer, equalizer, is_limit_cone, product, pullback, terminal, Cone, Diagram};
use crate::fincat::{FinCategory, FinFunctor, MorId, ObjId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitsError {
    #[error("no product {0}×{0}")]
    NoProduct(ObjId),
    #[error("no pullback of morphisms {0} and {1}")]
    NoPullback(MorId, MorId),
    #[error("the {0} category is not regular")]
    NotRegular(&'static str),
}

/// Kernel pair `(R, p1, p2)` of `f`, i.e. the pullback of `f` along itself.
pub fn kernel_pair(c: &FinCategory, f: MorId) -> Option<(ObjId, MorId, MorId)> {
    pullback(c, f, f)
}

fn is_mono(c: &FinCategory, m: MorId) -> bool {
    let a = c.dom(m);
    c.objects().all(|z| {
        let hom = c.hom(z, a);
        hom.iter().enumerate().all(|(i, &u)| hom[i + 1..].iter().all(|&v| c.comp(m, u) != c.comp(m, v)))
    })
}

/// Is `f` the coequalizer of the pair `(u, v)`? Checked against every arrow out of `cod f`'s source.
fn coequalizes_universally(c: &FinCategory, f: MorId, u: MorId, v: MorId) -> bool {
    if c.comp(f, u) != c.comp(f, v) {
        return false;
    }
    let (b, y) = (c.dom(f), c.cod(f));
    c.out_of(b).all(|g| {
        if c.comp(g, u) != c.comp(g, v) {
            return true;
        }
        c.hom(y, c.cod(g)).iter().filter(|&&k| c.comp(k, f) == g).count() == 1
    })
}

/// `f` is the coequalizer of some parallel pair into its domain.
pub fn is_regular_epi(c: &FinCategory, f: MorId) -> bool {
    let b = c.dom(f);
    c.objects().any(|a| {
        let hom = c.hom(a, b);
        hom.iter().enumerate().any(|(i, &u)| hom[i..].iter().any(|&v| coequalizes_universally(c, f, u, v)))
    })
}

/// An internal equivalence relation with all its witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceRelation {
    pub object: ObjId,
    pub rel_object: ObjId,
    /// The mono `R -> X×X` representing the subobject.
    pub inclusion: MorId,
    pub p1: MorId,
    pub p2: MorId,
    pub r: MorId,
    pub s: MorId,
    pub t: MorId,
    /// `R ×_X R` with projections `q1, q2`, where `p2∘q1 = p1∘q2`.
    pub pullback: (ObjId, MorId, MorId),
}

/// All equivalence relations on `x`, one per subobject of `x×x`.
pub fn equivalence_relations(c: &FinCategory, x: ObjId) -> Result<Vec<EquivalenceRelation>, LimitsError> {
    let prod = product(c, x, x).ok_or(LimitsError::NoProduct(x))?;
    let (pi1, pi2) = (prod.legs[0], prod.legs[1]);
    let monos: Vec<MorId> = c.into_obj(prod.apex).filter(|&m| is_mono(c, m)).collect();
    let mut reps: Vec<MorId> = Vec::new();
    for &m in &monos {
        let same = reps.iter().any(|&m0| {
            c.hom(c.dom(m), c.dom(m0)).iter().any(|&i| c.is_iso(i) && c.comp(m0, i) == m)
        });
        if !same {
            reps.push(m);
        }
    }
    let idx = c.id(x);
    let mut out = Vec::new();
    for m in reps {
        let rel = c.dom(m);
        let (p1, p2) = (c.comp(pi1, m), c.comp(pi2, m));
        let Some(&r) = c.hom(x, rel).iter().find(|&&r| c.comp(p1, r) == idx && c.comp(p2, r) == idx)
        else {
            continue;
        };
        let Some(&s) = c.hom(rel, rel).iter().find(|&&s| c.comp(p1, s) == p2 && c.comp(p2, s) == p1)
        else {
            continue;
        };
        let (q, q1, q2) = pullback(c, p2, p1).ok_or(LimitsError::NoPullback(p2, p1))?;
        let (a, b) = (c.comp(p1, q1), c.comp(p2, q2));
        let Some(&t) = c.hom(q, rel).iter().find(|&&t| c.comp(p1, t) == a && c.comp(p2, t) == b)
        else {
            continue;
        };
        out.push(EquivalenceRelation { object: x, rel_object: rel, inclusion: m, p1, p2, r, s, t, pullback: (q, q1, q2) });
    }
    Ok(out)
}

/// First reason a category fails to be lex, regular or exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifyFailure {
    NoTerminal,
    NoProduct { a: ObjId, b: ObjId },
    NoEqualizer { f: MorId, g: MorId },
    NoKernelPairCoequalizer { f: MorId },
    UnstableRegularEpi { epi: MorId, along: MorId, pulled_back: MorId },
    NotEffective { object: ObjId, inclusion: MorId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_lex: bool,
    pub is_regular: bool,
    pub is_exact: bool,
    pub terminal: Option<ObjId>,
    /// Regular epimorphisms, listed when the category is lex.
    pub regular_epis: Vec<MorId>,
    /// Equivalence relations checked for effectiveness, listed when regular.
    pub equivalence_relations: Vec<EquivalenceRelation>,
    pub failure: Option<ClassifyFailure>,
}

fn lex_failure(c: &FinCategory) -> Option<ClassifyFailure> {
    if terminal(c).is_none() {
        return Some(ClassifyFailure::NoTerminal);
    }
    for a in c.objects() {
        for b in a..c.num_objects() {
            if product(c, a, b).is_none() {
                return Some(ClassifyFailure::NoProduct { a, b });
            }
        }
    }
    for f in c.morphisms() {
        for &g in c.hom(c.dom(f), c.cod(f)) {
            if g >= f && equalizer(c, f, g).is_none() {
                return Some(ClassifyFailure::NoEqualizer { f, g });
            }
        }
    }
    None
}

fn regular_failure(c: &FinCategory, epis: &[MorId]) -> Option<ClassifyFailure> {
    for f in c.morphisms() {
        let (_, p1, p2) = kernel_pair(c, f).expect("lex category has kernel pairs");
        if coequalizer(c, p1, p2).is_none() {
            return Some(ClassifyFailure::NoKernelPairCoequalizer { f });
        }
    }
    for &e in epis {
        for g in c.into_obj(c.cod(e)) {
            let (_, _, pulled_back) = pullback(c, e, g).expect("lex category has pullbacks");
            if !epis.contains(&pulled_back) {
                return Some(ClassifyFailure::UnstableRegularEpi { epi: e, along: g, pulled_back });
            }
        }
    }
    None
}

/// Is the relation `(p1, p2)` the kernel pair of some arrow out of its base object?
fn is_effective(c: &FinCategory, rel: &EquivalenceRelation) -> bool {
    c.out_of(rel.object).any(|f| {
        let (k, k1, k2) = kernel_pair(c, f).expect("lex category has kernel pairs");
        c.hom(rel.rel_object, k)
            .iter()
            .any(|&i| c.is_iso(i) && c.comp(k1, i) == rel.p1 && c.comp(k2, i) == rel.p2)
    })
}

/// Decides lex, regular and exact by exhaustive search.
pub fn classify(c: &FinCategory) -> Classification {
    let mut out = Classification {
        is_lex: false,
        is_regular: false,
        is_exact: false,
        terminal: terminal(c),
        regular_epis: Vec::new(),
        equivalence_relations: Vec::new(),
        failure: lex_failure(c),
    };
    if out.failure.is_some() {
        return out;
    }
    out.is_lex = true;
    out.regular_epis = c.morphisms().filter(|&f| is_regular_epi(c, f)).collect();
    out.failure = regular_failure(c, &out.regular_epis);
    if out.failure.is_some() {
        return out;
    }
    out.is_regular = true;
    for x in c.objects() {
        let rels = equivalence_relations(c, x).expect("lex category has the needed limits");
        if let Some(bad) = rels.iter().find(|r| !is_effective(c, r)) {
            out.failure = Some(ClassifyFailure::NotEffective { object: x, inclusion: bad.inclusion });
            out.equivalence_relations.extend(rels);
            return out;
        }
        out.equivalence_relations.extend(rels);
    }
    out.is_exact = true;
    out
}

/// Preserves the chosen terminal, product and equalizer witnesses, and regular epis.
pub fn is_regular_functor(f: &FinFunctor) -> Result<bool, LimitsError> {
    let (s, t) = (f.source(), f.target());
    if !classify(s).is_regular {
        return Err(LimitsError::NotRegular("source"));
    }
    if !classify(t).is_regular {
        return Err(LimitsError::NotRegular("target"));
    }
    Ok(preserves_lex_witnesses(f) && s.morphisms().all(|u| !is_regular_epi(s, u) || is_regular_epi(t, f.on_morphism(u))))
}

/// The lex half of [`is_regular_functor`], usable whenever the source is lex.
pub fn preserves_lex_witnesses(f: &FinFunctor) -> bool {
    let (s, t) = (f.source(), f.target());
    let Some(top) = terminal(s) else { return false };
    if !is_limit_cone(t, &Diagram::empty(), &Cone { apex: f.on_object(top), legs: vec![] }) {
        return false;
    }
    for a in s.objects() {
        for b in s.objects() {
            let Some(p) = product(s, a, b) else { return false };
            let image = Cone { apex: f.on_object(p.apex), legs: p.legs.iter().map(|&l| f.on_morphism(l)).collect() };
            let d = Diagram::discrete(t, &[f.on_object(a), f.on_object(b)]);
            if !is_limit_cone(t, &d, &image) {
                return false;
            }
        }
    }
    for u in s.morphisms() {
        for &v in s.hom(s.dom(u), s.cod(u)) {
            let Some((e, leg)) = equalizer(s, u, v) else { return false };
            let image = Cone {
                apex: f.on_object(e),
                legs: vec![f.on_morphism(leg), f.on_morphism(s.comp(u, leg))],
            };
            let d = Diagram::parallel_pair(t, f.on_morphism(u), f.on_morphism(v));
            if !is_limit_cone(t, &d, &image) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{classify_morphism, RawCategory, RawMorphism};

    /// Objects plus arrows `(name, dom, cod)`; identities are added, no non-trivial composites.
    fn graph(objects: &[&str], arrows: &[(&str, &str, &str)]) -> FinCategory {
        let mut raw = RawCategory { objects: objects.iter().map(|o| o.to_string()).collect(), ..Default::default() };
        for o in objects {
            raw.morphisms.push(RawMorphism { id: format!("id_{o}"), dom: o.to_string(), cod: o.to_string() });
            raw.identity.insert(o.to_string(), format!("id_{o}"));
        }
        for (n, d, c) in arrows {
            raw.morphisms.push(RawMorphism { id: n.to_string(), dom: d.to_string(), cod: c.to_string() });
        }
        raw.build().unwrap()
    }

    fn chain2() -> FinCategory {
        FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap()
    }

    fn b2() -> FinCategory {
        FinCategory::preorder(&["0", "a", "b", "1"], |x, y| x & y == x).unwrap()
    }

    #[test]
    fn kernel_pairs_in_posets_are_diagonal() {
        let c = b2();
        for f in c.morphisms() {
            let d = c.dom(f);
            assert_eq!(kernel_pair(&c, f), Some((d, c.id(d), c.id(d))));
        }
    }

    #[test]
    fn missing_kernel_pair() {
        // two parallel arrows into a common target with nothing above them
        let c = graph(&["x", "y", "z"], &[("f", "x", "z"), ("g", "y", "z")]);
        assert!(pullback(&c, 3, 4).is_none());
        assert!(kernel_pair(&c, 3).is_some());
    }

    #[test]
    fn regular_epis_in_chain() {
        let c = chain2();
        let up = c.hom(0, 1)[0];
        assert!(is_regular_epi(&c, c.id(0)));
        assert!(!is_regular_epi(&c, up));
        for f in c.morphisms() {
            if is_regular_epi(&c, f) {
                assert!(classify_morphism(&c, f).unwrap().epi);
            }
        }
    }

    #[test]
    fn lattice_relations_are_diagonals() {
        let c = b2();
        for x in c.objects() {
            let rels = equivalence_relations(&c, x).unwrap();
            assert_eq!(rels.len(), 1);
            assert_eq!(rels[0].rel_object, x);
        }
    }

    #[test]
    fn relations_on_terminal_and_missing_square() {
        let t = FinCategory::terminal();
        assert_eq!(equivalence_relations(&t, 0).unwrap().len(), 1);
        // b has no b×b: the cone (a, f, g) cannot be factored through anything
        let pair = graph(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")]);
        assert_eq!(equivalence_relations(&pair, 1), Err(LimitsError::NoProduct(1)));
    }

    #[test]
    fn classification_examples() {
        for c in [chain2(), b2(), FinCategory::terminal()] {
            let k = classify(&c);
            assert!(k.is_lex && k.is_regular && k.is_exact, "{k:?}");
        }
        let k = classify(&FinCategory::discrete(&["x", "y"]));
        assert!(!k.is_lex);
        assert_eq!(k.failure, Some(ClassifyFailure::NoTerminal));
    }

    #[test]
    fn regular_functor_examples() {
        let c = b2();
        assert_eq!(is_regular_functor(&FinFunctor::identity(&c)), Ok(true));
        let small = chain2();
        let img = [0usize, 3];
        let mor_map = small
            .morphisms()
            .map(|f| c.hom(img[small.dom(f)], img[small.cod(f)])[0])
            .collect();
        let inc = FinFunctor::new(small, c.clone(), img.to_vec(), mor_map).unwrap();
        assert_eq!(is_regular_functor(&inc), Ok(true));
        let constant = FinFunctor::new(c.clone(), c.clone(), vec![0; 4], vec![c.id(0); c.num_morphisms()]).unwrap();
        assert_eq!(is_regular_functor(&constant), Ok(false));
    }
}

use serde::Serialize;

use crate::fincat::{FinCategory, MorId, ObjId};

/// Lex / regular / exact verdicts read straight off the definitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LiteralVerdict {
    pub is_lex: bool,
    pub is_regular: bool,
    pub is_exact: bool,
}

fn unique_factor(c: &FinCategory, apex: ObjId, x: ObjId, holds: impl Fn(MorId) -> bool) -> bool {
    c.hom(x, apex).iter().filter(|&&u| holds(u)).count() == 1
}

fn is_terminal(c: &FinCategory, t: ObjId) -> bool {
    c.objects().all(|x| c.hom(x, t).len() == 1)
}

fn is_product(c: &FinCategory, a: ObjId, b: ObjId, p1: MorId, p2: MorId) -> bool {
    let p = c.dom(p1);
    c.objects().all(|x| {
        c.hom(x, a).iter().all(|&f| c.hom(x, b).iter().all(|&g| unique_factor(c, p, x, |u| c.comp(p1, u) == f && c.comp(p2, u) == g)))
    })
}

fn has_product(c: &FinCategory, a: ObjId, b: ObjId) -> bool {
    c.objects().any(|p| c.hom(p, a).iter().any(|&p1| c.hom(p, b).iter().any(|&p2| is_product(c, a, b, p1, p2))))
}

fn has_equalizer(c: &FinCategory, f: MorId, g: MorId) -> bool {
    let a = c.dom(f);
    c.into_obj(a).any(|m| {
        c.comp(f, m) == c.comp(g, m)
            && c.objects().all(|x| {
                c.hom(x, a)
                    .iter()
                    .filter(|&&h| c.comp(f, h) == c.comp(g, h))
                    .all(|&h| unique_factor(c, c.dom(m), x, |u| c.comp(m, u) == h))
            })
    })
}

fn is_pullback(c: &FinCategory, f: MorId, g: MorId, p: MorId, q: MorId) -> bool {
    if c.comp(f, p) != c.comp(g, q) {
        return false;
    }
    let (a, b, apex) = (c.dom(f), c.dom(g), c.dom(p));
    c.objects().all(|x| {
        c.hom(x, a).iter().all(|&s| {
            c.hom(x, b)
                .iter()
                .filter(|&&t| c.comp(f, s) == c.comp(g, t))
                .all(|&t| unique_factor(c, apex, x, |u| c.comp(p, u) == s && c.comp(q, u) == t))
        })
    })
}

/// Every pullback cone `(p, q)` of `f: A → C ← B: g`.
fn pullbacks(c: &FinCategory, f: MorId, g: MorId) -> Vec<(MorId, MorId)> {
    let (a, b) = (c.dom(f), c.dom(g));
    let mut out = Vec::new();
    for apex in c.objects() {
        for &p in c.hom(apex, a) {
            for &q in c.hom(apex, b) {
                if is_pullback(c, f, g, p, q) {
                    out.push((p, q));
                }
            }
        }
    }
    out
}

fn is_coequalizer(c: &FinCategory, u: MorId, v: MorId, q: MorId) -> bool {
    if c.comp(q, u) != c.comp(q, v) {
        return false;
    }
    let b = c.cod(u);
    c.objects().all(|y| {
        c.hom(b, y)
            .iter()
            .filter(|&&h| c.comp(h, u) == c.comp(h, v))
            .all(|&h| c.hom(c.cod(q), y).iter().filter(|&&w| c.comp(w, q) == h).count() == 1)
    })
}

/// Coequalizer of some parallel pair.
pub fn is_regular_epi_literal(c: &FinCategory, e: MorId) -> bool {
    let b = c.dom(e);
    c.objects().any(|a| {
        let pairs = c.hom(a, b);
        pairs.iter().any(|&u| pairs.iter().any(|&v| is_coequalizer(c, u, v, e)))
    })
}

fn has_coequalizer(c: &FinCategory, u: MorId, v: MorId) -> bool {
    c.out_of(c.cod(u)).any(|q| is_coequalizer(c, u, v, q))
}

fn jointly_monic(c: &FinCategory, r1: MorId, r2: MorId) -> bool {
    let r = c.dom(r1);
    c.objects().all(|t| {
        let hs = c.hom(t, r);
        hs.iter().all(|&u| hs.iter().all(|&v| u == v || c.comp(r1, u) != c.comp(r1, v) || c.comp(r2, u) != c.comp(r2, v)))
    })
}

fn is_equivalence_relation(c: &FinCategory, r1: MorId, r2: MorId) -> bool {
    let (r, x) = (c.dom(r1), c.cod(r1));
    if !jointly_monic(c, r1, r2) {
        return false;
    }
    let idx = c.id(x);
    let reflexive = c.hom(x, r).iter().any(|&d| c.comp(r1, d) == idx && c.comp(r2, d) == idx);
    let symmetric = c.hom(r, r).iter().any(|&s| c.comp(r1, s) == r2 && c.comp(r2, s) == r1);
    // R ×_X R over r2 on the left and r1 on the right
    let transitive = pullbacks(c, r2, r1).first().is_some_and(|&(p, q)| {
        let apex = c.dom(p);
        c.hom(apex, r).iter().any(|&t| c.comp(r1, t) == c.comp(r1, p) && c.comp(r2, t) == c.comp(r2, q))
    });
    reflexive && symmetric && transitive
}

fn is_effective(c: &FinCategory, r1: MorId, r2: MorId) -> bool {
    c.out_of(c.cod(r1)).any(|f| is_pullback(c, f, f, r1, r2))
}

/// Finite limits as terminal object, binary products and equalizers, each checked by its
/// universal property; regularity and exactness on top of that.
pub fn literal_classify(c: &FinCategory) -> LiteralVerdict {
    let lex = c.objects().any(|t| is_terminal(c, t))
        && c.objects().all(|a| c.objects().all(|b| has_product(c, a, b)))
        && c.morphisms().all(|f| c.hom(c.dom(f), c.cod(f)).iter().all(|&g| has_equalizer(c, f, g)));
    if !lex {
        return LiteralVerdict { is_lex: false, is_regular: false, is_exact: false };
    }
    let coeq_kernel_pairs = c.morphisms().all(|f| pullbacks(c, f, f).iter().all(|&(p, q)| has_coequalizer(c, p, q)));
    let epis: Vec<MorId> = c.morphisms().filter(|&e| is_regular_epi_literal(c, e)).collect();
    let stable = epis.iter().all(|&e| {
        c.into_obj(c.cod(e)).all(|g| pullbacks(c, e, g).iter().all(|&(_, q)| epis.contains(&q)))
    });
    let regular = coeq_kernel_pairs && stable;
    let exact = regular
        && c.morphisms().all(|r1| {
            c.hom(c.dom(r1), c.cod(r1)).iter().all(|&r2| !is_equivalence_relation(c, r1, r2) || is_effective(c, r1, r2))
        });
    LiteralVerdict { is_lex: true, is_regular: regular, is_exact: exact }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattices_are_exact_and_discrete_pairs_are_not_lex() {
        let b2 = FinCategory::preorder(&["0", "a", "b", "1"], |x, y| x & y == x).unwrap();
        assert_eq!(literal_classify(&b2), LiteralVerdict { is_lex: true, is_regular: true, is_exact: true });
        let d = FinCategory::discrete(&["x", "y"]);
        assert!(!literal_classify(&d).is_lex);
    }
}

//! Brute-force finite limits and colimits, and the lex / regular / exact classification.
//!
//! Limits are found by enumerating every cone over a diagram and keeping the first
//! terminal one in `(apex, legs)` order, so results are deterministic. Colimits run
//! the same search in the opposite orientation without materialising `c^op`.

mod exactness;
mod view;

use std::sync::OnceLock;

use crate::fincat::{FinCategory, FinFunctor, FunctorError, MorId, ObjId};
use view::{Fwd, Op, View};

pub use exactness::{
    classify, equivalence_relations, is_regular_epi, is_regular_functor, kernel_pair,
    Classification, ClassifyFailure, EquivalenceRelation, LimitsError,
};

/// A finite diagram in an ambient category: a shape plus object and morphism images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    shape: FinCategory,
    objects: Vec<ObjId>,
    morphisms: Vec<MorId>,
}

impl Diagram {
    /// Validates the images as a functor `shape -> ambient`.
    pub fn new(
        ambient: &FinCategory,
        shape: FinCategory,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Result<Self, FunctorError> {
        let f = FinFunctor::new(shape, ambient.clone(), objects, morphisms)?;
        Ok(Diagram {
            shape: f.source().clone(),
            objects: f.object_map().to_vec(),
            morphisms: f.morphism_map().to_vec(),
        })
    }

    pub fn from_functor(f: &FinFunctor) -> Self {
        Diagram {
            shape: f.source().clone(),
            objects: f.object_map().to_vec(),
            morphisms: f.morphism_map().to_vec(),
        }
    }

    pub fn empty() -> Self {
        Diagram { shape: shapes().empty.clone(), objects: vec![], morphisms: vec![] }
    }

    pub fn shape(&self) -> &FinCategory {
        &self.shape
    }

    pub fn object(&self, i: ObjId) -> ObjId {
        self.objects[i]
    }

    pub fn morphism(&self, u: MorId) -> MorId {
        self.morphisms[u]
    }

    /// Same images over the opposite shape; a diagram in `c^op`.
    pub fn opposite(&self) -> Diagram {
        Diagram {
            shape: crate::fincat::opposite(&self.shape),
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
        }
    }

}

/// Diagram builders that need the ambient category for identity images.
impl Diagram {
    pub fn discrete(c: &FinCategory, objs: &[ObjId]) -> Self {
        let shape = match objs.len() {
            0 => shapes().empty.clone(),
            1 => shapes().one.clone(),
            2 => shapes().two.clone(),
            n => FinCategory::discrete(&(0..n).map(|i| i.to_string()).collect::<Vec<_>>()),
        };
        let morphisms = objs.iter().map(|&x| c.id(x)).collect();
        Diagram { shape, objects: objs.to_vec(), morphisms }
    }

    /// `f, g: A ⇉ B`. Shape objects: 0 = A, 1 = B; shape arrows 2 = f, 3 = g.
    pub fn parallel_pair(c: &FinCategory, f: MorId, g: MorId) -> Self {
        assert_eq!((c.dom(f), c.cod(f)), (c.dom(g), c.cod(g)), "not a parallel pair");
        let (a, b) = (c.dom(f), c.cod(f));
        Diagram {
            shape: shapes().parallel.clone(),
            objects: vec![a, b],
            morphisms: vec![c.id(a), c.id(b), f, g],
        }
    }

    /// `f: A -> C <- B: g`. Shape objects: 0 = A, 1 = B, 2 = C.
    pub fn cospan(c: &FinCategory, f: MorId, g: MorId) -> Self {
        assert_eq!(c.cod(f), c.cod(g), "not a cospan");
        let (a, b, m) = (c.dom(f), c.dom(g), c.cod(f));
        Diagram {
            shape: shapes().cospan.clone(),
            objects: vec![a, b, m],
            morphisms: vec![c.id(a), c.id(b), c.id(m), f, g],
        }
    }

    /// `B <- A -> C` given as `f: A -> B`, `g: A -> C`; the opposite of a cospan shape.
    /// Shape objects: 0 = B, 1 = C, 2 = A.
    pub fn span(c: &FinCategory, f: MorId, g: MorId) -> Self {
        assert_eq!(c.dom(f), c.dom(g), "not a span");
        let (b, cc, a) = (c.cod(f), c.cod(g), c.dom(f));
        Diagram {
            shape: shapes().span.clone(),
            objects: vec![b, cc, a],
            morphisms: vec![c.id(b), c.id(cc), c.id(a), f, g],
        }
    }
}

struct Shapes {
    empty: FinCategory,
    one: FinCategory,
    two: FinCategory,
    parallel: FinCategory,
    cospan: FinCategory,
    span: FinCategory,
}

fn shapes() -> &'static Shapes {
    static SHAPES: OnceLock<Shapes> = OnceLock::new();
    SHAPES.get_or_init(|| {
        use crate::fincat::{CategoryTables, Morphism};
        let named = |name: &str, dom, cod| Morphism { name: name.to_string(), dom, cod };
        let parallel = FinCategory::new(CategoryTables {
            objects: vec!["s".into(), "t".into()],
            morphisms: vec![named("id_s", 0, 0), named("id_t", 1, 1), named("a", 0, 1), named("b", 0, 1)],
            identity: vec![0, 1],
            comp: vec![(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2), (3, 0, 3), (1, 3, 3)],
        })
        .expect("parallel-pair shape");
        let cospan = FinCategory::new(CategoryTables {
            objects: vec!["l".into(), "r".into(), "m".into()],
            morphisms: vec![
                named("id_l", 0, 0),
                named("id_r", 1, 1),
                named("id_m", 2, 2),
                named("f", 0, 2),
                named("g", 1, 2),
            ],
            identity: vec![0, 1, 2],
            comp: vec![(0, 0, 0), (1, 1, 1), (2, 2, 2), (3, 0, 3), (2, 3, 3), (4, 1, 4), (2, 4, 4)],
        })
        .expect("cospan shape");
        Shapes {
            empty: FinCategory::empty(),
            one: FinCategory::discrete(&["0"]),
            two: FinCategory::discrete(&["0", "1"]),
            parallel,
            span: crate::fincat::opposite(&cospan),
            cospan,
        }
    })
}

/// A cone: apex plus one leg per shape object. For a cocone the legs point into the apex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

pub type Cocone = Cone;

fn cones_at<V: View>(v: &V, d: &Diagram, apex: ObjId) -> Vec<Vec<MorId>> {
    let k = d.shape.num_objects();
    // shape arrows whose constraint becomes checkable once leg `max(i, j)` is placed
    let mut checks: Vec<Vec<(ObjId, ObjId, MorId)>> = vec![Vec::new(); k];
    for u in d.shape.morphisms() {
        if d.shape.is_identity(u) {
            continue;
        }
        let (i, j) = (d.shape.dom(u), d.shape.cod(u));
        checks[i.max(j)].push((i, j, d.morphisms[u]));
    }
    let mut out = Vec::new();
    let mut legs = Vec::with_capacity(k);
    fn go<V: View>(
        v: &V,
        d: &Diagram,
        apex: ObjId,
        checks: &[Vec<(ObjId, ObjId, MorId)>],
        legs: &mut Vec<MorId>,
        out: &mut Vec<Vec<MorId>>,
    ) {
        let i = legs.len();
        if i == d.objects.len() {
            out.push(legs.clone());
            return;
        }
        for &leg in v.hom(apex, d.objects[i]) {
            legs.push(leg);
            let ok = checks[i].iter().all(|&(a, b, du)| v.comp(du, legs[a]) == legs[b]);
            if ok {
                go(v, d, apex, checks, legs, out);
            }
            legs.pop();
        }
    }
    go(v, d, apex, &checks, &mut legs, &mut out);
    out
}

fn all_cones<V: View>(v: &V, d: &Diagram) -> Vec<Cone> {
    (0..v.num_objects())
        .flat_map(|apex| cones_at(v, d, apex).into_iter().map(move |legs| Cone { apex, legs }))
        .collect()
}

fn factorizations<V: View>(v: &V, from: &Cone, to: &Cone) -> usize {
    v.hom(from.apex, to.apex)
        .iter()
        .filter(|&&u| to.legs.iter().zip(&from.legs).all(|(&l, &m)| v.comp(l, u) == m))
        .count()
}

fn is_cone<V: View>(v: &V, d: &Diagram, cone: &Cone) -> bool {
    cone.legs.len() == d.objects.len()
        && cone.legs.iter().enumerate().all(|(i, &l)| {
            l < v.num_morphisms() && v.dom(l) == cone.apex && v.cod(l) == d.objects[i]
        })
        && d.shape.morphisms().all(|u| {
            let (i, j) = (d.shape.dom(u), d.shape.cod(u));
            v.comp(d.morphisms[u], cone.legs[i]) == cone.legs[j]
        })
}

fn is_limit_in<V: View>(v: &V, d: &Diagram, cone: &Cone) -> bool {
    is_cone(v, d, cone) && all_cones(v, d).iter().all(|other| factorizations(v, other, cone) == 1)
}

fn limit_in<V: View>(v: &V, d: &Diagram) -> Option<Cone> {
    let cones = all_cones(v, d);
    // cones are generated in (apex, legs) order already
    let found = cones
        .iter()
        .find(|cand| cones.iter().all(|other| factorizations(v, other, cand) == 1))
        .cloned();
    #[cfg(debug_assertions)]
    if let Some(cone) = &found {
        debug_assert!(is_limit_in(v, d, cone), "limit search returned a non-terminal cone");
    }
    found
}

/// Terminal cone over `d`, or `None` when the limit does not exist.
pub fn limit(c: &FinCategory, d: &Diagram) -> Option<Cone> {
    limit_in(&Fwd(c), d)
}

/// Initial cocone under `d`, or `None` when the colimit does not exist.
pub fn colimit(c: &FinCategory, d: &Diagram) -> Option<Cocone> {
    limit_in(&Op(c), &d.opposite())
}

/// Does `cone` satisfy the universal property of a limit of `d`?
pub fn is_limit_cone(c: &FinCategory, d: &Diagram, cone: &Cone) -> bool {
    is_limit_in(&Fwd(c), d, cone)
}

pub fn is_colimit_cocone(c: &FinCategory, d: &Diagram, cocone: &Cocone) -> bool {
    is_limit_in(&Op(c), &d.opposite(), cocone)
}

/// Every cone over `d`, in `(apex, legs)` order.
pub fn cones(c: &FinCategory, d: &Diagram) -> Vec<Cone> {
    all_cones(&Fwd(c), d)
}

pub fn terminal(c: &FinCategory) -> Option<ObjId> {
    limit(c, &Diagram::empty()).map(|cone| cone.apex)
}

pub fn initial(c: &FinCategory) -> Option<ObjId> {
    colimit(c, &Diagram::empty()).map(|cone| cone.apex)
}

/// `a × b` with legs `[π1, π2]`.
pub fn product(c: &FinCategory, a: ObjId, b: ObjId) -> Option<Cone> {
    limit(c, &Diagram::discrete(c, &[a, b]))
}

/// Equalizer of `f, g`, returned as the apex and the arrow into `dom f`.
pub fn equalizer(c: &FinCategory, f: MorId, g: MorId) -> Option<(ObjId, MorId)> {
    limit(c, &Diagram::parallel_pair(c, f, g)).map(|cone| (cone.apex, cone.legs[0]))
}

/// Coequalizer of `f, g`, returned as the apex and the arrow out of `cod f`.
pub fn coequalizer(c: &FinCategory, f: MorId, g: MorId) -> Option<(ObjId, MorId)> {
    colimit(c, &Diagram::parallel_pair(c, f, g)).map(|cone| (cone.apex, cone.legs[1]))
}

/// Pullback of `f: A -> C <- B: g` as `(P, p_A, p_B)`.
pub fn pullback(c: &FinCategory, f: MorId, g: MorId) -> Option<(ObjId, MorId, MorId)> {
    limit(c, &Diagram::cospan(c, f, g)).map(|cone| (cone.apex, cone.legs[0], cone.legs[1]))
}

/// Pushout of `f: A -> B`, `g: A -> C` as `(P, i_B, i_C)`, where `i_C` is the
/// pushout of `f` along `g`.
pub fn pushout(c: &FinCategory, f: MorId, g: MorId) -> Option<(ObjId, MorId, MorId)> {
    colimit(c, &Diagram::span(c, f, g)).map(|cone| (cone.apex, cone.legs[0], cone.legs[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::opposite;

    pub(crate) fn chain2() -> FinCategory {
        FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap()
    }

    pub(crate) fn b2() -> FinCategory {
        FinCategory::preorder(&["0", "a", "b", "1"], |x, y| x & y == x).unwrap()
    }

    #[test]
    fn empty_limit_is_top() {
        assert_eq!(terminal(&chain2()), Some(1));
        assert_eq!(terminal(&b2()), Some(3));
        assert_eq!(initial(&chain2()), Some(0));
    }

    #[test]
    fn product_in_boolean_lattice_is_meet() {
        let c = b2();
        let p = product(&c, 1, 2).unwrap();
        assert_eq!(p.apex, 0);
        assert!(is_limit_cone(&c, &Diagram::discrete(&c, &[1, 2]), &p));
    }

    #[test]
    fn no_product_in_discrete_category() {
        let d = FinCategory::discrete(&["x", "y"]);
        assert!(product(&d, 0, 1).is_none());
        assert!(terminal(&d).is_none());
    }

    #[test]
    fn coequalizer_of_identity_pair() {
        let c = b2();
        let (apex, leg) = coequalizer(&c, c.id(1), c.id(1)).unwrap();
        assert_eq!(apex, 1);
        assert_eq!(leg, c.id(1));
    }

    #[test]
    fn join_as_pushout_over_meet() {
        let c = b2();
        let (p, _, _) = pushout(&c, c.hom(0, 1)[0], c.hom(0, 2)[0]).unwrap();
        assert_eq!(p, 3);
    }

    #[test]
    fn colimit_agrees_with_limit_in_opposite() {
        let c = b2();
        let op = opposite(&c);
        for a in c.objects() {
            for b in c.objects() {
                let d = Diagram::discrete(&c, &[a, b]);
                let direct = colimit(&c, &d);
                let dual = limit(&op, &Diagram::discrete(&op, &[a, b]));
                assert_eq!(direct, dual);
            }
        }
    }
}

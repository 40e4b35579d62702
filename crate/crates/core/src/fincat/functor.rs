use thiserror::Error;

use super::{FinCategory, MorId, ObjId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object map has length {found}, expected {expected}")]
    ObjectMapLength { expected: usize, found: usize },
    #[error("morphism map has length {found}, expected {expected}")]
    MorphismMapLength { expected: usize, found: usize },
    #[error("image out of range")]
    OutOfRange,
    #[error("morphism {0} is sent to an arrow with the wrong domain or codomain")]
    Typing(MorId),
    #[error("identity of object {0} is not preserved")]
    Identity(ObjId),
    #[error("composite {g}∘{f} is not preserved")]
    Composition { g: MorId, f: MorId },
    #[error("functors do not share source and target")]
    Mismatch,
    #[error("component count {found}, expected {expected}")]
    ComponentCount { expected: usize, found: usize },
    #[error("component at {0} has the wrong type")]
    ComponentTyping(ObjId),
    #[error("naturality fails at morphism {0}")]
    Naturality(MorId),
}

/// A functor between finite categories, checked exhaustively at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    source: FinCategory,
    target: FinCategory,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl FinFunctor {
    pub fn new(
        source: FinCategory,
        target: FinCategory,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Self, FunctorError> {
        if obj_map.len() != source.num_objects() {
            return Err(FunctorError::ObjectMapLength {
                expected: source.num_objects(),
                found: obj_map.len(),
            });
        }
        if mor_map.len() != source.num_morphisms() {
            return Err(FunctorError::MorphismMapLength {
                expected: source.num_morphisms(),
                found: mor_map.len(),
            });
        }
        if obj_map.iter().any(|&x| x >= target.num_objects())
            || mor_map.iter().any(|&f| f >= target.num_morphisms())
        {
            return Err(FunctorError::OutOfRange);
        }
        for f in source.morphisms() {
            let img = mor_map[f];
            if target.dom(img) != obj_map[source.dom(f)] || target.cod(img) != obj_map[source.cod(f)] {
                return Err(FunctorError::Typing(f));
            }
        }
        for x in source.objects() {
            if mor_map[source.id(x)] != target.id(obj_map[x]) {
                return Err(FunctorError::Identity(x));
            }
        }
        for g in source.morphisms() {
            for f in source.morphisms() {
                if let Some(gf) = source.compose(g, f) {
                    if mor_map[gf] != target.comp(mor_map[g], mor_map[f]) {
                        return Err(FunctorError::Composition { g, f });
                    }
                }
            }
        }
        Ok(FinFunctor { source, target, obj_map, mor_map })
    }

    pub fn identity(c: &FinCategory) -> Self {
        FinFunctor {
            source: c.clone(),
            target: c.clone(),
            obj_map: c.objects().collect(),
            mor_map: c.morphisms().collect(),
        }
    }

    pub fn source(&self) -> &FinCategory {
        &self.source
    }

    pub fn target(&self) -> &FinCategory {
        &self.target
    }

    #[inline]
    pub fn on_object(&self, x: ObjId) -> ObjId {
        self.obj_map[x]
    }

    #[inline]
    pub fn on_morphism(&self, f: MorId) -> MorId {
        self.mor_map[f]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.mor_map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor, FunctorError> {
        if self.target != other.source {
            return Err(FunctorError::Mismatch);
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&x| other.obj_map[x]).collect(),
            mor_map: self.mor_map.iter().map(|&f| other.mor_map[f]).collect(),
        })
    }
}

/// Fully faithful and essentially surjective, checked hom-set by hom-set.
pub fn is_equivalence(f: &FinFunctor) -> bool {
    let (s, t) = (f.source(), f.target());
    for a in s.objects() {
        for b in s.objects() {
            let src = s.hom(a, b);
            let tgt = t.hom(f.on_object(a), f.on_object(b));
            if src.len() != tgt.len() {
                return false;
            }
            let mut seen = vec![false; t.num_morphisms()];
            for &u in src {
                let img = f.on_morphism(u);
                if seen[img] {
                    return false;
                }
                seen[img] = true;
            }
        }
    }
    t.objects()
        .all(|y| s.objects().any(|x| t.iso_between(f.on_object(x), y).is_some()))
}

/// A natural transformation between parallel functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransform {
    source: FinFunctor,
    target: FinFunctor,
    components: Vec<MorId>,
}

impl NatTransform {
    pub fn new(
        source: FinFunctor,
        target: FinFunctor,
        components: Vec<MorId>,
    ) -> Result<Self, FunctorError> {
        if source.source() != target.source() || source.target() != target.target() {
            return Err(FunctorError::Mismatch);
        }
        let (c, d) = (source.source(), source.target());
        if components.len() != c.num_objects() {
            return Err(FunctorError::ComponentCount {
                expected: c.num_objects(),
                found: components.len(),
            });
        }
        for x in c.objects() {
            let a = components[x];
            if a >= d.num_morphisms()
                || d.dom(a) != source.on_object(x)
                || d.cod(a) != target.on_object(x)
            {
                return Err(FunctorError::ComponentTyping(x));
            }
        }
        for f in c.morphisms() {
            let (x, y) = (c.dom(f), c.cod(f));
            if d.comp(components[y], source.on_morphism(f)) != d.comp(target.on_morphism(f), components[x]) {
                return Err(FunctorError::Naturality(f));
            }
        }
        Ok(NatTransform { source, target, components })
    }

    pub fn component(&self, x: ObjId) -> MorId {
        self.components[x]
    }

    pub fn source(&self) -> &FinFunctor {
        &self.source
    }

    pub fn target(&self) -> &FinFunctor {
        &self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_equivalence() {
        let c = FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap();
        assert!(is_equivalence(&FinFunctor::identity(&c)));
    }

    #[test]
    fn constant_to_terminal_is_not_faithful_enough() {
        let c = FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap();
        let t = FinCategory::terminal();
        let f = FinFunctor::new(c, t, vec![0, 0], vec![0, 0, 0]).unwrap();
        assert!(!is_equivalence(&f));
    }

    #[test]
    fn skeleton_inclusion_is_equivalence() {
        // x ≅ x' both below y; the skeleton {x, y} includes as an equivalence.
        let big = FinCategory::preorder(&["x", "x'", "y"], |a, b| a == b || b == 2 || (a < 2 && b < 2))
            .unwrap();
        let skel = FinCategory::preorder(&["x", "y"], |a, b| a <= b).unwrap();
        let arrow = |c: &FinCategory, a: usize, b: usize| c.hom(a, b)[0];
        let mor_map = skel
            .morphisms()
            .map(|f| {
                let (a, b) = (skel.dom(f), skel.cod(f));
                let img = |o: usize| if o == 0 { 0 } else { 2 };
                arrow(&big, img(a), img(b))
            })
            .collect();
        let inc = FinFunctor::new(skel, big, vec![0, 2], mor_map).unwrap();
        assert!(is_equivalence(&inc));
    }

    #[test]
    fn naturality_is_checked() {
        let c = FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap();
        let id = FinFunctor::identity(&c);
        let ids: Vec<_> = c.objects().map(|x| c.id(x)).collect();
        assert!(NatTransform::new(id.clone(), id.clone(), ids).is_ok());
        let constant_bottom = FinFunctor::new(c.clone(), c.clone(), vec![0, 0], vec![0, 0, 0]).unwrap();
        // components 0 -> 0 and 0 -> 1 form the unique transformation const_0 ⇒ id
        let comps = vec![c.id(0), c.hom(0, 1)[0]];
        assert!(NatTransform::new(constant_bottom.clone(), id.clone(), comps).is_ok());
        assert!(NatTransform::new(id, constant_bottom, vec![0, 0]).is_err());
    }
}

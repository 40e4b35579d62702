use crate::fincat::{FinCategory, MorId, ObjId};

/// A category read either forwards or backwards; ids are shared between both readings.
pub(crate) trait View {
    fn num_objects(&self) -> usize;
    fn num_morphisms(&self) -> usize;
    fn dom(&self, f: MorId) -> ObjId;
    fn cod(&self, f: MorId) -> ObjId;
    fn hom(&self, a: ObjId, b: ObjId) -> &[MorId];
    /// `g ∘ f` in this reading; callers guarantee composability.
    fn comp(&self, g: MorId, f: MorId) -> MorId;
}

pub(crate) struct Fwd<'a>(pub &'a FinCategory);
pub(crate) struct Op<'a>(pub &'a FinCategory);

impl View for Fwd<'_> {
    fn num_objects(&self) -> usize {
        self.0.num_objects()
    }
    fn num_morphisms(&self) -> usize {
        self.0.num_morphisms()
    }
    fn dom(&self, f: MorId) -> ObjId {
        self.0.dom(f)
    }
    fn cod(&self, f: MorId) -> ObjId {
        self.0.cod(f)
    }
    fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.0.hom(a, b)
    }
    fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.0.comp(g, f)
    }
}

impl View for Op<'_> {
    fn num_objects(&self) -> usize {
        self.0.num_objects()
    }
    fn num_morphisms(&self) -> usize {
        self.0.num_morphisms()
    }
    fn dom(&self, f: MorId) -> ObjId {
        self.0.cod(f)
    }
    fn cod(&self, f: MorId) -> ObjId {
        self.0.dom(f)
    }
    fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        self.0.hom(b, a)
    }
    fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.0.comp(f, g)
    }
}

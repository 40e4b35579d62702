use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{MorId, ObjId};

/// A morphism record: display name plus domain and codomain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// Unvalidated category data with integer ids.
///
/// `comp` holds triples `(g, f, g∘f)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryTables {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identity: Vec<MorId>,
    pub comp: Vec<(MorId, MorId, MorId)>,
}

/// A single failed category axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DanglingObject { morphism: MorId },
    IdentityCount { expected: usize, found: usize },
    IdentityOutOfRange { object: ObjId },
    IdentityNotEndo { object: ObjId, morphism: MorId },
    CompOutOfRange { g: MorId, f: MorId },
    CompDomain { g: MorId, f: MorId },
    CompDuplicate { g: MorId, f: MorId },
    CompMissing { g: MorId, f: MorId },
    CompWrongType { g: MorId, f: MorId, gf: MorId },
    LeftUnit { f: MorId },
    RightUnit { f: MorId },
    Associativity { h: MorId, g: MorId, f: MorId },
}

impl Violation {
    /// Short axiom family name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::DanglingObject { .. } => "dangling object",
            Violation::IdentityCount { .. }
            | Violation::IdentityOutOfRange { .. }
            | Violation::IdentityNotEndo { .. } => "identity",
            Violation::CompOutOfRange { .. } | Violation::CompDomain { .. } => "comp domain",
            Violation::CompDuplicate { .. } => "comp duplicate",
            Violation::CompMissing { .. } => "comp totality",
            Violation::CompWrongType { .. } => "comp typing",
            Violation::LeftUnit { .. } | Violation::RightUnit { .. } => "unit law",
            Violation::Associativity { .. } => "associativity",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingObject { morphism } => {
                write!(f, "morphism {morphism} refers to a missing object")
            }
            Violation::IdentityCount { expected, found } => {
                write!(f, "expected {expected} identities, found {found}")
            }
            Violation::IdentityOutOfRange { object } => {
                write!(f, "identity of object {object} is not a morphism")
            }
            Violation::IdentityNotEndo { object, morphism } => {
                write!(f, "identity {morphism} of object {object} is not an endomorphism of it")
            }
            Violation::CompOutOfRange { g, f: ff } => {
                write!(f, "comp({g},{ff}) mentions an unknown morphism")
            }
            Violation::CompDomain { g, f: ff } => {
                write!(f, "comp domain: comp({g},{ff}) defined for a non-composable pair")
            }
            Violation::CompDuplicate { g, f: ff } => write!(f, "comp({g},{ff}) given twice"),
            Violation::CompMissing { g, f: ff } => {
                write!(f, "comp totality: comp({g},{ff}) missing for a composable pair")
            }
            Violation::CompWrongType { g, f: ff, gf } => {
                write!(f, "comp typing: comp({g},{ff}) = {gf} has the wrong domain or codomain")
            }
            Violation::LeftUnit { f: ff } => write!(f, "unit law: id∘{ff} ≠ {ff}"),
            Violation::RightUnit { f: ff } => write!(f, "unit law: {ff}∘id ≠ {ff}"),
            Violation::Associativity { h, g, f: ff } => {
                write!(f, "associativity fails on the triple ({h},{g},{ff})")
            }
        }
    }
}

/// Every violated axiom found by [`validate`]; empty means the tables form a category.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn kinds(&self) -> Vec<&'static str> {
        self.violations.iter().map(Violation::kind).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("invalid category: {0}")]
    Invalid(ValidationReport),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("not a preorder: {0}")]
    NotPreorder(String),
}

/// Check all category axioms of raw tables.
pub fn validate(t: &CategoryTables) -> ValidationReport {
    let mut out = Vec::new();
    let n = t.objects.len();
    let m = t.morphisms.len();
    for (i, mor) in t.morphisms.iter().enumerate() {
        if mor.dom >= n || mor.cod >= n {
            out.push(Violation::DanglingObject { morphism: i });
        }
    }
    if t.identity.len() != n {
        out.push(Violation::IdentityCount { expected: n, found: t.identity.len() });
    }
    for (x, &i) in t.identity.iter().enumerate() {
        if i >= m {
            out.push(Violation::IdentityOutOfRange { object: x });
        } else if t.morphisms[i].dom != x || t.morphisms[i].cod != x {
            out.push(Violation::IdentityNotEndo { object: x, morphism: i });
        }
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }

    let mut table: Vec<Option<MorId>> = vec![None; m * m];
    for &(g, f, gf) in &t.comp {
        if g >= m || f >= m || gf >= m {
            out.push(Violation::CompOutOfRange { g, f });
            continue;
        }
        if t.morphisms[f].cod != t.morphisms[g].dom {
            out.push(Violation::CompDomain { g, f });
            continue;
        }
        if table[g * m + f].is_some() {
            out.push(Violation::CompDuplicate { g, f });
            continue;
        }
        if t.morphisms[gf].dom != t.morphisms[f].dom || t.morphisms[gf].cod != t.morphisms[g].cod {
            out.push(Violation::CompWrongType { g, f, gf });
        }
        table[g * m + f] = Some(gf);
    }
    for g in 0..m {
        for f in 0..m {
            if t.morphisms[f].cod == t.morphisms[g].dom && table[g * m + f].is_none() {
                out.push(Violation::CompMissing { g, f });
            }
        }
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }
    for f in 0..m {
        let Morphism { dom, cod, .. } = t.morphisms[f];
        if table[t.identity[cod] * m + f] != Some(f) {
            out.push(Violation::LeftUnit { f });
        }
        if table[f * m + t.identity[dom]] != Some(f) {
            out.push(Violation::RightUnit { f });
        }
    }
    for f in 0..m {
        for g in 0..m {
            let Some(gf) = table[g * m + f] else { continue };
            for h in 0..m {
                let Some(hg) = table[h * m + g] else { continue };
                if table[h * m + gf] != table[hg * m + f] {
                    out.push(Violation::Associativity { h, g, f });
                }
            }
        }
    }
    ValidationReport { violations: out }
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<MorId>,
    comp: Vec<Option<MorId>>,
    hom: Vec<Vec<MorId>>,
}

/// A validated finite category. Cloning is cheap.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    inner: Arc<Inner>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.inner.objects)
            .field("morphisms", &self.inner.morphisms.len())
            .finish()
    }
}

impl TryFrom<CategoryTables> for FinCategory {
    type Error = CategoryError;

    fn try_from(t: CategoryTables) -> Result<Self, Self::Error> {
        FinCategory::new(t)
    }
}

impl FinCategory {
    pub fn new(t: CategoryTables) -> Result<Self, CategoryError> {
        let report = validate(&t);
        if !report.is_empty() {
            return Err(CategoryError::Invalid(report));
        }
        let n = t.objects.len();
        let m = t.morphisms.len();
        let mut comp = vec![None; m * m];
        for &(g, f, gf) in &t.comp {
            comp[g * m + f] = Some(gf);
        }
        let mut hom = vec![Vec::new(); n * n];
        for (i, mor) in t.morphisms.iter().enumerate() {
            hom[mor.dom * n + mor.cod].push(i);
        }
        Ok(FinCategory {
            inner: Arc::new(Inner {
                objects: t.objects,
                morphisms: t.morphisms,
                identity: t.identity,
                comp,
                hom,
            }),
        })
    }

    /// The category with no objects.
    pub fn empty() -> Self {
        Self::new(CategoryTables::default()).expect("empty category is valid")
    }

    /// The category with one object and only its identity.
    pub fn terminal() -> Self {
        Self::discrete(&["*"])
    }

    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Self {
        Self::preorder(names, |a, b| a == b).expect("discrete category is a preorder")
    }

    /// Thin category on `names` with an arrow `a -> b` whenever `leq(a, b)`.
    ///
    /// Identities come first in morphism order, then the remaining arrows in
    /// lexicographic `(a, b)` order.
    pub fn preorder<S: AsRef<str>>(
        names: &[S],
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, CategoryError> {
        let n = names.len();
        for a in 0..n {
            if !leq(a, a) {
                return Err(CategoryError::NotPreorder(format!("{} is not ≤ itself", names[a].as_ref())));
            }
            for b in 0..n {
                for c in 0..n {
                    if leq(a, b) && leq(b, c) && !leq(a, c) {
                        return Err(CategoryError::NotPreorder(format!(
                            "transitivity fails at {},{},{}",
                            names[a].as_ref(),
                            names[b].as_ref(),
                            names[c].as_ref()
                        )));
                    }
                }
            }
        }
        let objects: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut morphisms = Vec::new();
        let mut arrow = vec![usize::MAX; n * n];
        for (a, name) in objects.iter().enumerate() {
            arrow[a * n + a] = morphisms.len();
            morphisms.push(Morphism { name: format!("id_{name}"), dom: a, cod: a });
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    arrow[a * n + b] = morphisms.len();
                    morphisms.push(Morphism {
                        name: format!("{}->{}", objects[a], objects[b]),
                        dom: a,
                        cod: b,
                    });
                }
            }
        }
        let mut comp = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if leq(a, b) && leq(b, c) {
                        comp.push((arrow[b * n + c], arrow[a * n + b], arrow[a * n + c]));
                    }
                }
            }
        }
        let identity = (0..n).map(|a| arrow[a * n + a]).collect();
        Self::new(CategoryTables { objects, morphisms, identity, comp })
    }

    pub fn num_objects(&self) -> usize {
        self.inner.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.inner.morphisms.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.num_objects()
    }

    pub fn morphisms(&self) -> std::ops::Range<MorId> {
        0..self.num_morphisms()
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.inner.objects[x]
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.inner.morphisms[f]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.inner.morphisms[f].name
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.inner.objects.iter().position(|o| o == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<MorId> {
        self.inner.morphisms.iter().position(|m| m.name == name)
    }

    #[inline]
    pub fn dom(&self, f: MorId) -> ObjId {
        self.inner.morphisms[f].dom
    }

    #[inline]
    pub fn cod(&self, f: MorId) -> ObjId {
        self.inner.morphisms[f].cod
    }

    #[inline]
    pub fn id(&self, x: ObjId) -> MorId {
        self.inner.identity[x]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.inner.identity[self.dom(f)] == f
    }

    /// `g ∘ f`, if `cod f = dom g`.
    #[inline]
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.inner.comp[g * self.num_morphisms() + f]
    }

    /// `g ∘ f`; panics on a non-composable pair.
    #[inline]
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.compose(g, f)
            .unwrap_or_else(|| panic!("morphisms {g} and {f} are not composable"))
    }

    #[inline]
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.inner.hom[a * self.num_objects() + b]
    }

    /// All morphisms into `b`.
    pub fn into_obj(&self, b: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&f| self.cod(f) == b)
    }

    /// All morphisms out of `a`.
    pub fn out_of(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&f| self.dom(f) == a)
    }

    /// Two-sided inverse of `f`, if any.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (a, b) = (self.dom(f), self.cod(f));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.comp(g, f) == self.id(a) && self.comp(f, g) == self.id(b))
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// Some isomorphism `a -> b`, if the objects are isomorphic.
    pub fn iso_between(&self, a: ObjId, b: ObjId) -> Option<MorId> {
        self.hom(a, b).iter().copied().find(|&f| self.is_iso(f))
    }

    /// At most one arrow between any two objects.
    pub fn is_thin(&self) -> bool {
        self.inner.hom.iter().all(|h| h.len() <= 1)
    }

    /// Thin and skeletal.
    pub fn is_poset(&self) -> bool {
        self.is_thin()
            && self.objects().all(|a| {
                self.objects()
                    .all(|b| a == b || self.hom(a, b).is_empty() || self.hom(b, a).is_empty())
            })
    }

    /// Raw tables, as accepted by [`FinCategory::new`].
    pub fn tables(&self) -> CategoryTables {
        let m = self.num_morphisms();
        let mut comp = Vec::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(gf) = self.compose(g, f) {
                    comp.push((g, f, gf));
                }
            }
        }
        CategoryTables {
            objects: self.inner.objects.clone(),
            morphisms: self.inner.morphisms.clone(),
            identity: self.inner.identity.clone(),
            comp,
        }
    }
}

/// Opposite category with the same object and morphism ids.
///
/// Because ids are preserved, `opposite(&opposite(c)) == c` exactly.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let t = c.tables();
    let morphisms = t
        .morphisms
        .into_iter()
        .map(|m| Morphism { name: m.name, dom: m.cod, cod: m.dom })
        .collect();
    let comp = t.comp.into_iter().map(|(g, f, gf)| (f, g, gf)).collect();
    FinCategory::new(CategoryTables { objects: t.objects, morphisms, identity: t.identity, comp })
        .expect("opposite of a valid category is valid")
}

/// Elementary morphism predicates, decided by exhaustive search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct MorphismFlags {
    pub mono: bool,
    pub epi: bool,
    pub split_mono: bool,
    pub split_epi: bool,
    pub iso: bool,
}

pub fn classify_morphism(c: &FinCategory, f: MorId) -> Result<MorphismFlags, CategoryError> {
    if f >= c.num_morphisms() {
        return Err(CategoryError::UnknownMorphism(f.to_string()));
    }
    let (a, b) = (c.dom(f), c.cod(f));
    let mono = c.objects().all(|x| {
        let h = c.hom(x, a);
        h.iter().all(|&u| h.iter().all(|&v| u == v || c.comp(f, u) != c.comp(f, v)))
    });
    let epi = c.objects().all(|x| {
        let h = c.hom(b, x);
        h.iter().all(|&u| h.iter().all(|&v| u == v || c.comp(u, f) != c.comp(v, f)))
    });
    let split_mono = c.hom(b, a).iter().any(|&r| c.comp(r, f) == c.id(a));
    let split_epi = c.hom(b, a).iter().any(|&s| c.comp(f, s) == c.id(b));
    let iso = c.is_iso(f);
    Ok(MorphismFlags { mono, epi, split_mono, split_epi, iso })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> FinCategory {
        FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap()
    }

    fn b2() -> FinCategory {
        // 0 < a, b < 1 encoded as bitmasks 0b00, 0b01, 0b10, 0b11
        FinCategory::preorder(&["0", "a", "b", "1"], |x, y| x & y == x).unwrap()
    }

    #[test]
    fn chain_is_valid() {
        let c = chain2();
        assert_eq!(c.num_morphisms(), 3);
        assert!(validate(&c.tables()).is_empty());
    }

    #[test]
    fn comp_on_non_composable_pair_is_reported() {
        let mut t = chain2().tables();
        // (0->1) ∘ (0->1) is not composable
        t.comp.push((2, 2, 2));
        let r = validate(&t);
        assert!(r.kinds().contains(&"comp domain"), "{r}");
    }

    #[test]
    fn broken_associativity_names_the_triple() {
        // One object, monoid {e, a, b} with a table that is not associative.
        let objects = vec!["X".to_string()];
        let morphisms = (0..3)
            .map(|i| Morphism { name: format!("m{i}"), dom: 0, cod: 0 })
            .collect();
        // e = 0; a·a = b, a·b = a, b·a = b, b·b = a
        let mul = [[0, 1, 2], [1, 2, 1], [2, 2, 1]];
        let mut comp = Vec::new();
        for (g, row) in mul.iter().enumerate() {
            for (f, &gf) in row.iter().enumerate() {
                comp.push((g, f, gf));
            }
        }
        let r = validate(&CategoryTables { objects, morphisms, identity: vec![0], comp });
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Associativity { .. })));
        assert!(FinCategory::new(CategoryTables::default()).is_ok());
    }

    #[test]
    fn opposite_examples() {
        let c = chain2();
        let op = opposite(&c);
        assert_eq!(op.hom(1, 0).len(), 1);
        assert!(op.hom(0, 1).is_empty());
        assert_eq!(opposite(&op), c);

        let d = FinCategory::discrete(&["p", "q"]);
        assert_eq!(opposite(&d), d);

        let b = b2();
        let bop = opposite(&b);
        for x in b.objects() {
            for y in b.objects() {
                assert_eq!(b.hom(x, y).len(), bop.hom(y, x).len());
            }
        }
    }

    #[test]
    fn morphism_flags() {
        let c = chain2();
        let id = classify_morphism(&c, c.id(0)).unwrap();
        assert_eq!(
            id,
            MorphismFlags { mono: true, epi: true, split_mono: true, split_epi: true, iso: true }
        );
        let up = c.hom(0, 1)[0];
        let fl = classify_morphism(&c, up).unwrap();
        assert!(fl.mono && fl.epi && !fl.split_epi && !fl.split_mono && !fl.iso);
        assert!(classify_morphism(&c, 17).is_err());
    }

    #[test]
    fn split_epi_projection() {
        // Objects P, X; p: P -> X with section s: X -> P, e = s∘p idempotent on P.
        let objects = vec!["P".to_string(), "X".to_string()];
        let morphisms = vec![
            Morphism { name: "idP".into(), dom: 0, cod: 0 },
            Morphism { name: "idX".into(), dom: 1, cod: 1 },
            Morphism { name: "p".into(), dom: 0, cod: 1 },
            Morphism { name: "s".into(), dom: 1, cod: 0 },
            Morphism { name: "e".into(), dom: 0, cod: 0 },
        ];
        let comp = vec![
            (0, 0, 0),
            (1, 1, 1),
            (2, 0, 2),
            (1, 2, 2),
            (3, 1, 3),
            (0, 3, 3),
            (4, 0, 4),
            (0, 4, 4),
            (2, 3, 1),
            (3, 2, 4),
            (4, 4, 4),
            (2, 4, 2),
            (4, 3, 3),
        ];
        let c = FinCategory::new(CategoryTables { objects, morphisms, identity: vec![0, 1], comp })
            .unwrap();
        let fl = classify_morphism(&c, 2).unwrap();
        assert!(fl.split_epi && fl.epi && !fl.mono && !fl.iso);
        let fs = classify_morphism(&c, 3).unwrap();
        assert!(fs.split_mono && fs.mono && !fs.epi);
    }
}

//! Coverages generated by singleton families, sheaf checks and points.
//!
//! A [`Site`] stores its generating class `M` as arrows `h: A -> B` of a base category
//! (the "finitely presentable" side). The site category is the opposite of the base, so a
//! presheaf on the site is a covariant functor on the base and the sheaf condition reads
//! "`F(h)` is a bijection for every `h` in `M`".

use serde::{Deserialize, Serialize};
use thiserror::Error;

use std::collections::BTreeMap;

use crate::completion::{corepresentable, lex_points, PointCategory, PresheafError, SetFunctor, Variance};
use crate::fincat::{opposite, CategoryError, FinCategory, MorId, RawCategory};
use crate::limits::{classify, is_regular_epi, pushout};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SiteError {
    #[error("generating class is not saturated; missing {0:?}")]
    Unsaturated(Vec<MorId>),
    #[error("category is not regular")]
    NotRegular,
    #[error("site category is not lex")]
    NotLex,
    #[error("functor is not a covariant functor on the site's base")]
    FunctorMismatch,
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Functor(#[from] PresheafError),
    #[error("no object named {0}")]
    UnknownObject(String),
}

/// A pushout needed by the saturation rules that the base category lacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PushoutGap {
    pub h: MorId,
    pub along: MorId,
}

/// A saturated class of morphisms plus the pushouts that could not be formed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismClass {
    pub members: Vec<MorId>,
    pub gaps: Vec<PushoutGap>,
}

impl MorphismClass {
    pub fn contains(&self, f: MorId) -> bool {
        self.members.binary_search(&f).is_ok()
    }
}

/// Least class containing `m` closed under identities, composition, left cancellation
/// (`g∘f, f ∈ M ⇒ g ∈ M`) and pushouts along arbitrary arrows, where those exist.
pub fn saturate(c: &FinCategory, m: &[MorId]) -> MorphismClass {
    let mut inside = vec![false; c.num_morphisms()];
    for x in c.objects() {
        inside[c.id(x)] = true;
    }
    for &f in m {
        inside[f] = true;
    }
    loop {
        let mut changed = false;
        let mut add = |f: MorId, inside: &mut Vec<bool>| {
            if !inside[f] {
                inside[f] = true;
                changed = true;
            }
        };
        for g in c.morphisms() {
            for f in c.into_obj(c.dom(g)) {
                let gf = c.comp(g, f);
                if inside[g] && inside[f] {
                    add(gf, &mut inside);
                }
                if inside[gf] && inside[f] {
                    add(g, &mut inside);
                }
            }
        }
        for h in c.morphisms() {
            if !inside[h] {
                continue;
            }
            for g in c.out_of(c.dom(h)) {
                if let Some((_, _, pushed)) = pushout(c, h, g) {
                    add(pushed, &mut inside);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let members: Vec<MorId> = c.morphisms().filter(|&f| inside[f]).collect();
    let gaps = members
        .iter()
        .flat_map(|&h| c.out_of(c.dom(h)).map(move |g| PushoutGap { h, along: g }))
        .filter(|gap| pushout(c, gap.h, gap.along).is_none())
        .collect();
    MorphismClass { members, gaps }
}

/// A base category with a generating class of singleton covers.
#[derive(Clone, Debug)]
pub struct Site {
    base: FinCategory,
    site_category: FinCategory,
    generators: Vec<MorId>,
    gaps: Vec<PushoutGap>,
}

impl Site {
    /// The site on `base^op` whose covers are the members of a saturated class `m` of `base`.
    pub fn from_fp(base: &FinCategory, m: &[MorId]) -> Result<Self, SiteError> {
        coverage_from_injectives(base, m)
    }

    /// The site on `category` whose singleton covers are `covers`, taken as given.
    pub fn on_category(category: &FinCategory, covers: &[MorId]) -> Self {
        let mut generators = covers.to_vec();
        generators.sort_unstable();
        generators.dedup();
        Site { base: opposite(category), site_category: category.clone(), generators, gaps: Vec::new() }
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn site_category(&self) -> &FinCategory {
        &self.site_category
    }

    pub fn generators(&self) -> &[MorId] {
        &self.generators
    }

    /// Pushouts missing from the base that saturation would have used.
    pub fn gaps(&self) -> &[PushoutGap] {
        &self.gaps
    }

    /// Generators with domain `k`, in base orientation.
    pub fn covers(&self, k: usize) -> Vec<MorId> {
        self.generators.iter().copied().filter(|&h| self.base.dom(h) == k).collect()
    }
}

pub fn coverage_from_injectives(c: &FinCategory, m: &[MorId]) -> Result<Site, SiteError> {
    let sat = saturate(c, m);
    let mut given = m.to_vec();
    given.sort_unstable();
    given.dedup();
    let missing: Vec<MorId> = sat.members.iter().copied().filter(|f| given.binary_search(f).is_err()).collect();
    if !missing.is_empty() {
        return Err(SiteError::Unsaturated(missing));
    }
    Ok(Site { base: c.clone(), site_category: opposite(c), generators: sat.members, gaps: sat.gaps })
}

/// Covers generated by the regular epimorphisms of a regular category.
pub fn canonical_regular_coverage(b: &FinCategory) -> Result<Site, SiteError> {
    let k = classify(b);
    if !k.is_regular {
        return Err(SiteError::NotRegular);
    }
    let epis: Vec<MorId> = b.morphisms().filter(|&f| is_regular_epi(b, f)).collect();
    Ok(Site::on_category(b, &epis))
}

fn check_functor(s: &Site, f: &SetFunctor) -> Result<(), SiteError> {
    if f.variance() != Variance::Covariant || f.base() != &s.base {
        return Err(SiteError::FunctorMismatch);
    }
    Ok(())
}

/// `F(h)` is a bijection for every generator `h`.
pub fn is_sheaf(s: &Site, f: &SetFunctor) -> Result<bool, SiteError> {
    check_functor(s, f)?;
    Ok(s.generators.iter().all(|&h| f.is_bijective_on(h)))
}

/// Every representable presheaf on the site category is a sheaf.
pub fn check_subcanonical(s: &Site) -> bool {
    s.base.objects().all(|x| s.generators.iter().all(|&h| corepresentable(&s.base, x).is_bijective_on(h)))
}

/// Lex functors on the site category into `{∅, 1}` sending every cover to a surjection.
pub fn enumerate_points(s: &Site) -> Result<PointCategory, SiteError> {
    if s.base.num_objects() == 0 {
        return Ok(PointCategory { category: FinCategory::empty(), supports: Vec::new() });
    }
    let all = lex_points(&s.site_category).map_err(|_| SiteError::NotLex)?;
    // F(h) runs from F(cod h) to F(dom h) in base terms; surjective iff dom ∈ S ⇒ cod ∈ S
    let keep: Vec<Vec<usize>> = all
        .supports
        .into_iter()
        .filter(|sup| {
            s.generators.iter().all(|&h| !sup.contains(&s.base.dom(h)) || sup.contains(&s.base.cod(h)))
        })
        .collect();
    Ok(crate::completion::point_category(&s.site_category, keep))
}

/// JSON form: a category in base orientation plus generator names.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawSite {
    #[serde(flatten)]
    pub category: RawCategory,
    pub covers: Vec<String>,
    /// `"fp"` (default): covers are arrows of the given category, which is the base.
    /// `"site"`: the given category is the site category and covers are its arrows.
    #[serde(default)]
    pub orientation: Option<String>,
}

impl RawSite {
    pub fn from_site(s: &Site) -> Self {
        RawSite {
            category: RawCategory::from(&s.base),
            covers: s.generators.iter().map(|&h| s.base.morphism_name(h).to_string()).collect(),
            orientation: None,
        }
    }

    pub fn build(&self) -> Result<Site, SiteError> {
        let c = self.category.build()?;
        let covers = self
            .covers
            .iter()
            .map(|n| c.find_morphism(n).ok_or_else(|| CategoryError::UnknownMorphism(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        match self.orientation.as_deref() {
            Some("site") => Ok(Site::on_category(&c, &covers)),
            _ => {
                let sat = saturate(&c, &covers);
                Ok(Site { base: c.clone(), site_category: opposite(&c), generators: sat.members, gaps: sat.gaps })
            }
        }
    }
}

/// JSON form of a covariant functor on a site's base: carrier size per object name and a
/// table per morphism name. Identity tables may be left out.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctor {
    pub sizes: BTreeMap<String, usize>,
    #[serde(default)]
    pub actions: BTreeMap<String, Vec<usize>>,
}

impl RawFunctor {
    pub fn build(&self, base: &FinCategory) -> Result<SetFunctor, SiteError> {
        for name in self.sizes.keys() {
            base.find_object(name).ok_or_else(|| SiteError::UnknownObject(name.clone()))?;
        }
        for name in self.actions.keys() {
            base.find_morphism(name).ok_or_else(|| CategoryError::UnknownMorphism(name.clone()))?;
        }
        let sizes = base
            .objects()
            .map(|x| self.sizes.get(base.object_name(x)).copied().ok_or_else(|| SiteError::UnknownObject(base.object_name(x).into())))
            .collect::<Result<Vec<_>, _>>()?;
        let actions = base
            .morphisms()
            .map(|f| match self.actions.get(base.morphism_name(f)) {
                Some(t) => t.clone(),
                None if base.is_identity(f) => (0..sizes[base.dom(f)]).collect(),
                None => Vec::new(),
            })
            .collect();
        Ok(SetFunctor::covariant(base.clone(), sizes, actions)?)
    }

    pub fn from_functor(f: &SetFunctor) -> Self {
        let c = f.base();
        RawFunctor {
            sizes: c.objects().map(|x| (c.object_name(x).to_string(), f.size(x))).collect(),
            actions: c.morphisms().filter(|&m| !c.is_identity(m)).map(|m| (c.morphism_name(m).to_string(), f.action(m).to_vec())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> FinCategory {
        FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap()
    }

    fn b2() -> FinCategory {
        FinCategory::preorder(&["0", "a", "b", "1"], |x, y| x & y == x).unwrap()
    }

    #[test]
    fn saturation_examples() {
        let c = chain2();
        let ids: Vec<MorId> = c.objects().map(|x| c.id(x)).collect();
        assert_eq!(saturate(&c, &[]).members, ids);
        let up = c.hom(0, 1)[0];
        let sat = saturate(&c, &[up]);
        assert!(sat.contains(up));
        assert_eq!(saturate(&c, &sat.members), sat);
    }

    #[test]
    fn coverage_needs_saturation() {
        let c = chain2();
        let ids: Vec<MorId> = c.objects().map(|x| c.id(x)).collect();
        assert!(coverage_from_injectives(&c, &[]).is_err());
        let s = coverage_from_injectives(&c, &ids).unwrap();
        assert_eq!(s.covers(0), vec![c.id(0)]);
        let up = c.hom(0, 1)[0];
        let sat = saturate(&c, &[up]);
        let s = coverage_from_injectives(&c, &sat.members).unwrap();
        assert!(s.covers(0).contains(&up));
        let empty = coverage_from_injectives(&FinCategory::empty(), &[]).unwrap();
        assert!(empty.generators().is_empty());
    }

    #[test]
    fn canonical_coverage_on_lattice_is_trivial() {
        let c = b2();
        let s = canonical_regular_coverage(&c).unwrap();
        assert!(s.generators().iter().all(|&h| c.is_iso(h)));
        assert!(check_subcanonical(&s));
        assert!(check_subcanonical(&canonical_regular_coverage(&chain2()).unwrap()));
        assert!(canonical_regular_coverage(&FinCategory::discrete(&["x", "y"])).is_err());
    }

    #[test]
    fn corrupted_site_is_not_subcanonical() {
        let c = b2();
        let non_epi = c.hom(0, 3)[0];
        let s = Site::on_category(&c, &[non_epi]);
        assert!(!check_subcanonical(&s));
    }

    #[test]
    fn sheaf_examples() {
        let c = chain2();
        let up = c.hom(0, 1)[0];
        let sat = saturate(&c, &[up]);
        let s = Site::from_fp(&c, &sat.members).unwrap();
        let mut actions = vec![vec![0], vec![0, 1], vec![0]];
        actions[up] = vec![0];
        let f = SetFunctor::covariant(c.clone(), vec![1, 2], actions).unwrap();
        assert_eq!(is_sheaf(&s, &f), Ok(false));
        let ids: Vec<MorId> = c.objects().map(|x| c.id(x)).collect();
        let trivial = Site::from_fp(&c, &ids).unwrap();
        assert_eq!(is_sheaf(&trivial, &f), Ok(true));
    }

    #[test]
    fn points_examples() {
        let c = chain2();
        let ids: Vec<MorId> = c.objects().map(|x| c.id(x)).collect();
        assert_eq!(enumerate_points(&Site::from_fp(&c, &ids).unwrap()).unwrap().supports.len(), 2);
        let sat = saturate(&c, &[c.hom(0, 1)[0]]);
        let s = Site::from_fp(&c, &sat.members).unwrap();
        assert_eq!(enumerate_points(&s).unwrap().supports.len(), 1);
        let empty = Site::from_fp(&FinCategory::empty(), &[]).unwrap();
        assert_eq!(enumerate_points(&empty).unwrap().category.num_objects(), 0);
    }
}

use super::functor::{for_each_set_functor, SetFunctor, Variance};
use super::CompletionError;
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::limits::{classify, equalizer, product, terminal, Cone};

/// Chosen limit cones of a lex category; a functor is lex iff it preserves these.
#[derive(Clone, Debug)]
pub struct LexWitnesses {
    pub terminal: ObjId,
    pub products: Vec<(ObjId, ObjId, Cone)>,
    pub equalizers: Vec<(MorId, MorId, ObjId, MorId)>,
}

impl LexWitnesses {
    pub fn of(c: &FinCategory) -> Result<Self, CompletionError> {
        let terminal = terminal(c).ok_or(CompletionError::NotLex)?;
        let mut products = Vec::new();
        for a in c.objects() {
            for b in c.objects() {
                products.push((a, b, product(c, a, b).ok_or(CompletionError::NotLex)?));
            }
        }
        let mut equalizers = Vec::new();
        for u in c.morphisms() {
            for &v in c.hom(c.dom(u), c.cod(u)) {
                let (e, leg) = equalizer(c, u, v).ok_or(CompletionError::NotLex)?;
                equalizers.push((u, v, e, leg));
            }
        }
        Ok(LexWitnesses { terminal, products, equalizers })
    }

    /// Cardinality consequences of preserving the witnesses.
    pub fn sizes_possible(&self, sizes: &[usize]) -> bool {
        sizes[self.terminal] == 1
            && self.products.iter().all(|(a, b, p)| sizes[p.apex] == sizes[*a] * sizes[*b])
    }

    /// Does the covariant functor `f` send every witness to a limit in finite sets?
    pub fn preserved_by(&self, f: &SetFunctor) -> bool {
        assert_eq!(f.variance(), Variance::Covariant, "lex functors are covariant");
        if f.size(self.terminal) != 1 {
            return false;
        }
        for (a, b, p) in &self.products {
            let (na, nb) = (f.size(*a), f.size(*b));
            if f.size(p.apex) != na * nb {
                return false;
            }
            let mut hit = vec![false; na * nb];
            for z in 0..f.size(p.apex) {
                let k = f.act(p.legs[0], z) * nb + f.act(p.legs[1], z);
                if hit[k] {
                    return false;
                }
                hit[k] = true;
            }
        }
        for &(u, v, e, leg) in &self.equalizers {
            let a = f.base().dom(u);
            let equal: Vec<usize> = (0..f.size(a)).filter(|&x| f.act(u, x) == f.act(v, x)).collect();
            let mut image: Vec<usize> = (0..f.size(e)).map(|z| f.act(leg, z)).collect();
            image.sort_unstable();
            image.dedup();
            if image.len() != f.size(e) || image != equal {
                return false;
            }
        }
        true
    }
}

pub fn is_lex_functor(f: &SetFunctor) -> Result<bool, CompletionError> {
    Ok(LexWitnesses::of(f.base())?.preserved_by(f))
}

/// Every lex functor `c -> FinSet` with values of size at most `max_size`.
///
/// With `prune`, size vectors violating the terminal and product cardinality equations
/// are skipped before any action table is tried; the result is the same either way.
pub fn lex_functors_bounded(c: &FinCategory, max_size: usize, prune: bool) -> Result<Vec<SetFunctor>, CompletionError> {
    let w = LexWitnesses::of(c)?;
    let mut out = Vec::new();
    let sizes_ok = |s: &[usize]| !prune || w.sizes_possible(s);
    for_each_set_functor(c, Variance::Covariant, max_size, &sizes_ok, &mut |f| {
        if w.preserved_by(f) {
            out.push(f.clone());
        }
        true
    });
    Ok(out)
}

/// Lex functors into `{∅, 1}` ordered by inclusion of supports.
#[derive(Clone, Debug)]
pub struct PointCategory {
    pub category: FinCategory,
    /// Objects sent to the one-point set, per point.
    pub supports: Vec<Vec<ObjId>>,
}

pub(crate) fn point_category(c: &FinCategory, mut supports: Vec<Vec<ObjId>>) -> PointCategory {
    supports.sort();
    let names: Vec<String> = supports
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(|&x| c.object_name(x)).collect::<Vec<_>>().join(",")))
        .collect();
    let subset = |a: &Vec<ObjId>, b: &Vec<ObjId>| a.iter().all(|x| b.contains(x));
    let category = FinCategory::preorder(&names, |i, j| subset(&supports[i], &supports[j]))
        .expect("inclusion is a preorder");
    PointCategory { category, supports }
}

pub fn lex_points(c: &FinCategory) -> Result<PointCategory, CompletionError> {
    if !classify(c).is_lex {
        return Err(CompletionError::NotLex);
    }
    let supports = lex_functors_bounded(c, 1, true)?
        .iter()
        .map(|f| c.objects().filter(|&x| f.size(x) == 1).collect())
        .collect();
    Ok(point_category(c, supports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_of_small_lattices() {
        let c2 = FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap();
        let p = lex_points(&c2).unwrap();
        assert_eq!(p.supports, vec![vec![0, 1], vec![1]]);
        let b2 = FinCategory::preorder(&["0", "a", "b", "1"], |x, y| x & y == x).unwrap();
        assert_eq!(lex_points(&b2).unwrap().supports.len(), 4);
        assert_eq!(lex_points(&FinCategory::terminal()).unwrap().supports.len(), 1);
    }

    #[test]
    fn bounded_search_is_subterminal_on_chain() {
        let c = FinCategory::preorder(&["0", "1", "2"], |a, b| a <= b).unwrap();
        let pruned = lex_functors_bounded(&c, 4, true).unwrap();
        let full = lex_functors_bounded(&c, 4, false).unwrap();
        assert_eq!(pruned, full);
        assert!(full.iter().all(SetFunctor::is_subterminal));
        assert_eq!(full.len(), 3);
    }
}

use super::functor::{hom_pos, Presheaf, SetFunctor, Variance};
use crate::fincat::ObjId;

fn assert_presheaf(f: &Presheaf) {
    assert_eq!(f.variance(), Variance::Contravariant, "expected a presheaf");
}

/// Does `a ∈ F(x)` generate `F`, i.e. is `y(x) -> F, u ↦ F(u)(a)` surjective everywhere?
pub fn generates(f: &Presheaf, x: ObjId, a: usize) -> bool {
    let c = f.base();
    c.objects().all(|y| {
        let mut hit = vec![false; f.size(y)];
        for &u in c.hom(y, x) {
            hit[f.act(u, a)] = true;
        }
        hit.into_iter().all(|b| b)
    })
}

/// First generating element `(x, a)` in object-then-element order.
pub fn generator(f: &Presheaf) -> Option<(ObjId, usize)> {
    assert_presheaf(f);
    f.base()
        .objects()
        .flat_map(|x| (0..f.size(x)).map(move |a| (x, a)))
        .find(|&(x, a)| generates(f, x, a))
}

/// Admits an epimorphism from a representable.
pub fn is_supercompact(f: &Presheaf) -> bool {
    generator(f).is_some()
}

/// Objectwise kernel pair of `y(x) -> F` at `a`: pairs `(u, v)` of arrows into `x`
/// with `F(u)(a) = F(v)(a)`. Element order at `y` is lexicographic in hom positions.
pub fn kernel_pair_of_element(f: &Presheaf, x: ObjId, a: usize) -> Presheaf {
    let c = f.base();
    let pairs: Vec<Vec<(usize, usize)>> = c
        .objects()
        .map(|y| {
            let hom = c.hom(y, x);
            let mut out = Vec::new();
            for (i, &u) in hom.iter().enumerate() {
                for (j, &v) in hom.iter().enumerate() {
                    if f.act(u, a) == f.act(v, a) {
                        out.push((i, j));
                    }
                }
            }
            out
        })
        .collect();
    let sizes = pairs.iter().map(Vec::len).collect();
    let actions = c
        .morphisms()
        .map(|g| {
            let (y1, y) = (c.dom(g), c.cod(g));
            let hom = c.hom(y, x);
            pairs[y]
                .iter()
                .map(|&(i, j)| {
                    let key = (hom_pos(c, c.comp(hom[i], g)), hom_pos(c, c.comp(hom[j], g)));
                    pairs[y1].iter().position(|&p| p == key).expect("kernel pair is closed under precomposition")
                })
                .collect()
        })
        .collect();
    SetFunctor::new_unchecked(c.clone(), Variance::Contravariant, sizes, actions)
}

/// Covered by a representable through a map whose kernel pair is again covered by one.
pub fn is_regular_object(f: &Presheaf) -> bool {
    assert_presheaf(f);
    let c = f.base();
    c.objects().any(|x| {
        (0..f.size(x)).any(|a| generates(f, x, a) && is_supercompact(&kernel_pair_of_element(f, x, a)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::functor::yoneda;
    use crate::fincat::FinCategory;

    fn chain2() -> FinCategory {
        FinCategory::preorder(&["0", "1"], |a, b| a <= b).unwrap()
    }

    #[test]
    fn representables_are_regular() {
        let c = FinCategory::preorder(&["0", "a", "b", "1"], |x, y| x & y == x).unwrap();
        for x in c.objects() {
            let y = yoneda(&c, x);
            assert!(is_supercompact(&y));
            assert!(is_regular_object(&y));
        }
    }

    #[test]
    fn empty_presheaf_is_not_supercompact() {
        let c = chain2();
        let empty = SetFunctor::presheaf(c.clone(), vec![0, 0], vec![vec![]; 3]).unwrap();
        assert!(!is_supercompact(&empty));
        assert!(!is_regular_object(&empty));
    }

    #[test]
    fn sum_of_representables_is_not_supercompact() {
        let c = chain2();
        // y(1) + y(1): two points at each object, actions are identities
        let sum = SetFunctor::presheaf(c.clone(), vec![2, 2], vec![vec![0, 1]; 3]).unwrap();
        assert!(!is_supercompact(&sum));
    }

    #[test]
    fn quotient_of_monoid_representable() {
        // one object with the two-element monoid {1, e}, e∘e = e; y(*) has carrier {1, e}
        let raw = crate::fincat::RawCategory {
            objects: vec!["*".into()],
            morphisms: vec![
                crate::fincat::RawMorphism { id: "1".into(), dom: "*".into(), cod: "*".into() },
                crate::fincat::RawMorphism { id: "e".into(), dom: "*".into(), cod: "*".into() },
            ],
            identity: [("*".to_string(), "1".to_string())].into_iter().collect(),
            comp: vec![["e".into(), "e".into(), "e".into()]],
        };
        let m = raw.build().unwrap();
        let y = yoneda(&m, 0);
        assert!(is_regular_object(&y));
        // the terminal presheaf is covered by y(*), but its kernel pair y×y has four
        // elements and any single generator reaches at most two of them
        let point = SetFunctor::presheaf(m.clone(), vec![1], vec![vec![0], vec![0]]).unwrap();
        assert!(is_supercompact(&point));
        assert!(!is_regular_object(&point));
    }
}

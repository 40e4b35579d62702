use std::collections::{BTreeSet, HashMap};

use super::functor::{hom_pos, Presheaf, SetFunctor, Variance};
use super::regular::{is_supercompact, kernel_pair_of_element};
use super::CompletionError;
use crate::fincat::{CategoryTables, FinCategory, FinFunctor, MorId, Morphism, ObjId};
use crate::limits::classify;

/// An equivalence relation on each `hom(y, x)`, stable under precomposition.
/// Stored as class labels in first-occurrence order.
pub type Congruence = Vec<Vec<u32>>;

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

fn labels_from(parent: &mut [usize]) -> Vec<u32> {
    let mut map = HashMap::new();
    (0..parent.len())
        .map(|i| {
            let r = find(parent, i);
            let next = map.len() as u32;
            *map.entry(r).or_insert(next)
        })
        .collect()
}

fn diagonal(c: &FinCategory, x: ObjId) -> Congruence {
    c.objects().map(|y| (0..c.hom(y, x).len() as u32).collect()).collect()
}

fn principal(c: &FinCategory, x: ObjId, y: ObjId, i: usize, j: usize) -> Congruence {
    let mut parents: Vec<Vec<usize>> = c.objects().map(|z| (0..c.hom(z, x).len()).collect()).collect();
    let (u, v) = (c.hom(y, x)[i], c.hom(y, x)[j]);
    for f in c.into_obj(y) {
        let z = c.dom(f);
        let (a, b) = (hom_pos(c, c.comp(u, f)), hom_pos(c, c.comp(v, f)));
        let p = &mut parents[z];
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra.max(rb)] = ra.min(rb);
    }
    parents.iter_mut().map(|p| labels_from(p)).collect()
}

fn join(a: &Congruence, b: &Congruence) -> Congruence {
    a.iter()
        .zip(b)
        .map(|(la, lb)| {
            let mut p: Vec<usize> = (0..la.len()).collect();
            for labels in [la, lb] {
                let mut first: HashMap<u32, usize> = HashMap::new();
                for (i, &l) in labels.iter().enumerate() {
                    let r0 = *first.entry(l).or_insert(i);
                    let (ra, rb) = (find(&mut p, r0), find(&mut p, i));
                    p[ra.max(rb)] = ra.min(rb);
                }
            }
            labels_from(&mut p)
        })
        .collect()
}

/// Pairs `(i < j)` at every object, flattened; identified pairs are `true`.
fn relation_key(cong: &Congruence) -> Vec<bool> {
    cong.iter()
        .flat_map(|l| (0..l.len()).flat_map(move |i| ((i + 1)..l.len()).map(move |j| l[i] == l[j])))
        .collect()
}

/// All congruences on `y(x)`, ordered by their relation bitmask (the diagonal first).
pub fn congruences(c: &FinCategory, x: ObjId) -> Vec<Congruence> {
    let mut principals = Vec::new();
    for y in c.objects() {
        let n = c.hom(y, x).len();
        for i in 0..n {
            for j in (i + 1)..n {
                principals.push(principal(c, x, y, i, j));
            }
        }
    }
    let mut seen: BTreeSet<Congruence> = BTreeSet::new();
    let mut queue = vec![diagonal(c, x)];
    seen.insert(queue[0].clone());
    while let Some(cur) = queue.pop() {
        for p in &principals {
            let next = join(&cur, p);
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let mut out: Vec<Congruence> = seen.into_iter().collect();
    out.sort_by_key(relation_key);
    out
}

/// `y(x)` divided by a congruence.
pub fn quotient(c: &FinCategory, x: ObjId, cong: &Congruence) -> Presheaf {
    let sizes: Vec<usize> = cong.iter().map(|l| l.iter().map(|&k| k as usize + 1).max().unwrap_or(0)).collect();
    let actions = c
        .morphisms()
        .map(|g| {
            let (y1, y) = (c.dom(g), c.cod(g));
            let hom = c.hom(y, x);
            (0..sizes[y])
                .map(|k| {
                    let rep = cong[y].iter().position(|&l| l as usize == k).expect("labels are dense");
                    cong[y1][hom_pos(c, c.comp(hom[rep], g))] as usize
                })
                .collect()
        })
        .collect();
    SetFunctor::new_unchecked(c.clone(), Variance::Contravariant, sizes, actions)
}

/// An object of the completion: `y(generator)` modulo `congruence`.
#[derive(Clone, Debug)]
pub struct CompletionObject {
    pub generator: ObjId,
    pub congruence: Congruence,
    pub presheaf: Presheaf,
}

impl CompletionObject {
    fn new(c: &FinCategory, x: ObjId, congruence: Congruence) -> Self {
        let presheaf = quotient(c, x, &congruence);
        CompletionObject { generator: x, congruence, presheaf }
    }

    /// The class of the identity, which generates the quotient.
    pub fn identity_class(&self) -> usize {
        let c = self.presheaf.base();
        let x = self.generator;
        self.congruence[x][hom_pos(c, c.id(x))] as usize
    }

    /// Natural maps into `target`, each given by the image `b` of the class of the identity.
    pub fn maps_to(&self, target: &Presheaf) -> Vec<(usize, Vec<Vec<usize>>)> {
        let c = self.presheaf.base();
        let x = self.generator;
        (0..target.size(x))
            .filter_map(|b| {
                let mut comps = Vec::with_capacity(c.num_objects());
                for y in c.objects() {
                    let mut comp = vec![usize::MAX; self.presheaf.size(y)];
                    for (pos, &u) in c.hom(y, x).iter().enumerate() {
                        let k = self.congruence[y][pos] as usize;
                        let img = target.act(u, b);
                        if comp[k] == usize::MAX {
                            comp[k] = img;
                        } else if comp[k] != img {
                            return None;
                        }
                    }
                    comps.push(comp);
                }
                Some((b, comps))
            })
            .collect()
    }
}

fn is_bijective(comps: &[Vec<usize>], target: &Presheaf) -> bool {
    comps.iter().enumerate().all(|(y, comp)| {
        let mut hit = vec![false; target.size(y)];
        comp.iter().for_each(|&i| hit[i] = true);
        comp.len() == target.size(y) && hit.into_iter().all(|b| b)
    })
}

/// The exact completion of a lex category with its unit.
#[derive(Clone, Debug)]
pub struct Completion {
    pub category: FinCategory,
    pub unit: FinFunctor,
    pub objects: Vec<CompletionObject>,
}

impl Completion {
    /// Index of the completion object isomorphic to `f`, if any.
    pub fn find_object(&self, f: &Presheaf) -> Option<ObjId> {
        self.objects.iter().position(|o| {
            o.presheaf.sizes() == f.sizes() && o.maps_to(f).iter().any(|(_, comps)| is_bijective(comps, f))
        })
    }
}

/// Quotients of representables with representably covered kernel pairs, up to isomorphism.
pub fn ex_lex_completion(c: &FinCategory) -> Result<Completion, CompletionError> {
    if !classify(c).is_lex {
        return Err(CompletionError::NotLex);
    }
    let mut objects: Vec<CompletionObject> = Vec::new();
    for x in c.objects() {
        for cong in congruences(c, x) {
            let cand = CompletionObject::new(c, x, cong);
            let kp = kernel_pair_of_element(&cand.presheaf, x, cand.identity_class());
            if !is_supercompact(&kp) {
                continue;
            }
            let duplicate = objects.iter().any(|o| {
                o.presheaf.sizes() == cand.presheaf.sizes()
                    && cand.maps_to(&o.presheaf).iter().any(|(_, comps)| is_bijective(comps, &o.presheaf))
            });
            if !duplicate {
                objects.push(cand);
            }
        }
    }

    let mut morphisms = Vec::new();
    let mut comps_of: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut index: HashMap<(ObjId, ObjId, Vec<Vec<usize>>), MorId> = HashMap::new();
    let mut identity = vec![0; objects.len()];
    let mut names = vec![String::new(); objects.len()];
    let mut quotient_count = vec![0usize; c.num_objects()];
    for (i, o) in objects.iter().enumerate() {
        let base = c.object_name(o.generator);
        names[i] = if o.congruence == diagonal(c, o.generator) {
            base.to_string()
        } else {
            quotient_count[o.generator] += 1;
            format!("{base}/{}", quotient_count[o.generator])
        };
    }
    for (i, o) in objects.iter().enumerate() {
        for (j, t) in objects.iter().enumerate() {
            for (b, comps) in o.maps_to(&t.presheaf) {
                let id = morphisms.len();
                let is_id = i == j && comps.iter().all(|comp| comp.iter().enumerate().all(|(k, &v)| k == v));
                if is_id {
                    identity[i] = id;
                }
                let name = if is_id { format!("id_{}", names[i]) } else { format!("{}->{}:{b}", names[i], names[j]) };
                morphisms.push(Morphism { name, dom: i, cod: j });
                index.insert((i, j, comps.clone()), id);
                comps_of.push(comps);
            }
        }
    }
    let mut comp = Vec::new();
    for g in 0..morphisms.len() {
        for f in 0..morphisms.len() {
            if morphisms[f].cod != morphisms[g].dom {
                continue;
            }
            let gf: Vec<Vec<usize>> = comps_of[f]
                .iter()
                .zip(&comps_of[g])
                .map(|(cf, cg)| cf.iter().map(|&e| cg[e]).collect())
                .collect();
            let key = (morphisms[f].dom, morphisms[g].cod, gf);
            comp.push((g, f, index[&key]));
        }
    }
    let category = FinCategory::new(CategoryTables { objects: names, morphisms, identity, comp })
        .expect("natural transformations form a category");

    // h(x): the completion object isomorphic to y(x), with a chosen iso
    let mut obj_map = Vec::with_capacity(c.num_objects());
    let mut isos: Vec<Vec<Vec<usize>>> = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let rep = CompletionObject::new(c, x, diagonal(c, x));
        let (i, comps) = objects
            .iter()
            .enumerate()
            .find_map(|(i, o)| {
                rep.maps_to(&o.presheaf).into_iter().find(|(_, cs)| is_bijective(cs, &o.presheaf)).map(|(_, cs)| (i, cs))
            })
            .expect("representables are regular objects");
        obj_map.push(i);
        isos.push(comps);
    }
    let mor_map = c
        .morphisms()
        .map(|f| {
            let (x, x1) = (c.dom(f), c.cod(f));
            let comps: Vec<Vec<usize>> = c
                .objects()
                .map(|y| {
                    let mut inv = vec![0usize; isos[x][y].len()];
                    for (u, &k) in isos[x][y].iter().enumerate() {
                        inv[k] = u;
                    }
                    inv.iter()
                        .map(|&u| isos[x1][y][hom_pos(c, c.comp(f, c.hom(y, x)[u]))])
                        .collect()
                })
                .collect();
            index[&(obj_map[x], obj_map[x1], comps)]
        })
        .collect();
    let unit = FinFunctor::new(c.clone(), category.clone(), obj_map, mor_map).expect("the unit is a functor");
    Ok(Completion { category, unit, objects })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::is_equivalence;

    fn lattice(n: usize, leq: impl Fn(usize, usize) -> bool) -> FinCategory {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        FinCategory::preorder(&names, leq).unwrap()
    }

    #[test]
    fn chain_completes_to_itself() {
        let c = lattice(2, |a, b| a <= b);
        let e = ex_lex_completion(&c).unwrap();
        assert!(is_equivalence(&e.unit));
        assert!(classify(&e.category).is_exact);
    }

    #[test]
    fn boolean_lattice_completes_to_itself() {
        let c = lattice(4, |x, y| x & y == x);
        let e = ex_lex_completion(&c).unwrap();
        assert_eq!(e.category.num_objects(), 4);
        assert!(is_equivalence(&e.unit));
    }

    #[test]
    fn terminal_category() {
        let e = ex_lex_completion(&FinCategory::terminal()).unwrap();
        assert_eq!(e.category.num_objects(), 1);
        assert!(is_equivalence(&e.unit));
    }

    #[test]
    fn not_lex_is_rejected() {
        let d = FinCategory::discrete(&["x", "y"]);
        assert!(matches!(ex_lex_completion(&d), Err(CompletionError::NotLex)));
    }

    #[test]
    fn congruences_of_idempotent_monoid() {
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
        let all = congruences(&m, 0);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0], vec![vec![0, 1]]);
        assert_eq!(quotient(&m, 0, &all[1]).sizes(), &[1]);
    }
}

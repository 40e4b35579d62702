use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::fincat::{opposite, CategoryTables, FinCategory, Morphism};

const OBJECT_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

/// Every preorder on `n` points, up to isomorphism.
pub fn preorders(n: usize) -> Vec<FinCategory> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out: Vec<FinCategory> = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for (k, &(a, b)) in pairs.iter().enumerate() {
            leq[a][b] = mask >> k & 1 == 1;
        }
        if let Ok(c) = FinCategory::preorder(&OBJECT_NAMES[..n], |a, b| leq[a][b]) {
            if !out.iter().any(|d| are_isomorphic(d, &c)) {
                out.push(c);
            }
        }
    }
    out
}

/// A function between small finite sets, with its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Arrow {
    dom: usize,
    cod: usize,
    map: Vec<u8>,
}

/// Subcategory of finite sets generated by a few random functions, if it stays small.
pub fn random_concrete(rng: &mut ChaCha8Rng, max_objects: usize, max_morphisms: usize) -> Option<FinCategory> {
    let k = rng.gen_range(1..=max_objects);
    let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
    let mut arrows: BTreeSet<Arrow> =
        (0..k).map(|x| Arrow { dom: x, cod: x, map: (0..sizes[x] as u8).collect() }).collect();
    let gens = rng.gen_range(1..=3);
    for _ in 0..gens {
        let (dom, cod) = (rng.gen_range(0..k), rng.gen_range(0..k));
        let map = (0..sizes[dom]).map(|_| rng.gen_range(0..sizes[cod]) as u8).collect();
        arrows.insert(Arrow { dom, cod, map });
    }
    loop {
        let list: Vec<Arrow> = arrows.iter().cloned().collect();
        let mut grew = false;
        for g in &list {
            for f in &list {
                if f.cod == g.dom {
                    let map = f.map.iter().map(|&x| g.map[x as usize]).collect();
                    grew |= arrows.insert(Arrow { dom: f.dom, cod: g.cod, map });
                }
            }
        }
        if arrows.len() > max_morphisms {
            return None;
        }
        if !grew {
            break;
        }
    }
    // identities first, then by (dom, cod, map)
    let mut list: Vec<Arrow> = arrows.into_iter().collect();
    list.sort_by_key(|a| (a.dom != a.cod || a.map.iter().enumerate().any(|(i, &v)| i != v as usize), a.clone()));
    let index: HashMap<Arrow, usize> = list.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
    let morphisms = list
        .iter()
        .enumerate()
        .map(|(i, a)| Morphism {
            name: if i < k { format!("id_{}", OBJECT_NAMES[a.dom]) } else { format!("f{i}") },
            dom: a.dom,
            cod: a.cod,
        })
        .collect();
    let mut comp = Vec::new();
    for (gi, g) in list.iter().enumerate() {
        for (fi, f) in list.iter().enumerate() {
            if f.cod == g.dom {
                let map = f.map.iter().map(|&x| g.map[x as usize]).collect();
                comp.push((gi, fi, index[&Arrow { dom: f.dom, cod: g.cod, map }]));
            }
        }
    }
    let tables = CategoryTables {
        objects: OBJECT_NAMES[..k].iter().map(|s| s.to_string()).collect(),
        morphisms,
        identity: (0..k).collect(),
        comp,
    };
    Some(FinCategory::new(tables).expect("concrete categories satisfy the axioms"))
}

/// Cheap isomorphism invariant: sorted per-object profiles.
fn profile(c: &FinCategory) -> Vec<(usize, usize, usize, usize)> {
    let mut v: Vec<_> = c
        .objects()
        .map(|x| {
            let idem = c.hom(x, x).iter().filter(|&&f| c.comp(f, f) == f).count();
            (c.hom(x, x).len(), c.out_of(x).count(), c.into_obj(x).count(), idem)
        })
        .collect();
    v.sort_unstable();
    v
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Searches for an isomorphism of categories, object bijection first.
pub fn are_isomorphic(a: &FinCategory, b: &FinCategory) -> bool {
    if a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms() || profile(a) != profile(b) {
        return false;
    }
    let n = a.num_objects();
    permutations(n).into_iter().any(|pi| {
        let sizes_match = (0..n).all(|x| (0..n).all(|y| a.hom(x, y).len() == b.hom(pi[x], pi[y]).len()));
        sizes_match && morphism_bijection(a, b, &pi)
    })
}

fn morphism_bijection(a: &FinCategory, b: &FinCategory, pi: &[usize]) -> bool {
    let order: Vec<usize> = a.morphisms().filter(|&f| !a.is_identity(f)).collect();
    let mut phi = vec![usize::MAX; a.num_morphisms()];
    let mut used = vec![false; b.num_morphisms()];
    for x in a.objects() {
        phi[a.id(x)] = b.id(pi[x]);
        used[b.id(pi[x])] = true;
    }
    fn consistent(a: &FinCategory, b: &FinCategory, phi: &[usize]) -> bool {
        a.morphisms().all(|g| {
            a.into_obj(a.dom(g)).all(|f| {
                let gf = a.comp(g, f);
                phi[g] == usize::MAX || phi[f] == usize::MAX || phi[gf] == usize::MAX || b.comp(phi[g], phi[f]) == phi[gf]
            })
        })
    }
    fn go(a: &FinCategory, b: &FinCategory, pi: &[usize], order: &[usize], i: usize, phi: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == order.len() {
            return true;
        }
        let f = order[i];
        for &g in b.hom(pi[a.dom(f)], pi[a.cod(f)]) {
            if used[g] {
                continue;
            }
            phi[f] = g;
            used[g] = true;
            if consistent(a, b, phi) && go(a, b, pi, order, i + 1, phi, used) {
                return true;
            }
            phi[f] = usize::MAX;
            used[g] = false;
        }
        false
    }
    go(a, b, pi, &order, 0, &mut phi, &mut used)
}

type Key = (usize, usize, Vec<(usize, usize, usize, usize)>);

/// Insertion-ordered list of categories, pairwise non-isomorphic.
#[derive(Default)]
struct Dedup {
    items: Vec<FinCategory>,
    buckets: HashMap<Key, Vec<usize>>,
}

impl Dedup {
    fn push(&mut self, c: FinCategory) {
        let key = (c.num_objects(), c.num_morphisms(), profile(&c));
        let bucket = self.buckets.entry(key).or_default();
        if bucket.iter().any(|&i| are_isomorphic(&self.items[i], &c)) {
            return;
        }
        bucket.push(self.items.len());
        self.items.push(c);
    }
}

/// Categories with at most 3 objects and 8 morphisms, pairwise non-isomorphic: all
/// preorders, then `attempts` random concrete categories and their opposites.
pub fn category_corpus(rng: &mut ChaCha8Rng, attempts: usize) -> Vec<FinCategory> {
    let mut out = Dedup::default();
    for n in 1..=3 {
        preorders(n).into_iter().filter(|c| c.num_morphisms() <= 8).for_each(|c| out.push(c));
    }
    for _ in 0..attempts {
        if let Some(c) = random_concrete(rng, 3, 8) {
            let op = opposite(&c);
            out.push(c);
            out.push(op);
        }
    }
    out.items
}

/// Lattices on `1..=max` elements up to isomorphism, elements listed bottom first.
pub fn lattices(max: usize) -> Vec<FinCategory> {
    let mut out = Dedup::default();
    for n in 1..=max {
        // bottom 0 and top n-1 are fixed; search the order on the middle elements
        let mid: Vec<(usize, usize)> =
            (1..n.saturating_sub(1)).flat_map(|a| (1..n - 1).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        for mask in 0u64..(1 << mid.len()) {
            let mut leq = vec![vec![false; n]; n];
            for a in 0..n {
                leq[a][a] = true;
                leq[0][a] = true;
                leq[a][n - 1] = true;
            }
            for (k, &(a, b)) in mid.iter().enumerate() {
                leq[a][b] = mask >> k & 1 == 1;
            }
            if !is_lattice(&leq) {
                continue;
            }
            let names: Vec<String> = (0..n).map(|i| format!("l{i}")).collect();
            if let Ok(c) = FinCategory::preorder(&names, |a, b| leq[a][b]) {
                if c.is_poset() {
                    out.push(c);
                }
            }
        }
    }
    out.items
}

fn is_lattice(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    let antisym = (0..n).all(|a| (0..n).all(|b| a == b || !(leq[a][b] && leq[b][a])));
    let trans = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(leq[a][b] && leq[b][c]) || leq[a][c])));
    if !antisym || !trans {
        return false;
    }
    (0..n).all(|a| {
        (0..n).all(|b| {
            let lower: Vec<usize> = (0..n).filter(|&z| leq[z][a] && leq[z][b]).collect();
            let upper: Vec<usize> = (0..n).filter(|&z| leq[a][z] && leq[b][z]).collect();
            lower.iter().any(|&m| lower.iter().all(|&z| leq[z][m])) && upper.iter().any(|&m| upper.iter().all(|&z| leq[m][z]))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn preorder_counts() {
        let counts: Vec<usize> = (1..=3).map(|n| preorders(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 9]);
    }

    #[test]
    fn lattice_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| lattices(5).iter().filter(|l| l.num_objects() == n).count()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5]);
    }

    #[test]
    fn isomorphism_sees_through_relabelling() {
        let a = FinCategory::preorder(&["x", "y", "z"], |i, j| i <= j).unwrap();
        let b = FinCategory::preorder(&["x", "y", "z"], |i, j| i >= j).unwrap();
        assert!(are_isomorphic(&a, &b));
        let v = FinCategory::preorder(&["x", "y", "z"], |i, j| i == j || j == 2).unwrap();
        assert!(!are_isomorphic(&a, &v));
    }

    #[test]
    fn corpus_is_large_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let corpus = category_corpus(&mut rng, 4000);
        assert!(corpus.len() >= 200, "{}", corpus.len());
        assert!(corpus.iter().all(|c| c.num_objects() <= 3 && c.num_morphisms() <= 8));
    }
}

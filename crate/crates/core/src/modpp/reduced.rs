use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::module::{FiniteModule, ModuleMap};
use super::purity::is_pure_embedding;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("relation is not a partial order")]
    NotPartialOrder,
    #[error("poset is not directed: {0} and {1} have no upper bound")]
    NotDirected(usize, usize),
    #[error("expected {expected} modules, got {found}")]
    Count { expected: usize, found: usize },
    #[error("map {0} -> {1} is missing or has the wrong endpoints")]
    BadMap(usize, usize),
    #[error("{0} <= {1} <= {2} does not commute")]
    NotFunctorial(usize, usize, usize),
    #[error("chain is malformed at step {0}")]
    BadChain(usize),
    #[error("product of {0} elements is too large")]
    TooLarge(usize),
}

/// A finite directed poset on `0..n`; being finite and directed it has a maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedPoset {
    leq: Vec<Vec<bool>>,
    top: usize,
}

impl DirectedPoset {
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self, DiagramError> {
        let n = leq.len();
        if n == 0 || leq.iter().any(|r| r.len() != n) {
            return Err(DiagramError::NotPartialOrder);
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(DiagramError::NotPartialOrder);
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(DiagramError::NotPartialOrder);
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(DiagramError::NotPartialOrder);
                    }
                }
                if !(0..n).any(|k| leq[i][k] && leq[j][k]) {
                    return Err(DiagramError::NotDirected(i, j));
                }
            }
        }
        let top = (0..n).find(|&t| (0..n).all(|i| leq[i][t])).expect("finite directed posets have a maximum");
        Ok(DirectedPoset { leq, top })
    }

    /// `0 ≤ 1 ≤ … ≤ n−1`.
    pub fn chain(n: usize) -> Self {
        Self::new((0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect()).expect("chains are directed")
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq[i][j]).collect()
    }

    /// Pairs `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq[i][j] && !(0..n).any(|k| k != i && k != j && self.leq[i][k] && self.leq[k][j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Directed posets on up to `max` points, one per isomorphism class.
pub fn directed_posets(max: usize) -> Vec<DirectedPoset> {
    let mut out: Vec<DirectedPoset> = Vec::new();
    for n in 1..=max {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let perms = permutations(n);
        let mut seen: Vec<Vec<Vec<bool>>> = Vec::new();
        for mask in 0u64..(1 << pairs.len()) {
            let mut leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
            for (b, &(i, j)) in pairs.iter().enumerate() {
                leq[i][j] = mask >> b & 1 == 1;
            }
            let Ok(p) = DirectedPoset::new(leq.clone()) else { continue };
            let canon = perms
                .iter()
                .map(|s| (0..n).map(|i| (0..n).map(|j| leq[s[i]][s[j]]).collect::<Vec<_>>()).collect::<Vec<_>>())
                .min()
                .expect("at least one permutation");
            if !seen.contains(&canon) {
                seen.push(canon);
                out.push(p);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// A functor from a directed poset to finite modules: `d(i, j)` for every `i ≤ j`.
#[derive(Clone, Debug)]
pub struct ModuleDiagram {
    poset: DirectedPoset,
    modules: Vec<FiniteModule>,
    maps: BTreeMap<(usize, usize), ModuleMap>,
}

impl ModuleDiagram {
    pub fn new(poset: DirectedPoset, modules: Vec<FiniteModule>, maps: BTreeMap<(usize, usize), ModuleMap>) -> Result<Self, DiagramError> {
        let n = poset.len();
        if modules.len() != n {
            return Err(DiagramError::Count { expected: n, found: modules.len() });
        }
        for i in 0..n {
            for j in poset.up_set(i) {
                let ok = maps.get(&(i, j)).is_some_and(|d| *d.source() == modules[i] && *d.target() == modules[j]);
                if !ok || (i == j && maps[&(i, i)].table().iter().enumerate().any(|(x, &y)| x != y)) {
                    return Err(DiagramError::BadMap(i, j));
                }
            }
        }
        for i in 0..n {
            for j in poset.up_set(i) {
                for k in poset.up_set(j) {
                    if maps[&(j, k)].after(&maps[&(i, j)]).table() != maps[&(i, k)].table() {
                        return Err(DiagramError::NotFunctorial(i, j, k));
                    }
                }
            }
        }
        Ok(ModuleDiagram { poset, modules, maps })
    }

    /// Builds all maps from those on cover pairs by composing along paths.
    pub fn from_covers(poset: DirectedPoset, modules: Vec<FiniteModule>, covers: &BTreeMap<(usize, usize), ModuleMap>) -> Result<Self, DiagramError> {
        let n = poset.len();
        if modules.len() != n {
            return Err(DiagramError::Count { expected: n, found: modules.len() });
        }
        let mut maps = BTreeMap::new();
        for i in 0..n {
            maps.insert((i, i), ModuleMap::identity(&modules[i]));
        }
        // grow by path length; a path i < j extends a shorter one ending at a lower cover of j
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &poset.covers() {
                let d = covers.get(&(a, b)).ok_or(DiagramError::BadMap(a, b))?;
                for i in 0..n {
                    if let Some(first) = maps.get(&(i, a)).cloned() {
                        if !maps.contains_key(&(i, b)) {
                            maps.insert((i, b), d.after(&first));
                            changed = true;
                        }
                    }
                }
            }
        }
        Self::new(poset, modules, maps)
    }

    pub fn poset(&self) -> &DirectedPoset {
        &self.poset
    }

    pub fn modules(&self) -> &[FiniteModule] {
        &self.modules
    }

    pub fn map(&self, i: usize, j: usize) -> &ModuleMap {
        &self.maps[&(i, j)]
    }
}

/// The data of the reduced-product construction, with every equation checked.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedProduct {
    /// Index of the maximum; the colimit is `D_top`.
    pub top: usize,
    /// `h_i(x) = (d_ij(x))_{j ≥ i}` for each `x ∈ D_i`, coordinates ordered as `up_sets[i]`.
    pub h: Vec<Vec<Vec<usize>>>,
    pub up_sets: Vec<Vec<usize>>,
    /// Each `h_i` is a linear injection retracted by the projection to coordinate `i`.
    pub all_split: bool,
    /// `H_ik ∘ h_i = h_k ∘ d_ik` for the restriction maps `H_ik`.
    pub connecting_commute: bool,
    /// `H_i ∘ h_i = h ∘ d_i` where `H_i` projects to the maximum and `h` is the identity of `D_top`.
    pub comparison_commutes: bool,
    pub comparison_pure: bool,
}

impl ReducedProduct {
    pub fn passed(&self) -> bool {
        self.all_split && self.connecting_commute && self.comparison_commutes && self.comparison_pure
    }
}

pub fn reduced_product(diagram: &ModuleDiagram) -> ReducedProduct {
    let poset = diagram.poset();
    let n = poset.len();
    let top = poset.top();
    let up_sets: Vec<Vec<usize>> = (0..n).map(|i| poset.up_set(i)).collect();
    let h: Vec<Vec<Vec<usize>>> =
        (0..n).map(|i| (0..diagram.modules[i].size()).map(|x| up_sets[i].iter().map(|&j| diagram.map(i, j).apply(x)).collect()).collect()).collect();
    let mut all_split = true;
    for i in 0..n {
        let m = &diagram.modules[i];
        let pos_i = up_sets[i].iter().position(|&j| j == i).expect("reflexive");
        let retracts = (0..m.size()).all(|x| h[i][x][pos_i] == x);
        // coordinatewise operations on the product
        let linear = (0..m.size()).all(|x| {
            (0..m.size()).all(|y| {
                let s = m.add(x, y);
                up_sets[i].iter().enumerate().all(|(c, &j)| h[i][s][c] == diagram.modules[j].add(h[i][x][c], h[i][y][c]))
            }) && (0..m.ring().size()).all(|r| {
                let s = m.act(r, x);
                up_sets[i].iter().enumerate().all(|(c, &j)| h[i][s][c] == diagram.modules[j].act(r, h[i][x][c]))
            })
        });
        all_split &= retracts && linear;
    }
    let mut connecting_commute = true;
    for i in 0..n {
        for k in poset.up_set(i) {
            // H_ik keeps the coordinates j ≥ k
            for x in 0..diagram.modules[i].size() {
                let restricted: Vec<usize> =
                    up_sets[i].iter().zip(&h[i][x]).filter(|(&j, _)| poset.leq(k, j)).map(|(_, &v)| v).collect();
                connecting_commute &= restricted == h[k][diagram.map(i, k).apply(x)];
            }
        }
    }
    let mut comparison_commutes = true;
    for i in 0..n {
        let pos_top = up_sets[i].iter().position(|&j| j == top).expect("top is above everything");
        for x in 0..diagram.modules[i].size() {
            comparison_commutes &= h[i][x][pos_top] == diagram.map(i, top).apply(x);
        }
    }
    let comparison_pure = is_pure_embedding(&ModuleMap::identity(&diagram.modules[top])).unwrap_or(false);
    ReducedProduct { top, h, up_sets, all_split, connecting_commute, comparison_commutes, comparison_pure }
}

/// `M_0 → M_1 → … → M_k`, continued by identities.
#[derive(Clone, Debug)]
pub struct Chain {
    modules: Vec<FiniteModule>,
    maps: Vec<ModuleMap>,
}

impl Chain {
    pub fn new(modules: Vec<FiniteModule>, maps: Vec<ModuleMap>) -> Result<Self, DiagramError> {
        if modules.is_empty() || maps.len() + 1 != modules.len() {
            return Err(DiagramError::BadChain(0));
        }
        for (s, d) in maps.iter().enumerate() {
            if *d.source() != modules[s] || *d.target() != modules[s + 1] {
                return Err(DiagramError::BadChain(s));
            }
        }
        Ok(Chain { modules, maps })
    }

    pub fn constant(m: FiniteModule) -> Self {
        Chain { modules: vec![m], maps: Vec::new() }
    }

    fn stage(&self, j: usize) -> &FiniteModule {
        &self.modules[j.min(self.modules.len() - 1)]
    }

    fn step(&self, j: usize, x: usize) -> usize {
        self.maps.get(j).map_or(x, |d| d.apply(x))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributivityReport {
    pub stages: usize,
    pub colimit_of_products: usize,
    pub product_of_colimits: usize,
    pub comparison_bijective: bool,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Classes of `∐_j X_j / (x ~ step_j(x))` as a dense labelling of the disjoint union.
fn colimit_classes(sizes: &[usize], step: impl Fn(usize, usize) -> usize) -> (Vec<usize>, Vec<usize>, usize) {
    let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &s| Some(std::mem::replace(acc, *acc + s))).collect();
    let total: usize = sizes.iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    for j in 0..sizes.len().saturating_sub(1) {
        for x in 0..sizes[j] {
            let (a, b) = (find(&mut parent, offsets[j] + x), find(&mut parent, offsets[j + 1] + step(j, x)));
            parent[a] = b;
        }
    }
    let mut label = vec![usize::MAX; total];
    let mut count = 0;
    let mut class = vec![0; total];
    for v in 0..total {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        class[v] = label[r];
    }
    (class, offsets, count)
}

/// Largest number of elements across all stages of the product chain.
pub const PROBE_MAX_ELEMENTS: usize = 1 << 20;

/// Compares `colim_j ∏_f M^f_j` with `∏_f colim_j M^f_j` through the canonical map.
pub fn distributivity_probe(chains: &[Chain]) -> Result<DistributivityReport, DiagramError> {
    let stages = chains.iter().map(|c| c.modules.len()).max().unwrap_or(1);
    let stage_sizes: Vec<Vec<usize>> = (0..stages).map(|j| chains.iter().map(|c| c.stage(j).size()).collect()).collect();
    let prod = |v: &[usize]| v.iter().try_fold(1usize, |a, &s| a.checked_mul(s));
    let mut totals = Vec::with_capacity(stages);
    for s in &stage_sizes {
        totals.push(prod(s).filter(|&p| p <= PROBE_MAX_ELEMENTS).ok_or(DiagramError::TooLarge(usize::MAX))?);
    }
    let grand: usize = totals.iter().sum();
    if grand > PROBE_MAX_ELEMENTS {
        return Err(DiagramError::TooLarge(grand));
    }
    // colimit of the product chain, elements as mixed-radix tuples per stage
    let (prod_class, prod_off, prod_count) = colimit_classes(&totals, |j, code| {
        let t = decode_mixed(&stage_sizes[j], code);
        let next: Vec<usize> = chains.iter().zip(&t).map(|(c, &x)| c.step(j, x)).collect();
        encode_mixed(&stage_sizes[j + 1], &next)
    });
    // colimit of each chain separately
    let per_chain: Vec<(Vec<usize>, Vec<usize>, usize)> = chains
        .iter()
        .map(|c| {
            let sizes: Vec<usize> = (0..stages).map(|j| c.stage(j).size()).collect();
            colimit_classes(&sizes, |j, x| c.step(j, x))
        })
        .collect();
    let target_sizes: Vec<usize> = per_chain.iter().map(|p| p.2).collect();
    let target = prod(&target_sizes).ok_or(DiagramError::TooLarge(usize::MAX))?;
    let mut image: Vec<Option<usize>> = vec![None; prod_count];
    let mut well_defined = true;
    for j in 0..stages {
        for code in 0..totals[j] {
            let t = decode_mixed(&stage_sizes[j], code);
            let coords: Vec<usize> = per_chain.iter().zip(&t).map(|((cls, off, _), &x)| cls[off[j] + x]).collect();
            let y = encode_mixed(&target_sizes, &coords);
            let c = prod_class[prod_off[j] + code];
            well_defined &= *image[c].get_or_insert(y) == y;
        }
    }
    let mut hit = vec![false; target];
    let mut injective = true;
    for y in image.iter().flatten() {
        injective &= !std::mem::replace(&mut hit[*y], true);
    }
    let bijective = well_defined && injective && hit.iter().all(|&b| b) && image.iter().all(|y| y.is_some());
    Ok(DistributivityReport { stages, colimit_of_products: prod_count, product_of_colimits: target, comparison_bijective: bijective })
}

fn decode_mixed(sizes: &[usize], mut code: usize) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        out[i] = code % sizes[i];
        code /= sizes[i];
    }
    out
}

fn encode_mixed(sizes: &[usize], t: &[usize]) -> usize {
    t.iter().zip(sizes).fold(0, |acc, (&x, &s)| acc * s + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpp::ring::FiniteRing;

    #[test]
    fn poset_counts() {
        // directed posets up to iso: 1, 1, 2, 5 on 1..4 points
        let counts: Vec<usize> = (1..=4).map(|n| directed_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 9]);
        assert!(DirectedPoset::new(vec![vec![true, false], vec![false, true]]).is_err());
    }

    #[test]
    fn two_element_chain() {
        let z4 = FiniteRing::zn(4);
        let a = FiniteModule::cyclic(&z4, 2);
        let b = FiniteModule::regular(&z4);
        for table in [vec![0, 2], vec![0, 0]] {
            let d = ModuleMap::new(&a, &b, table).unwrap();
            let covers = BTreeMap::from([((0, 1), d)]);
            let diag = ModuleDiagram::from_covers(DirectedPoset::chain(2), vec![a.clone(), b.clone()], &covers).unwrap();
            let r = reduced_product(&diag);
            assert!(r.passed());
            assert_eq!(r.top, 1);
        }
    }

    #[test]
    fn non_functorial_diagram_is_rejected() {
        let z4 = FiniteRing::zn(4);
        let r = FiniteModule::regular(&z4);
        let p = DirectedPoset::chain(3);
        let double = ModuleMap::new(&r, &r, vec![0, 2, 0, 2]).unwrap();
        let mut maps = BTreeMap::new();
        for i in 0..3 {
            for j in i..3 {
                maps.insert((i, j), if i == j { ModuleMap::identity(&r) } else { double.clone() });
            }
        }
        assert_eq!(ModuleDiagram::new(p, vec![r.clone(), r.clone(), r], maps).unwrap_err(), DiagramError::NotFunctorial(0, 1, 2));
    }

    #[test]
    fn distributivity_examples() {
        let z4 = FiniteRing::zn(4);
        let r = FiniteModule::regular(&z4);
        let e = distributivity_probe(&[Chain::constant(r.clone())]).unwrap();
        assert!(e.comparison_bijective && e.colimit_of_products == 4);
        let two = FiniteModule::cyclic(&z4, 2);
        let c1 = Chain::new(vec![two.clone(), r.clone()], vec![ModuleMap::new(&two, &r, vec![0, 2]).unwrap()]).unwrap();
        let zero = FiniteModule::zero_module(&z4);
        let c2 = Chain::new(
            vec![r.clone(), two.clone(), zero.clone()],
            vec![ModuleMap::new(&r, &two, vec![0, 1, 0, 1]).unwrap(), ModuleMap::new(&two, &zero, vec![0, 0]).unwrap()],
        )
        .unwrap();
        let e = distributivity_probe(&[c1, c2]).unwrap();
        assert!(e.comparison_bijective);
        assert_eq!((e.colimit_of_products, e.product_of_colimits), (4, 4));
        let e = distributivity_probe(&[]).unwrap();
        assert!(e.comparison_bijective && e.product_of_colimits == 1);
    }
}

use super::module::{find_isomorphism, FiniteModule};
use super::ring::FiniteRing;

/// The rings every module-level property is exercised over.
pub fn test_rings() -> Vec<FiniteRing> {
    vec![FiniteRing::zn(4), FiniteRing::f2_dual(), FiniteRing::zn(6)]
}

/// Cyclic modules `R/Ra`, one per isomorphism class, smallest generator first.
fn cyclic_types(ring: &FiniteRing) -> Vec<FiniteModule> {
    let mut out: Vec<FiniteModule> = Vec::new();
    for a in 0..ring.size() {
        let c = FiniteModule::cyclic(ring, a);
        if c.size() > 1 && !out.iter().any(|d| find_isomorphism(d, &c).is_some()) {
            out.push(c);
        }
    }
    out
}

/// All modules with at most `max_size` elements up to isomorphism, assuming every such
/// module is a direct sum of cyclic modules `R/Ra` (true for `Z/n` and for `F2[x]/(x²)`).
/// Ordered by size, then by the multiset of summands.
pub fn small_modules(ring: &FiniteRing, max_size: usize) -> Vec<FiniteModule> {
    let types = cyclic_types(ring);
    let mut out: Vec<FiniteModule> = vec![FiniteModule::zero_module(ring)];
    // multisets of summand indices, non-decreasing
    fn extend(ring: &FiniteRing, types: &[FiniteModule], start: usize, size: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<FiniteModule>) {
        for i in start..types.len() {
            let s = size * types[i].size();
            if s > max {
                continue;
            }
            acc.push(i);
            let parts: Vec<&FiniteModule> = acc.iter().map(|&j| &types[j]).collect();
            let m = if parts.len() == 1 { parts[0].clone() } else { FiniteModule::direct_sum(ring, &parts).expect("small sum") };
            if !out.iter().any(|d| find_isomorphism(d, &m).is_some()) {
                out.push(m);
            }
            extend(ring, types, i, s, max, acc, out);
            acc.pop();
        }
    }
    extend(ring, &types, 0, 1, max_size, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| m.size());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpp::module::for_each_hom;

    #[test]
    fn corpus_sizes() {
        for ring in test_rings() {
            let c = small_modules(&ring, 16);
            assert_eq!(c.len(), 9, "{}", ring.name());
            let sizes: Vec<usize> = c.iter().map(|m| m.size()).collect();
            assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    /// Over `F2[x]/(x²)` a module is an elementary abelian 2-group with a square-zero
    /// endomorphism for `x`; enumerate those directly and compare counts.
    #[test]
    fn dual_numbers_match_direct_enumeration() {
        let ring = FiniteRing::f2_dual();
        let corpus = small_modules(&ring, 8);
        let mut classes: Vec<FiniteModule> = Vec::new();
        for k in 0..=3u32 {
            let n = 1usize << k;
            let add: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| a ^ b).collect()).collect();
            let z = ring.zero();
            let group = FiniteModule::new_unchecked(&FiniteRing::zn(2), add.clone(), vec![vec![0; n], (0..n).collect()], z);
            let mut endos = Vec::new();
            for_each_hom(&group, &group, &mut |t| {
                if (0..n).all(|v| t[t[v]] == 0) {
                    endos.push(t.to_vec());
                }
                true
            });
            for x in endos {
                // label a + 2b acts as a·id + b·x
                let act = (0..4).map(|r| (0..n).map(|v| (if r & 1 == 1 { v } else { 0 }) ^ (if r & 2 == 2 { x[v] } else { 0 })).collect()).collect();
                let m = FiniteModule::new(&ring, add.clone(), act, 0).unwrap();
                if !classes.iter().any(|c| find_isomorphism(c, &m).is_some()) {
                    classes.push(m);
                }
            }
        }
        assert_eq!(classes.len(), corpus.len());
        for c in &classes {
            assert!(corpus.iter().any(|m| find_isomorphism(m, c).is_some()));
        }
    }
}

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::modpp::{homs, DirectedPoset, FiniteModule, FiniteRing, LinearPp, ModuleDiagram, ModuleMap, PpPair};
use crate::ppcat::{PpCategory, PpMorphism, PpObject};

/// Random formula with `free` free variables and a coefficient matrix of at most
/// `max_dim × max_dim` (at least `free` columns).
pub fn random_linear_pp(rng: &mut ChaCha8Rng, ring: &FiniteRing, free: usize, max_dim: usize) -> LinearPp {
    let bound = rng.gen_range(0..=max_dim.saturating_sub(free));
    let rows = rng.gen_range(1..=max_dim);
    let matrix = (0..rows).map(|_| (0..free + bound).map(|_| rng.gen_range(0..ring.size())).collect()).collect();
    LinearPp::new(ring, free, bound, matrix).expect("entries in range")
}

/// A pair `(φ, ψ)` of equal arity with matrices at most `3 × 3`. A third of the pairs are
/// independent, a third have `φ` built from `ψ` by adding a row, and a third the converse.
pub fn random_implication_pair(rng: &mut ChaCha8Rng, ring: &FiniteRing) -> (LinearPp, LinearPp) {
    let n = rng.gen_range(1..=2);
    match rng.gen_range(0..3) {
        0 => (random_linear_pp(rng, ring, n, 3), random_linear_pp(rng, ring, n, 3)),
        k => {
            let small = loop {
                let p = random_linear_pp(rng, ring, n, 3);
                if p.rows().len() < 3 {
                    break p;
                }
            };
            let extra: Vec<usize> = (0..small.width()).map(|_| rng.gen_range(0..ring.size())).collect();
            let mut rows = small.rows().to_vec();
            rows.push(extra);
            let big = LinearPp::new(ring, n, small.bound(), rows).expect("entries in range");
            if k == 1 {
                (big, small)
            } else {
                (small, big)
            }
        }
    }
}

/// One or two unary pairs `φ ⊢ φ + α`.
pub fn random_theory(rng: &mut ChaCha8Rng, ring: &FiniteRing) -> Vec<PpPair> {
    let k = rng.gen_range(1..=2);
    (0..k)
        .map(|_| {
            let phi = random_linear_pp(rng, ring, 1, 3).simplify(ring);
            let alpha = random_linear_pp(rng, ring, 1, 3);
            let psi = LinearPp::sum(ring, &phi, &alpha).expect("same arity").simplify(ring);
            PpPair::new(ring, phi, psi).expect("φ entails φ + α")
        })
        .collect()
}

/// `upper/(upper ∧ γ)` with both formulas random.
pub fn random_pp_object(rng: &mut ChaCha8Rng, c: &PpCategory, arity: usize) -> PpObject {
    let ring = c.ring();
    let upper = random_linear_pp(rng, ring, arity, 3).simplify(ring);
    let gamma = random_linear_pp(rng, ring, arity, 3);
    let lower = LinearPp::and(ring, &upper, &gamma).expect("same arity").simplify(ring);
    c.object(upper, lower).expect("lower entails upper")
}

/// `x̄′ = A x̄` as a formula in `x̄ x̄′`.
fn linear_graph(ring: &FiniteRing, a: &[Vec<usize>], n: usize) -> LinearPp {
    let rows = a
        .iter()
        .enumerate()
        .map(|(i, coeffs)| {
            let mut row: Vec<usize> = coeffs.iter().map(|&c| ring.neg(c)).collect();
            row.extend((0..a.len()).map(|j| if i == j { ring.one() } else { ring.zero() }));
            row
        })
        .collect();
    LinearPp::new(ring, n + a.len(), 0, rows).expect("entries in range")
}

/// `∃x̄ (φ(x̄) ∧ x̄′ = A x̄)` in `x̄′`.
fn image(ring: &FiniteRing, graph: &LinearPp, phi: &LinearPp, n: usize, k: usize) -> LinearPp {
    let all: Vec<usize> = (0..n + k).collect();
    let xs: Vec<usize> = (0..n).collect();
    let ys: Vec<usize> = (n..n + k).collect();
    LinearPp::conjoin(ring, n + k, &[(graph, &all), (phi, &xs)]).project(&ys).simplify(ring)
}

/// A morphism out of `source` induced by a random matrix `A`: the target is
/// `(A·upper + α)/(A·lower + (α ∧ γ))` and the graph is `x̄′ = A x̄`.
pub fn random_pp_morphism(rng: &mut ChaCha8Rng, c: &PpCategory, source: &PpObject) -> PpMorphism {
    let ring = c.ring();
    let n = source.arity();
    let k = rng.gen_range(1..=2);
    let a: Vec<Vec<usize>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..ring.size())).collect()).collect();
    let graph = linear_graph(ring, &a, n);
    let alpha = random_linear_pp(rng, ring, k, 3);
    let gamma = random_linear_pp(rng, ring, k, 3);
    let upper = LinearPp::sum(ring, &image(ring, &graph, source.upper(), n, k), &alpha).expect("arity").simplify(ring);
    let small = LinearPp::and(ring, &alpha, &gamma).expect("arity");
    let lower = LinearPp::sum(ring, &image(ring, &graph, source.lower(), n, k), &small).expect("arity").simplify(ring);
    let built = c.object(upper, lower).ok().and_then(|target| c.morphism(source, &target, &graph).ok());
    built.unwrap_or_else(|| c.zero_morphism(source, &c.zero_object(k)))
}

/// A diagram over `poset` with modules drawn from `modules` and random maps on covers.
/// Falls back to zero maps when no functorial choice turns up.
pub fn random_module_diagram(rng: &mut ChaCha8Rng, poset: &DirectedPoset, modules: &[FiniteModule]) -> ModuleDiagram {
    let chosen: Vec<FiniteModule> = (0..poset.len()).map(|_| modules.choose(rng).expect("non-empty corpus").clone()).collect();
    let covers = poset.covers();
    let hom_lists: BTreeMap<(usize, usize), Vec<Vec<usize>>> =
        covers.iter().map(|&(a, b)| ((a, b), homs(&chosen[a], &chosen[b]))).collect();
    for _ in 0..20 {
        let maps: BTreeMap<(usize, usize), ModuleMap> = covers
            .iter()
            .map(|&(a, b)| {
                let t = hom_lists[&(a, b)].choose(rng).expect("the zero map exists").clone();
                ((a, b), ModuleMap::new(&chosen[a], &chosen[b], t).expect("enumerated hom"))
            })
            .collect();
        if let Ok(d) = ModuleDiagram::from_covers(poset.clone(), chosen.clone(), &maps) {
            return d;
        }
    }
    let zeros: BTreeMap<(usize, usize), ModuleMap> = covers
        .iter()
        .map(|&(a, b)| {
            let t = vec![chosen[b].zero(); chosen[a].size()];
            ((a, b), ModuleMap::new(&chosen[a], &chosen[b], t).expect("zero map"))
        })
        .collect();
    ModuleDiagram::from_covers(poset.clone(), chosen, &zeros).expect("zero maps compose functorially")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpp::{pp_implies, small_modules};
    use rand::SeedableRng;

    #[test]
    fn generated_pairs_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ring = FiniteRing::zn(4);
        for _ in 0..200 {
            let (p, q) = random_implication_pair(&mut rng, &ring);
            assert_eq!(p.free(), q.free());
            for f in [&p, &q] {
                assert!(f.rows().len() <= 3 && f.width() <= 3);
            }
        }
    }

    #[test]
    fn generated_morphisms_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = PpCategory::new(FiniteRing::zn(4));
        for _ in 0..30 {
            let x = random_pp_object(&mut rng, &c, 1);
            let f = random_pp_morphism(&mut rng, &c, &x);
            assert_eq!(f.source(), &x);
            assert!(pp_implies(c.ring(), f.target().lower(), f.target().upper()).unwrap());
        }
    }

    #[test]
    fn diagrams_are_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ring = FiniteRing::zn(4);
        let corpus = small_modules(&ring, 8);
        let diamond = DirectedPoset::new(vec![
            vec![true, true, true, true],
            vec![false, true, false, true],
            vec![false, false, true, true],
            vec![false, false, false, true],
        ])
        .unwrap();
        for _ in 0..10 {
            let d = random_module_diagram(&mut rng, &diamond, &corpus);
            assert_eq!(d.modules().len(), 4);
        }
    }
}

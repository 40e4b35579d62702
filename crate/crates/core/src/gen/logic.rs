use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::reglogic::{homomorphisms, FinStructure, Formula, FunSymbol, Signature, StructureMorphism, Term, Var};

/// One sort, a binary relation `E` and a unary function `f`.
pub fn formula_signature() -> Signature {
    let mut sig = Signature::one_sorted(&[("E", 2)]);
    sig.functions.push(FunSymbol { name: "f".into(), args: vec![0], result: 0 });
    sig
}

/// One sort and a binary relation `E`.
pub fn digraph_signature() -> Signature {
    Signature::one_sorted(&[("E", 2)])
}

fn random_term(rng: &mut ChaCha8Rng, scope: &[String], depth: usize) -> Term {
    if depth > 0 && rng.gen_bool(0.3) {
        Term::App("f".into(), vec![random_term(rng, scope, depth - 1)])
    } else {
        Term::Var(scope.choose(rng).expect("non-empty scope").clone())
    }
}

fn random_body(rng: &mut ChaCha8Rng, scope: &mut Vec<String>, fresh: &mut usize, depth: usize) -> Formula {
    let choice = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..6) };
    match choice {
        0 => Formula::Rel("E".into(), vec![random_term(rng, scope, 2), random_term(rng, scope, 2)]),
        1 => Formula::Eq(random_term(rng, scope, 2), random_term(rng, scope, 2)),
        2 if rng.gen_bool(0.2) => Formula::True,
        2 => Formula::Rel("E".into(), vec![random_term(rng, scope, 1), random_term(rng, scope, 1)]),
        3 | 4 => {
            let a = random_body(rng, scope, fresh, depth - 1);
            let b = random_body(rng, scope, fresh, depth - 1);
            Formula::and(a, b)
        }
        _ => {
            // reuse a visible name now and then to exercise shadowing
            let name = if rng.gen_bool(0.25) {
                scope.choose(rng).expect("non-empty scope").clone()
            } else {
                *fresh += 1;
                format!("u{fresh}")
            };
            scope.push(name.clone());
            let body = random_body(rng, scope, fresh, depth - 1);
            scope.pop();
            Formula::Exists(vec![Var::new(&name, 0)], Box::new(body))
        }
    }
}

/// A random regular formula over [`formula_signature`] with free variables among `x, y`.
pub fn random_formula(rng: &mut ChaCha8Rng) -> (Formula, Vec<Var>) {
    let free: Vec<Var> = if rng.gen_bool(0.5) { vec![Var::new("x", 0)] } else { vec![Var::new("x", 0), Var::new("y", 0)] };
    let mut scope: Vec<String> = free.iter().map(|v| v.name.clone()).collect();
    let mut fresh = 0;
    let depth = rng.gen_range(1..=3);
    (random_body(rng, &mut scope, &mut fresh, depth), free)
}

/// Every structure for [`formula_signature`] with `1..=max` elements.
pub fn formula_structures(max: usize) -> Vec<FinStructure> {
    let sig = formula_signature();
    let mut out = Vec::new();
    for n in 1..=max {
        let pairs = n * n;
        for edges in 0u32..(1 << pairs) {
            let e: Vec<Vec<usize>> = (0..pairs).filter(|k| edges >> k & 1 == 1).map(|k| vec![k / n, k % n]).collect();
            let mut f = vec![0usize; n];
            loop {
                let graph = f.iter().enumerate().map(|(a, &b)| vec![a, b]).collect();
                out.push(FinStructure::new(&sig, vec![n], vec![e.clone(), graph]).expect("valid structure"));
                let mut i = 0;
                while i < n {
                    f[i] += 1;
                    if f[i] < n {
                        break;
                    }
                    f[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }
    out
}

/// Every digraph on `0..=max` labelled vertices.
pub fn digraphs(max: usize) -> Vec<FinStructure> {
    let sig = digraph_signature();
    let mut out = Vec::new();
    for n in 0..=max {
        let pairs = n * n;
        for edges in 0u32..(1 << pairs) {
            let e = (0..pairs).filter(|k| edges >> k & 1 == 1).map(|k| vec![k / n, k % n]).collect();
            out.push(FinStructure::new(&sig, vec![n], vec![e]).expect("valid digraph"));
        }
    }
    out
}

fn random_digraph(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> FinStructure {
    let n = rng.gen_range(lo..=hi);
    let e = (0..n * n).filter(|_| rng.gen_bool(0.35)).map(|k| vec![k / n, k % n]).collect();
    FinStructure::new(&digraph_signature(), vec![n], vec![e]).expect("valid digraph")
}

/// A random digraph homomorphism `A → B` with `|A| ≤ 2` and `|B| ≤ 3`.
pub fn random_digraph_morphism(rng: &mut ChaCha8Rng) -> StructureMorphism {
    loop {
        let a = random_digraph(rng, 1, 2);
        let b = random_digraph(rng, 1, 3);
        let homs = homomorphisms(&a, &b);
        if let Some(h) = homs.choose(rng) {
            return StructureMorphism::new(a, b, h.clone()).expect("enumerated homomorphism");
        }
    }
}

/// One to three random digraph homomorphisms.
pub fn random_morphism_set(rng: &mut ChaCha8Rng) -> Vec<StructureMorphism> {
    let k = rng.gen_range(1..=3);
    (0..k).map(|_| random_digraph_morphism(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn structure_counts() {
        assert_eq!(digraphs(2).len(), 1 + 2 + 16);
        assert_eq!(formula_structures(2).len(), 2 + 16 * 4);
    }

    #[test]
    fn formulas_mention_only_scope() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (f, free) = random_formula(&mut rng);
            let names: Vec<String> = free.iter().map(|v| v.name.clone()).collect();
            assert!(f.free_vars().iter().all(|v| names.contains(v)));
        }
    }
}

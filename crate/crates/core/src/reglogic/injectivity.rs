use thiserror::Error;

use super::normal::relational_signature;
use super::semantics::FinStructure;
use super::syntax::{Formula, Sequent, Signature, Term, Theory, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("structures have different shapes")]
    ShapeMismatch,
    #[error("map for sort {sort} has the wrong length or leaves the carrier")]
    BadMap { sort: usize },
    #[error("tuple {tuple:?} of relation {relation} is not preserved")]
    NotPreserved { relation: usize, tuple: Vec<usize> },
}

/// A homomorphism of finite structures, one map per sort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMorphism {
    source: FinStructure,
    target: FinStructure,
    maps: Vec<Vec<usize>>,
}

impl StructureMorphism {
    pub fn new(source: FinStructure, target: FinStructure, maps: Vec<Vec<usize>>) -> Result<Self, MorphismError> {
        if !same_shape(&source, &target) || maps.len() != source.sizes().len() {
            return Err(MorphismError::ShapeMismatch);
        }
        for (s, m) in maps.iter().enumerate() {
            if m.len() != source.sizes()[s] || m.iter().any(|&v| v >= target.sizes()[s]) {
                return Err(MorphismError::BadMap { sort: s });
            }
        }
        for r in 0..source.num_relations() {
            for t in source.tuples(r) {
                if !target.holds(r, &apply(&maps, source.arity(r), t)) {
                    return Err(MorphismError::NotPreserved { relation: r, tuple: t.clone() });
                }
            }
        }
        Ok(StructureMorphism { source, target, maps })
    }

    pub fn identity(a: &FinStructure) -> Self {
        let maps = a.sizes().iter().map(|&n| (0..n).collect()).collect();
        StructureMorphism { source: a.clone(), target: a.clone(), maps }
    }

    pub fn source(&self) -> &FinStructure {
        &self.source
    }

    pub fn target(&self) -> &FinStructure {
        &self.target
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }
}

fn same_shape(a: &FinStructure, b: &FinStructure) -> bool {
    a.sizes().len() == b.sizes().len()
        && a.num_relations() == b.num_relations()
        && (0..a.num_relations()).all(|r| a.arity(r) == b.arity(r))
}

fn apply(maps: &[Vec<usize>], sorts: &[usize], t: &[usize]) -> Vec<usize> {
    t.iter().zip(sorts).map(|(&v, &s)| maps[s][v]).collect()
}

/// Backtracking search for homomorphisms `a → b` extending the partial assignment `fixed`.
/// `visit` returns `false` to stop early.
pub fn for_each_homomorphism(
    a: &FinStructure,
    b: &FinStructure,
    fixed: &[Vec<Option<usize>>],
    visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) {
    if !same_shape(a, b) {
        return;
    }
    let order: Vec<(usize, usize)> =
        a.sizes().iter().enumerate().flat_map(|(s, &n)| (0..n).map(move |i| (s, i))).collect();
    let pos = |s: usize, i: usize| a.sizes()[..s].iter().sum::<usize>() + i;
    // each tuple is checked once its last element in `order` gets a value
    let mut due: Vec<Vec<(usize, &Vec<usize>)>> = vec![Vec::new(); order.len()];
    for r in 0..a.num_relations() {
        for t in a.tuples(r) {
            let last = t.iter().zip(a.arity(r)).map(|(&v, &s)| pos(s, v)).max();
            match last {
                Some(k) => due[k].push((r, t)),
                None => {
                    if !b.holds(r, &[]) {
                        return;
                    }
                }
            }
        }
    }
    let mut maps: Vec<Vec<usize>> = a.sizes().iter().map(|&n| vec![0; n]).collect();
    fn go(
        k: usize,
        order: &[(usize, usize)],
        due: &[Vec<(usize, &Vec<usize>)>],
        a: &FinStructure,
        b: &FinStructure,
        fixed: &[Vec<Option<usize>>],
        maps: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
    ) -> bool {
        if k == order.len() {
            return visit(maps);
        }
        let (s, i) = order[k];
        let choices: Vec<usize> = match fixed.get(s).and_then(|f| f.get(i)).copied().flatten() {
            Some(v) => vec![v],
            None => (0..b.sizes()[s]).collect(),
        };
        for v in choices {
            maps[s][i] = v;
            if due[k].iter().all(|&(r, t)| b.holds(r, &apply(maps, a.arity(r), t))) && !go(k + 1, order, due, a, b, fixed, maps, visit) {
                return false;
            }
        }
        true
    }
    go(0, &order, &due, a, b, fixed, &mut maps, visit);
}

pub fn homomorphisms(a: &FinStructure, b: &FinStructure) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_homomorphism(a, b, &[], &mut |m| {
        out.push(m.to_vec());
        true
    });
    out
}

/// Every homomorphism `A → K` factors through `h: A → B`.
pub fn is_injective(k: &FinStructure, h: &StructureMorphism) -> bool {
    let (a, b) = (&h.source, &h.target);
    if !same_shape(a, k) {
        return false;
    }
    let mut ok = true;
    for_each_homomorphism(a, k, &[], &mut |g| {
        // prescribe the extension on the image of h; collisions with different values fail
        let mut fixed: Vec<Vec<Option<usize>>> = b.sizes().iter().map(|&n| vec![None; n]).collect();
        for (s, m) in h.maps.iter().enumerate() {
            for (x, &y) in m.iter().enumerate() {
                match fixed[s][y] {
                    Some(v) if v != g[s][x] => {
                        ok = false;
                        return false;
                    }
                    _ => fixed[s][y] = Some(g[s][x]),
                }
            }
        }
        let mut found = false;
        for_each_homomorphism(b, k, &fixed, &mut |_| {
            found = true;
            false
        });
        ok = found;
        found
    });
    ok
}

/// One sequent per morphism `h: A → B`: `∀x̄ (diag_A(x̄) ⇒ ∃ȳ diag_B(h x̄, ȳ))`, where `x̄` names
/// the elements of `A` and `ȳ` the elements of `B` outside the image of `h`.
pub fn theory_from_injectivity(sig: &Signature, ms: &[StructureMorphism]) -> Theory {
    let rsig = relational_signature(sig);
    let mut sequents = Vec::new();
    for h in ms {
        let (a, b) = (&h.source, &h.target);
        let mut xs = Vec::new();
        let mut xname: Vec<Vec<String>> = Vec::new();
        for (s, &n) in a.sizes().iter().enumerate() {
            let mut names = Vec::new();
            for _ in 0..n {
                let name = format!("x{}", xs.len());
                xs.push(Var::new(&name, s));
                names.push(name);
            }
            xname.push(names);
        }
        let diagram = |m: &FinStructure, names: &[Vec<String>]| {
            Formula::conj((0..m.num_relations()).flat_map(|r| {
                let sorts = m.arity(r).to_vec();
                let name = rsig.relations[r].name.clone();
                m.tuples(r)
                    .iter()
                    .map(|t| {
                        Formula::Rel(name.clone(), t.iter().zip(&sorts).map(|(&v, &s)| Term::Var(names[s][v].clone())).collect())
                    })
                    .collect::<Vec<_>>()
            }))
        };
        let lhs = diagram(a, &xname);
        let mut ys = Vec::new();
        let mut bname: Vec<Vec<Option<String>>> = b.sizes().iter().map(|&n| vec![None; n]).collect();
        let mut collisions = Vec::new();
        for (s, m) in h.maps.iter().enumerate() {
            for (x, &y) in m.iter().enumerate() {
                match &bname[s][y] {
                    Some(prev) => collisions.push(Formula::Eq(Term::Var(prev.clone()), Term::Var(xname[s][x].clone()))),
                    None => bname[s][y] = Some(xname[s][x].clone()),
                }
            }
        }
        let mut next_y = 0;
        let bnames: Vec<Vec<String>> = bname
            .into_iter()
            .enumerate()
            .map(|(s, col)| {
                col.into_iter()
                    .map(|n| {
                        n.unwrap_or_else(|| {
                            let name = format!("y{next_y}");
                            next_y += 1;
                            ys.push(Var::new(&name, s));
                            name
                        })
                    })
                    .collect()
            })
            .collect();
        let body = Formula::conj(std::iter::once(diagram(b, &bnames)).chain(collisions).filter(|f| *f != Formula::True));
        sequents.push(Sequent { vars: xs, lhs, rhs: Formula::exists(ys, body) });
    }
    Theory { signature: rsig, sequents }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reglogic::semantics::models;

    fn sig() -> Signature {
        Signature::one_sorted(&[("E", 2)])
    }

    fn g(n: usize, edges: &[(usize, usize)]) -> FinStructure {
        FinStructure::new(&sig(), vec![n], vec![edges.iter().map(|&(a, b)| vec![a, b]).collect()]).unwrap()
    }

    fn point_to_edge() -> StructureMorphism {
        StructureMorphism::new(g(1, &[]), g(2, &[(0, 1)]), vec![vec![0]]).unwrap()
    }

    #[test]
    fn iso_is_always_injective() {
        let a = g(2, &[(0, 1)]);
        let h = StructureMorphism::identity(&a);
        assert!(is_injective(&g(3, &[]), &h));
        assert!(is_injective(&g(1, &[(0, 0)]), &h));
    }

    #[test]
    fn point_to_edge_examples() {
        let h = point_to_edge();
        assert!(!is_injective(&g(2, &[]), &h));
        assert!(is_injective(&g(1, &[(0, 0)]), &h));
        assert!(is_injective(&g(0, &[]), &h));
        let t = theory_from_injectivity(&sig(), &[h]);
        assert_eq!(t.to_string().lines().last(), Some("forall x0: T => exists y0: E(x0,y0)"));
    }

    #[test]
    fn homomorphisms_preserve_edges() {
        assert_eq!(homomorphisms(&g(2, &[(0, 1)]), &g(2, &[(0, 1)])).len(), 1);
        assert_eq!(homomorphisms(&g(2, &[]), &g(3, &[])).len(), 9);
        assert!(StructureMorphism::new(g(2, &[(0, 1)]), g(2, &[]), vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn collisions_become_equalities() {
        let h = StructureMorphism::new(g(2, &[]), g(1, &[]), vec![vec![0, 0]]).unwrap();
        let t = theory_from_injectivity(&sig(), std::slice::from_ref(&h));
        for k in [g(1, &[]), g(2, &[]), g(3, &[(0, 1)])] {
            assert_eq!(models(&t, &k), Ok(is_injective(&k, &h)));
        }
        assert!(!is_injective(&g(2, &[]), &h));
    }

    #[test]
    fn empty_set_gives_empty_theory() {
        let t = theory_from_injectivity(&sig(), &[]);
        assert!(t.sequents.is_empty());
        assert_eq!(models(&t, &g(2, &[(1, 0)])), Ok(true));
    }
}

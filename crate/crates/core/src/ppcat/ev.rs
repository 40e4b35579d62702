use std::collections::HashMap;

use super::category::{PpCatError, PpMorphism, PpObject};
use crate::modpp::{pp_solution_set, pp_subgroup, FiniteModule, Howell, PpError, SolutionSet};

/// `upper(M)/lower(M)`: cosets labelled `0..order`, the zero coset first.
#[derive(Clone, Debug)]
pub struct EvGroup {
    upper: SolutionSet,
    coset: HashMap<usize, usize>,
    reps: Vec<usize>,
}

impl EvGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Coset of a tuple of `upper(M)`.
    pub fn coset_of(&self, tuple: &[usize]) -> Option<usize> {
        self.coset.get(&self.upper.encode(tuple)).copied()
    }

    pub fn representative(&self, c: usize) -> Vec<usize> {
        self.upper.decode(self.reps[c])
    }
}

fn add_codes(m: &FiniteModule, arity: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
    (0..arity).map(|i| m.add(a[i], b[i])).collect()
}

pub fn ev_object(m: &FiniteModule, x: &PpObject) -> Result<EvGroup, PpError> {
    let upper = pp_solution_set(m, x.upper())?;
    let lower = pp_solution_set(m, x.lower())?;
    let n = x.arity();
    let lows: Vec<Vec<usize>> = lower.tuples().collect();
    let mut coset = HashMap::new();
    let mut reps = Vec::new();
    // zero coset first: the lower set itself
    let zero = vec![m.zero(); n];
    let order_codes = std::iter::once(upper.encode(&zero)).chain(upper.codes().iter().copied());
    for code in order_codes {
        if coset.contains_key(&code) {
            continue;
        }
        let t = upper.decode(code);
        let label = reps.len();
        reps.push(code);
        for l in &lows {
            coset.insert(upper.encode(&add_codes(m, n, &t, l)), label);
        }
    }
    Ok(EvGroup { upper, coset, reps })
}

/// The induced homomorphism of coset groups, as a table on coset labels.
#[derive(Clone, Debug)]
pub struct EvMap {
    pub source: EvGroup,
    pub target: EvGroup,
    pub table: Vec<usize>,
    /// Every related pair lands in a single coset and the map is additive.
    pub well_defined: bool,
}

impl EvMap {
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.table.iter().for_each(|&y| seen[y] = true);
        seen.iter().all(|&b| b)
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&c| self.table[c] == 0).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.table.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub fn ev_morphism(m: &FiniteModule, f: &PpMorphism) -> Result<EvMap, PpCatError> {
    let source = ev_object(m, f.source())?;
    let target = ev_object(m, f.target())?;
    let graph = pp_solution_set(m, f.graph())?;
    let n = f.source().arity();
    let mut table: Vec<Option<usize>> = vec![None; source.order()];
    let mut well_defined = true;
    for t in graph.tuples() {
        let (a, b) = t.split_at(n);
        match (source.coset_of(a), target.coset_of(b)) {
            (Some(ca), Some(cb)) => well_defined &= *table[ca].get_or_insert(cb) == cb,
            _ => well_defined = false,
        }
    }
    well_defined &= table.iter().all(|c| c.is_some());
    let table: Vec<usize> = table.into_iter().map(|c| c.unwrap_or(0)).collect();
    if well_defined {
        let k = f.target().arity();
        for x in 0..source.order() {
            for y in 0..source.order() {
                let s = source.coset_of(&add_codes(m, n, &source.representative(x), &source.representative(y))).expect("closed");
                let t = target.coset_of(&add_codes(m, k, &target.representative(table[x]), &target.representative(table[y]))).expect("closed");
                well_defined &= table[s] == t;
            }
        }
    }
    Ok(EvMap { source, target, table, well_defined })
}

/// Shape of `ev_M f` computed on subgroups instead of tuples, so it scales to arities
/// whose tuple spaces cannot be swept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvSummary {
    pub source_order: u128,
    pub target_order: u128,
    /// The graph lies in `upper × upper`, is total and single valued modulo the lower sets.
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
}

/// `{b : (a, b) ∈ g, a ∈ low}` for `g` in `(Z/e)^(k+rest)` and `low` in `(Z/e)^k`.
fn fibre_over(g: &Howell, k: usize, low: &Howell) -> Howell {
    let dim = g.dim();
    let gens = g.generators().map(<[u64]>::to_vec).chain(low.generators().map(|l| {
        let mut v = l.to_vec();
        v.resize(dim, 0);
        v
    }));
    Howell::new(g.modulus(), dim - k, Howell::new(g.modulus(), dim, gens).tail_from(k))
}

/// Projection of `g` to its last coordinates plus `low`.
fn image_plus(g: &Howell, k: usize, low: &Howell) -> Howell {
    let gens = g.generators().map(|v| v[k..].to_vec()).chain(low.generators().map(<[u64]>::to_vec));
    Howell::new(g.modulus(), g.dim() - k, gens)
}

fn swap_blocks(g: &Howell, k: usize) -> Howell {
    Howell::new(g.modulus(), g.dim(), g.generators().map(|v| [&v[k..], &v[..k]].concat()))
}

pub fn ev_summary(m: &FiniteModule, f: &PpMorphism) -> Result<EvSummary, PpCatError> {
    let (s, t) = (f.source(), f.target());
    let (us, ls) = (pp_subgroup(m, s.upper())?, pp_subgroup(m, s.lower())?);
    let (ut, lt) = (pp_subgroup(m, t.upper())?, pp_subgroup(m, t.lower())?);
    let g = pp_subgroup(m, f.graph())?;
    let k = us.dim();
    let inside = g.generators().all(|v| us.contains(&v[..k]) && ut.contains(&v[k..]));
    let total = image_plus(&swap_blocks(&g, k), g.dim() - k, &ls).includes(&us);
    let single = lt.includes(&fibre_over(&g, k, &ls));
    Ok(EvSummary {
        source_order: us.order() / ls.order(),
        target_order: ut.order() / lt.order(),
        well_defined: inside && total && single,
        injective: ls.includes(&fibre_over(&swap_blocks(&g, k), g.dim() - k, &lt)),
        surjective: image_plus(&g, k, &lt).includes(&ut),
    })
}

/// Does `ι` evaluate to an injection onto the kernel of `ev f`?
pub fn kernel_exact(m: &FiniteModule, f: &PpMorphism, incl: &PpMorphism) -> Result<bool, PpCatError> {
    let ef = ev_morphism(m, f)?;
    let ei = ev_morphism(m, incl)?;
    Ok(ef.well_defined && ei.well_defined && ei.is_injective() && ei.image() == ef.kernel())
}

/// Does `π` evaluate to a surjection whose kernel is the image of `ev f`?
pub fn cokernel_exact(m: &FiniteModule, f: &PpMorphism, proj: &PpMorphism) -> Result<bool, PpCatError> {
    let ef = ev_morphism(m, f)?;
    let ep = ev_morphism(m, proj)?;
    Ok(ef.well_defined && ep.well_defined && ep.is_surjective() && ep.kernel() == ef.image())
}

/// `X` vanishes on every generator.
pub fn serre_membership(generators: &[FiniteModule], x: &PpObject) -> Result<bool, PpError> {
    for m in generators {
        if ev_object(m, x)?.order() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpp::{FiniteRing, LinearPp};
    use crate::ppcat::PpCategory;

    fn pp(ring: &FiniteRing, s: &str) -> LinearPp {
        LinearPp::parse(ring, s, Some(&["x".to_string()])).unwrap().0
    }

    #[test]
    fn evaluation_examples() {
        let z4 = FiniteRing::zn(4);
        let c = PpCategory::new(z4.clone());
        let div = c.object(pp(&z4, "E y: x = 2*y"), pp(&z4, "x = 0")).unwrap();
        let r = FiniteModule::regular(&z4);
        let two = FiniteModule::cyclic(&z4, 2);
        assert_eq!(ev_object(&r, &div).unwrap().order(), 2);
        assert_eq!(ev_object(&two, &div).unwrap().order(), 1);
        assert_eq!(ev_object(&r, &c.zero_object(1)).unwrap().order(), 1);
        let x = c.object(pp(&z4, "E y: x = 2*y"), pp(&z4, "2*x = 0")).unwrap();
        assert!(serre_membership(&[r.clone()], &x).unwrap());
        assert!(!serre_membership(&[two.clone()], &x).unwrap());
        assert!(serre_membership(&[two], &c.zero_object(1)).unwrap());
    }

    #[test]
    fn summary_matches_tables() {
        use crate::gen::{random_pp_morphism, random_pp_object};
        use crate::modpp::{small_modules, test_rings};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for ring in test_rings() {
            let c = PpCategory::new(ring.clone());
            let modules = small_modules(&ring, 16);
            for _ in 0..15 {
                let arity = rng.gen_range(1..=2);
                let x = random_pp_object(&mut rng, &c, arity);
                let f = random_pp_morphism(&mut rng, &c, &x);
                for m in &modules {
                    let Ok(e) = ev_morphism(m, &f) else { continue };
                    let s = ev_summary(m, &f).unwrap();
                    assert_eq!((s.source_order, s.target_order), (e.source.order() as u128, e.target.order() as u128));
                    assert_eq!(s.well_defined, e.well_defined);
                    if e.well_defined {
                        assert_eq!((s.injective, s.surjective), (e.is_injective(), e.is_surjective()));
                    }
                }
            }
        }
    }

    #[test]
    fn exactness_of_doubling() {
        let z4 = FiniteRing::zn(4);
        let c = PpCategory::new(z4.clone());
        let a = c.object(pp(&z4, "x = x"), pp(&z4, "x = 0")).unwrap();
        let g = LinearPp::parse(&z4, "x' = 2*x", Some(&["x".to_string(), "x'".to_string()])).unwrap().0;
        let f = c.morphism(&a, &a, &g).unwrap();
        let (_, incl) = c.kernel(&f).unwrap();
        let (_, proj) = c.cokernel(&f).unwrap();
        for spec in ["R", "R/(2)", "R + R/(2)"] {
            let m = FiniteModule::parse_spec(&z4, spec).unwrap();
            assert!(kernel_exact(&m, &f, &incl).unwrap());
            assert!(cokernel_exact(&m, &f, &proj).unwrap());
        }
        let e = ev_morphism(&FiniteModule::regular(&z4), &f).unwrap();
        assert_eq!((e.kernel().len(), e.image().len()), (2, 2));
    }
}

use std::collections::HashMap;

use super::abelian::Howell;
use super::formula::{LinearPp, PpError};
use super::module::FiniteModule;
use super::ring::FiniteRing;

/// Largest tuple space `|M|^n` swept by [`pp_solution_set`].
pub const MAX_TUPLE_SPACE: usize = 1 << 24;
/// Largest free realization built as an explicit table.
pub const MAX_REALIZATION: usize = 1 << 10;

/// A subgroup of `M^n`, stored as sorted mixed-radix codes (last coordinate fastest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    base: usize,
    arity: usize,
    codes: Vec<usize>,
}

impl SolutionSet {
    pub fn from_codes(base: usize, arity: usize, mut codes: Vec<usize>) -> Self {
        codes.sort_unstable();
        codes.dedup();
        SolutionSet { base, arity, codes }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[usize] {
        &self.codes
    }

    pub fn encode(&self, t: &[usize]) -> usize {
        encode(self.base, t)
    }

    pub fn decode(&self, code: usize) -> Vec<usize> {
        decode(self.base, self.arity, code)
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.codes.binary_search(&encode(self.base, t)).is_ok()
    }

    pub fn contains_code(&self, code: usize) -> bool {
        self.codes.binary_search(&code).is_ok()
    }

    pub fn is_subset(&self, other: &SolutionSet) -> bool {
        self.codes.iter().all(|&c| other.contains_code(c))
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.codes.iter().map(|&c| self.decode(c))
    }
}

pub(crate) fn encode(base: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * base + x)
}

pub(crate) fn decode(base: usize, arity: usize, mut code: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for i in (0..arity).rev() {
        out[i] = code % base;
        code /= base;
    }
    out
}

fn embed_module(m: &FiniteModule, e: u64, xs: &[usize]) -> Vec<u64> {
    let mut v = Vec::with_capacity(xs.len() * m.basis().rank());
    for &x in xs {
        m.basis().embed_into(x, e, &mut v);
    }
    v
}

fn linear_combination(m: &FiniteModule, row: &[usize], xs: &[usize]) -> usize {
    row.iter().zip(xs).fold(m.zero(), |acc, (&a, &x)| m.add(acc, m.act(a, x)))
}

/// `φ(M) ⊆ Mⁿ`. Bound variables are eliminated through the image of their coefficient
/// columns, a subgroup of `M^rows` handled in Howell form; only free tuples are swept.
pub fn pp_solution_set(m: &FiniteModule, phi: &LinearPp) -> Result<SolutionSet, PpError> {
    let ring = m.ring();
    if phi.rows().iter().flatten().any(|&a| a >= ring.size()) {
        return Err(PpError::RingMismatch);
    }
    let p = phi.simplify(ring);
    let (n, s) = (p.free(), m.size());
    let space = s.checked_pow(n as u32).filter(|&x| x <= MAX_TUPLE_SPACE);
    let space = space.ok_or_else(|| PpError::TooLarge(format!("{s}^{n} tuples")))?;
    let (with_bound, free_only): (Vec<&Vec<usize>>, Vec<&Vec<usize>>) =
        p.rows().iter().partition(|r| r[n..].iter().any(|&a| a != ring.zero()));
    let e = m.basis().exponent();
    let mut gens = Vec::new();
    for j in 0..p.bound() {
        for &b in m.basis().basis() {
            let images: Vec<usize> = with_bound.iter().map(|r| m.act(r[n + j], b)).collect();
            gens.push(embed_module(m, e, &images));
        }
    }
    let dim = with_bound.len() * m.basis().rank();
    let image = Howell::new(e, dim, gens);
    let mut codes = Vec::new();
    let mut xs = vec![0usize; n];
    for code in 0..space {
        let mut c = code;
        for i in (0..n).rev() {
            xs[i] = c % s;
            c /= s;
        }
        if free_only.iter().any(|r| linear_combination(m, &r[..n], &xs) != m.zero()) {
            continue;
        }
        let vals: Vec<usize> = with_bound.iter().map(|r| linear_combination(m, &r[..n], &xs)).collect();
        if image.contains(&embed_module(m, e, &vals)) {
            codes.push(code);
        }
    }
    Ok(SolutionSet { base: s, arity: n, codes })
}

/// `φ(M)` as a subgroup of `(Z/e)^(n·t)`, tuples embedded coordinatewise by
/// [`GroupBasis::embed_into`](super::GroupBasis::embed_into). It is the projection of the
/// kernel of the coefficient map on `M^width`, so no tuples are swept.
pub fn pp_subgroup(m: &FiniteModule, phi: &LinearPp) -> Result<Howell, PpError> {
    let ring = m.ring();
    if phi.rows().iter().flatten().any(|&a| a >= ring.size()) {
        return Err(PpError::RingMismatch);
    }
    let p = phi.simplify(ring);
    let (n, w) = (p.free(), p.width());
    let basis = m.basis();
    let (e, t) = (basis.exponent(), basis.rank());
    let img = p.rows().len() * t;
    let mut gens = Vec::new();
    for j in 0..w {
        for &b in basis.basis() {
            let mut v = Vec::with_capacity(img + w * t);
            for r in p.rows() {
                basis.embed_into(m.act(r[j], b), e, &mut v);
            }
            v.resize(img + w * t, 0);
            let mut z = Vec::with_capacity(t);
            basis.embed_into(b, e, &mut z);
            v[img + j * t..img + (j + 1) * t].copy_from_slice(&z);
            gens.push(v);
        }
    }
    let kernel = Howell::new(e, img + w * t, gens);
    Ok(Howell::new(e, n * t, kernel.tail_from(img).into_iter().map(|v| v[..n * t].to_vec())))
}

/// Additive coordinates of vectors in `R^k`.
struct FreeCoords<'a> {
    ring: &'a FiniteRing,
    k: usize,
}

impl FreeCoords<'_> {
    fn e(&self) -> u64 {
        self.ring.additive_basis().exponent()
    }

    fn t(&self) -> usize {
        self.ring.additive_basis().rank()
    }

    fn embed(&self, v: &[usize], out: &mut Vec<u64>) {
        for &x in v {
            self.ring.additive_basis().embed_into(x, self.e(), out);
        }
    }

    /// Additive generators `b·h` of the left submodule spanned by `rows`.
    fn span_generators(&self, rows: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let basis = self.ring.additive_basis().basis();
        rows.iter().flat_map(|h| basis.iter().map(move |&b| h.iter().map(|&x| self.ring.mul(b, x)).collect())).collect()
    }

    /// Additive generators of `R^k` itself.
    fn unit_generators(&self) -> Vec<Vec<usize>> {
        let ring = self.ring;
        let mut out = Vec::new();
        for l in 0..self.k {
            for &b in ring.additive_basis().basis() {
                let mut v = vec![ring.zero(); self.k];
                v[l] = b;
                out.push(v);
            }
        }
        out
    }
}

/// Does `φ` entail `ψ` in every module? Decided by asking whether the generic tuple of
/// `R^k / rowspan(φ)` satisfies `ψ`, which is a subgroup membership question in `(R^k)^rows(ψ)`.
pub fn pp_implies(ring: &FiniteRing, phi: &LinearPp, psi: &LinearPp) -> Result<bool, PpError> {
    if phi.free() != psi.free() {
        return Err(PpError::Arity(phi.free(), psi.free()));
    }
    let (a, b) = (phi.simplify(ring), psi.simplify(ring));
    let n = a.free();
    let k = a.width();
    let fc = FreeCoords { ring, k };
    let t = fc.t();
    let slots = b.rows().len();
    let dim = slots * k * t;
    let mut gens: Vec<Vec<u64>> = Vec::new();
    let relations = fc.span_generators(a.rows());
    for slot in 0..slots {
        for g in &relations {
            let mut v = vec![0u64; dim];
            let mut emb = Vec::new();
            fc.embed(g, &mut emb);
            v[slot * k * t..(slot + 1) * k * t].copy_from_slice(&emb);
            gens.push(v);
        }
    }
    for j in 0..b.bound() {
        for u in fc.unit_generators() {
            let mut v = Vec::with_capacity(dim);
            for r in b.rows() {
                let scaled: Vec<usize> = u.iter().map(|&x| ring.mul(r[n + j], x)).collect();
                fc.embed(&scaled, &mut v);
            }
            gens.push(v);
        }
    }
    let h = Howell::new(fc.e(), dim, gens);
    let mut target = Vec::with_capacity(dim);
    for r in b.rows() {
        let mut slot = vec![ring.zero(); k];
        slot[..n].copy_from_slice(&r[..n]);
        fc.embed(&slot, &mut target);
    }
    Ok(h.contains(&target))
}

pub fn pp_equivalent(ring: &FiniteRing, phi: &LinearPp, psi: &LinearPp) -> Result<bool, PpError> {
    Ok(pp_implies(ring, phi, psi)? && pp_implies(ring, psi, phi)?)
}

/// `F = R^(n+m) / rowspan(H)` and the images `c̄` of the free coordinates.
pub fn free_realization(ring: &FiniteRing, phi: &LinearPp) -> Result<(FiniteModule, Vec<usize>), PpError> {
    let k = phi.width();
    let fc = FreeCoords { ring, k };
    let e = fc.e();
    let dim = k * fc.t();
    let rel = Howell::new(
        e,
        dim,
        fc.span_generators(phi.rows()).iter().map(|g| {
            let mut v = Vec::new();
            fc.embed(g, &mut v);
            v
        }),
    );
    let key = |v: &[usize]| {
        let mut w = Vec::with_capacity(dim);
        fc.embed(v, &mut w);
        rel.reduce(&mut w);
        w
    };
    let mut reps: Vec<Vec<usize>> = vec![vec![ring.zero(); k]];
    let mut index: HashMap<Vec<u64>, usize> = HashMap::from([(key(&reps[0]), 0)]);
    let gens = fc.unit_generators();
    let add = |a: &[usize], b: &[usize]| a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect::<Vec<_>>();
    let mut i = 0;
    while i < reps.len() {
        for g in &gens {
            let v = add(&reps[i], g);
            let kv = key(&v);
            if !index.contains_key(&kv) {
                if reps.len() >= MAX_REALIZATION {
                    return Err(PpError::TooLarge(format!("free realization beyond {MAX_REALIZATION} elements")));
                }
                index.insert(kv, reps.len());
                reps.push(v);
            }
        }
        i += 1;
    }
    let id = |v: &[usize]| index[&key(v)];
    let size = reps.len();
    let add_table = (0..size).map(|a| (0..size).map(|b| id(&add(&reps[a], &reps[b]))).collect()).collect();
    let act = (0..ring.size())
        .map(|r| (0..size).map(|a| id(&reps[a].iter().map(|&x| ring.mul(r, x)).collect::<Vec<_>>())).collect())
        .collect();
    let f = FiniteModule::new_unchecked(ring, add_table, act, 0);
    let c = (0..phi.free())
        .map(|l| {
            let mut v = vec![ring.zero(); k];
            v[l] = ring.one();
            id(&v)
        })
        .collect();
    Ok((f, c))
}

/// A module and a tuple in `φ(M) \ ψ(M)`, taken from the free realization of `φ`.
pub fn implication_counterexample(
    ring: &FiniteRing,
    phi: &LinearPp,
    psi: &LinearPp,
) -> Result<Option<(FiniteModule, Vec<usize>)>, PpError> {
    if pp_implies(ring, phi, psi)? {
        return Ok(None);
    }
    let (f, c) = free_realization(ring, &phi.simplify(ring))?;
    Ok(Some((f, c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpp::module::{find_isomorphism, homs};

    fn pp(ring: &FiniteRing, s: &str) -> LinearPp {
        LinearPp::parse(ring, s, Some(&["x".to_string()])).unwrap().0
    }

    #[test]
    fn divisible_elements_of_z4() {
        let z4 = FiniteRing::zn(4);
        let m = FiniteModule::regular(&z4);
        let s = pp_solution_set(&m, &pp(&z4, "E y: x = 2*y")).unwrap();
        assert_eq!(s.tuples().collect::<Vec<_>>(), vec![vec![0], vec![2]]);
        assert_eq!(pp_solution_set(&m, &pp(&z4, "x = x")).unwrap().len(), 4);
        assert_eq!(pp_solution_set(&m, &pp(&z4, "x = 0")).unwrap().len(), 1);
    }

    #[test]
    fn implication_examples() {
        let z4 = FiniteRing::zn(4);
        let div = pp(&z4, "E y: x = 2*y");
        let zero = pp(&z4, "x = 0");
        let tors = pp(&z4, "2*x = 0");
        assert_eq!(pp_implies(&z4, &zero, &div), Ok(true));
        assert_eq!(pp_implies(&z4, &div, &zero), Ok(false));
        assert_eq!(pp_implies(&z4, &div, &tors), Ok(true));
        assert_eq!(pp_implies(&z4, &tors, &div), Ok(false));
        let (m, c) = implication_counterexample(&z4, &div, &zero).unwrap().unwrap();
        assert!(pp_solution_set(&m, &div).unwrap().contains(&c));
        assert!(!pp_solution_set(&m, &zero).unwrap().contains(&c));
        let (m, c) = implication_counterexample(&z4, &tors, &div).unwrap().unwrap();
        assert!(pp_solution_set(&m, &tors).unwrap().contains(&c));
        assert!(!pp_solution_set(&m, &div).unwrap().contains(&c));
    }

    #[test]
    fn subgroup_matches_sweep() {
        use crate::gen::random_linear_pp;
        use crate::modpp::{small_modules, test_rings};
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for ring in test_rings() {
            let modules = small_modules(&ring, 16);
            for _ in 0..40 {
                let free = rng.gen_range(0..=3);
                let phi = random_linear_pp(&mut rng, &ring, free, 3);
                for m in &modules {
                    let Ok(sweep) = pp_solution_set(m, &phi) else { continue };
                    let h = pp_subgroup(m, &phi).unwrap();
                    assert_eq!(h.order(), sweep.len() as u128);
                    for tuple in sweep.tuples() {
                        assert!(h.contains(&embed_module(m, m.basis().exponent(), &tuple)));
                    }
                }
            }
        }
    }

    #[test]
    fn realization_examples() {
        let z4 = FiniteRing::zn(4);
        let (f, c) = free_realization(&z4, &pp(&z4, "E y: x = 2*y")).unwrap();
        let r = FiniteModule::regular(&z4);
        let iso = find_isomorphism(&f, &r).unwrap();
        assert_eq!(iso.apply(c[0]), 2);
        let (f, c) = free_realization(&z4, &pp(&z4, "x = x")).unwrap();
        assert_eq!((f.size(), find_isomorphism(&f, &r).map(|i| [1, 3].contains(&i.apply(c[0])))), (4, Some(true)));
        let (f, c) = free_realization(&z4, &pp(&z4, "x = 0")).unwrap();
        assert_eq!((f.size(), c), (1, vec![0]));
    }

    #[test]
    fn realization_represents_solutions() {
        let z4 = FiniteRing::zn(4);
        let phi = pp(&z4, "E y: 2*x = 2*y & 2*y = 0");
        let (f, c) = free_realization(&z4, &phi).unwrap();
        for spec in ["R", "R/(2)", "R/(2)+R"] {
            let m = FiniteModule::parse_spec(&z4, spec).unwrap();
            let mut images: Vec<Vec<usize>> = homs(&f, &m).iter().map(|h| c.iter().map(|&x| h[x]).collect()).collect();
            images.sort();
            images.dedup();
            assert_eq!(images, pp_solution_set(&m, &phi).unwrap().tuples().collect::<Vec<_>>());
        }
    }
}

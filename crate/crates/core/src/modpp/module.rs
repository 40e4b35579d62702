use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::abelian::GroupBasis;
use super::ring::{FiniteRing, RawRing, RingError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("table has the wrong shape")]
    Shape,
    #[error("entry out of range")]
    Range,
    #[error("{law} fails at {witness:?}")]
    Axiom { law: &'static str, witness: Vec<usize> },
    #[error("modules are over different rings")]
    RingMismatch,
    #[error("map is not {0}")]
    NotLinear(&'static str),
    #[error("module is too large ({0} elements)")]
    TooLarge(usize),
    #[error("cannot read module `{0}`")]
    Syntax(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A finite left module over a [`FiniteRing`], given by tables on `0..n`.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    ring: FiniteRing,
    add: Vec<Vec<usize>>,
    act: Vec<Vec<usize>>,
    neg: Vec<usize>,
    zero: usize,
    basis: GroupBasis,
}

impl PartialEq for FiniteModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.add == other.add && self.act == other.act && self.zero == other.zero
    }
}

impl Eq for FiniteModule {}

/// Largest module built by the generic constructors.
pub const MAX_MODULE_SIZE: usize = 1 << 16;

impl FiniteModule {
    /// `act[r][m]` is `r·m`.
    pub fn new(ring: &FiniteRing, add: Vec<Vec<usize>>, act: Vec<Vec<usize>>, zero: usize) -> Result<Self, ModuleError> {
        let n = add.len();
        if n == 0 || add.iter().any(|r| r.len() != n) || act.len() != ring.size() || act.iter().any(|r| r.len() != n) {
            return Err(ModuleError::Shape);
        }
        if zero >= n || add.iter().chain(&act).flatten().any(|&x| x >= n) {
            return Err(ModuleError::Range);
        }
        let fail = |law, witness: &[usize]| Err(ModuleError::Axiom { law, witness: witness.to_vec() });
        for a in 0..n {
            if add[a][zero] != a {
                return fail("additive identity", &[a]);
            }
            if !(0..n).any(|b| add[a][b] == zero) {
                return fail("additive inverse", &[a]);
            }
            if act[ring.one()][a] != a {
                return fail("unit action", &[a]);
            }
            for b in 0..n {
                if add[a][b] != add[b][a] {
                    return fail("additive commutativity", &[a, b]);
                }
                for c in 0..n {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return fail("additive associativity", &[a, b, c]);
                    }
                }
                for r in 0..ring.size() {
                    if act[r][add[a][b]] != add[act[r][a]][act[r][b]] {
                        return fail("r(m+n) = rm+rn", &[r, a, b]);
                    }
                }
            }
            for r in 0..ring.size() {
                for s in 0..ring.size() {
                    if act[ring.add(r, s)][a] != add[act[r][a]][act[s][a]] {
                        return fail("(r+s)m = rm+sm", &[r, s, a]);
                    }
                    if act[ring.mul(r, s)][a] != act[r][act[s][a]] {
                        return fail("(rs)m = r(sm)", &[r, s, a]);
                    }
                }
            }
        }
        Ok(Self::new_unchecked(ring, add, act, zero))
    }

    pub(crate) fn new_unchecked(ring: &FiniteRing, add: Vec<Vec<usize>>, act: Vec<Vec<usize>>, zero: usize) -> Self {
        let n = add.len();
        let neg = (0..n).map(|a| (0..n).find(|&b| add[a][b] == zero).expect("inverse")).collect();
        let basis = GroupBasis::new(n, zero, |a, b| add[a][b]);
        FiniteModule { ring: ring.clone(), add, act, neg, zero, basis }
    }

    pub fn zero_module(ring: &FiniteRing) -> Self {
        Self::new_unchecked(ring, vec![vec![0]], vec![vec![0]; ring.size()], 0)
    }

    /// The ring as a left module over itself.
    pub fn regular(ring: &FiniteRing) -> Self {
        let n = ring.size();
        let add = (0..n).map(|a| (0..n).map(|b| ring.add(a, b)).collect()).collect();
        let act = (0..n).map(|r| (0..n).map(|m| ring.mul(r, m)).collect()).collect();
        Self::new_unchecked(ring, add, act, ring.zero())
    }

    /// `R / R·a`, elements labelled by their smallest representative.
    pub fn cyclic(ring: &FiniteRing, a: usize) -> Self {
        let n = ring.size();
        let ideal: Vec<usize> = {
            let mut v: Vec<usize> = (0..n).map(|r| ring.mul(r, a)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class[x] == usize::MAX {
                for &i in &ideal {
                    class[ring.add(x, i)] = reps.len();
                }
                reps.push(x);
            }
        }
        let k = reps.len();
        let add = (0..k).map(|i| (0..k).map(|j| class[ring.add(reps[i], reps[j])]).collect()).collect();
        let act = (0..n).map(|r| (0..k).map(|i| class[ring.mul(r, reps[i])]).collect()).collect();
        Self::new_unchecked(ring, add, act, class[ring.zero()])
    }

    /// Direct sum; an element is the mixed-radix code of its components, last fastest.
    pub fn direct_sum(ring: &FiniteRing, parts: &[&FiniteModule]) -> Result<Self, ModuleError> {
        if parts.iter().any(|p| p.ring != *ring) {
            return Err(ModuleError::RingMismatch);
        }
        let sizes: Vec<usize> = parts.iter().map(|p| p.size()).collect();
        let n = sizes.iter().try_fold(1usize, |a, &s| a.checked_mul(s).filter(|&x| x <= MAX_MODULE_SIZE));
        let n = n.ok_or(ModuleError::TooLarge(usize::MAX))?;
        if n * n > 1 << 26 {
            return Err(ModuleError::TooLarge(n));
        }
        let split = |mut x: usize| {
            let mut out = vec![0; sizes.len()];
            for i in (0..sizes.len()).rev() {
                out[i] = x % sizes[i];
                x /= sizes[i];
            }
            out
        };
        let join = |v: &[usize]| v.iter().zip(&sizes).fold(0, |acc, (&x, &s)| acc * s + x);
        let comps: Vec<Vec<usize>> = (0..n).map(split).collect();
        let add = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let v: Vec<usize> = parts.iter().enumerate().map(|(i, p)| p.add(comps[a][i], comps[b][i])).collect();
                        join(&v)
                    })
                    .collect()
            })
            .collect();
        let act = (0..ring.size())
            .map(|r| {
                (0..n)
                    .map(|a| join(&parts.iter().enumerate().map(|(i, p)| p.act(r, comps[a][i])).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let zero = join(&parts.iter().map(|p| p.zero).collect::<Vec<_>>());
        Ok(Self::new_unchecked(ring, add, act, zero))
    }

    pub fn product(a: &FiniteModule, b: &FiniteModule) -> Result<Self, ModuleError> {
        Self::direct_sum(&a.ring, &[a, b])
    }

    /// Reads `0`, `R`, `R^k`, `R/(a)` and sums of these joined by `+`; `a` is an integer
    /// or `@i` for the ring element with label `i`.
    pub fn parse_spec(ring: &FiniteRing, spec: &str) -> Result<Self, ModuleError> {
        let bad = || ModuleError::Syntax(spec.to_string());
        let mut parts = Vec::new();
        for raw in spec.split('+') {
            let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if s == "0" {
                continue;
            }
            let elem = |t: &str| -> Result<usize, ModuleError> {
                if let Some(i) = t.strip_prefix('@') {
                    i.parse::<usize>().ok().filter(|&i| i < ring.size()).ok_or_else(bad)
                } else {
                    t.parse::<i64>().map(|k| ring.from_int(k)).map_err(|_| bad())
                }
            };
            if s == "R" {
                parts.push(Self::regular(ring));
            } else if let Some(k) = s.strip_prefix("R^") {
                let k: usize = k.parse().map_err(|_| bad())?;
                parts.extend(std::iter::repeat_n(Self::regular(ring), k));
            } else if let Some(inner) = s.strip_prefix("R/(").and_then(|t| t.strip_suffix(')')) {
                parts.push(Self::cyclic(ring, elem(inner)?));
            } else {
                return Err(bad());
            }
        }
        let refs: Vec<&FiniteModule> = parts.iter().collect();
        match refs.len() {
            0 => Ok(Self::zero_module(ring)),
            1 => Ok(parts[0].clone()),
            _ => Self::direct_sum(ring, &refs),
        }
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.add.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }

    pub fn act(&self, r: usize, m: usize) -> usize {
        self.act[r][m]
    }

    /// Additive decomposition used for linear algebra.
    pub fn basis(&self) -> &GroupBasis {
        &self.basis
    }

    pub fn is_submodule(&self, set: &[bool]) -> bool {
        set[self.zero]
            && (0..self.size()).all(|a| {
                !set[a]
                    || ((0..self.size()).all(|b| !set[b] || set[self.add[a][b]])
                        && (0..self.ring.size()).all(|r| set[self.act[r][a]]))
            })
    }

    /// Smallest submodule containing `gens`.
    pub fn span(&self, gens: &[usize]) -> Vec<bool> {
        let n = self.size();
        let mut set = vec![false; n];
        set[self.zero] = true;
        let mut stack: Vec<usize> = vec![self.zero];
        let grow = |x: usize, set: &mut Vec<bool>, stack: &mut Vec<usize>| {
            if !set[x] {
                set[x] = true;
                stack.push(x);
            }
        };
        for &g in gens {
            for r in 0..self.ring.size() {
                grow(self.act[r][g], &mut set, &mut stack);
            }
        }
        while let Some(x) = stack.pop() {
            let members: Vec<usize> = (0..n).filter(|&y| set[y]).collect();
            for y in members {
                grow(self.add[x][y], &mut set, &mut stack);
            }
            for r in 0..self.ring.size() {
                grow(self.act[r][x], &mut set, &mut stack);
            }
        }
        set
    }

    /// The submodule on `set` with its inclusion; elements keep their relative order.
    pub fn submodule(&self, set: &[bool]) -> (FiniteModule, ModuleMap) {
        debug_assert!(self.is_submodule(set));
        let elems: Vec<usize> = (0..self.size()).filter(|&x| set[x]).collect();
        let mut index = vec![usize::MAX; self.size()];
        for (i, &x) in elems.iter().enumerate() {
            index[x] = i;
        }
        let add = elems.iter().map(|&a| elems.iter().map(|&b| index[self.add[a][b]]).collect()).collect();
        let act = (0..self.ring.size()).map(|r| elems.iter().map(|&a| index[self.act[r][a]]).collect()).collect();
        let sub = Self::new_unchecked(&self.ring, add, act, index[self.zero]);
        let incl = ModuleMap { source: sub.clone(), target: self.clone(), table: elems };
        (sub, incl)
    }

    /// Quotient by a submodule, with the projection; classes are labelled in order of their
    /// smallest element.
    pub fn quotient(&self, set: &[bool]) -> (FiniteModule, ModuleMap) {
        let n = self.size();
        let sub: Vec<usize> = (0..n).filter(|&x| set[x]).collect();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class[x] == usize::MAX {
                for &s in &sub {
                    class[self.add[x][s]] = reps.len();
                }
                reps.push(x);
            }
        }
        let k = reps.len();
        let add = (0..k).map(|i| (0..k).map(|j| class[self.add[reps[i]][reps[j]]]).collect()).collect();
        let act = (0..self.ring.size()).map(|r| (0..k).map(|i| class[self.act[r][reps[i]]]).collect()).collect();
        let q = Self::new_unchecked(&self.ring, add, act, class[self.zero]);
        let proj = ModuleMap { source: self.clone(), target: q.clone(), table: class };
        (q, proj)
    }

    /// All submodules as membership masks, sorted by size then mask.
    pub fn submodules(&self) -> Vec<Vec<bool>> {
        let mut found: Vec<Vec<bool>> = vec![self.span(&[])];
        let mut i = 0;
        while i < found.len() {
            let s = found[i].clone();
            for x in 0..self.size() {
                if s[x] {
                    continue;
                }
                let gens: Vec<usize> = (0..self.size()).filter(|&y| s[y]).chain([x]).collect();
                let t = self.span(&gens);
                if !found.contains(&t) {
                    found.push(t);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| {
            let ca = a.iter().filter(|&&x| x).count();
            let cb = b.iter().filter(|&&x| x).count();
            ca.cmp(&cb).then_with(|| b.cmp(a))
        });
        found
    }

    pub fn tables(&self) -> RawModule {
        RawModule { ring: RingSpec::Tables(self.ring.tables()), add: self.add.clone(), act: self.act.clone(), zero: self.zero }
    }
}

/// An `R`-linear map between finite modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: FiniteModule,
    target: FiniteModule,
    table: Vec<usize>,
}

impl ModuleMap {
    pub fn new(source: &FiniteModule, target: &FiniteModule, table: Vec<usize>) -> Result<Self, ModuleError> {
        if source.ring != target.ring {
            return Err(ModuleError::RingMismatch);
        }
        if table.len() != source.size() || table.iter().any(|&y| y >= target.size()) {
            return Err(ModuleError::Shape);
        }
        if !is_linear(source, target, &table) {
            return Err(ModuleError::NotLinear("R-linear"));
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), table })
    }

    pub fn identity(m: &FiniteModule) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), table: (0..m.size()).collect() }
    }

    pub fn source(&self) -> &FiniteModule {
        &self.source
    }

    pub fn target(&self) -> &FiniteModule {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ModuleMap) -> ModuleMap {
        ModuleMap { source: first.source.clone(), target: self.target.clone(), table: first.table.iter().map(|&x| self.table[x]).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.table.iter().for_each(|&y| seen[y] = true);
        seen.iter().all(|&b| b)
    }

    pub fn kernel_mask(&self) -> Vec<bool> {
        self.table.iter().map(|&y| y == self.target.zero).collect()
    }

    pub fn image_mask(&self) -> Vec<bool> {
        let mut seen = vec![false; self.target.size()];
        self.table.iter().for_each(|&y| seen[y] = true);
        seen
    }
}

pub fn is_linear(source: &FiniteModule, target: &FiniteModule, table: &[usize]) -> bool {
    let n = source.size();
    (0..n).all(|a| {
        (0..n).all(|b| table[source.add(a, b)] == target.add(table[a], table[b]))
            && (0..source.ring.size()).all(|r| table[source.act(r, a)] == target.act(r, table[a]))
    })
}

/// Calls `visit` with each `R`-linear map `a → b`; stops when `visit` returns `false`.
pub fn for_each_hom(a: &FiniteModule, b: &FiniteModule, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let basis = a.basis();
    let t = basis.rank();
    let orders = basis.orders();
    // candidates for the image of the i-th basis element: elements whose order divides d_i
    let order_of = |x: usize| {
        let (mut k, mut y) = (1u64, x);
        while y != b.zero {
            y = b.add(y, x);
            k += 1;
        }
        k
    };
    let b_orders: Vec<u64> = (0..b.size()).map(order_of).collect();
    let cands: Vec<Vec<usize>> = (0..t).map(|i| (0..b.size()).filter(|&y| orders[i] % b_orders[y] == 0).collect()).collect();
    // multiples k·y for building tables from coordinates
    let mult = |y: usize, k: u64| (0..k).fold(b.zero, |acc, _| b.add(acc, y));
    let mut choice = vec![0usize; t];
    let mut table = vec![0usize; a.size()];
    loop {
        if t == 0 || cands.iter().all(|c| !c.is_empty()) {
            for x in 0..a.size() {
                let c = basis.coords(x);
                table[x] = (0..t).fold(b.zero, |acc, i| b.add(acc, mult(cands[i][choice[i]], c[i])));
            }
            if (0..a.size()).all(|x| (0..a.ring.size()).all(|r| table[a.act(r, x)] == b.act(r, table[x]))) && !visit(&table) {
                return;
            }
        }
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < cands[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

pub fn homs(a: &FiniteModule, b: &FiniteModule) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_hom(a, b, &mut |t| {
        out.push(t.to_vec());
        true
    });
    out
}

pub fn find_isomorphism(a: &FiniteModule, b: &FiniteModule) -> Option<ModuleMap> {
    if a.size() != b.size() || a.ring != b.ring || a.basis().exponent() != b.basis().exponent() {
        return None;
    }
    let mut found = None;
    for_each_hom(a, b, &mut |t| {
        let mut seen = vec![false; b.size()];
        if t.iter().all(|&y| !std::mem::replace(&mut seen[y], true)) {
            found = Some(t.to_vec());
            false
        } else {
            true
        }
    });
    found.map(|table| ModuleMap { source: a.clone(), target: b.clone(), table })
}

/// A ring given by name or by tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingSpec {
    Name(String),
    Tables(RawRing),
}

impl RingSpec {
    pub fn build(&self) -> Result<FiniteRing, RingError> {
        match self {
            RingSpec::Name(n) => FiniteRing::by_name(n),
            RingSpec::Tables(t) => t.build(),
        }
    }
}

/// JSON form of a module: `{"ring": .., "add": [[..]], "act": [[..]], "zero": 0}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawModule {
    pub ring: RingSpec,
    pub add: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
    pub zero: usize,
}

impl RawModule {
    pub fn build(&self) -> Result<FiniteModule, ModuleError> {
        let ring = self.ring.build()?;
        FiniteModule::new(&ring, self.add.clone(), self.act.clone(), self.zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_modules() {
        let z4 = FiniteRing::zn(4);
        let z2 = FiniteModule::cyclic(&z4, 2);
        assert_eq!(z2.size(), 2);
        assert_eq!(z2.act(3, 1), 1);
        let m = FiniteModule::parse_spec(&z4, "R/(2) + R").unwrap();
        assert_eq!(m.size(), 8);
        assert_eq!(FiniteModule::parse_spec(&z4, "0").unwrap().size(), 1);
        assert!(FiniteModule::parse_spec(&z4, "S").is_err());
        // tables survive validation
        assert_eq!(m.tables().build().unwrap(), m);
    }

    #[test]
    fn submodules_of_z4() {
        let z4 = FiniteRing::zn(4);
        let m = FiniteModule::regular(&z4);
        assert_eq!(m.submodules().len(), 3);
        let v = FiniteModule::parse_spec(&z4, "R/(2)+R/(2)").unwrap();
        assert_eq!(v.submodules().len(), 5);
    }

    #[test]
    fn homs_and_isomorphisms() {
        let z4 = FiniteRing::zn(4);
        let r = FiniteModule::regular(&z4);
        assert_eq!(homs(&r, &r).len(), 4);
        let z2 = FiniteModule::cyclic(&z4, 2);
        assert_eq!(homs(&z2, &r).len(), 2);
        let z6 = FiniteRing::zn(6);
        let a = FiniteModule::regular(&z6);
        let b = FiniteModule::parse_spec(&z6, "R/(2)+R/(3)").unwrap();
        assert!(find_isomorphism(&a, &b).is_some());
        assert!(find_isomorphism(&FiniteModule::parse_spec(&z4, "R/(2)+R/(2)").unwrap(), &r).is_none());
    }

    #[test]
    fn invalid_module_is_rejected() {
        let z4 = FiniteRing::zn(4);
        let add = vec![vec![0, 1], vec![1, 0]];
        // 1 acting as the zero map breaks the unit law
        let act = vec![vec![0, 0]; 4];
        assert!(FiniteModule::new(&z4, add, act, 0).is_err());
    }
}

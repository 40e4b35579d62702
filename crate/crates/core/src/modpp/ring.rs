use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::abelian::GroupBasis;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("table has the wrong shape")]
    Shape,
    #[error("entry out of range")]
    Range,
    #[error("{law} fails at {witness:?}")]
    Axiom { law: &'static str, witness: Vec<usize> },
    #[error("unknown ring `{0}` (expected zN, f2x2 or a JSON file)")]
    UnknownName(String),
}

/// A finite unital ring on `0..n` given by its tables.
#[derive(Clone, Debug)]
pub struct FiniteRing {
    name: String,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    basis: GroupBasis,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.add == other.add && self.mul == other.mul && self.zero == other.zero && self.one == other.one
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    pub fn new(name: &str, add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>, zero: usize, one: usize) -> Result<Self, RingError> {
        let n = add.len();
        if n == 0 || mul.len() != n || add.iter().chain(&mul).any(|r| r.len() != n) {
            return Err(RingError::Shape);
        }
        if zero >= n || one >= n || add.iter().chain(&mul).flatten().any(|&x| x >= n) {
            return Err(RingError::Range);
        }
        let fail = |law, witness: &[usize]| Err(RingError::Axiom { law, witness: witness.to_vec() });
        for a in 0..n {
            if add[a][zero] != a || add[zero][a] != a {
                return fail("additive identity", &[a]);
            }
            if mul[a][one] != a || mul[one][a] != a {
                return fail("multiplicative identity", &[a]);
            }
            if !(0..n).any(|b| add[a][b] == zero) {
                return fail("additive inverse", &[a]);
            }
            for b in 0..n {
                if add[a][b] != add[b][a] {
                    return fail("additive commutativity", &[a, b]);
                }
                for c in 0..n {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return fail("additive associativity", &[a, b, c]);
                    }
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return fail("multiplicative associativity", &[a, b, c]);
                    }
                    if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]] {
                        return fail("left distributivity", &[a, b, c]);
                    }
                    if mul[add[a][b]][c] != add[mul[a][c]][mul[b][c]] {
                        return fail("right distributivity", &[a, b, c]);
                    }
                }
            }
        }
        let neg = (0..n).map(|a| (0..n).find(|&b| add[a][b] == zero).unwrap()).collect();
        let basis = GroupBasis::new(n, zero, |a, b| add[a][b]);
        Ok(FiniteRing { name: name.to_string(), add, mul, neg, zero, one, basis })
    }

    /// `Z/n` with the usual labels.
    pub fn zn(n: usize) -> Self {
        assert!(n >= 1);
        let add = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| a * b % n).collect()).collect();
        FiniteRing::new(&format!("z{n}"), add, mul, 0, 1 % n).expect("Z/n is a ring")
    }

    /// `F2[x]/(x²)`; the element `a + b·x` has label `a + 2b`.
    pub fn f2_dual() -> Self {
        let split = |v: usize| (v & 1, v >> 1);
        let add = (0..4).map(|u| (0..4).map(|v| u ^ v).collect()).collect();
        let mul = (0..4)
            .map(|u| {
                (0..4)
                    .map(|v| {
                        let ((a, b), (c, d)) = (split(u), split(v));
                        (a & c) | (((a & d) ^ (b & c)) << 1)
                    })
                    .collect()
            })
            .collect();
        FiniteRing::new("f2x2", add, mul, 0, 1).expect("F2[x]/(x^2) is a ring")
    }

    /// `zN` or `f2x2`.
    pub fn by_name(name: &str) -> Result<Self, RingError> {
        if name == "f2x2" {
            return Ok(Self::f2_dual());
        }
        match name.strip_prefix('z').and_then(|k| k.parse::<usize>().ok()) {
            Some(n) if (1..=256).contains(&n) => Ok(Self::zn(n)),
            _ => Err(RingError::UnknownName(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.add.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }

    /// `k·1`.
    pub fn from_int(&self, k: i64) -> usize {
        let mut x = self.zero;
        for _ in 0..k.unsigned_abs() % self.size() as u64 {
            x = self.add[x][self.one];
        }
        if k < 0 {
            self.neg[x]
        } else {
            x
        }
    }

    /// Smallest `k ≥ 0` with `k·1 = a`, if any; negative `k` is tried for a shorter label.
    pub fn int_label(&self, a: usize) -> Option<i64> {
        let n = self.size() as i64;
        let mut x = self.zero;
        for k in 0..=n {
            if x == a {
                let neg = k - self.characteristic() as i64;
                return Some(if neg.abs() < k { neg } else { k });
            }
            x = self.add[x][self.one];
        }
        None
    }

    pub fn characteristic(&self) -> usize {
        let mut x = self.one;
        let mut k = 1;
        while x != self.zero {
            x = self.add[x][self.one];
            k += 1;
        }
        k
    }

    pub fn is_unit(&self, a: usize) -> bool {
        (0..self.size()).any(|b| self.mul[a][b] == self.one && self.mul[b][a] == self.one)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size()).all(|a| (0..self.size()).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Additive decomposition of the ring.
    pub fn additive_basis(&self) -> &GroupBasis {
        &self.basis
    }

    pub fn tables(&self) -> RawRing {
        RawRing { name: Some(self.name.clone()), add: self.add.clone(), mul: self.mul.clone(), zero: self.zero, one: self.one }
    }
}

/// JSON form of a ring.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawRing {
    #[serde(default)]
    pub name: Option<String>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

impl RawRing {
    pub fn build(&self) -> Result<FiniteRing, RingError> {
        FiniteRing::new(self.name.as_deref().unwrap_or("R"), self.add.clone(), self.mul.clone(), self.zero, self.one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_rings() {
        let z4 = FiniteRing::by_name("z4").unwrap();
        assert_eq!(z4.size(), 4);
        assert_eq!(z4.from_int(-2), 2);
        assert_eq!(z4.int_label(3), Some(-1));
        assert!(z4.is_unit(3) && !z4.is_unit(2));
        let d = FiniteRing::f2_dual();
        assert_eq!(d.mul(2, 2), 0);
        assert_eq!(d.characteristic(), 2);
        assert_eq!(d.int_label(2), None);
        assert_eq!(d.additive_basis().rank(), 2);
        assert!(FiniteRing::by_name("q").is_err());
    }

    #[test]
    fn broken_ring_is_rejected() {
        let add = vec![vec![0, 1], vec![1, 0]];
        let mul = vec![vec![0, 1], vec![0, 1]];
        assert!(matches!(FiniteRing::new("bad", add, mul, 0, 1), Err(RingError::Axiom { .. })));
    }
}

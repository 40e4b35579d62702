//! Finite abelian groups in coordinates, and subgroup membership via Howell form over `Z/e`.

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)`.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = xgcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// A decomposition `G = ⊕ Z·b_i` of a finite abelian group given by its addition.
#[derive(Clone, Debug)]
pub struct GroupBasis {
    basis: Vec<usize>,
    orders: Vec<u64>,
    exponent: u64,
    coords: Vec<Vec<u64>>,
    element_at: Vec<usize>,
}

impl GroupBasis {
    /// Greedy choice: at each step the smallest element of maximal order whose cyclic
    /// subgroup meets the span so far trivially. In a finite abelian group such an element
    /// always splits off, so the result is a basis.
    pub fn new(n: usize, zero: usize, add: impl Fn(usize, usize) -> usize) -> Self {
        let order = |x: usize| {
            let (mut k, mut y) = (1u64, x);
            while y != zero {
                y = add(y, x);
                k += 1;
            }
            k
        };
        let orders_all: Vec<u64> = (0..n).map(order).collect();
        let mut span = vec![false; n];
        span[zero] = true;
        let mut size = 1;
        let (mut basis, mut orders) = (Vec::new(), Vec::new());
        while size < n {
            let mut best: Option<usize> = None;
            for h in 0..n {
                if best.is_some_and(|b| orders_all[b] >= orders_all[h]) {
                    continue;
                }
                let (mut y, mut ok) = (h, true);
                while y != zero {
                    if span[y] {
                        ok = false;
                        break;
                    }
                    y = add(y, h);
                }
                if ok {
                    best = Some(h);
                }
            }
            let h = best.expect("a complement element exists");
            let old: Vec<usize> = (0..n).filter(|&x| span[x]).collect();
            let mut m = h;
            for _ in 1..orders_all[h] {
                for &x in &old {
                    span[add(x, m)] = true;
                }
                m = add(m, h);
            }
            size = span.iter().filter(|&&b| b).count();
            basis.push(h);
            orders.push(orders_all[h]);
        }
        let exponent = orders.iter().fold(1, |a, &d| lcm(a, d));
        let mut coords = vec![Vec::new(); n];
        let mut element_at = Vec::with_capacity(n);
        let t = basis.len();
        let mut k = vec![0u64; t];
        loop {
            let mut x = zero;
            for i in 0..t {
                for _ in 0..k[i] {
                    x = add(x, basis[i]);
                }
            }
            coords[x] = k.clone();
            element_at.push(x);
            let mut i = t;
            loop {
                if i == 0 {
                    return GroupBasis { basis, orders, exponent, coords, element_at };
                }
                i -= 1;
                k[i] += 1;
                if k[i] < orders[i] {
                    break;
                }
                k[i] = 0;
            }
        }
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, x: usize) -> &[u64] {
        &self.coords[x]
    }

    /// Coordinates scaled into `(Z/e)^t`, an injective group homomorphism.
    pub fn embed_into(&self, x: usize, e: u64, out: &mut Vec<u64>) {
        for (k, &d) in self.coords[x].iter().zip(&self.orders) {
            out.push(k * (e / d) % e);
        }
    }

    /// Inverse of [`embed_into`](Self::embed_into) on its image.
    pub fn from_embedded(&self, v: &[u64], e: u64) -> usize {
        let idx = v.iter().zip(&self.orders).fold(0usize, |acc, (&x, &d)| acc * d as usize + (x / (e / d)) as usize);
        self.element_at[idx]
    }
}

/// Subgroup of `(Z/e)^dim` in Howell form: membership and canonical coset representatives.
#[derive(Clone, Debug)]
pub struct Howell {
    e: u64,
    dim: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Howell {
    pub fn new(e: u64, dim: usize, gens: impl IntoIterator<Item = Vec<u64>>) -> Self {
        assert!(e >= 1);
        let e128 = e as i128;
        let mut pool: Vec<Vec<u64>> = gens
            .into_iter()
            .map(|mut g| {
                debug_assert_eq!(g.len(), dim);
                g.iter_mut().for_each(|x| *x %= e);
                g
            })
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        let mut rows = Vec::new();
        let combine = |a: &[u64], s: i128, b: &[u64], t: i128| -> Vec<u64> {
            a.iter().zip(b).map(|(&x, &y)| (s * x as i128 + t * y as i128).rem_euclid(e128) as u64).collect()
        };
        for col in 0..dim {
            let mut idx: Vec<usize> = (0..pool.len()).filter(|&i| pool[i][col] != 0).collect();
            let Some(&first) = idx.first() else { continue };
            for &other in &idx[1..] {
                let (x, y) = (pool[first][col] as i128, pool[other][col] as i128);
                let (g, s, t) = xgcd(x, y);
                let a = combine(&pool[first], s, &pool[other], t);
                let b = combine(&pool[first], y / g, &pool[other], -(x / g));
                pool[first] = a;
                pool[other] = b;
            }
            let mut p = pool.swap_remove(first);
            idx.clear();
            let g0 = p[col];
            let g = gcd(g0, e);
            let u = (1..e).find(|&u| gcd(u, e) == 1 && u * g0 % e == g).unwrap_or(1);
            p.iter_mut().for_each(|x| *x = *x * u % e);
            let ann: Vec<u64> = p.iter().map(|&x| x * (e / g) % e).collect();
            if ann.iter().any(|&x| x != 0) {
                pool.push(ann);
            }
            pool.retain(|r| r.iter().any(|&x| x != 0));
            rows.push((col, p));
        }
        Howell { e, dim, rows }
    }

    pub fn modulus(&self) -> u64 {
        self.e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` to the canonical representative of its coset.
    pub fn reduce(&self, v: &mut [u64]) {
        let e = self.e;
        for (c, row) in &self.rows {
            let g = row[*c];
            let q = v[*c] / g;
            if q != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = (*x + (e - q * r % e)) % e;
                }
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w: Vec<u64> = v.iter().map(|&x| x % self.e).collect();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Number of elements of the subgroup.
    pub fn order(&self) -> u128 {
        self.rows.iter().map(|(c, r)| (self.e / r[*c]) as u128).product()
    }

    /// Rows of the form; they generate the subgroup.
    pub fn generators(&self) -> impl Iterator<Item = &[u64]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    /// Generators of the elements whose first `k` coordinates vanish, cut down to the rest.
    pub fn tail_from(&self, k: usize) -> Vec<Vec<u64>> {
        self.rows.iter().filter(|(c, _)| *c >= k).map(|(_, r)| r[k..].to_vec()).collect()
    }

    /// Contains every element of `other`.
    pub fn includes(&self, other: &Howell) -> bool {
        other.generators().all(|g| self.contains(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn span_brute(e: u64, dim: usize, gens: &[Vec<u64>]) -> HashSet<Vec<u64>> {
        let mut set: HashSet<Vec<u64>> = HashSet::from([vec![0; dim]]);
        loop {
            let mut next = set.clone();
            for v in &set {
                for g in gens {
                    next.insert(v.iter().zip(g).map(|(a, b)| (a + b) % e).collect());
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn howell_matches_brute_force_span() {
        let cases: Vec<(u64, Vec<Vec<u64>>)> = vec![
            (4, vec![vec![2, 1], vec![0, 2]]),
            (6, vec![vec![2, 3, 0], vec![3, 0, 4], vec![0, 2, 2]]),
            (8, vec![vec![4, 2, 1]]),
            (12, vec![vec![6, 4], vec![4, 6]]),
            (5, vec![]),
        ];
        for (e, gens) in cases {
            let dim = gens.first().map_or(2, |g| g.len());
            let h = Howell::new(e, dim, gens.clone());
            let span = span_brute(e, dim, &gens);
            assert_eq!(h.order(), span.len() as u128);
            let mut reps = HashSet::new();
            let total = (e as usize).pow(dim as u32);
            for code in 0..total {
                let v: Vec<u64> = (0..dim).map(|i| (code / (e as usize).pow(i as u32) % e as usize) as u64).collect();
                assert_eq!(h.contains(&v), span.contains(&v), "e={e} v={v:?}");
                let mut r = v.clone();
                h.reduce(&mut r);
                reps.insert(r);
            }
            assert_eq!(reps.len() as u128 * h.order(), total as u128);
            for k in 0..=dim {
                let tail = Howell::new(e, dim - k, h.tail_from(k));
                let expected = span.iter().filter(|v| v[..k].iter().all(|&x| x == 0)).count();
                assert_eq!(tail.order(), expected as u128, "e={e} k={k}");
            }
        }
    }

    #[test]
    fn basis_of_small_groups() {
        // Z/2 x Z/4 as pairs
        let add = |a: usize, b: usize| ((a / 4 + b / 4) % 2) * 4 + (a % 4 + b % 4) % 4;
        let g = GroupBasis::new(8, 0, add);
        let mut orders = g.orders().to_vec();
        orders.sort();
        assert_eq!(orders, vec![2, 4]);
        assert_eq!(g.exponent(), 4);
        for x in 0..8 {
            let mut v = Vec::new();
            g.embed_into(x, 4, &mut v);
            assert_eq!(g.from_embedded(&v, 4), x);
        }
        let trivial = GroupBasis::new(1, 0, |_, _| 0);
        assert_eq!(trivial.rank(), 0);
        assert_eq!(trivial.exponent(), 1);
    }
}

use std::fmt;

use thiserror::Error;

use super::ring::FiniteRing;
use crate::reglogic::{parse_linear, Coef, ParseError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PpError {
    #[error("free arities differ ({0} vs {1})")]
    Arity(usize, usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    RowWidth { row: usize, expected: usize, found: usize },
    #[error("entry {0} is not a ring element")]
    Entry(usize),
    #[error("ring element index {0} out of range")]
    ElementIndex(usize),
    #[error("module is over a different ring")]
    RingMismatch,
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("malformed matrix formula: {0}")]
    Matrix(String),
    #[error("search space too large ({0})")]
    TooLarge(String),
}

/// `φ(x̄) ≡ ∃ȳ. (x̄ ȳ)·Hᵀ = 0`: each row of `H` is one linear equation over the ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearPp {
    free: usize,
    bound: usize,
    rows: Vec<Vec<usize>>,
}

impl LinearPp {
    pub fn new(ring: &FiniteRing, free: usize, bound: usize, rows: Vec<Vec<usize>>) -> Result<Self, PpError> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != free + bound {
                return Err(PpError::RowWidth { row: i, expected: free + bound, found: r.len() });
            }
            if let Some(&x) = r.iter().find(|&&x| x >= ring.size()) {
                return Err(PpError::Entry(x));
            }
        }
        Ok(LinearPp { free, bound, rows })
    }

    /// `x̄ = x̄`.
    pub fn truth(n: usize) -> Self {
        LinearPp { free: n, bound: 0, rows: Vec::new() }
    }

    /// `x̄ = 0`.
    pub fn zero(ring: &FiniteRing, n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect();
        LinearPp { free: n, bound: 0, rows }
    }

    pub fn free(&self) -> usize {
        self.free
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn width(&self) -> usize {
        self.free + self.bound
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Rows in a context of `total` free and `bound_total` bound variables: free variable `i`
    /// goes to column `placement[i]`, bound ones start at bound position `bound_offset`.
    fn placed(&self, ring: &FiniteRing, total: usize, placement: &[usize], bound_offset: usize, bound_total: usize) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| {
                let mut row = vec![ring.zero(); total + bound_total];
                for (i, &c) in r[..self.free].iter().enumerate() {
                    let col = placement[i];
                    row[col] = ring.add(row[col], c);
                }
                for (j, &c) in r[self.free..].iter().enumerate() {
                    row[total + bound_offset + j] = c;
                }
                row
            })
            .collect()
    }

    /// Conjunction of formulas, each placed on a list of columns of a context with `total`
    /// free variables. Bound variables are kept apart.
    pub fn conjoin(ring: &FiniteRing, total: usize, parts: &[(&LinearPp, &[usize])]) -> LinearPp {
        let bound_total: usize = parts.iter().map(|(p, _)| p.bound).sum();
        let mut rows = Vec::new();
        let mut offset = 0;
        for (p, placement) in parts {
            debug_assert_eq!(placement.len(), p.free);
            rows.extend(p.placed(ring, total, placement, offset, bound_total));
            offset += p.bound;
        }
        LinearPp { free: total, bound: bound_total, rows }
    }

    pub fn and(ring: &FiniteRing, a: &LinearPp, b: &LinearPp) -> Result<LinearPp, PpError> {
        if a.free != b.free {
            return Err(PpError::Arity(a.free, b.free));
        }
        let ids: Vec<usize> = (0..a.free).collect();
        Ok(Self::conjoin(ring, a.free, &[(a, &ids), (b, &ids)]))
    }

    /// `∃` over the free variables not listed in `keep`; the kept ones become `0..keep.len()`.
    pub fn project(&self, keep: &[usize]) -> LinearPp {
        let mut order: Vec<usize> = keep.to_vec();
        order.extend((0..self.free).filter(|i| !keep.contains(i)));
        order.extend(self.free..self.width());
        let rows = self.rows.iter().map(|r| order.iter().map(|&c| r[c]).collect()).collect();
        LinearPp { free: keep.len(), bound: self.width() - keep.len(), rows }
    }

    /// `(φ + ψ)(x̄) ≡ ∃ū v̄. x̄ = ū + v̄ ∧ φ(ū) ∧ ψ(v̄)`.
    pub fn sum(ring: &FiniteRing, a: &LinearPp, b: &LinearPp) -> Result<LinearPp, PpError> {
        if a.free != b.free {
            return Err(PpError::Arity(a.free, b.free));
        }
        let n = a.free;
        let us: Vec<usize> = (n..2 * n).collect();
        let vs: Vec<usize> = (2 * n..3 * n).collect();
        let mut eq = Vec::new();
        for i in 0..n {
            let mut row = vec![ring.zero(); 3 * n];
            row[i] = ring.one();
            row[n + i] = ring.neg(ring.one());
            row[2 * n + i] = ring.neg(ring.one());
            eq.push(row);
        }
        let eq = LinearPp { free: 3 * n, bound: 0, rows: eq };
        let all: Vec<usize> = (0..3 * n).collect();
        let joined = Self::conjoin(ring, 3 * n, &[(&eq, &all), (a, &us), (b, &vs)]);
        Ok(joined.project(&(0..n).collect::<Vec<_>>()))
    }

    /// Drops zero rows and eliminates each bound variable that has a unit coefficient in
    /// some row: that row determines it, so row and variable both disappear.
    pub fn simplify(&self, ring: &FiniteRing) -> LinearPp {
        let mut rows: Vec<Vec<usize>> = self.rows.clone();
        let mut bound: Vec<usize> = (self.free..self.width()).collect();
        loop {
            let pivot = bound.iter().enumerate().find_map(|(bi, &c)| {
                rows.iter().position(|r| ring.is_unit(r[c])).map(|ri| (bi, c, ri))
            });
            let Some((bi, c, ri)) = pivot else { break };
            let p = rows.remove(ri);
            let inv = (0..ring.size()).find(|&u| ring.mul(u, p[c]) == ring.one()).expect("unit");
            // row ← row − (row[c]·u⁻¹)·p, making column c vanish everywhere
            for r in rows.iter_mut() {
                let f = ring.mul(r[c], inv);
                if f != ring.zero() {
                    for (x, &y) in r.iter_mut().zip(&p) {
                        *x = ring.sub(*x, ring.mul(f, y));
                    }
                }
            }
            bound.remove(bi);
        }
        // bound variables that no longer occur are dropped as well
        bound.retain(|&c| rows.iter().any(|r| r[c] != ring.zero()));
        let cols: Vec<usize> = (0..self.free).chain(bound.iter().copied()).collect();
        let mut out: Vec<Vec<usize>> =
            rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect::<Vec<_>>()).filter(|r| r.iter().any(|&x| x != ring.zero())).collect();
        out.dedup();
        LinearPp { free: self.free, bound: bound.len(), rows: out }
    }

    /// Reads either `pp n=1 m=1 rows=[[1,-2]]` or the human syntax of the linear parser.
    /// Matrix entries are integers read as `k·1`, or strings `"@i"` for element `i`.
    pub fn parse(ring: &FiniteRing, text: &str, free: Option<&[String]>) -> Result<(LinearPp, Vec<String>), PpError> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("pp ") {
            let p = parse_matrix(ring, rest)?;
            let names = free.map(|f| f.to_vec()).unwrap_or_else(|| default_names(p.free));
            if names.len() != p.free {
                return Err(PpError::Arity(p.free, names.len()));
            }
            return Ok((p, names));
        }
        let syn = parse_linear(t, free)?;
        let width = syn.free.len() + syn.bound.len();
        let mut rows = Vec::new();
        for r in &syn.rows {
            let mut row = vec![ring.zero(); width];
            for &(col, coef) in r {
                let c = match coef {
                    Coef::Int(k) => ring.from_int(k),
                    Coef::Elem(i) if i < ring.size() => i,
                    Coef::NegElem(i) if i < ring.size() => ring.neg(i),
                    Coef::Elem(i) | Coef::NegElem(i) => return Err(PpError::ElementIndex(i)),
                };
                row[col] = ring.add(row[col], c);
            }
            rows.push(row);
        }
        Ok((LinearPp { free: syn.free.len(), bound: syn.bound.len(), rows }, syn.free))
    }

    /// Human syntax with the given free variable names; bound variables are `y0, y1, …`.
    pub fn display<'a>(&'a self, ring: &'a FiniteRing, names: &'a [String]) -> impl fmt::Display + 'a {
        Shown { pp: self, ring, names }
    }
}

fn default_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["x".to_string()]
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

fn parse_matrix(ring: &FiniteRing, text: &str) -> Result<LinearPp, PpError> {
    let bad = |m: &str| PpError::Matrix(m.to_string());
    let mut n = None;
    let mut m = None;
    let mut rows = None;
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (key, after) = rest.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let after = after.trim_start();
        match key.trim() {
            "n" | "m" => {
                let end = after.find(char::is_whitespace).unwrap_or(after.len());
                let v: usize = after[..end].parse().map_err(|_| bad("arity must be a number"))?;
                if key.trim() == "n" {
                    n = Some(v)
                } else {
                    m = Some(v)
                }
                rest = after[end..].trim_start();
            }
            "rows" => {
                let value: serde_json::Value = serde_json::Deserializer::from_str(after)
                    .into_iter::<serde_json::Value>()
                    .next()
                    .ok_or_else(|| bad("missing rows"))?
                    .map_err(|e| bad(&e.to_string()))?;
                let arr = value.as_array().ok_or_else(|| bad("rows must be a list"))?;
                let mut out = Vec::new();
                for r in arr {
                    let r = r.as_array().ok_or_else(|| bad("each row must be a list"))?;
                    let mut row = Vec::new();
                    for x in r {
                        let e = if let Some(k) = x.as_i64() {
                            ring.from_int(k)
                        } else if let Some(s) = x.as_str().and_then(|s| s.strip_prefix('@')) {
                            let i: usize = s.parse().map_err(|_| bad("bad element label"))?;
                            if i >= ring.size() {
                                return Err(PpError::ElementIndex(i));
                            }
                            i
                        } else {
                            return Err(bad("entries are integers or \"@i\""));
                        };
                        row.push(e);
                    }
                    out.push(row);
                }
                rows = Some(out);
                let close = matching_bracket(after).ok_or_else(|| bad("unbalanced brackets"))?;
                rest = after[close + 1..].trim_start();
            }
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| bad("missing n"))?;
    let m = m.unwrap_or(0);
    LinearPp::new(ring, n, m, rows.unwrap_or_default())
}

fn matching_bracket(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

struct Shown<'a> {
    pp: &'a LinearPp,
    ring: &'a FiniteRing,
    names: &'a [String],
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (pp, ring) = (self.pp, self.ring);
        let bound: Vec<String> = (0..pp.bound).map(|j| format!("y{j}")).collect();
        let var = |c: usize| if c < pp.free { self.names[c].clone() } else { bound[c - pp.free].clone() };
        if !bound.is_empty() {
            write!(f, "E {}: ", bound.join(" "))?;
        }
        if pp.rows.is_empty() {
            return write!(f, "T");
        }
        for (i, r) in pp.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            let mut first = true;
            for (c, &a) in r.iter().enumerate() {
                if a == ring.zero() {
                    continue;
                }
                let (neg, label) = match ring.int_label(a) {
                    Some(k) if k < 0 => (true, if k == -1 { String::new() } else { format!("{}*", -k) }),
                    Some(1) => (false, String::new()),
                    Some(k) => (false, format!("{k}*")),
                    None => (false, format!("@{a}*")),
                };
                let sep = match (first, neg) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                write!(f, "{sep}{label}{}", var(c))?;
                first = false;
            }
            if first {
                write!(f, "0")?;
            }
            write!(f, " = 0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_syntaxes_agree() {
        let z4 = FiniteRing::zn(4);
        let (a, names) = LinearPp::parse(&z4, "E y: x = 2*y", None).unwrap();
        let (b, _) = LinearPp::parse(&z4, "pp n=1 m=1 rows=[[1,-2]]", None).unwrap();
        assert_eq!(a, b);
        assert_eq!(names, ["x"]);
        assert_eq!(a.display(&z4, &names).to_string(), "E y0: x + 2*y0 = 0");
        let (t, _) = LinearPp::parse(&z4, "pp n=2 rows=[]", None).unwrap();
        assert_eq!(t, LinearPp::truth(2));
        assert!(LinearPp::parse(&z4, "pp n=1 rows=[[1,2]]", None).is_err());
    }

    #[test]
    fn simplify_eliminates_unit_pivots() {
        let z4 = FiniteRing::zn(4);
        let (p, _) = LinearPp::parse(&z4, "E y: x = y", None).unwrap();
        assert_eq!(p.simplify(&z4), LinearPp::truth(1));
        let (q, _) = LinearPp::parse(&z4, "E y: x = 2*y", None).unwrap();
        assert_eq!(q.simplify(&z4), q);
    }

    #[test]
    fn projection_moves_columns() {
        let z4 = FiniteRing::zn(4);
        let (p, _) = LinearPp::parse(&z4, "vars a b: a = 2*b", None).unwrap();
        let q = p.project(&[0]);
        assert_eq!((q.free(), q.bound()), (1, 1));
        assert_eq!(q.rows(), &[vec![1, 2]]);
    }
}

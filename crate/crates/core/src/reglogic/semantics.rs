use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::normal::{compile_functions, pp_normalize, relational_signature};
use super::syntax::{Formula, Signature, Term, Theory, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("structure has {found} sorts, signature has {expected}")]
    SortCount { expected: usize, found: usize },
    #[error("structure has {found} relations, signature has {expected}")]
    RelationCount { expected: usize, found: usize },
    #[error("tuple {tuple:?} does not fit relation `{relation}`")]
    BadTuple { relation: String, tuple: Vec<usize> },
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("variable `{0}` has no value")]
    Unassigned(String),
    #[error("value {value} is outside the carrier of sort `{sort}`")]
    OutOfRange { sort: String, value: usize },
    #[error("sort mismatch for `{0}`")]
    SortMismatch(String),
}

/// A finite structure for a relational signature; function symbols live in it as graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinStructure {
    sizes: Vec<usize>,
    tuples: Vec<Vec<Vec<usize>>>,
    tables: Vec<Vec<bool>>,
    arities: Vec<Vec<usize>>,
}

impl FinStructure {
    /// `relations[i]` lists the tuples of the `i`-th relation of `relational_signature(sig)`.
    pub fn new(sig: &Signature, sizes: Vec<usize>, relations: Vec<Vec<Vec<usize>>>) -> Result<Self, SemanticsError> {
        let rsig = relational_signature(sig);
        if sizes.len() != rsig.sorts.len() {
            return Err(SemanticsError::SortCount { expected: rsig.sorts.len(), found: sizes.len() });
        }
        if relations.len() != rsig.relations.len() {
            return Err(SemanticsError::RelationCount { expected: rsig.relations.len(), found: relations.len() });
        }
        let mut tables = Vec::new();
        let mut tuples = Vec::new();
        for (r, mut ts) in rsig.relations.iter().zip(relations) {
            let len: usize = r.sorts.iter().map(|&s| sizes[s]).product();
            let mut table = vec![false; len];
            for t in &ts {
                if t.len() != r.sorts.len() || t.iter().zip(&r.sorts).any(|(&v, &s)| v >= sizes[s]) {
                    return Err(SemanticsError::BadTuple { relation: r.name.clone(), tuple: t.clone() });
                }
                table[index(t, &r.sorts, &sizes)] = true;
            }
            ts.sort();
            ts.dedup();
            tables.push(table);
            tuples.push(ts);
        }
        let arities = rsig.relations.iter().map(|r| r.sorts.clone()).collect();
        Ok(FinStructure { sizes, tuples, tables, arities })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn tuples(&self, rel: usize) -> &[Vec<usize>] {
        &self.tuples[rel]
    }

    pub fn holds(&self, rel: usize, args: &[usize]) -> bool {
        self.tables[rel][index(args, &self.arities[rel], &self.sizes)]
    }

    /// Sorts of the arguments of relation `rel`.
    pub fn arity(&self, rel: usize) -> &[usize] {
        &self.arities[rel]
    }

    pub fn num_relations(&self) -> usize {
        self.tables.len()
    }

    /// Componentwise product structure.
    pub fn product(&self, other: &FinStructure) -> FinStructure {
        let sizes: Vec<usize> = self.sizes.iter().zip(&other.sizes).map(|(a, b)| a * b).collect();
        let nb = &other.sizes;
        let mut tuples: Vec<Vec<Vec<usize>>> = Vec::new();
        for r in 0..self.tables.len() {
            let mut ts: Vec<Vec<usize>> = Vec::new();
            for a in &self.tuples[r] {
                for b in &other.tuples[r] {
                    ts.push(a.iter().zip(b).zip(&self.arities[r]).map(|((&x, &y), &s)| x * nb[s] + y).collect());
                }
            }
            tuples.push(ts);
        }
        let mut tables = Vec::new();
        for (r, ts) in tuples.iter_mut().enumerate() {
            ts.sort();
            let len: usize = self.arities[r].iter().map(|&s| sizes[s]).product();
            let mut table = vec![false; len];
            for t in ts.iter() {
                table[index(t, &self.arities[r], &sizes)] = true;
            }
            tables.push(table);
        }
        FinStructure { sizes, tuples, tables, arities: self.arities.clone() }
    }

    /// Image of the structure along surjective maps per sort: the induced structure on the
    /// target carriers.
    pub fn image(&self, maps: &[Vec<usize>], target_sizes: &[usize]) -> FinStructure {
        let tuples: Vec<Vec<Vec<usize>>> = (0..self.tables.len())
            .map(|r| {
                let mut ts: Vec<Vec<usize>> = self.tuples[r]
                    .iter()
                    .map(|t| t.iter().zip(&self.arities[r]).map(|(&v, &s)| maps[s][v]).collect())
                    .collect();
                ts.sort();
                ts.dedup();
                ts
            })
            .collect();
        let tables = tuples
            .iter()
            .enumerate()
            .map(|(r, ts)| {
                let len: usize = self.arities[r].iter().map(|&s| target_sizes[s]).product();
                let mut table = vec![false; len];
                for t in ts {
                    table[index(t, &self.arities[r], target_sizes)] = true;
                }
                table
            })
            .collect();
        FinStructure { sizes: target_sizes.to_vec(), tuples, tables, arities: self.arities.clone() }
    }
}

fn index(t: &[usize], sorts: &[usize], sizes: &[usize]) -> usize {
    t.iter().zip(sorts).fold(0, |acc, (&v, &s)| acc * sizes[s] + v)
}

/// JSON form `{"sorts": {S: n}, "relations": {R: [[...], ...]}}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RawStructure {
    pub sorts: BTreeMap<String, usize>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
}

impl RawStructure {
    pub fn build(&self, sig: &Signature) -> Result<FinStructure, SemanticsError> {
        let rsig = relational_signature(sig);
        for name in self.sorts.keys() {
            if rsig.sort(name).is_none() {
                return Err(SemanticsError::Unknown(name.clone()));
            }
        }
        for name in self.relations.keys() {
            if rsig.relation(name).is_none() {
                return Err(SemanticsError::Unknown(name.clone()));
            }
        }
        let sizes = rsig
            .sorts
            .iter()
            .map(|s| self.sorts.get(s).copied().ok_or_else(|| SemanticsError::Unknown(s.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let rels = rsig.relations.iter().map(|r| self.relations.get(&r.name).cloned().unwrap_or_default()).collect();
        FinStructure::new(sig, sizes, rels)
    }

    pub fn from_structure(sig: &Signature, m: &FinStructure) -> Self {
        let rsig = relational_signature(sig);
        RawStructure {
            sorts: rsig.sorts.iter().cloned().zip(m.sizes.iter().copied()).collect(),
            relations: rsig.relations.iter().enumerate().map(|(i, r)| (r.name.clone(), m.tuples[i].clone())).collect(),
        }
    }
}

/// Slot-addressed form of a relational formula.
enum Compiled {
    True,
    Rel(usize, Vec<usize>),
    Eq(usize, usize),
    And(Box<Compiled>, Box<Compiled>),
    Exists(Vec<(usize, usize)>, Box<Compiled>),
}

struct Compiler<'a> {
    sig: &'a Signature,
    scope: Vec<(String, usize, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn slot(&self, t: &Term) -> Result<(usize, usize), SemanticsError> {
        match t {
            Term::Var(v) => self
                .scope
                .iter()
                .rev()
                .find(|(n, _, _)| n == v)
                .map(|&(_, slot, sort)| (slot, sort))
                .ok_or_else(|| SemanticsError::Unassigned(v.clone())),
            Term::App(f, _) => Err(SemanticsError::Unknown(format!("{f}(…) (function terms are flattened first)"))),
        }
    }

    fn compile(&mut self, f: &Formula) -> Result<Compiled, SemanticsError> {
        Ok(match f {
            Formula::True => Compiled::True,
            Formula::Rel(r, args) => {
                let ri = self.sig.relation(r).ok_or_else(|| SemanticsError::Unknown(r.clone()))?;
                let sorts = &self.sig.relations[ri].sorts;
                if sorts.len() != args.len() {
                    return Err(SemanticsError::SortMismatch(r.clone()));
                }
                let mut slots = Vec::new();
                for (a, &s) in args.iter().zip(sorts) {
                    let (slot, sort) = self.slot(a)?;
                    if sort != s {
                        return Err(SemanticsError::SortMismatch(r.clone()));
                    }
                    slots.push(slot);
                }
                Compiled::Rel(ri, slots)
            }
            Formula::Eq(a, b) => {
                let ((x, sx), (y, sy)) = (self.slot(a)?, self.slot(b)?);
                if sx != sy {
                    return Err(SemanticsError::SortMismatch(format!("{a} = {b}")));
                }
                Compiled::Eq(x, y)
            }
            Formula::And(a, b) => Compiled::And(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(vs, body) => {
                let n = self.scope.len();
                let mut binds = Vec::new();
                for v in vs {
                    self.scope.push((v.name.clone(), self.slots, v.sort));
                    binds.push((self.slots, v.sort));
                    self.slots += 1;
                }
                let inner = self.compile(body)?;
                self.scope.truncate(n);
                Compiled::Exists(binds, Box::new(inner))
            }
        })
    }
}

fn run(m: &FinStructure, f: &Compiled, env: &mut Vec<usize>) -> bool {
    match f {
        Compiled::True => true,
        Compiled::Rel(r, slots) => {
            let sorts = &m.arities[*r];
            let idx = slots.iter().zip(sorts).fold(0, |acc, (&sl, &s)| acc * m.sizes[s] + env[sl]);
            m.tables[*r][idx]
        }
        Compiled::Eq(a, b) => env[*a] == env[*b],
        Compiled::And(a, b) => run(m, a, env) && run(m, b, env),
        Compiled::Exists(binds, body) => exists_from(m, binds, 0, body, env),
    }
}

fn exists_from(m: &FinStructure, binds: &[(usize, usize)], i: usize, body: &Compiled, env: &mut Vec<usize>) -> bool {
    if i == binds.len() {
        return run(m, body, env);
    }
    let (slot, sort) = binds[i];
    (0..m.sizes[sort]).any(|v| {
        env[slot] = v;
        exists_from(m, binds, i + 1, body, env)
    })
}

/// A formula ready for repeated evaluation, with its free variables in slots `0..n`.
pub struct Evaluator<'a> {
    m: &'a FinStructure,
    compiled: Compiled,
    free: Vec<Var>,
    slots: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(sig: &Signature, m: &'a FinStructure, f: &Formula, free: &[Var]) -> Result<Self, SemanticsError> {
        let rsig = relational_signature(sig);
        let flat;
        let f = if sig.functions.is_empty() {
            f
        } else {
            flat = pp_normalize(sig, f).to_formula();
            &flat
        };
        if m.sizes.len() != rsig.sorts.len() {
            return Err(SemanticsError::SortCount { expected: rsig.sorts.len(), found: m.sizes.len() });
        }
        let mut c = Compiler {
            sig: &rsig,
            scope: free.iter().enumerate().map(|(i, v)| (v.name.clone(), i, v.sort)).collect(),
            slots: free.len(),
        };
        let compiled = c.compile(f)?;
        Ok(Evaluator { m, compiled, free: free.to_vec(), slots: c.slots })
    }

    pub fn eval(&self, values: &[usize]) -> bool {
        let mut env = vec![0; self.slots];
        env[..values.len()].copy_from_slice(values);
        run(self.m, &self.compiled, &mut env)
    }

    /// Calls `visit` on every assignment of the free variables, last variable fastest.
    pub fn for_each_assignment(&self, mut visit: impl FnMut(&[usize], bool) -> bool) {
        let sizes: Vec<usize> = self.free.iter().map(|v| self.m.sizes[v.sort]).collect();
        if sizes.iter().any(|&s| s == 0) {
            return;
        }
        let mut cur = vec![0usize; sizes.len()];
        loop {
            if !visit(&cur, self.eval(&cur)) {
                return;
            }
            let mut i = sizes.len();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < sizes[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// Truth of `f` under a named assignment of its free variables.
pub fn eval(sig: &Signature, m: &FinStructure, f: &Formula, assignment: &[(Var, usize)]) -> Result<bool, SemanticsError> {
    let free: Vec<Var> = assignment.iter().map(|(v, _)| v.clone()).collect();
    let rsig = relational_signature(sig);
    let values: Vec<usize> = assignment.iter().map(|(_, x)| *x).collect();
    for (v, x) in assignment {
        if *x >= m.sizes[v.sort] {
            return Err(SemanticsError::OutOfRange { sort: rsig.sorts[v.sort].clone(), value: *x });
        }
    }
    Ok(Evaluator::new(sig, m, f, &free)?.eval(&values))
}

/// All satisfying tuples for the listed free variables, in mixed-radix order.
pub fn eval_set(sig: &Signature, m: &FinStructure, f: &Formula, free: &[Var]) -> Result<Vec<Vec<usize>>, SemanticsError> {
    let e = Evaluator::new(sig, m, f, free)?;
    let mut out = Vec::new();
    e.for_each_assignment(|vals, ok| {
        if ok {
            out.push(vals.to_vec());
        }
        true
    });
    Ok(out)
}

/// A sequent and an assignment satisfying its left side but not its right side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub sequent: usize,
    pub assignment: Vec<(String, usize)>,
}

/// First violated sequent, after compiling function symbols to graph relations.
pub fn find_counterexample(t: &Theory, m: &FinStructure) -> Result<Option<Counterexample>, SemanticsError> {
    let rel = compile_functions(t);
    for (i, s) in rel.sequents.iter().enumerate() {
        let lhs = Evaluator::new(&rel.signature, m, &s.lhs, &s.vars)?;
        let rhs = Evaluator::new(&rel.signature, m, &s.rhs, &s.vars)?;
        let mut bad = None;
        lhs.for_each_assignment(|vals, ok| {
            if ok && !rhs.eval(vals) {
                bad = Some(vals.to_vec());
                false
            } else {
                true
            }
        });
        if let Some(vals) = bad {
            let assignment = s.vars.iter().zip(vals).map(|(v, x)| (v.name.clone(), x)).collect();
            return Ok(Some(Counterexample { sequent: i, assignment }));
        }
    }
    Ok(None)
}

pub fn models(t: &Theory, m: &FinStructure) -> Result<bool, SemanticsError> {
    Ok(find_counterexample(t, m)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reglogic::parser::{parse_formula_with, parse_theory};

    fn digraph(n: usize, edges: &[(usize, usize)]) -> (Signature, FinStructure) {
        let sig = Signature::one_sorted(&[("E", 2)]);
        let m = FinStructure::new(&sig, vec![n], vec![edges.iter().map(|&(a, b)| vec![a, b]).collect()]).unwrap();
        (sig, m)
    }

    #[test]
    fn truth_and_sources() {
        let (sig, m) = digraph(2, &[(0, 1)]);
        let x = [Var::new("x", 0)];
        assert_eq!(eval(&sig, &m, &Formula::True, &[]), Ok(true));
        let f = parse_formula_with("exists y: E(x,y)", &sig, &x).unwrap();
        assert_eq!(eval_set(&sig, &m, &f, &x).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn conjunction_is_intersection() {
        let (sig, m) = digraph(3, &[(0, 1), (1, 1), (2, 0)]);
        let x = [Var::new("x", 0)];
        let a = parse_formula_with("exists y: E(x,y)", &sig, &x).unwrap();
        let b = parse_formula_with("exists y: E(y,x)", &sig, &x).unwrap();
        let both = Formula::and(a.clone(), b.clone());
        let sa = eval_set(&sig, &m, &a, &x).unwrap();
        let sb = eval_set(&sig, &m, &b, &x).unwrap();
        let inter: Vec<_> = sa.into_iter().filter(|t| sb.contains(t)).collect();
        assert_eq!(eval_set(&sig, &m, &both, &x).unwrap(), inter);
    }

    #[test]
    fn models_examples() {
        let (_, m) = digraph(2, &[(0, 1)]);
        let t = parse_theory("forall x y: E(x,y) => E(x,y)").unwrap();
        assert_eq!(models(&t, &m), Ok(true));
        let t = parse_theory("forall x: T => exists y: E(x,y)").unwrap();
        let cx = find_counterexample(&t, &m).unwrap().unwrap();
        assert_eq!(cx.assignment, vec![("x".to_string(), 1)]);
    }

    #[test]
    fn function_graphs_must_be_functional() {
        let t = parse_theory("forall x: T => f(x) = x").unwrap();
        let sig = t.signature.clone();
        let id = FinStructure::new(&sig, vec![2], vec![vec![vec![0, 0], vec![1, 1]]]).unwrap();
        assert_eq!(models(&t, &id), Ok(true));
        let partial = FinStructure::new(&sig, vec![2], vec![vec![vec![0, 0]]]).unwrap();
        assert_eq!(models(&t, &partial), Ok(false));
    }

    #[test]
    fn json_structure() {
        let sig = Signature::one_sorted(&[("E", 2)]);
        let raw: RawStructure = serde_json::from_str(r#"{"sorts":{"U":2},"relations":{"E":[[0,1]]}}"#).unwrap();
        let m = raw.build(&sig).unwrap();
        assert!(m.holds(0, &[0, 1]) && !m.holds(0, &[1, 0]));
        let bad: RawStructure = serde_json::from_str(r#"{"sorts":{"U":2},"relations":{"E":[[0,2]]}}"#).unwrap();
        assert!(bad.build(&sig).is_err());
    }
}

use std::fmt;

use serde::Serialize;

/// Sorted relational signature with optional function symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub relations: Vec<RelSymbol>,
    pub functions: Vec<FunSymbol>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelSymbol {
    pub name: String,
    pub sorts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunSymbol {
    pub name: String,
    pub args: Vec<usize>,
    pub result: usize,
}

impl Signature {
    /// One sort `U` and the given relations over it.
    pub fn one_sorted(relations: &[(&str, usize)]) -> Self {
        Signature {
            sorts: vec!["U".into()],
            relations: relations
                .iter()
                .map(|&(name, k)| RelSymbol { name: name.into(), sorts: vec![0; k] })
                .collect(),
            functions: Vec::new(),
        }
    }

    pub fn sort(&self, name: &str) -> Option<usize> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn relation(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn function(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }
}

/// A bound or universally quantified variable with its sort index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Var {
    pub name: String,
    pub sort: usize,
}

impl Var {
    pub fn new(name: &str, sort: usize) -> Self {
        Var { name: name.to_string(), sort }
    }
}

/// Regular formulas: truth, atoms, binary conjunction and existential quantification.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Formula {
    True,
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    /// Left-nested conjunction; `T` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Free variable names in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        fn term(t: &Term, bound: &[String], out: &mut Vec<String>) {
            match t {
                Term::Var(v) => {
                    if !bound.contains(v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Term::App(_, args) => args.iter().for_each(|a| term(a, bound, out)),
            }
        }
        match self {
            Formula::True => {}
            Formula::Rel(_, args) => args.iter().for_each(|a| term(a, bound, out)),
            Formula::Eq(a, b) => {
                term(a, bound, out);
                term(b, bound, out);
            }
            Formula::And(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().map(|v| v.name.clone()));
                body.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Number of nodes, used to bound generated formulas.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::Rel(..) | Formula::Eq(..) => 1,
            Formula::And(a, b) => 1 + a.size() + b.size(),
            Formula::Exists(_, b) => 1 + b.size(),
        }
    }
}

/// `forall vars: lhs => rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sequent {
    pub vars: Vec<Var>,
    pub lhs: Formula,
    pub rhs: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theory {
    pub signature: Signature,
    pub sequents: Vec<Sequent>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                write!(f, ")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// Prints formulas and sequents; sort annotations appear only for many-sorted signatures.
pub struct Printer<'a> {
    pub signature: &'a Signature,
}

impl Printer<'_> {
    fn vars(&self, vars: &[Var]) -> String {
        vars.iter()
            .map(|v| {
                if self.signature.sorts.len() > 1 {
                    format!("({}:{})", v.name, self.signature.sorts[v.sort])
                } else {
                    v.name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn formula(&self, phi: &Formula) -> String {
        match phi {
            Formula::True => "T".into(),
            Formula::Rel(r, args) if args.is_empty() => format!("{r}()"),
            Formula::Rel(r, args) => {
                format!("{r}({})", args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
            }
            Formula::Eq(a, b) => format!("{a} = {b}"),
            Formula::And(a, b) => {
                let left = match **a {
                    Formula::Exists(..) => format!("({})", self.formula(a)),
                    _ => self.formula(a),
                };
                let right = match **b {
                    Formula::Exists(..) | Formula::And(..) => format!("({})", self.formula(b)),
                    _ => self.formula(b),
                };
                format!("{left} & {right}")
            }
            Formula::Exists(vs, body) => format!("exists {}: {}", self.vars(vs), self.formula(body)),
        }
    }

    pub fn sequent(&self, s: &Sequent) -> String {
        let lhs = match s.lhs {
            Formula::Exists(..) => format!("({})", self.formula(&s.lhs)),
            _ => self.formula(&s.lhs),
        };
        let body = format!("{lhs} => {}", self.formula(&s.rhs));
        if s.vars.is_empty() {
            body
        } else {
            format!("forall {}: {body}", self.vars(&s.vars))
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = &self.signature;
        for s in &sig.sorts {
            writeln!(f, "sort {s}")?;
        }
        let names = |xs: &[usize]| xs.iter().map(|&i| sig.sorts[i].as_str()).collect::<Vec<_>>().join(",");
        for r in &sig.relations {
            writeln!(f, "rel {}({})", r.name, names(&r.sorts))?;
        }
        for g in &sig.functions {
            writeln!(f, "fun {}({}) -> {}", g.name, names(&g.args), sig.sorts[g.result])?;
        }
        let p = Printer { signature: sig };
        for s in &self.sequents {
            writeln!(f, "{}", p.sequent(s))?;
        }
        Ok(())
    }
}

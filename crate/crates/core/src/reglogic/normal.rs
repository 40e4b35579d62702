use std::collections::{HashMap, HashSet};

use super::syntax::{Formula, RelSymbol, Sequent, Signature, Term, Theory, Var};

/// `∃ bound. atom_1 ∧ … ∧ atom_k` with atoms over variables only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpFormula {
    pub bound: Vec<Var>,
    pub atoms: Vec<Formula>,
}

impl PpFormula {
    pub fn to_formula(&self) -> Formula {
        Formula::exists(self.bound.clone(), Formula::conj(self.atoms.iter().cloned()))
    }
}

/// Function symbols become relations `f(args…, result)` appended after the relations.
pub fn relational_signature(sig: &Signature) -> Signature {
    let mut out = sig.clone();
    for f in &sig.functions {
        let mut sorts = f.args.clone();
        sorts.push(f.result);
        out.relations.push(RelSymbol { name: f.name.clone(), sorts });
    }
    out.functions.clear();
    out
}

struct Fresh {
    used: HashSet<String>,
}

impl Fresh {
    fn new(f: &Formula) -> Self {
        Fresh { used: f.free_vars().into_iter().collect() }
    }

    fn name(&mut self, base: &str) -> String {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
        let stem = if stem.is_empty() { "v" } else { stem };
        let mut k = 0;
        loop {
            let cand = if k == 0 && !self.used.contains(base) { base.to_string() } else { format!("{stem}_{k}") };
            if !self.used.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
            k += 1;
        }
    }
}

struct Normalizer<'a> {
    sig: &'a Signature,
    fresh: Fresh,
    bound: Vec<Var>,
    atoms: Vec<Formula>,
}

impl Normalizer<'_> {
    /// Replaces a term by a variable, emitting graph atoms for function applications.
    fn flatten(&mut self, t: &Term, env: &HashMap<String, String>) -> String {
        match t {
            Term::Var(v) => env.get(v).cloned().unwrap_or_else(|| v.clone()),
            Term::App(f, args) => {
                let mut vars: Vec<Term> = args.iter().map(|a| Term::Var(self.flatten(a, env))).collect();
                let sym = &self.sig.functions[self.sig.function(f).expect("function symbol is declared")];
                let z = self.fresh.name("z");
                self.bound.push(Var { name: z.clone(), sort: sym.result });
                vars.push(Term::Var(z.clone()));
                self.atoms.push(Formula::Rel(f.clone(), vars));
                z
            }
        }
    }

    fn go(&mut self, f: &Formula, env: &mut HashMap<String, String>) {
        match f {
            Formula::True => {}
            Formula::Rel(r, args) => {
                let vs = args.iter().map(|a| Term::Var(self.flatten(a, env))).collect();
                self.atoms.push(Formula::Rel(r.clone(), vs));
            }
            Formula::Eq(a, b) => {
                let (x, y) = (self.flatten(a, env), self.flatten(b, env));
                self.atoms.push(Formula::Eq(Term::Var(x), Term::Var(y)));
            }
            Formula::And(a, b) => {
                self.go(a, env);
                self.go(b, env);
            }
            Formula::Exists(vs, body) => {
                let saved: Vec<(String, Option<String>)> =
                    vs.iter().map(|v| (v.name.clone(), env.get(&v.name).cloned())).collect();
                for v in vs {
                    let name = self.fresh.name(&v.name);
                    self.bound.push(Var { name: name.clone(), sort: v.sort });
                    env.insert(v.name.clone(), name);
                }
                self.go(body, env);
                for (k, old) in saved.into_iter().rev() {
                    match old {
                        Some(o) => env.insert(k, o),
                        None => env.remove(&k),
                    };
                }
            }
        }
    }
}

/// Prenex form `∃ȳ (conjunction of atoms)`; bound variables are renamed apart from every
/// name in `f`, and function terms are replaced by graph atoms.
pub fn pp_normalize(sig: &Signature, f: &Formula) -> PpFormula {
    let mut n = Normalizer { sig, fresh: Fresh::new(f), bound: Vec::new(), atoms: Vec::new() };
    // free variables keep their names
    let mut env = HashMap::new();
    n.go(f, &mut env);
    PpFormula { bound: n.bound, atoms: n.atoms }
}

/// Equivalent relational theory: function terms flattened, functionality axioms appended.
pub fn compile_functions(t: &Theory) -> Theory {
    if t.signature.functions.is_empty() {
        return t.clone();
    }
    let sig = relational_signature(&t.signature);
    let mut sequents: Vec<Sequent> = t
        .sequents
        .iter()
        .map(|s| Sequent {
            vars: s.vars.clone(),
            lhs: pp_normalize(&t.signature, &s.lhs).to_formula(),
            rhs: pp_normalize(&t.signature, &s.rhs).to_formula(),
        })
        .collect();
    for f in &t.signature.functions {
        let xs: Vec<Var> = f.args.iter().enumerate().map(|(i, &s)| Var { name: format!("x{i}"), sort: s }).collect();
        let args = |z: &str| {
            let mut v: Vec<Term> = xs.iter().map(|x| Term::Var(x.name.clone())).collect();
            v.push(Term::var(z));
            v
        };
        sequents.push(Sequent {
            vars: xs.clone(),
            lhs: Formula::True,
            rhs: Formula::exists(vec![Var::new("z", f.result)], Formula::Rel(f.name.clone(), args("z"))),
        });
        let mut vars = xs.clone();
        vars.push(Var::new("z1", f.result));
        vars.push(Var::new("z2", f.result));
        sequents.push(Sequent {
            vars,
            lhs: Formula::and(Formula::Rel(f.name.clone(), args("z1")), Formula::Rel(f.name.clone(), args("z2"))),
            rhs: Formula::Eq(Term::var("z1"), Term::var("z2")),
        });
    }
    Theory { signature: sig, sequents }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reglogic::parser::{parse_formula_with, parse_theory};

    #[test]
    fn nested_existentials_are_lifted() {
        let sig = Signature::one_sorted(&[("P", 2), ("Q", 2)]);
        let x = [Var::new("x", 0)];
        let f = parse_formula_with("exists y: P(x,y) & (exists z: Q(y,z))", &sig, &x).unwrap();
        let pp = pp_normalize(&sig, &f);
        assert_eq!(pp.bound.iter().map(|v| v.name.as_str()).collect::<Vec<_>>(), ["y", "z"]);
        assert_eq!(pp.atoms.len(), 2);
    }

    #[test]
    fn truth_is_empty() {
        let sig = Signature::one_sorted(&[]);
        let pp = pp_normalize(&sig, &Formula::True);
        assert!(pp.bound.is_empty() && pp.atoms.is_empty());
    }

    #[test]
    fn capture_is_avoided() {
        let sig = Signature::one_sorted(&[("E", 2)]);
        let y = [Var::new("y", 0)];
        // the inner y shadows the free one; after lifting they must stay apart
        let f = parse_formula_with("E(y,y) & (exists y: E(y,y))", &sig, &y).unwrap();
        let pp = pp_normalize(&sig, &f);
        assert_eq!(pp.bound.len(), 1);
        assert_ne!(pp.bound[0].name, "y");
    }

    #[test]
    fn functions_compile_to_graphs() {
        let t = parse_theory("forall x: T => P(f(x))").unwrap();
        let c = compile_functions(&t);
        assert!(c.signature.functions.is_empty());
        assert_eq!(c.signature.relation("f").map(|i| c.signature.relations[i].sorts.len()), Some(2));
        assert_eq!(c.sequents.len(), 3);
    }
}

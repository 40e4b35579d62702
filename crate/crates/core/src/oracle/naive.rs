use crate::reglogic::{relational_signature, FinStructure, Formula, Signature, StructureMorphism, Term};

/// Direct recursive evaluation of a formula; function symbols are read from their graphs.
pub struct NaiveEval<'a> {
    sig: Signature,
    m: &'a FinStructure,
}

impl<'a> NaiveEval<'a> {
    pub fn new(sig: &Signature, m: &'a FinStructure) -> Self {
        NaiveEval { sig: relational_signature(sig), m }
    }

    fn term(&self, t: &Term, env: &[(String, usize)]) -> usize {
        match t {
            Term::Var(v) => env.iter().rev().find(|(n, _)| n == v).map(|&(_, x)| x).expect("variable in scope"),
            Term::App(f, args) => {
                let r = self.sig.relation(f).expect("declared function");
                let mut vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                let sort = *self.sig.relations[r].sorts.last().expect("result sort");
                vals.push(0);
                let last = vals.len() - 1;
                (0..self.m.sizes()[sort])
                    .find(|&y| {
                        vals[last] = y;
                        self.m.holds(r, &vals)
                    })
                    .expect("function graphs are total")
            }
        }
    }

    pub fn holds(&self, f: &Formula, env: &mut Vec<(String, usize)>) -> bool {
        match f {
            Formula::True => true,
            Formula::Rel(r, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                self.m.holds(self.sig.relation(r).expect("declared relation"), &vals)
            }
            Formula::Eq(a, b) => self.term(a, env) == self.term(b, env),
            Formula::And(a, b) => self.holds(a, env) && self.holds(b, env),
            Formula::Exists(vs, body) => self.exists(vs, 0, body, env),
        }
    }

    fn exists(&self, vs: &[crate::reglogic::Var], i: usize, body: &Formula, env: &mut Vec<(String, usize)>) -> bool {
        if i == vs.len() {
            return self.holds(body, env);
        }
        (0..self.m.sizes()[vs[i].sort]).any(|x| {
            env.push((vs[i].name.clone(), x));
            let ok = self.exists(vs, i + 1, body, env);
            env.pop();
            ok
        })
    }
}

fn all_maps(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let total = k.checked_pow(n as u32).unwrap_or(0);
    for mut code in 0..total {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = code % k;
            code /= k;
        }
        out.push(v);
    }
    out
}

fn preserves(a: &FinStructure, b: &FinStructure, map: &[usize]) -> bool {
    (0..a.num_relations()).all(|r| a.tuples(r).iter().all(|t| b.holds(r, &t.iter().map(|&x| map[x]).collect::<Vec<_>>())))
}

/// Injectivity of a one-sorted structure `k` against `h: A → B`, by trying all functions.
pub fn injective_by_functions(k: &FinStructure, h: &StructureMorphism) -> bool {
    let (a, b) = (h.source(), h.target());
    let hm = &h.maps()[0];
    let extensions = all_maps(b.sizes()[0], k.sizes()[0]);
    all_maps(a.sizes()[0], k.sizes()[0])
        .iter()
        .filter(|g| preserves(a, k, g))
        .all(|g| extensions.iter().any(|e| preserves(b, k, e) && hm.iter().enumerate().all(|(x, &y)| e[y] == g[x])))
}

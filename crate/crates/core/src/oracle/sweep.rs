use std::collections::BTreeSet;

use crate::modpp::{FiniteModule, LinearPp};

/// `φ(M)` by trying every assignment of free and bound variables.
pub fn sweep_solutions(m: &FiniteModule, phi: &LinearPp) -> BTreeSet<Vec<usize>> {
    let w = phi.width();
    let mut out = BTreeSet::new();
    let mut v = vec![0usize; w];
    loop {
        let ok = phi.rows().iter().all(|row| row.iter().zip(&v).fold(m.zero(), |acc, (&r, &x)| m.add(acc, m.act(r, x))) == m.zero());
        if ok {
            out.insert(v[..phi.free()].to_vec());
        }
        let mut i = w;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            v[i] += 1;
            if v[i] < m.size() {
                break;
            }
            v[i] = 0;
        }
    }
}

/// First module (by index) and tuple in `φ(M) \ ψ(M)`.
pub fn sweep_counterexample(modules: &[FiniteModule], phi: &LinearPp, psi: &LinearPp) -> Option<(usize, Vec<usize>)> {
    modules.iter().enumerate().find_map(|(i, m)| {
        let q = sweep_solutions(m, psi);
        sweep_solutions(m, phi).into_iter().find(|t| !q.contains(t)).map(|t| (i, t))
    })
}

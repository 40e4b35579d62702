use super::formula::{LinearPp, PpError};
use super::module::{for_each_hom, ModuleError, ModuleMap};
use super::ring::FiniteRing;
use super::solve::{encode, pp_solution_set};

/// A retraction `r` with `r ∘ f = id`, if one exists.
pub fn find_retraction(f: &ModuleMap) -> Option<ModuleMap> {
    let (m, n) = (f.source(), f.target());
    let mut found = None;
    for_each_hom(n, m, &mut |r| {
        if (0..m.size()).all(|x| r[f.apply(x)] == x) {
            found = Some(r.to_vec());
            false
        } else {
            true
        }
    });
    found.map(|table| ModuleMap::new(n, m, table).expect("hom search yields linear maps"))
}

/// Finite modules are pure-injective, so a monomorphism between them is pure exactly when
/// it splits. Fails on maps that are not injective.
pub fn is_pure_embedding(f: &ModuleMap) -> Result<bool, ModuleError> {
    if !f.is_injective() {
        return Err(ModuleError::NotLinear("injective"));
    }
    Ok(find_retraction(f).is_some())
}

/// First formula (by index) and tuple `ā` of the source with `f(ā) ∈ φ(N)` but `ā ∉ φ(M)`.
pub fn pp_reflection_failure(f: &ModuleMap, formulas: &[LinearPp]) -> Result<Option<(usize, Vec<usize>)>, PpError> {
    let (m, n) = (f.source(), f.target());
    for (i, phi) in formulas.iter().enumerate() {
        let sm = pp_solution_set(m, phi)?;
        let sn = pp_solution_set(n, phi)?;
        for code in 0..m.size().pow(phi.free() as u32) {
            let t = sm.decode(code);
            let image: Vec<usize> = t.iter().map(|&x| f.apply(x)).collect();
            if sn.contains_code(encode(n.size(), &image)) && !sm.contains_code(code) {
                return Ok(Some((i, t)));
            }
        }
    }
    Ok(None)
}

/// Every formula with at most `max_rows` rows and `max_cols` columns, each split into free
/// and bound columns in every way with at least one free column.
pub fn small_formulas(ring: &FiniteRing, max_rows: usize, max_cols: usize) -> Vec<LinearPp> {
    let q = ring.size();
    let mut out = Vec::new();
    for cols in 1..=max_cols {
        for rows in 1..=max_rows {
            let cells = rows * cols;
            let Some(total) = q.checked_pow(cells as u32) else { continue };
            for code in 0..total {
                let flat = super::solve::decode(q, cells, code);
                let matrix: Vec<Vec<usize>> = flat.chunks(cols).map(|c| c.to_vec()).collect();
                for free in 1..=cols {
                    out.push(LinearPp::new(ring, free, cols - free, matrix.clone()).expect("entries in range"));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpp::module::FiniteModule;

    #[test]
    fn examples() {
        let z4 = FiniteRing::zn(4);
        let r = FiniteModule::regular(&z4);
        let two = FiniteModule::cyclic(&z4, 2);
        assert_eq!(is_pure_embedding(&ModuleMap::identity(&r)), Ok(true));
        let f = ModuleMap::new(&two, &r, vec![0, 2]).unwrap();
        assert_eq!(is_pure_embedding(&f), Ok(false));
        let sum = FiniteModule::parse_spec(&z4, "R + R/(2)").unwrap();
        // x ↦ (x, 0) in the mixed-radix coding
        let g = ModuleMap::new(&r, &sum, (0..4).map(|x| x * 2).collect()).unwrap();
        assert_eq!(is_pure_embedding(&g), Ok(true));
        let zero = ModuleMap::new(&r, &two, vec![0, 0, 0, 0]).unwrap();
        assert!(is_pure_embedding(&zero).is_err());
    }

    #[test]
    fn divisibility_detects_impurity() {
        let z4 = FiniteRing::zn(4);
        let r = FiniteModule::regular(&z4);
        let two = FiniteModule::cyclic(&z4, 2);
        let f = ModuleMap::new(&two, &r, vec![0, 2]).unwrap();
        let div = LinearPp::parse(&z4, "E y: x = 2*y", None).unwrap().0;
        assert_eq!(pp_reflection_failure(&f, &[div]).unwrap(), Some((0, vec![1])));
        let g = ModuleMap::identity(&r);
        assert_eq!(pp_reflection_failure(&g, &small_formulas(&z4, 2, 2)).unwrap(), None);
    }
}

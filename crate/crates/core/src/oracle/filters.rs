use crate::fincat::{FinCategory, ObjId};

/// Non-empty up-closed subsets closed under binary meets, as sorted object lists.
/// `c` must be a finite lattice viewed as a poset category.
pub fn filters(c: &FinCategory) -> Vec<Vec<ObjId>> {
    let n = c.num_objects();
    let leq = |a: ObjId, b: ObjId| !c.hom(a, b).is_empty();
    let meet = |a: ObjId, b: ObjId| {
        let lower: Vec<ObjId> = (0..n).filter(|&z| leq(z, a) && leq(z, b)).collect();
        lower.iter().copied().find(|&m| lower.iter().all(|&z| leq(z, m))).expect("lattice meet")
    };
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let inside = |x: ObjId| mask >> x & 1 == 1;
        let up = (0..n).all(|a| !inside(a) || (0..n).all(|b| !leq(a, b) || inside(b)));
        let meets = (0..n).all(|a| (0..n).all(|b| !(inside(a) && inside(b)) || inside(meet(a, b))));
        if up && meets {
            out.push((0..n).filter(|&x| inside(x)).collect());
        }
    }
    out.sort();
    out
}

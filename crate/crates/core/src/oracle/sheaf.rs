use crate::completion::SetFunctor;
use crate::sites::Site;

/// Unique amalgamation for every singleton cover, checked element by element.
///
/// For a generator `h: A → B` of the base, an element `x ∈ F(B)` is matching when
/// `F(g₁)x = F(g₂)x` for all `g₁, g₂` out of `B` with `g₁h = g₂h`; it must have exactly
/// one preimage under `F(h)`.
pub fn amalgamates(site: &Site, f: &SetFunctor) -> bool {
    let base = site.base();
    site.generators().iter().all(|&h| {
        let (a, b) = (base.dom(h), base.cod(h));
        let outs: Vec<usize> = base.out_of(b).collect();
        (0..f.size(b)).all(|x| {
            let matching = outs.iter().all(|&g1| {
                outs.iter()
                    .filter(|&&g2| base.cod(g2) == base.cod(g1) && base.comp(g1, h) == base.comp(g2, h))
                    .all(|&g2| f.act(g1, x) == f.act(g2, x))
            });
            !matching || (0..f.size(a)).filter(|&y| f.act(h, y) == x).count() == 1
        })
    })
}

//! Isomorphism testing by backtracking over generator images, and building
//! automorphisms from generator images.

use crate::group::{Elem, GroupError, GroupTable};
use crate::subgroup::{center, closure, derived_subgroup};

/// Cheap invariants compared before any search: order, element-order census,
/// center size, derived subgroup size.
fn fingerprint(g: &GroupTable) -> (usize, Vec<u64>, usize, usize) {
    (
        g.order(),
        g.order_census(),
        center(g).len(),
        derived_subgroup(g).len(),
    )
}

/// Extends the partial map determined by `images` of `gens` across the whole
/// group by breadth-first products. Returns the total map if it is a
/// well-defined injective homomorphism on the generated subgroup, checking
/// f(x*gen) = f(x)*f(gen) for every x and every generator along the way.
fn map_from_generator_images(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[Elem],
    images: &[Elem],
) -> Option<Vec<Elem>> {
    let mut map = vec![Elem::MAX; g.order()];
    let mut hit = vec![false; h.order()];
    map[0] = 0;
    hit[0] = true;
    let mut queue: Vec<Elem> = vec![0];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (i, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            let fy = h.mul(map[x as usize], images[i]);
            if map[y as usize] == Elem::MAX {
                if hit[fy as usize] {
                    return None; // not injective
                }
                map[y as usize] = fy;
                hit[fy as usize] = true;
                queue.push(y);
            } else if map[y as usize] != fy {
                return None; // inconsistent, not a homomorphism
            }
        }
    }
    Some(map)
}

fn backtrack(
    g: &GroupTable,
    h: &GroupTable,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    chosen: &mut Vec<Elem>,
) -> bool {
    if chosen.len() == gens.len() {
        if let Some(map) = map_from_generator_images(g, h, gens, chosen) {
            // gens generate g, so the map is total, injective, equal orders:
            // an isomorphism.
            return map.iter().all(|&v| v != Elem::MAX);
        }
        return false;
    }
    let depth = chosen.len();
    for &cand in &candidates[depth] {
        chosen.push(cand);
        // Partial consistency: the map on <gens[..=depth]> must already be
        // well-defined and injective.
        if map_from_generator_images(g, h, &gens[..=depth], chosen).is_some()
            && backtrack(g, h, gens, candidates, chosen)
        {
            return true;
        }
        chosen.pop();
    }
    false
}

/// True iff the two groups are isomorphic. Invariant fingerprints prune
/// first; then a backtracking search maps a generating set of `g` onto
/// order-matched elements of `h`.
pub fn are_isomorphic(g: &GroupTable, h: &GroupTable) -> bool {
    if fingerprint(g) != fingerprint(h) {
        return false;
    }
    let gens = g.generating_set();
    if gens.is_empty() {
        return true; // both trivial
    }
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&x| {
            let o = g.element_order(x);
            h.elements().filter(|&y| h.element_order(y) == o).collect()
        })
        .collect();
    let mut chosen = Vec::with_capacity(gens.len());
    backtrack(g, h, &gens, &candidates, &mut chosen)
}

/// Builds the permutation of `g` determined by sending `gens[i]` to
/// `images[i]`, verifying along the way that the result is a well-defined
/// bijective endomorphism, i.e. an automorphism. Errors if the generators
/// do not generate the group or the images violate a relation.
pub fn automorphism_from_generator_images(
    g: &GroupTable,
    gens: &[Elem],
    images: &[Elem],
) -> Result<Vec<Elem>, GroupError> {
    if gens.len() != images.len() {
        return Err(GroupError::InvalidParameter(
            "generator and image counts differ".into(),
        ));
    }
    if closure(g, gens).len() != g.order() {
        return Err(GroupError::InvalidParameter(
            "elements do not generate the group".into(),
        ));
    }
    match map_from_generator_images(g, g, gens, images) {
        Some(map) if map.iter().all(|&v| v != Elem::MAX) => Ok(map),
        _ => Err(GroupError::NotIsomorphism(
            "generator images do not extend to an automorphism".into(),
        )),
    }
}

/// Composition of permutations: (a∘b)(x) = a(b(x)).
pub fn compose_perms(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    b.iter().map(|&x| a[x as usize]).collect()
}

//! Exhaustive subgroup enumeration with conjugacy-class reduction.
//!
//! Layered closure: seed with all cyclic subgroups, then repeatedly extend
//! every known subgroup by one outside generator and close, deduplicating by
//! membership bit-set, until nothing new appears. Extension candidates are
//! restricted to elements of prime-power order that are the minimal generator
//! of their cyclic subgroup; every subgroup is generated by such elements, so
//! completeness is preserved.

use crate::bitset::Bitset;
use crate::group::{is_prime, prime_factors_of, Elem, GroupError, GroupTable};
use crate::subgroup::{closure, conjugate_subgroup, core_in, full_subgroup, SubgroupSet};
use rayon::prelude::*;
use std::collections::HashMap;

/// All subgroups of a group, sorted by (order, element list), with one
/// representative per conjugacy class.
pub struct SubgroupLattice {
    pub subgroups: Vec<SubgroupSet>,
    /// Index of the representative (lexicographically least member list) of
    /// each conjugacy class.
    pub class_reps: Vec<usize>,
    /// Class index of every subgroup.
    pub class_of: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationLimits {
    /// Abort (with a partial-progress error) once this many subgroups exist.
    pub max_subgroups: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_subgroups: 2_000_000,
        }
    }
}

impl SubgroupLattice {
    pub fn subgroup_count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    pub fn index_of(&self, members: &Bitset) -> Option<usize> {
        self.subgroups
            .binary_search_by(|s| order_key(s).cmp(&(members.count(), members)))
            .ok()
    }

    /// Subgroups that form a singleton conjugacy class.
    pub fn normal_subgroups(&self) -> Vec<usize> {
        let mut class_sizes = vec![0usize; self.class_reps.len()];
        for &c in &self.class_of {
            class_sizes[c] += 1;
        }
        (0..self.subgroups.len())
            .filter(|&i| class_sizes[self.class_of[i]] == 1)
            .collect()
    }

    /// Class representatives T != 1 with trivial G-core.
    pub fn trivial_core_classes(&self, g: &GroupTable) -> Vec<usize> {
        let full = full_subgroup(g);
        self.class_reps
            .iter()
            .copied()
            .filter(|&i| {
                let s = &self.subgroups[i];
                !s.is_trivial() && core_in(g, &full, s).unwrap().is_trivial()
            })
            .collect()
    }
}

fn order_key(s: &SubgroupSet) -> (usize, &Bitset) {
    (s.len(), s.members())
}

/// Minimal generators of the cyclic prime-power subgroups, the extension
/// candidate set.
fn extension_candidates(g: &GroupTable) -> Vec<Elem> {
    let mut seen: HashMap<Bitset, Elem> = HashMap::new();
    let mut out = Vec::new();
    for x in 1..g.order() as Elem {
        let o = g.element_order(x);
        let factors = prime_factors_of(o);
        if factors.len() != 1 || !is_prime(factors[0]) {
            continue;
        }
        let cyc = closure(g, &[x]);
        if !seen.contains_key(cyc.members()) {
            seen.insert(cyc.members().clone(), x);
            out.push(x);
        }
    }
    out
}

pub fn enumerate_subgroups(g: &GroupTable) -> Result<SubgroupLattice, GroupError> {
    enumerate_subgroups_with(g, &EnumerationLimits::default())
}

pub fn enumerate_subgroups_with(
    g: &GroupTable,
    limits: &EnumerationLimits,
) -> Result<SubgroupLattice, GroupError> {
    let candidates = extension_candidates(g);

    let mut by_members: HashMap<Bitset, usize> = HashMap::new();
    let mut subgroups: Vec<SubgroupSet> = Vec::new();
    let mut push = |s: SubgroupSet,
                    subgroups: &mut Vec<SubgroupSet>,
                    by_members: &mut HashMap<Bitset, usize>|
     -> bool {
        if by_members.contains_key(s.members()) {
            false
        } else {
            by_members.insert(s.members().clone(), subgroups.len());
            subgroups.push(s);
            true
        }
    };

    // Seed: the trivial subgroup and every cyclic subgroup.
    push(closure(g, &[]), &mut subgroups, &mut by_members);
    for x in 1..g.order() as Elem {
        push(closure(g, &[x]), &mut subgroups, &mut by_members);
    }

    let mut frontier: Vec<usize> = (0..subgroups.len()).collect();
    while !frontier.is_empty() {
        if subgroups.len() > limits.max_subgroups {
            return Err(GroupError::EnumerationBudget {
                budget: limits.max_subgroups,
                found: subgroups.len(),
            });
        }
        // Extend every frontier subgroup by every candidate outside it. The
        // parallel map preserves input order, so the sequential merge below
        // is deterministic regardless of worker count.
        let extensions: Vec<SubgroupSet> = frontier
            .par_iter()
            .flat_map_iter(|&si| {
                let s = &subgroups[si];
                let g = &g;
                candidates
                    .iter()
                    .filter(move |&&x| !s.contains(x))
                    .map(move |&x| {
                        let mut gens = s.generators().to_vec();
                        gens.push(x);
                        closure(g, &gens)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut next = Vec::new();
        for ext in extensions {
            let idx = subgroups.len();
            if push(ext, &mut subgroups, &mut by_members) {
                next.push(idx);
            }
        }
        frontier = next;
    }

    // Deterministic order: by (order, member set).
    subgroups.sort_by(|a, b| order_key(a).cmp(&order_key(b)));
    let by_members: HashMap<Bitset, usize> = subgroups
        .iter()
        .enumerate()
        .map(|(i, s)| (s.members().clone(), i))
        .collect();

    // Conjugacy classes: orbits under conjugation by a generating set of G.
    let g_gens = g.generating_set();
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut class_reps = Vec::new();
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let class = class_reps.len();
        class_reps.push(i);
        let mut orbit = vec![i];
        class_of[i] = class;
        let mut head = 0;
        while head < orbit.len() {
            let current = orbit[head];
            head += 1;
            for &x in &g_gens {
                let conj = conjugate_subgroup(g, x, &subgroups[current]);
                let j = *by_members
                    .get(conj.members())
                    .expect("conjugate of a subgroup must be a subgroup in a complete lattice");
                if class_of[j] == usize::MAX {
                    class_of[j] = class;
                    orbit.push(j);
                }
            }
        }
    }

    Ok(SubgroupLattice {
        subgroups,
        class_reps,
        class_of,
    })
}

/// One Sylow p-subgroup, grown through normalizer steps: starting from an
/// element of order p, repeatedly absorb a p-power-order element of the
/// normalizer until none is left outside.
pub fn sylow_subgroup(g: &GroupTable, p: u64) -> Result<SubgroupSet, GroupError> {
    if !is_prime(p) || g.order() as u64 % p != 0 {
        return Err(GroupError::InvalidParameter(format!(
            "{p} is not a prime dividing the group order {}",
            g.order()
        )));
    }
    let full_power = p.pow(crate::group::valuation(g.order() as u64, p));
    // Cauchy: an element of order p exists.
    let seed = g
        .elements()
        .find_map(|x| {
            let o = g.element_order(x);
            (o % p == 0).then(|| g.pow(x, o / p))
        })
        .expect("Cauchy guarantees an element of order p");
    let mut s = closure(g, &[seed]);
    while (s.len() as u64) < full_power {
        let norm = crate::subgroup::normalizer(g, &s);
        let next = norm
            .elements()
            .iter()
            .copied()
            .find(|&y| !s.contains(y) && prime_factors_of(g.element_order(y)) == [p])
            .expect("a p-subgroup below Sylow order has p-elements in its normalizer");
        let mut gens = s.generators().to_vec();
        gens.push(next);
        s = closure(g, &gens);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{
        build_cyclic, build_sl2, build_two_group, TwoGroupKind,
    };
    use crate::iso::are_isomorphic;
    use crate::subgroup::subgroup_table;

    #[test]
    fn cyclic_lattice_counts_divisors() {
        let g = build_cyclic(12).unwrap();
        let l = enumerate_subgroups(&g).unwrap();
        assert_eq!(l.subgroup_count(), 6);
        // abelian: all subgroups normal, all classes singletons
        assert_eq!(l.class_count(), 6);
        assert_eq!(l.normal_subgroups().len(), 6);
    }

    #[test]
    fn q8_has_six_subgroups() {
        let q8 = build_two_group(TwoGroupKind::Quaternion, 8).unwrap();
        let l = enumerate_subgroups(&q8).unwrap();
        assert_eq!(l.subgroup_count(), 6);
        // 1, Z, <i>, <j>, <k>, Q8 are all normal
        assert_eq!(l.normal_subgroups().len(), 6);
        // no nontrivial subgroup has trivial core
        assert!(l.trivial_core_classes(&q8).is_empty());
    }

    #[test]
    fn d16_classes_and_trivial_cores() {
        let d16 = build_two_group(TwoGroupKind::Dihedral, 16).unwrap();
        let l = enumerate_subgroups(&d16).unwrap();
        // two conjugacy classes of noncentral involutions
        let noncentral_order2: Vec<usize> = l
            .class_reps
            .iter()
            .copied()
            .filter(|&i| {
                let s = &l.subgroups[i];
                s.len() == 2 && !crate::subgroup::center(&d16).is_subset_of(s)
            })
            .filter(|&i| {
                // exclude the central involution subgroup itself
                let s = &l.subgroups[i];
                !s.is_subset_of(&crate::subgroup::center(&d16))
            })
            .collect();
        assert_eq!(noncentral_order2.len(), 2);
        // each class has size 4
        for &rep in &noncentral_order2 {
            let class = l.class_of[rep];
            let size = l.class_of.iter().filter(|&&c| c == class).count();
            assert_eq!(size, 4);
        }
        // the trivial-core classes are exactly those two
        let mut tc = l.trivial_core_classes(&d16);
        tc.sort_unstable();
        let mut expected = noncentral_order2;
        expected.sort_unstable();
        assert_eq!(tc, expected);
    }

    #[test]
    fn sd16_has_one_noncentral_involution_class() {
        let sd = build_two_group(TwoGroupKind::Semidihedral, 16).unwrap();
        let l = enumerate_subgroups(&sd).unwrap();
        let z = crate::subgroup::center(&sd);
        let classes: Vec<usize> = l
            .class_reps
            .iter()
            .copied()
            .filter(|&i| l.subgroups[i].len() == 2 && l.subgroups[i] != z)
            .collect();
        assert_eq!(classes.len(), 1);
    }

    #[test]
    fn class_sizes_match_normalizer_index() {
        let g = build_sl2(3).unwrap().group;
        let l = enumerate_subgroups(&g).unwrap();
        let mut class_sizes = vec![0usize; l.class_count()];
        for &c in &l.class_of {
            class_sizes[c] += 1;
        }
        assert_eq!(class_sizes.iter().sum::<usize>(), l.subgroup_count());
        for (class, &rep) in l.class_reps.iter().enumerate() {
            let n = crate::subgroup::normalizer(&g, &l.subgroups[rep]);
            assert_eq!(class_sizes[class], g.order() / n.len());
        }
    }

    #[test]
    fn sl2_3_subgroup_count_frozen() {
        // 1 + center + 4 C3 + 3 C4 + 4 C6 + Q8 + SL(2,3) = 15, cross-checked
        // by the powerset-closure oracle in the integration tests.
        let g = build_sl2(3).unwrap().group;
        let l = enumerate_subgroups(&g).unwrap();
        assert_eq!(l.subgroup_count(), 15);
        assert_eq!(l.class_count(), 7);
    }

    #[test]
    fn sylow_subgroups_of_sl2_3() {
        let sl = build_sl2(3).unwrap();
        let s3 = sylow_subgroup(&sl.group, 3).unwrap();
        assert_eq!(s3.len(), 3);
        let s2 = sylow_subgroup(&sl.group, 2).unwrap();
        assert_eq!(s2.len(), 8);
        let (t, _) = subgroup_table(&sl.group, &s2).unwrap();
        let q8 = build_two_group(TwoGroupKind::Quaternion, 8).unwrap();
        assert!(are_isomorphic(&t, &q8));
        assert!(sylow_subgroup(&sl.group, 5).is_err());
    }

    #[test]
    fn sylow_of_cyclic_is_unique_p_part() {
        let g = build_cyclic(12).unwrap();
        let s = sylow_subgroup(&g, 2).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.elements(), &[0, 3, 6, 9]);
    }

    #[test]
    fn budget_is_enforced() {
        let g = build_two_group(TwoGroupKind::Dihedral, 32).unwrap();
        let limits = EnumerationLimits { max_subgroups: 5 };
        assert!(matches!(
            enumerate_subgroups_with(&g, &limits),
            Err(GroupError::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let g = build_two_group(TwoGroupKind::Semidihedral, 32).unwrap();
        let a = enumerate_subgroups(&g).unwrap();
        let b = enumerate_subgroups(&g).unwrap();
        let lists = |l: &SubgroupLattice| {
            l.subgroups
                .iter()
                .map(|s| s.elements().to_vec())
                .collect::<Vec<_>>()
        };
        assert_eq!(lists(&a), lists(&b));
        assert_eq!(a.class_reps, b.class_reps);
        assert_eq!(a.class_of, b.class_of);
    }
}

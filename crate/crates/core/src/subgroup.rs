//! Subgroups as membership bit-sets, and the element-level operations on
//! them: closure, conjugation, normalizers, centralizers, cores, quotients.

use crate::bitset::Bitset;
use crate::group::{
    is_prime, prime_factors_of, Elem, GroupError, GroupHomomorphism, GroupTable,
    SubgroupProperties,
};

/// A subgroup of an ambient table group.
///
/// `members` and `elements` describe the same set; `elements` is sorted
/// ascending. `closure(generators)` equals the member set.
#[derive(Clone, Debug)]
pub struct SubgroupSet {
    members: Bitset,
    elements: Vec<Elem>,
    generators: Vec<Elem>,
}

impl PartialEq for SubgroupSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}
impl Eq for SubgroupSet {}

impl std::hash::Hash for SubgroupSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl SubgroupSet {
    pub(crate) fn from_members(members: Bitset, generators: Vec<Elem>) -> Self {
        let elements: Vec<Elem> = members.iter().map(|i| i as Elem).collect();
        SubgroupSet {
            members,
            elements,
            generators,
        }
    }

    pub fn members(&self) -> &Bitset {
        &self.members
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x as usize)
    }

    pub fn is_subset_of(&self, other: &SubgroupSet) -> bool {
        self.members.is_subset_of(&other.members)
    }

    /// Checks the subgroup invariants against its ambient group: identity
    /// membership, closure under multiplication and inverse, Lagrange, and
    /// that the stored generators generate the member set.
    pub fn validate(&self, g: &GroupTable) -> Result<(), GroupError> {
        if !self.contains(0) {
            return Err(GroupError::Containment("identity not in subgroup".into()));
        }
        if g.order() % self.len() != 0 {
            return Err(GroupError::Containment(format!(
                "subgroup order {} does not divide group order {}",
                self.len(),
                g.order()
            )));
        }
        for &a in &self.elements {
            if !self.contains(g.inv(a)) {
                return Err(GroupError::Containment(format!("inverse of {a} missing")));
            }
            for &b in &self.elements {
                if !self.contains(g.mul(a, b)) {
                    return Err(GroupError::Containment(format!(
                        "product {a}*{b} escapes the subgroup"
                    )));
                }
            }
        }
        if closure(g, &self.generators).members != self.members {
            return Err(GroupError::Containment(
                "generators do not generate the member set".into(),
            ));
        }
        Ok(())
    }
}

/// Smallest subgroup of `g` containing `gens`.
///
/// Breadth-first right-multiplication closure from the identity; finite order
/// makes inverses reachable as powers, so this is the full subgroup. Element
/// order is deterministic in the generator list.
pub fn closure(g: &GroupTable, gens: &[Elem]) -> SubgroupSet {
    let mut members = Bitset::new(g.order());
    members.insert(0);
    let mut queue: Vec<Elem> = vec![0];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &gen in gens {
            let y = g.mul(x, gen);
            if members.insert(y as usize) {
                queue.push(y);
            }
        }
    }
    SubgroupSet::from_members(members, gens.to_vec())
}

/// The whole group as a subgroup of itself.
pub fn full_subgroup(g: &GroupTable) -> SubgroupSet {
    let members = Bitset::from_indices(g.order(), 0..g.order());
    SubgroupSet::from_members(members, g.generating_set())
}

pub fn trivial_subgroup(g: &GroupTable) -> SubgroupSet {
    closure(g, &[])
}

/// {g s g^{-1} : s in S}
pub fn conjugate_subgroup(g: &GroupTable, by: Elem, s: &SubgroupSet) -> SubgroupSet {
    let mut members = Bitset::new(g.order());
    for &x in s.elements() {
        members.insert(g.conj(by, x) as usize);
    }
    let gens = s.generators().iter().map(|&x| g.conj(by, x)).collect();
    SubgroupSet::from_members(members, gens)
}

/// True iff n s n^{-1} stays in `s` for every n of `within`.
///
/// Errors if `s` is not contained in `within`.
pub fn is_normal(g: &GroupTable, s: &SubgroupSet, within: &SubgroupSet) -> Result<bool, GroupError> {
    if !s.is_subset_of(within) {
        return Err(GroupError::Containment(
            "is_normal: subgroup not contained in the reference subgroup".into(),
        ));
    }
    for &n in within.elements() {
        for &x in s.elements() {
            if !s.contains(g.conj(n, x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// N_G(S) = {x : x S x^{-1} = S}
pub fn normalizer(g: &GroupTable, s: &SubgroupSet) -> SubgroupSet {
    let mut members = Bitset::new(g.order());
    'outer: for x in g.elements() {
        for &a in s.elements() {
            if !s.contains(g.conj(x, a)) {
                continue 'outer;
            }
        }
        members.insert(x as usize);
    }
    let set = SubgroupSet::from_members(members, vec![]);
    with_recomputed_generators(g, set)
}

/// C_G(X) for an arbitrary element set X.
pub fn centralizer(g: &GroupTable, xs: &[Elem]) -> SubgroupSet {
    let mut members = Bitset::new(g.order());
    'outer: for c in g.elements() {
        for &x in xs {
            if g.mul(c, x) != g.mul(x, c) {
                continue 'outer;
            }
        }
        members.insert(c as usize);
    }
    let set = SubgroupSet::from_members(members, vec![]);
    with_recomputed_generators(g, set)
}

pub fn center(g: &GroupTable) -> SubgroupSet {
    let all: Vec<Elem> = g.elements().collect();
    centralizer(g, &all)
}

/// Commutator subgroup <[x,y]>.
pub fn derived_subgroup(g: &GroupTable) -> SubgroupSet {
    let mut comms = Bitset::new(g.order());
    for x in g.elements() {
        for y in g.elements() {
            comms.insert(g.commutator(x, y) as usize);
        }
    }
    let gens: Vec<Elem> = comms.iter().map(|i| i as Elem).filter(|&e| e != 0).collect();
    let set = closure(g, &gens);
    with_recomputed_generators(g, set)
}

/// Largest subgroup of `x` normal in `n`, i.e. the intersection of the
/// n-conjugates of `x`. Requires x <= n.
pub fn core_in(
    g: &GroupTable,
    n: &SubgroupSet,
    x: &SubgroupSet,
) -> Result<SubgroupSet, GroupError> {
    if !x.is_subset_of(n) {
        return Err(GroupError::Containment(
            "core_in: x not contained in n".into(),
        ));
    }
    // The distinct conjugates of x under <n> are the orbit of x under
    // conjugation by n's generators.
    let mut core = x.members().clone();
    let mut orbit: Vec<SubgroupSet> = vec![x.clone()];
    let mut seen: std::collections::HashSet<Bitset> =
        std::collections::HashSet::from([x.members().clone()]);
    let mut head = 0;
    while head < orbit.len() {
        let current = orbit[head].clone();
        head += 1;
        for &gen in n.generators() {
            let conj = conjugate_subgroup(g, gen, &current);
            if seen.insert(conj.members().clone()) {
                core.intersect_with(conj.members());
                orbit.push(conj);
            }
        }
    }
    let set = SubgroupSet::from_members(core, vec![]);
    Ok(with_recomputed_generators(g, set))
}

/// Intersection of two subgroups.
pub fn intersection(g: &GroupTable, a: &SubgroupSet, b: &SubgroupSet) -> SubgroupSet {
    let mut members = a.members().clone();
    members.intersect_with(b.members());
    let set = SubgroupSet::from_members(members, vec![]);
    with_recomputed_generators(g, set)
}

/// Product set A*B, which is a subgroup whenever one factor normalizes the
/// other; the caller is responsible for that.
pub fn product_subgroup(g: &GroupTable, a: &SubgroupSet, b: &SubgroupSet) -> SubgroupSet {
    let mut members = Bitset::new(g.order());
    for &x in a.elements() {
        for &y in b.elements() {
            members.insert(g.mul(x, y) as usize);
        }
    }
    let mut gens: Vec<Elem> = a.generators().to_vec();
    gens.extend_from_slice(b.generators());
    SubgroupSet::from_members(members, gens)
}

/// Replaces the generator list by a greedy one recomputed from the member
/// set; used when a subgroup was produced point-wise rather than by closure.
pub fn with_recomputed_generators(g: &GroupTable, s: SubgroupSet) -> SubgroupSet {
    let mut gens: Vec<Elem> = Vec::new();
    let mut have = closure(g, &gens);
    if have.members == s.members {
        return SubgroupSet::from_members(s.members, gens);
    }
    for &x in &s.elements {
        if !have.contains(x) {
            gens.push(x);
            have = closure(g, &gens);
            if have.members == s.members {
                break;
            }
        }
    }
    debug_assert_eq!(have.members, s.members);
    SubgroupSet::from_members(s.members, gens)
}

/// Quotient group over coset representatives (the minimal-index element of
/// each coset), plus the projection homomorphism. Errors if `n` is not
/// normal.
pub fn quotient(
    g: &GroupTable,
    n: &SubgroupSet,
) -> Result<(GroupTable, GroupHomomorphism), GroupError> {
    if !is_normal(g, n, &full_subgroup(g))? {
        return Err(GroupError::NotNormal("the ambient group".into()));
    }
    let order = g.order();
    let q_order = order / n.len();
    let mut coset_of: Vec<usize> = vec![usize::MAX; order];
    let mut reps: Vec<Elem> = Vec::with_capacity(q_order);
    for x in 0..order as Elem {
        if coset_of[x as usize] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &m in n.elements() {
            coset_of[g.mul(x, m) as usize] = id;
        }
    }
    debug_assert_eq!(reps.len(), q_order);
    let mut mul = vec![0 as Elem; q_order * q_order];
    for (i, &ri) in reps.iter().enumerate() {
        for (j, &rj) in reps.iter().enumerate() {
            mul[i * q_order + j] = coset_of[g.mul(ri, rj) as usize] as Elem;
        }
    }
    let labels: Vec<String> = reps.iter().map(|&r| format!("[{}]", g.label(r))).collect();
    let table = GroupTable::from_flat(q_order, mul, Some(labels))?;
    let proj = GroupHomomorphism {
        image_of: coset_of.iter().map(|&c| c as Elem).collect(),
    };
    Ok((table, proj))
}

/// Re-indexes a subgroup as a standalone group table. Returns the table and
/// the map from new indices back to ambient element indices.
pub fn subgroup_table(g: &GroupTable, s: &SubgroupSet) -> Result<(GroupTable, Vec<Elem>), GroupError> {
    let elems = s.elements();
    let m = elems.len();
    let mut new_of = vec![Elem::MAX; g.order()];
    for (i, &e) in elems.iter().enumerate() {
        new_of[e as usize] = i as Elem;
    }
    let mut mul = vec![0 as Elem; m * m];
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            let p = new_of[g.mul(a, b) as usize];
            if p == Elem::MAX {
                return Err(GroupError::Containment(
                    "subgroup_table: set is not multiplicatively closed".into(),
                ));
            }
            mul[i * m + j] = p;
        }
    }
    let labels: Vec<String> = elems.iter().map(|&e| g.label(e)).collect();
    let table = GroupTable::from_flat(m, mul, Some(labels))?;
    Ok((table, elems.to_vec()))
}

/// Structural flags of a subgroup.
pub fn subgroup_properties(g: &GroupTable, s: &SubgroupSet) -> SubgroupProperties {
    let mut element_orders: Vec<u64> = s.elements().iter().map(|&x| g.element_order(x)).collect();
    element_orders.sort_unstable();
    let n = s.len() as u64;
    let exponent = element_orders.iter().fold(1u64, |acc, &o| lcm(acc, o));
    let is_abelian = s
        .elements()
        .iter()
        .all(|&a| s.elements().iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
    let is_cyclic = element_orders.last().copied() == Some(n) || n == 1;
    let (is_elementary_abelian, rank) = if n == 1 {
        (true, Some(0))
    } else if is_abelian && is_prime(exponent) && is_p_power(n, exponent) {
        (true, Some(crate::group::valuation(n, exponent)))
    } else {
        (false, None)
    };
    SubgroupProperties {
        is_abelian,
        is_cyclic,
        is_elementary_abelian,
        rank,
        exponent,
        element_orders,
    }
}

fn is_p_power(n: u64, p: u64) -> bool {
    prime_factors_of(n) == [p]
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

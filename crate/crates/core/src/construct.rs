//! Constructors for every group family the verification suites need:
//! cyclic groups, the three 2-group families, extraspecial Heisenberg groups,
//! central and direct products, unit groups of Z/n, SL(2,p), and semidirect
//! products driven by explicit automorphism actions.

use crate::group::{is_prime, valuation, Elem, GroupError, GroupTable};
use crate::iso::{automorphism_from_generator_images, compose_perms};
use crate::subgroup::{center, closure, subgroup_table, SubgroupSet};
use crate::MAX_ORDER;
use std::collections::HashMap;

/// Cyclic group of order n; element i is g^i.
pub fn build_cyclic(n: u64) -> Result<GroupTable, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidParameter("cyclic order must be >= 1".into()));
    }
    let n = n as usize;
    let mut mul = vec![0 as Elem; n * n];
    for i in 0..n {
        for j in 0..n {
            mul[i * n + j] = ((i + j) % n) as Elem;
        }
    }
    let labels = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect();
    GroupTable::from_flat(n, mul, Some(labels))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoGroupKind {
    Dihedral,
    Semidihedral,
    Quaternion,
}

/// The familiar 2-group presentations on generators r, s:
/// dihedral s r s = r^-1, semidihedral s r s = r^(-1+2^(n-2)),
/// quaternion s^2 = r^(2^(n-2)), s^-1 r s = r^-1.
///
/// Orders below 16 (dihedral below 8) fall outside the Roquette 2-group
/// classification but still build fine for tests.
pub fn build_two_group(kind: TwoGroupKind, order: u64) -> Result<GroupTable, GroupError> {
    if !order.is_power_of_two() {
        return Err(GroupError::InvalidParameter(format!(
            "two-group order {order} is not a power of 2"
        )));
    }
    let min = match kind {
        TwoGroupKind::Dihedral => 4,
        TwoGroupKind::Semidihedral | TwoGroupKind::Quaternion => 8,
    };
    if order < min {
        return Err(GroupError::InvalidParameter(format!(
            "{kind:?} needs order >= {min}"
        )));
    }
    let m = (order / 2) as usize; // order of the rotation r
    // s r = r^e s; s^2 = r^w
    let e = match kind {
        TwoGroupKind::Dihedral | TwoGroupKind::Quaternion => m - 1,
        TwoGroupKind::Semidihedral => m / 2 - 1,
    };
    let w = match kind {
        TwoGroupKind::Quaternion => m / 2,
        _ => 0,
    };
    let order = order as usize;
    let idx = |a: usize, b: usize| a * 2 + b;
    let mut mul = vec![0 as Elem; order * order];
    for a in 0..m {
        for b in 0..2 {
            for c in 0..m {
                for d in 0..2 {
                    // (r^a s^b)(r^c s^d) = r^(a + e^b c + b d w) s^(b+d)
                    let ec = if b == 1 { (e * c) % m } else { c };
                    let shift = if b == 1 && d == 1 { w } else { 0 };
                    let a2 = (a + ec + shift) % m;
                    let b2 = (b + d) % 2;
                    mul[idx(a, b) * order + idx(c, d)] = idx(a2, b2) as Elem;
                }
            }
        }
    }
    let labels = (0..order)
        .map(|i| {
            let (a, b) = (i / 2, i % 2);
            match (a, b) {
                (0, 0) => "1".to_string(),
                (0, 1) => "s".to_string(),
                (1, 0) => "r".to_string(),
                (a, 0) => format!("r^{a}"),
                (1, 1) => "r*s".to_string(),
                (a, 1) => format!("r^{a}*s"),
            }
        })
        .collect();
    GroupTable::from_flat(order, mul, Some(labels))
}

/// Extraspecial group of order p^3 and exponent p, in the Heisenberg model:
/// triples over F_p with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
pub struct ExtraspecialGroup {
    pub p: u64,
    pub group: GroupTable,
    pub f1: Elem,
    pub f2: Elem,
    pub z: Elem,
}

pub fn build_extraspecial(p: u64) -> Result<ExtraspecialGroup, GroupError> {
    if !is_prime(p) || p == 2 {
        return Err(GroupError::InvalidParameter(format!(
            "extraspecial model needs an odd prime, got {p}"
        )));
    }
    let order = (p * p * p) as usize;
    if order > MAX_ORDER {
        return Err(GroupError::BoundExceeded {
            order,
            bound: MAX_ORDER,
        });
    }
    let p = p as usize;
    let idx = |a: usize, b: usize, c: usize| a * p * p + b * p + c;
    let mut mul = vec![0 as Elem; order * order];
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for a2 in 0..p {
                    for b2 in 0..p {
                        for c2 in 0..p {
                            let t = idx((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
                            mul[idx(a, b, c) * order + idx(a2, b2, c2)] = t as Elem;
                        }
                    }
                }
            }
        }
    }
    let labels = (0..order)
        .map(|i| {
            let (a, rest) = (i / (p * p), i % (p * p));
            format!("({a},{},{})", rest / p, rest % p)
        })
        .collect();
    let group = GroupTable::from_flat(order, mul, Some(labels))?;
    Ok(ExtraspecialGroup {
        p: p as u64,
        group,
        f1: (p * p) as Elem,
        f2: p as Elem,
        z: 1,
    })
}

/// Direct product with componentwise multiplication; index of (x, y) is
/// x * |G2| + y.
pub struct DirectProduct {
    pub group: GroupTable,
    pub right_order: usize,
}

impl DirectProduct {
    pub fn pair(&self, x: Elem, y: Elem) -> Elem {
        (x as usize * self.right_order + y as usize) as Elem
    }
    pub fn left_part(&self, v: Elem) -> Elem {
        (v as usize / self.right_order) as Elem
    }
    pub fn right_part(&self, v: Elem) -> Elem {
        (v as usize % self.right_order) as Elem
    }
}

pub fn build_direct_product(
    g1: &GroupTable,
    g2: &GroupTable,
) -> Result<DirectProduct, GroupError> {
    let (n1, n2) = (g1.order(), g2.order());
    let order = n1 * n2;
    if order > MAX_ORDER {
        return Err(GroupError::BoundExceeded {
            order,
            bound: MAX_ORDER,
        });
    }
    let mut mul = vec![0 as Elem; order * order];
    for x1 in 0..n1 {
        for y1 in 0..n2 {
            let i = x1 * n2 + y1;
            for x2 in 0..n1 {
                for y2 in 0..n2 {
                    let j = x2 * n2 + y2;
                    let prod = g1.mul(x1 as Elem, x2 as Elem) as usize * n2
                        + g2.mul(y1 as Elem, y2 as Elem) as usize;
                    mul[i * order + j] = prod as Elem;
                }
            }
        }
    }
    let labels = (0..order)
        .map(|i| format!("({},{})", g1.label((i / n2) as Elem), g2.label((i % n2) as Elem)))
        .collect();
    let group = GroupTable::from_flat(order, mul, Some(labels))?;
    Ok(DirectProduct {
        group,
        right_order: n2,
    })
}

/// Central product (G1 x G2)/N over an isomorphism theta of central
/// subgroups, N = {(z, theta(z)^-1)}.
pub struct CentralProduct {
    pub group: GroupTable,
    /// Image of G1 elements under the projection.
    pub left_embed: Vec<Elem>,
    /// Image of G2 elements under the projection.
    pub right_embed: Vec<Elem>,
}

pub fn build_central_product(
    g1: &GroupTable,
    g2: &GroupTable,
    z1: &SubgroupSet,
    z2: &SubgroupSet,
    theta: &[(Elem, Elem)],
) -> Result<CentralProduct, GroupError> {
    if !z1.is_subset_of(&center(g1)) {
        return Err(GroupError::InvalidParameter(
            "central product: Z1 is not central in G1".into(),
        ));
    }
    if !z2.is_subset_of(&center(g2)) {
        return Err(GroupError::InvalidParameter(
            "central product: Z2 is not central in G2".into(),
        ));
    }
    if theta.len() != z1.len() {
        return Err(GroupError::NotIsomorphism(
            "theta must be defined on exactly the elements of Z1".into(),
        ));
    }
    let mut theta_map: HashMap<Elem, Elem> = HashMap::new();
    let mut image_seen: std::collections::HashSet<Elem> = Default::default();
    for &(a, b) in theta {
        if !z1.contains(a) || !z2.contains(b) {
            return Err(GroupError::NotIsomorphism(
                "theta maps outside Z1 -> Z2".into(),
            ));
        }
        if theta_map.insert(a, b).is_some() || !image_seen.insert(b) {
            return Err(GroupError::NotIsomorphism("theta is not a bijection".into()));
        }
    }
    if image_seen.len() != z2.len() {
        return Err(GroupError::NotIsomorphism("theta is not onto Z2".into()));
    }
    for &a in z1.elements() {
        if !theta_map.contains_key(&a) {
            return Err(GroupError::NotIsomorphism("theta not total on Z1".into()));
        }
        for &b in z1.elements() {
            let lhs = theta_map[&g1.mul(a, b)];
            let rhs = g2.mul(theta_map[&a], theta_map[&b]);
            if lhs != rhs {
                return Err(GroupError::NotIsomorphism(
                    "theta does not preserve multiplication".into(),
                ));
            }
        }
    }

    let direct = build_direct_product(g1, g2)?;
    let n_gens: Vec<Elem> = z1
        .generators()
        .iter()
        .map(|&z| direct.pair(z, g2.inv(theta_map[&z])))
        .collect();
    let n_sub = closure(&direct.group, &n_gens);
    debug_assert_eq!(n_sub.len(), z1.len());
    let (q, proj) = crate::subgroup::quotient(&direct.group, &n_sub)?;
    debug_assert_eq!(q.order(), g1.order() * g2.order() / z1.len());
    let left_embed = (0..g1.order() as Elem)
        .map(|x| proj.apply(direct.pair(x, 0)))
        .collect();
    let right_embed = (0..g2.order() as Elem)
        .map(|y| proj.apply(direct.pair(0, y)))
        .collect();
    Ok(CentralProduct {
        group: q,
        left_embed,
        right_embed,
    })
}

/// Aut(C_n) as the unit group of Z/n: element i acts as x -> units[i]*x.
/// units[0] = 1 so the identity sits at index 0.
pub struct UnitsGroup {
    pub n: u64,
    pub units: Vec<u64>,
    pub group: GroupTable,
    /// perms[i] is the permutation of C_n's indices induced by units[i].
    pub perms: Vec<Vec<Elem>>,
}

impl UnitsGroup {
    pub fn index_of_unit(&self, u: u64) -> Option<Elem> {
        self.units
            .iter()
            .position(|&v| v == u % self.n.max(1))
            .map(|i| i as Elem)
    }
}

pub fn build_units_mod_n(n: u64) -> Result<UnitsGroup, GroupError> {
    if n == 0 || n as usize > MAX_ORDER {
        return Err(GroupError::InvalidParameter(format!(
            "units modulus {n} out of range"
        )));
    }
    let mut units: Vec<u64> = (1..n.max(2)).filter(|&u| gcd(u, n) == 1).collect();
    if n == 1 {
        units = vec![1];
    }
    // already ascending with 1 first
    let count = units.len();
    let pos: HashMap<u64, usize> = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut mul = vec![0 as Elem; count * count];
    for i in 0..count {
        for j in 0..count {
            mul[i * count + j] = pos[&(units[i] * units[j] % n)] as Elem;
        }
    }
    let labels = units.iter().map(|u| format!("u{u}")).collect();
    let group = GroupTable::from_flat(count, mul, Some(labels))?;
    let perms = units
        .iter()
        .map(|&u| {
            (0..n)
                .map(|x| ((u as u128 * x as u128) % n as u128) as Elem)
                .collect()
        })
        .collect();
    Ok(UnitsGroup {
        n,
        units,
        group,
        perms,
    })
}

/// The unit exponent of the automorphism of C_n that raises the p-part
/// generator to 1 + p^(k-1) and fixes every other primary component. Its
/// order is p when p^2 | n and 1 otherwise.
pub fn alpha_p(n: u64, p: u64) -> Result<u64, GroupError> {
    if !is_prime(p) || n % p != 0 {
        return Err(GroupError::InvalidParameter(format!(
            "alpha_p: {p} must be a prime dividing {n}"
        )));
    }
    let k = valuation(n, p);
    if k == 1 {
        return Ok(1);
    }
    let pk = p.pow(k);
    let q = n / pk;
    let target = 1 + p.pow(k - 1);
    for u in 1..=n {
        if u % pk == target % pk && u % q == 1 % q {
            return Ok(u);
        }
    }
    unreachable!("CRT solution exists");
}

/// A homomorphism from an acting group K into Aut(N), one permutation of N's
/// indices per element of K.
#[derive(Clone, Debug)]
pub struct ActionHomomorphism {
    pub auto_of: Vec<Vec<Elem>>,
}

impl ActionHomomorphism {
    pub fn trivial(k: &GroupTable, n: &GroupTable) -> Self {
        let id: Vec<Elem> = (0..n.order() as Elem).collect();
        ActionHomomorphism {
            auto_of: vec![id; k.order()],
        }
    }

    pub fn apply(&self, k: Elem, x: Elem) -> Elem {
        self.auto_of[k as usize][x as usize]
    }

    /// Checks every permutation is an automorphism of `n` and that the map
    /// k -> auto_of[k] is a homomorphism.
    pub fn validate(&self, k: &GroupTable, n: &GroupTable) -> Result<(), GroupError> {
        if self.auto_of.len() != k.order() {
            return Err(GroupError::InvalidAction(
                "one automorphism per acting element required".into(),
            ));
        }
        for (ki, auto) in self.auto_of.iter().enumerate() {
            if auto.len() != n.order() {
                return Err(GroupError::InvalidAction(format!(
                    "automorphism {ki} has wrong length"
                )));
            }
            let mut seen = vec![false; n.order()];
            for &v in auto {
                if v as usize >= n.order() || seen[v as usize] {
                    return Err(GroupError::InvalidAction(format!(
                        "automorphism {ki} is not a permutation"
                    )));
                }
                seen[v as usize] = true;
            }
            for x in n.elements() {
                for y in n.elements() {
                    if auto[n.mul(x, y) as usize] != n.mul(auto[x as usize], auto[y as usize]) {
                        return Err(GroupError::InvalidAction(format!(
                            "image of acting element {ki} does not preserve multiplication"
                        )));
                    }
                }
            }
        }
        for a in k.elements() {
            for b in k.elements() {
                let ab = k.mul(a, b) as usize;
                for x in n.elements() {
                    let lhs = self.auto_of[ab][x as usize];
                    let rhs = self.auto_of[a as usize][self.auto_of[b as usize][x as usize] as usize];
                    if lhs != rhs {
                        return Err(GroupError::InvalidAction(format!(
                            "action is not a homomorphism at the pair ({a},{b})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the action homomorphism determined by automorphism images of a
/// generating set of K, by breadth-first closure over K with consistency
/// checks at every edge.
pub fn action_from_generator_images(
    k: &GroupTable,
    n: &GroupTable,
    k_gens: &[Elem],
    gen_autos: &[Vec<Elem>],
) -> Result<ActionHomomorphism, GroupError> {
    if k_gens.len() != gen_autos.len() {
        return Err(GroupError::InvalidAction(
            "generator and automorphism counts differ".into(),
        ));
    }
    let id: Vec<Elem> = (0..n.order() as Elem).collect();
    let mut auto_of: Vec<Option<Vec<Elem>>> = vec![None; k.order()];
    auto_of[0] = Some(id);
    let mut queue: Vec<Elem> = vec![0];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (i, &gen) in k_gens.iter().enumerate() {
            let y = k.mul(x, gen);
            let composed = compose_perms(auto_of[x as usize].as_ref().unwrap(), &gen_autos[i]);
            match &auto_of[y as usize] {
                None => {
                    auto_of[y as usize] = Some(composed);
                    queue.push(y);
                }
                Some(existing) => {
                    if *existing != composed {
                        return Err(GroupError::InvalidAction(
                            "generator automorphisms violate a relation of K".into(),
                        ));
                    }
                }
            }
        }
    }
    let auto_of: Option<Vec<Vec<Elem>>> = auto_of.into_iter().collect();
    match auto_of {
        Some(auto_of) => Ok(ActionHomomorphism { auto_of }),
        None => Err(GroupError::InvalidAction(
            "given elements do not generate the acting group".into(),
        )),
    }
}

/// Semidirect product N x| K; element (n, k) has index n*|K| + k, so the
/// decomposition of any element into its N and K parts is index arithmetic.
pub struct SemidirectProduct {
    pub group: GroupTable,
    pub n_order: usize,
    pub k_order: usize,
}

impl SemidirectProduct {
    pub fn pair(&self, n: Elem, k: Elem) -> Elem {
        (n as usize * self.k_order + k as usize) as Elem
    }
    pub fn n_part(&self, v: Elem) -> Elem {
        (v as usize / self.k_order) as Elem
    }
    pub fn k_part(&self, v: Elem) -> Elem {
        (v as usize % self.k_order) as Elem
    }
    /// N as a subgroup of the product.
    pub fn n_image(&self) -> SubgroupSet {
        let members = crate::bitset::Bitset::from_indices(
            self.group.order(),
            (0..self.n_order).map(|i| i * self.k_order),
        );
        crate::subgroup::with_recomputed_generators(
            &self.group,
            SubgroupSet::from_members(members, vec![]),
        )
    }
    /// K as a subgroup of the product.
    pub fn k_image(&self) -> SubgroupSet {
        let members =
            crate::bitset::Bitset::from_indices(self.group.order(), 0..self.k_order);
        crate::subgroup::with_recomputed_generators(
            &self.group,
            SubgroupSet::from_members(members, vec![]),
        )
    }
}

pub fn build_semidirect(
    n: &GroupTable,
    k: &GroupTable,
    act: &ActionHomomorphism,
) -> Result<SemidirectProduct, GroupError> {
    act.validate(k, n)?;
    let (no, ko) = (n.order(), k.order());
    let order = no * ko;
    if order > MAX_ORDER {
        return Err(GroupError::BoundExceeded {
            order,
            bound: MAX_ORDER,
        });
    }
    let mut mul = vec![0 as Elem; order * order];
    for n1 in 0..no {
        for k1 in 0..ko {
            let i = n1 * ko + k1;
            for n2 in 0..no {
                let acted = act.auto_of[k1][n2] as usize;
                let n_part = n.mul(n1 as Elem, acted as Elem) as usize;
                for k2 in 0..ko {
                    let j = n2 * ko + k2;
                    let k_part = k.mul(k1 as Elem, k2 as Elem) as usize;
                    mul[i * order + j] = (n_part * ko + k_part) as Elem;
                }
            }
        }
    }
    let labels = (0..order)
        .map(|i| format!("({},{})", n.label((i / ko) as Elem), k.label((i % ko) as Elem)))
        .collect();
    let group = GroupTable::from_flat(order, mul, Some(labels))?;
    Ok(SemidirectProduct {
        group,
        n_order: no,
        k_order: ko,
    })
}

/// C_n x| <given units>, the cyclic-base semidirect products of the unit
/// action. The acting group is the multiplicative closure of the given unit
/// exponents.
pub struct CyclicSemidirect {
    pub n: u64,
    /// Unit exponent of each acting-group element, aligned with K indices.
    pub k_units: Vec<u64>,
    pub product: SemidirectProduct,
}

impl CyclicSemidirect {
    pub fn group(&self) -> &GroupTable {
        &self.product.group
    }
    /// The base C_n as a subgroup (generated by the embedded g).
    pub fn base(&self) -> SubgroupSet {
        closure(&self.product.group, &[self.product.pair(1, 0)])
    }
}

pub fn build_cyclic_semidirect(n: u64, unit_gens: &[u64]) -> Result<CyclicSemidirect, GroupError> {
    for &u in unit_gens {
        if u == 0 || u >= n.max(2) || gcd(u, n) != 1 {
            return Err(GroupError::InvalidParameter(format!(
                "unit {u} is not invertible mod {n}"
            )));
        }
    }
    // Multiplicative closure of the generators mod n, identity first.
    let mut set: Vec<u64> = vec![1];
    let mut head = 0;
    while head < set.len() {
        let x = set[head];
        head += 1;
        for &u in unit_gens {
            let y = x * u % n;
            if !set.contains(&y) {
                set.push(y);
            }
        }
    }
    let mut rest: Vec<u64> = set[1..].to_vec();
    rest.sort_unstable();
    let mut k_units = vec![1];
    k_units.extend(rest);

    let count = k_units.len();
    let pos: HashMap<u64, usize> = k_units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut kmul = vec![0 as Elem; count * count];
    for i in 0..count {
        for j in 0..count {
            kmul[i * count + j] = pos[&(k_units[i] * k_units[j] % n)] as Elem;
        }
    }
    let klabels = k_units.iter().map(|u| format!("u{u}")).collect();
    let k = GroupTable::from_flat(count, kmul, Some(klabels))?;
    let cn = build_cyclic(n)?;
    let auto_of = k_units
        .iter()
        .map(|&u| {
            (0..n)
                .map(|x| ((u as u128 * x as u128) % n as u128) as Elem)
                .collect()
        })
        .collect();
    let act = ActionHomomorphism { auto_of };
    let product = build_semidirect(&cn, &k, &act)?;
    Ok(CyclicSemidirect {
        n,
        k_units,
        product,
    })
}

/// SL(2,p) with matrices attached to each element; the identity matrix sits
/// at index 0 and the rest follow in lexicographic order.
pub struct Sl2Group {
    pub p: u64,
    pub group: GroupTable,
    pub mats: Vec<[u64; 4]>,
}

impl Sl2Group {
    pub fn index_of(&self, m: [u64; 4]) -> Option<Elem> {
        self.mats.iter().position(|&x| x == m).map(|i| i as Elem)
    }
    pub fn mat(&self, x: Elem) -> [u64; 4] {
        self.mats[x as usize]
    }
    /// [[1,1],[0,1]]
    pub fn upper_transvection(&self) -> Elem {
        self.index_of([1, 1, 0, 1]).unwrap()
    }
    /// [[1,0],[1,1]]
    pub fn lower_transvection(&self) -> Elem {
        self.index_of([1, 0, 1, 1]).unwrap()
    }
    pub fn neg_identity(&self) -> Elem {
        let q = self.p - 1;
        self.index_of([q, 0, 0, q]).unwrap()
    }
    /// Upper-triangular subgroup of order p(p-1).
    pub fn borel(&self) -> SubgroupSet {
        let idx = self
            .mats
            .iter()
            .enumerate()
            .filter(|(_, m)| m[2] == 0)
            .map(|(i, _)| i);
        let members = crate::bitset::Bitset::from_indices(self.group.order(), idx);
        crate::subgroup::with_recomputed_generators(
            &self.group,
            SubgroupSet::from_members(members, vec![]),
        )
    }
}

pub fn build_sl2(p: u64) -> Result<Sl2Group, GroupError> {
    if !is_prime(p) || p == 2 {
        return Err(GroupError::InvalidParameter(format!(
            "SL(2,p) needs an odd prime, got {p}"
        )));
    }
    let expected = (p * (p * p - 1)) as usize;
    if expected > MAX_ORDER {
        return Err(GroupError::BoundExceeded {
            order: expected,
            bound: MAX_ORDER,
        });
    }
    let mut mats: Vec<[u64; 4]> = vec![[1, 0, 0, 1]];
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let m = [a, b, c, d];
                    // det = ad - bc mod p; both products are below p^2
                    if (a * d + p * p - b * c) % p == 1 && m != [1, 0, 0, 1] {
                        mats.push(m);
                    }
                }
            }
        }
    }
    if mats.len() != expected {
        return Err(GroupError::InvalidParameter(format!(
            "SL(2,{p}) enumeration found {} matrices, expected {expected}",
            mats.len()
        )));
    }
    let pos: HashMap<[u64; 4], usize> = mats.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let order = mats.len();
    let mut mul = vec![0 as Elem; order * order];
    for (i, m1) in mats.iter().enumerate() {
        for (j, m2) in mats.iter().enumerate() {
            let prod = [
                (m1[0] * m2[0] + m1[1] * m2[2]) % p,
                (m1[0] * m2[1] + m1[1] * m2[3]) % p,
                (m1[2] * m2[0] + m1[3] * m2[2]) % p,
                (m1[2] * m2[1] + m1[3] * m2[3]) % p,
            ];
            mul[i * order + j] = pos[&prod] as Elem;
        }
    }
    let labels = mats
        .iter()
        .map(|m| format!("[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3]))
        .collect();
    let group = GroupTable::from_flat(order, mul, Some(labels))?;
    Ok(Sl2Group { p, group, mats })
}

/// P = E o C_{p^i}, the central product of the extraspecial group of order
/// p^3 with a cyclic p-group over the center of E.
pub struct PGroup {
    pub p: u64,
    pub i: u32,
    pub group: GroupTable,
    pub f1: Elem,
    pub f2: Elem,
    /// Generator of Z(P) = C_{p^i}.
    pub z: Elem,
    /// Image of the extraspecial factor, order p^3.
    pub e_image: SubgroupSet,
}

pub fn build_central_extraspecial(p: u64, i: u32) -> Result<PGroup, GroupError> {
    if i == 0 {
        return Err(GroupError::InvalidParameter("need i >= 1".into()));
    }
    let es = build_extraspecial(p)?;
    let c = build_cyclic(p.pow(i))?;
    let z1 = closure(&es.group, &[es.z]);
    let step = p.pow(i - 1) as Elem;
    let z2 = closure(&c, &[step]);
    let theta: Vec<(Elem, Elem)> = (0..p as Elem)
        .map(|j| (es.group.pow(es.z, j as u64), c.pow(step, j as u64)))
        .collect();
    let cp = build_central_product(&es.group, &c, &z1, &z2, &theta)?;
    let f1 = cp.left_embed[es.f1 as usize];
    let f2 = cp.left_embed[es.f2 as usize];
    let z = cp.right_embed[1];
    let e_image = closure(&cp.group, &[f1, f2]);
    debug_assert_eq!(e_image.len(), (p * p * p) as usize);
    debug_assert_eq!(center(&cp.group), closure(&cp.group, &[z]));
    Ok(PGroup {
        p,
        i,
        group: cp.group,
        f1,
        f2,
        z,
        e_image,
    })
}

impl PGroup {
    pub fn center_subgroup(&self) -> SubgroupSet {
        closure(&self.group, &[self.z])
    }
}

/// The action of SL(2,p) on P = E o C_{p^i}: the two transvections act by
/// f1 -> f1, f2 -> f1 f2, z -> z and f1 -> f1 f2, f2 -> f2, z -> z, and the
/// rest of SL(2,p) is reached by closing those two automorphisms. The
/// closure doubles as the well-definedness check: it must land on exactly
/// |SL(2,p)| distinct automorphisms.
pub fn build_sl2_action_on_p(
    p: u64,
    i: u32,
) -> Result<(PGroup, Sl2Group, ActionHomomorphism), GroupError> {
    let pg = build_central_extraspecial(p, i)?;
    let sl2 = build_sl2(p)?;
    let g = &pg.group;
    let f1f2 = g.mul(pg.f1, pg.f2);
    let gens = [pg.f1, pg.f2, pg.z];
    let upper_auto = automorphism_from_generator_images(g, &gens, &[pg.f1, f1f2, pg.z])?;
    let lower_auto = automorphism_from_generator_images(g, &gens, &[f1f2, pg.f2, pg.z])?;

    let k = &sl2.group;
    let k_gens = [sl2.upper_transvection(), sl2.lower_transvection()];
    let act = action_from_generator_images(k, g, &k_gens, &[upper_auto, lower_auto])?;

    // Faithfulness: all images distinct.
    let distinct: std::collections::HashSet<&Vec<Elem>> = act.auto_of.iter().collect();
    if distinct.len() != k.order() {
        return Err(GroupError::ClosureMismatch {
            got: distinct.len(),
            expected: k.order(),
        });
    }
    Ok((pg, sl2, act))
}

/// Named subgroups of SL(2,p) used as acting groups K in P x| K.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlSubgroupSel {
    Trivial,
    /// <-I>, the center.
    CenterC2,
    /// <[[1,1],[0,1]]>, unipotent of order p.
    UnipotentP,
    /// <[[0,1],[-1,0]]>, cyclic of order 4.
    C4,
    /// <-[[1,1],[0,1]]>, cyclic of order 2p.
    C2p,
    /// The quaternion Sylow 2-subgroup; only meaningful at p = 3.
    Q8,
    /// Upper triangular, order p(p-1).
    Borel,
    Full,
}

pub fn sl2_subgroup(sl2: &Sl2Group, sel: SlSubgroupSel) -> Result<SubgroupSet, GroupError> {
    let p = sl2.p;
    let g = &sl2.group;
    let (gens, expected): (Vec<Elem>, u64) = match sel {
        SlSubgroupSel::Trivial => (vec![], 1),
        SlSubgroupSel::CenterC2 => (vec![sl2.neg_identity()], 2),
        SlSubgroupSel::UnipotentP => (vec![sl2.upper_transvection()], p),
        SlSubgroupSel::C4 => (
            vec![sl2.index_of([0, 1, p - 1, 0]).unwrap()],
            4,
        ),
        SlSubgroupSel::C2p => (
            vec![sl2.index_of([p - 1, p - 1, 0, p - 1]).unwrap()],
            2 * p,
        ),
        SlSubgroupSel::Q8 => {
            if p != 3 {
                return Err(GroupError::InvalidParameter(
                    "the quaternion subgroup selector requires p = 3".into(),
                ));
            }
            (
                vec![
                    sl2.index_of([0, 1, p - 1, 0]).unwrap(),
                    sl2.index_of([1, 1, 1, p - 1]).unwrap(),
                ],
                8,
            )
        }
        SlSubgroupSel::Borel => return Ok(sl2.borel()),
        SlSubgroupSel::Full => return Ok(crate::subgroup::full_subgroup(g)),
    };
    let sub = closure(g, &gens);
    if sub.len() as u64 != expected {
        return Err(GroupError::InvalidParameter(format!(
            "selector {sel:?} produced order {}, expected {expected}",
            sub.len()
        )));
    }
    Ok(sub)
}

/// G = P x| K for K a subgroup of SL(2,p), with the standard embeddings
/// needed by the verification suites.
pub struct PSemidirect {
    pub p: u64,
    pub i: u32,
    pub product: SemidirectProduct,
    pub f1: Elem,
    pub f2: Elem,
    pub z: Elem,
    pub p_image: SubgroupSet,
    pub e_image: SubgroupSet,
    pub z_image: SubgroupSet,
    /// Matrix of each K element, aligned with K indices.
    pub k_mats: Vec<[u64; 4]>,
}

impl PSemidirect {
    pub fn group(&self) -> &GroupTable {
        &self.product.group
    }
    pub fn k_image(&self) -> SubgroupSet {
        self.product.k_image()
    }
}

pub fn build_p_semidirect(p: u64, i: u32, sel: SlSubgroupSel) -> Result<PSemidirect, GroupError> {
    let (pg, sl2, act) = build_sl2_action_on_p(p, i)?;
    let k_sub = sl2_subgroup(&sl2, sel)?;
    let (k_table, old_of_new) = subgroup_table(&sl2.group, &k_sub)?;
    let auto_of: Vec<Vec<Elem>> = old_of_new
        .iter()
        .map(|&old| act.auto_of[old as usize].clone())
        .collect();
    let act_k = ActionHomomorphism { auto_of };
    let product = build_semidirect(&pg.group, &k_table, &act_k)?;
    let g = &product.group;
    let f1 = product.pair(pg.f1, 0);
    let f2 = product.pair(pg.f2, 0);
    let z = product.pair(pg.z, 0);
    let p_image = product.n_image();
    let e_image = closure(g, &[f1, f2]);
    let z_image = closure(g, &[z]);
    let k_mats = old_of_new.iter().map(|&old| sl2.mat(old)).collect();
    Ok(PSemidirect {
        p,
        i,
        product,
        f1,
        f2,
        z,
        p_image,
        e_image,
        z_image,
        k_mats,
    })
}

/// Q8 x| S3, with S3 acting through the axis 3-cycle i -> j -> k and the
/// involution i -> -j, j -> -i, k -> -k.
pub struct Q8S3 {
    pub product: SemidirectProduct,
    pub q8_image: SubgroupSet,
    pub s3_complement: SubgroupSet,
}

impl Q8S3 {
    pub fn group(&self) -> &GroupTable {
        &self.product.group
    }
}

pub fn build_q8_s3() -> Result<Q8S3, GroupError> {
    let q8 = build_two_group(TwoGroupKind::Quaternion, 8)?;
    // Q8 indices: r = 2, s = 1, r*s = 3, r^2 = 4, r^2*s = 5, r^3 = 6.
    let sigma = automorphism_from_generator_images(&q8, &[2, 1], &[1, 3])?;
    let tau = automorphism_from_generator_images(&q8, &[2, 1], &[5, 6])?;
    let s3 = build_cyclic_semidirect(3, &[2])?;
    // S3 = C3 x| C2: the 3-cycle is (g, u1) = index 2, the involution (1, u2)
    // = index 1.
    let act = action_from_generator_images(s3.group(), &q8, &[2, 1], &[sigma, tau])?;
    let product = build_semidirect(&q8, s3.group(), &act)?;
    let q8_image = product.n_image();
    let s3_complement = product.k_image();
    Ok(Q8S3 {
        product,
        q8_image,
        s3_complement,
    })
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic;
    use crate::subgroup::{full_subgroup, subgroup_properties};

    #[test]
    fn cyclic_basics() {
        let g1 = build_cyclic(1).unwrap();
        assert_eq!(g1.order(), 1);
        let g12 = build_cyclic(12).unwrap();
        assert_eq!(g12.element_order(1), 12);
        // C8 has a unique subgroup of each order 1, 2, 4, 8
        let c8 = build_cyclic(8).unwrap();
        for (d, count) in [(1u64, 1usize), (2, 1), (4, 1), (8, 1)] {
            let subs: std::collections::HashSet<_> = c8
                .elements()
                .map(|x| closure(&c8, &[x]))
                .filter(|s| s.len() as u64 == d)
                .map(|s| s.members().clone())
                .collect();
            assert_eq!(subs.len(), count, "order {d}");
        }
    }

    #[test]
    fn quaternion_has_unique_involution() {
        for order in [8u64, 16, 32] {
            let q = build_two_group(TwoGroupKind::Quaternion, order).unwrap();
            let involutions = q.elements().filter(|&x| q.element_order(x) == 2).count();
            assert_eq!(involutions, 1, "Q_{order}");
        }
    }

    #[test]
    fn dihedral_and_semidihedral_involution_counts() {
        let d16 = build_two_group(TwoGroupKind::Dihedral, 16).unwrap();
        assert_eq!(
            d16.elements().filter(|&x| d16.element_order(x) == 2).count(),
            9
        );
        let sd16 = build_two_group(TwoGroupKind::Semidihedral, 16).unwrap();
        assert_eq!(
            sd16.elements()
                .filter(|&x| sd16.element_order(x) == 2)
                .count(),
            5
        );
    }

    #[test]
    fn two_group_rejects_bad_parameters() {
        assert!(build_two_group(TwoGroupKind::Quaternion, 4).is_err());
        assert!(build_two_group(TwoGroupKind::Dihedral, 12).is_err());
    }

    #[test]
    fn extraspecial_27() {
        let es = build_extraspecial(3).unwrap();
        let g = &es.group;
        assert_eq!(g.order(), 27);
        let z = center(g);
        assert_eq!(z.len(), 3);
        assert!(z.contains(es.z));
        // exponent 3
        assert!(g.elements().skip(1).all(|x| g.element_order(x) == 3));
        // [f1, f2] generates the center
        let comm = g.commutator(es.f1, es.f2);
        assert_eq!(closure(g, &[comm]), z);
        assert!(build_extraspecial(2).is_err());
    }

    #[test]
    fn central_product_e27_c3_is_e27() {
        let es = build_extraspecial(3).unwrap();
        let p = build_central_extraspecial(3, 1).unwrap();
        assert_eq!(p.group.order(), 27);
        assert!(are_isomorphic(&p.group, &es.group));
    }

    #[test]
    fn central_product_e27_c9() {
        let p = build_central_extraspecial(3, 2).unwrap();
        assert_eq!(p.group.order(), 81);
        let z = center(&p.group);
        assert_eq!(z.len(), 9);
        let zp = subgroup_properties(&p.group, &z);
        assert!(zp.is_cyclic);
        // the two factors commute elementwise
        let es = build_extraspecial(3).unwrap();
        let c9 = build_cyclic(9).unwrap();
        let z1 = closure(&es.group, &[es.z]);
        let z2 = closure(&c9, &[3]);
        let theta: Vec<(Elem, Elem)> = (0..3)
            .map(|j| (es.group.pow(es.z, j), c9.pow(3, j)))
            .collect();
        let cp = build_central_product(&es.group, &c9, &z1, &z2, &theta).unwrap();
        for x in 0..27u16 {
            for y in 0..9u16 {
                let a = cp.left_embed[x as usize];
                let b = cp.right_embed[y as usize];
                assert_eq!(cp.group.mul(a, b), cp.group.mul(b, a));
            }
        }
    }

    #[test]
    fn central_product_with_trivial_center_part() {
        // G o trivial over trivial centers is G.
        let g = build_cyclic(6).unwrap();
        let triv = build_cyclic(1).unwrap();
        let z1 = closure(&g, &[]);
        let z2 = closure(&triv, &[]);
        let cp = build_central_product(&g, &triv, &z1, &z2, &[(0, 0)]).unwrap();
        assert_eq!(cp.group.order(), 6);
        assert!(are_isomorphic(&cp.group, &g));
    }

    #[test]
    fn central_product_rejects_non_iso_theta() {
        let es = build_extraspecial(3).unwrap();
        let c9 = build_cyclic(9).unwrap();
        let z1 = closure(&es.group, &[es.z]);
        let z2 = closure(&c9, &[3]);
        // not multiplicative: swap two images
        let theta = vec![(0u16, 0u16), (1, 6), (2, 3)];
        assert!(build_central_product(&es.group, &c9, &z1, &z2, &theta).is_err());
    }

    #[test]
    fn units_mod_n() {
        let u8g = build_units_mod_n(8).unwrap();
        assert_eq!(u8g.units, vec![1, 3, 5, 7]);
        // C2 x C2: every element squares to 1
        assert!(u8g.group.elements().all(|x| u8g.group.mul(x, x) == 0));
        let u9 = build_units_mod_n(9).unwrap();
        assert_eq!(u9.group.order(), 6);
        let u2 = build_units_mod_n(2).unwrap();
        assert_eq!(u2.group.order(), 1);
    }

    #[test]
    fn alpha_p_values() {
        assert_eq!(alpha_p(8, 2).unwrap(), 5);
        assert_eq!(alpha_p(9, 3).unwrap(), 4);
        assert_eq!(alpha_p(6, 3).unwrap(), 1); // k = 1: identity
        assert!(alpha_p(8, 3).is_err());
        // order of alpha_p in the unit group is p when k > 1
        let u = build_units_mod_n(27).unwrap();
        let a = u.index_of_unit(alpha_p(27, 3).unwrap()).unwrap();
        assert_eq!(u.group.element_order(a), 3);
    }

    #[test]
    fn alpha_p_commute_for_distinct_primes() {
        for n in [36u64, 72, 225] {
            let factors = crate::group::prime_factors_of(n);
            let u = build_units_mod_n(n).unwrap();
            for &p in &factors {
                for &q in &factors {
                    let ap = u.index_of_unit(alpha_p(n, p).unwrap()).unwrap();
                    let aq = u.index_of_unit(alpha_p(n, q).unwrap()).unwrap();
                    assert_eq!(u.group.mul(ap, aq), u.group.mul(aq, ap));
                }
            }
        }
    }

    #[test]
    fn sl2_3_structure() {
        let sl = build_sl2(3).unwrap();
        assert_eq!(sl.group.order(), 24);
        let z = center(&sl.group);
        assert_eq!(z.len(), 2);
        assert!(z.contains(sl.neg_identity()));
        let borel = sl.borel();
        assert_eq!(borel.len(), 6);
        assert!(build_sl2(13).is_err());
    }

    #[test]
    fn semidirect_trivial_action_is_direct_product() {
        let c3 = build_cyclic(3).unwrap();
        let c4 = build_cyclic(4).unwrap();
        let act = ActionHomomorphism::trivial(&c4, &c3);
        let sd = build_semidirect(&c3, &c4, &act).unwrap();
        let dp = build_direct_product(&c3, &c4).unwrap();
        assert!(are_isomorphic(&sd.group, &dp.group));
        assert!(are_isomorphic(&sd.group, &build_cyclic(12).unwrap()));
    }

    #[test]
    fn inversion_semidirect_is_dihedral() {
        // C_{2^k} x| <g -> g^-1> is dihedral of order 2^(k+1)
        for k in [2u32, 3, 4] {
            let n = 1u64 << k;
            let cs = build_cyclic_semidirect(n, &[n - 1]).unwrap();
            let d = build_two_group(TwoGroupKind::Dihedral, 2 * n).unwrap();
            assert!(are_isomorphic(cs.group(), &d));
        }
    }

    #[test]
    fn semidirect_rejects_invalid_action() {
        let c4 = build_cyclic(4).unwrap();
        let c2 = build_cyclic(2).unwrap();
        // "action" by the non-automorphism x -> x+1
        let bad = ActionHomomorphism {
            auto_of: vec![
                (0..4).collect(),
                vec![1, 2, 3, 0],
            ],
        };
        assert!(build_semidirect(&c4, &c2, &bad).is_err());
    }

    #[test]
    fn sl2_action_on_p_is_faithful_and_matches_formulas() {
        let (pg, sl2, act) = build_sl2_action_on_p(3, 1).unwrap();
        let g = &pg.group;
        let u = sl2.upper_transvection();
        assert_eq!(act.apply(u, pg.f1), pg.f1);
        assert_eq!(act.apply(u, pg.f2), g.mul(pg.f1, pg.f2));
        // every matrix fixes z
        for m in sl2.group.elements() {
            assert_eq!(act.apply(m, pg.z), pg.z);
        }
        act.validate(&sl2.group, g).unwrap();
    }

    #[test]
    fn p_semidirect_full_has_order_648() {
        let ps = build_p_semidirect(3, 1, SlSubgroupSel::Full).unwrap();
        assert_eq!(ps.group().order(), 648);
        assert_eq!(ps.p_image.len(), 27);
        assert_eq!(ps.z_image.len(), 3);
        let full = full_subgroup(ps.group());
        assert!(crate::subgroup::is_normal(ps.group(), &ps.p_image, &full).unwrap());
    }

    #[test]
    fn sl2_subgroup_selectors() {
        let sl2 = build_sl2(3).unwrap();
        for (sel, n) in [
            (SlSubgroupSel::Trivial, 1u64),
            (SlSubgroupSel::CenterC2, 2),
            (SlSubgroupSel::UnipotentP, 3),
            (SlSubgroupSel::C4, 4),
            (SlSubgroupSel::C2p, 6),
            (SlSubgroupSel::Q8, 8),
            (SlSubgroupSel::Borel, 6),
            (SlSubgroupSel::Full, 24),
        ] {
            assert_eq!(sl2_subgroup(&sl2, sel).unwrap().len() as u64, n, "{sel:?}");
        }
    }

    #[test]
    fn q8_s3_builds_order_48() {
        let q = build_q8_s3().unwrap();
        assert_eq!(q.group().order(), 48);
        assert_eq!(q.q8_image.len(), 8);
        assert_eq!(q.s3_complement.len(), 6);
        let full = full_subgroup(q.group());
        assert!(crate::subgroup::is_normal(q.group(), &q.q8_image, &full).unwrap());
        assert!(!crate::subgroup::is_normal(q.group(), &q.s3_complement, &full).unwrap());
    }

    #[test]
    fn direct_product_examples() {
        let c2 = build_cyclic(2).unwrap();
        let klein = build_direct_product(&c2, &c2).unwrap();
        assert_eq!(klein.group.order(), 4);
        assert!(klein.group.elements().skip(1).all(|x| klein.group.element_order(x) == 2));
        let d16 = build_two_group(TwoGroupKind::Dihedral, 16).unwrap();
        let c3 = build_cyclic(3).unwrap();
        let big = build_direct_product(&d16, &c3).unwrap();
        assert_eq!(big.group.order(), 48);
    }
}

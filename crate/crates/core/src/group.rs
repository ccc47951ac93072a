//! Group tables: validation, element arithmetic, homomorphisms.

use crate::MAX_ORDER;
use thiserror::Error;

/// Index of a group element inside its table. Index 0 is always the identity.
pub type Elem = u16;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group order {order} exceeds the supported bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: Elem, b: Elem, c: Elem },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("containment violation: {0}")]
    Containment(String),
    #[error("subgroup is not normal in {0}")]
    NotNormal(String),
    #[error("not a p-group: order {order} is not a power of {p}")]
    NotPGroup { order: usize, p: u64 },
    #[error("map is not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("action is not a homomorphism into the automorphism group: {0}")]
    InvalidAction(String),
    #[error("generated automorphism closure has order {got}, expected {expected}")]
    ClosureMismatch { got: usize, expected: usize },
    #[error("subgroup enumeration exceeded the budget of {budget} subgroups ({found} found so far)")]
    EnumerationBudget { budget: usize, found: usize },
    #[error("no complement found where one was required: {0}")]
    NoComplement(String),
}

/// A finite group as an explicit multiplication table.
///
/// Invariants established at construction: index 0 is a two-sided identity,
/// every row and column is a permutation of `0..order`, every element has a
/// two-sided inverse, and multiplication is associative (checked exhaustively
/// up to order 256, by randomized triples above that — the structural
/// constructors in [`crate::construct`] are associative by construction).
#[derive(Clone, Debug)]
pub struct GroupTable {
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    labels: Option<Vec<String>>,
    prime_factors: Vec<u64>,
}

const FULL_ASSOC_LIMIT: usize = 256;
const RANDOM_TRIPLES: usize = 100_000;

impl GroupTable {
    /// Builds a group from explicit rows, validating all invariants.
    pub fn from_mul_table(
        rows: Vec<Vec<Elem>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let order = rows.len();
        let mut mul = Vec::with_capacity(order * order);
        for row in &rows {
            if row.len() != order {
                return Err(GroupError::InvalidTable(format!(
                    "row length {} != order {order}",
                    row.len()
                )));
            }
            mul.extend_from_slice(row);
        }
        Self::from_flat(order, mul, labels)
    }

    /// Associativity is checked exhaustively up to order 256; above that the
    /// structural constructors guarantee it and 1e5 deterministic random
    /// triples are spot-checked.
    pub(crate) fn from_flat(
        order: usize,
        mul: Vec<Elem>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if order > MAX_ORDER {
            return Err(GroupError::BoundExceeded {
                order,
                bound: MAX_ORDER,
            });
        }
        assert_eq!(mul.len(), order * order);
        if let Some(l) = &labels {
            assert_eq!(l.len(), order);
        }

        // Identity at index 0.
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(GroupError::InvalidTable(format!(
                    "index 0 is not a two-sided identity at element {x}"
                )));
            }
        }
        // Latin square.
        let mut seen = vec![false; order];
        for r in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..order {
                let v = mul[r * order + c] as usize;
                if v >= order || seen[v] {
                    return Err(GroupError::InvalidTable(format!(
                        "row {r} is not a permutation"
                    )));
                }
                seen[v] = true;
            }
        }
        for c in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..order {
                let v = mul[r * order + c] as usize;
                if seen[v] {
                    return Err(GroupError::InvalidTable(format!(
                        "column {c} is not a permutation"
                    )));
                }
                seen[v] = true;
            }
        }
        // Two-sided inverses.
        let mut inv = vec![0 as Elem; order];
        for x in 0..order {
            let mut found = None;
            for y in 0..order {
                if mul[x * order + y] == 0 && mul[y * order + x] == 0 {
                    found = Some(y as Elem);
                    break;
                }
            }
            match found {
                Some(y) => inv[x] = y,
                None => {
                    return Err(GroupError::InvalidTable(format!(
                        "element {x} has no two-sided inverse"
                    )))
                }
            }
        }
        // Associativity.
        if order <= FULL_ASSOC_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul[a * order + b] as usize;
                    for c in 0..order {
                        let bc = mul[b * order + c] as usize;
                        if mul[ab * order + c] != mul[a * order + bc] {
                            return Err(GroupError::NotAssociative {
                                a: a as Elem,
                                b: b as Elem,
                                c: c as Elem,
                            });
                        }
                    }
                }
            }
        } else {
            let mut rng = SplitMix64::new(0x9e37_79b9 ^ order as u64);
            for _ in 0..RANDOM_TRIPLES {
                let a = (rng.next() % order as u64) as usize;
                let b = (rng.next() % order as u64) as usize;
                let c = (rng.next() % order as u64) as usize;
                let ab = mul[a * order + b] as usize;
                let bc = mul[b * order + c] as usize;
                if mul[ab * order + c] != mul[a * order + bc] {
                    return Err(GroupError::NotAssociative {
                        a: a as Elem,
                        b: b as Elem,
                        c: c as Elem,
                    });
                }
            }
        }

        let prime_factors = prime_factors_of(order as u64);
        Ok(GroupTable {
            order,
            mul,
            inv,
            labels,
            prime_factors,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// g * x * g^{-1}
    #[inline]
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// [x, y] = x y x^{-1} y^{-1}
    #[inline]
    pub fn commutator(&self, x: Elem, y: Elem) -> Elem {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    pub fn pow(&self, x: Elem, mut k: u64) -> Elem {
        let mut acc = 0 as Elem;
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: Elem) -> u64 {
        let mut n = 1u64;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order as Elem
    }

    pub fn prime_factors(&self) -> &[u64] {
        &self.prime_factors
    }

    pub fn label(&self, x: Elem) -> String {
        match &self.labels {
            Some(l) => l[x as usize].clone(),
            None => format!("e{x}"),
        }
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    pub(crate) fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
    }

    /// FNV-1a over the multiplication table; used as the cache fingerprint.
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for &v in &self.mul {
            for byte in v.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x1000_0000_01b3);
            }
        }
        h
    }

    /// Greedy minimal-ish generating set: walk elements in index order and
    /// keep those outside the subgroup generated so far.
    pub fn generating_set(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut have = crate::subgroup::closure(self, &gens);
        for x in 1..self.order as Elem {
            if !have.contains(x) {
                gens.push(x);
                have = crate::subgroup::closure(self, &gens);
                if have.len() == self.order {
                    break;
                }
            }
        }
        gens
    }

    /// Census of element orders, sorted ascending.
    pub fn order_census(&self) -> Vec<u64> {
        let mut v: Vec<u64> = (0..self.order as Elem).map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }
}

/// A homomorphism between two table groups, stored as the image of every
/// domain element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHomomorphism {
    pub image_of: Vec<Elem>,
}

impl GroupHomomorphism {
    pub fn apply(&self, x: Elem) -> Elem {
        self.image_of[x as usize]
    }

    /// Checks image_of[xy] = image_of[x] image_of[y] and image_of[0] = 0.
    pub fn validate(&self, dom: &GroupTable, cod: &GroupTable) -> Result<(), GroupError> {
        if self.image_of.len() != dom.order() {
            return Err(GroupError::InvalidParameter(
                "homomorphism image length differs from domain order".into(),
            ));
        }
        if self.image_of[0] != 0 {
            return Err(GroupError::NotIsomorphism("identity not preserved".into()));
        }
        for x in 0..dom.order() as Elem {
            for y in 0..dom.order() as Elem {
                let lhs = self.image_of[dom.mul(x, y) as usize];
                let rhs = cod.mul(self.image_of[x as usize], self.image_of[y as usize]);
                if lhs != rhs {
                    return Err(GroupError::NotIsomorphism(format!(
                        "image_of({x}*{y}) != image_of({x})*image_of({y})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Structural flags of a subgroup, computed from the ambient table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupProperties {
    pub is_abelian: bool,
    pub is_cyclic: bool,
    pub is_elementary_abelian: bool,
    /// log_p of the order, only for elementary abelian p-groups (0 for the
    /// trivial subgroup).
    pub rank: Option<u32>,
    pub exponent: u64,
    /// Orders of all elements, sorted ascending.
    pub element_orders: Vec<u64>,
}

pub(crate) fn prime_factors_of(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors_of(n) == [n]
}

/// p-adic valuation: largest k with p^k | n.
pub(crate) fn valuation(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

/// Deterministic 64-bit generator for randomized spot checks.
pub(crate) struct SplitMix64(u64);

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub(crate) fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_cyclic;

    fn cyclic_rows(n: usize) -> Vec<Vec<Elem>> {
        (0..n)
            .map(|i| (0..n).map(|j| ((i + j) % n) as Elem).collect())
            .collect()
    }

    #[test]
    fn validates_cyclic_table() {
        let g = GroupTable::from_mul_table(cyclic_rows(6), None).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.inv(2), 4);
        assert_eq!(g.element_order(1), 6);
        assert_eq!(g.element_order(2), 3);
        assert_eq!(g.prime_factors(), &[2, 3]);
    }

    #[test]
    fn rejects_broken_identity() {
        let mut rows = cyclic_rows(4);
        rows[0][1] = 2;
        rows[0][2] = 1;
        assert!(matches!(
            GroupTable::from_mul_table(rows, None),
            Err(GroupError::InvalidTable(_))
        ));
    }

    #[test]
    fn rejects_non_latin_row() {
        let mut rows = cyclic_rows(4);
        rows[2][1] = rows[2][2];
        assert!(matches!(
            GroupTable::from_mul_table(rows, None),
            Err(GroupError::InvalidTable(_))
        ));
    }

    #[test]
    fn rejects_non_associative_loop() {
        // Swap the 2x2 intercalate of C6 at rows {1,4} x cols {1,4}. The
        // result is still a Latin square with identity and two-sided
        // inverses, but (1*1)*2 = 1 while 1*(1*2) = 4.
        let mut rows = cyclic_rows(6);
        rows[1][1] = 5;
        rows[1][4] = 2;
        rows[4][1] = 2;
        rows[4][4] = 5;
        match GroupTable::from_mul_table(rows, None) {
            Err(GroupError::NotAssociative { .. }) => {}
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn pow_and_commutator() {
        let g = build_cyclic(12).unwrap();
        assert_eq!(g.pow(1, 12), 0);
        assert_eq!(g.pow(5, 3), 3);
        assert_eq!(g.commutator(3, 7), 0);
    }

    #[test]
    fn generating_set_of_cyclic_is_single() {
        let g = build_cyclic(15).unwrap();
        assert_eq!(g.generating_set(), vec![1]);
    }

    #[test]
    fn fingerprint_stable_and_distinct() {
        let a = build_cyclic(8).unwrap();
        let b = build_cyclic(9).unwrap();
        assert_eq!(a.fingerprint(), build_cyclic(8).unwrap().fingerprint());
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn valuation_and_primes() {
        assert_eq!(prime_factors_of(648), vec![2, 3]);
        assert_eq!(valuation(648, 3), 4);
        assert!(is_prime(2) && is_prime(13) && !is_prime(1) && !is_prime(15));
    }
}

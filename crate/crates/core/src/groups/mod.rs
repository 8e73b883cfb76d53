//! Finite groups given by Cayley tables.
//!
//! Elements are `usize` indices into the table and the identity is always
//! index 0. Everything here is immutable once built.

mod catalog;
mod extension;

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

pub use catalog::{catalog, catalog_entry, catalog_names, named_group, CatalogEntry, SPLIT_SEARCH_MAX_Q};
pub use extension::GroupExtension;

/// Default cap on the size of a permutation-group closure.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<Vec<usize>>,
    #[serde(skip)]
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table and relocates the identity to index 0.
    pub fn from_table(name: &str, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::MalformedTable {
                row: 0,
                col: 0,
                reason: "empty table".into(),
            });
        }
        for (r, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable {
                    row: r,
                    col: row.len().min(n),
                    reason: format!("row has {} entries, expected {n}", row.len()),
                });
            }
            if let Some(c) = row.iter().position(|&x| x >= n) {
                return Err(Error::MalformedTable {
                    row: r,
                    col: c,
                    reason: format!("entry {} out of range 0..{n}", row[c]),
                });
            }
        }

        // Latin property, reported in the caller's indexing
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let x = mul[a][b];
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::MalformedTable {
                        row: a,
                        col: b,
                        reason: format!("element {x} repeats in row {a}"),
                    });
                }
            }
        }
        for b in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..n {
                let x = mul[a][b];
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::MalformedTable {
                        row: a,
                        col: b,
                        reason: format!("element {x} repeats in column {b}"),
                    });
                }
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| Error::NotAGroup {
                reason: "no two-sided identity".into(),
                witness: None,
            })?;
        let mul = if identity == 0 {
            mul
        } else {
            // relabel by swapping 0 and the identity
            let swap = |x: usize| {
                if x == 0 {
                    identity
                } else if x == identity {
                    0
                } else {
                    x
                }
            };
            (0..n)
                .map(|a| (0..n).map(|b| swap(mul[swap(a)][swap(b)])).collect())
                .collect()
        };

        if let Some(w) = associativity_witness(&mul) {
            return Err(Error::NotAGroup {
                reason: format!("({0}*{1})*{2} != {0}*({1}*{2})", w.0, w.1, w.2),
                witness: Some(w),
            });
        }
        Ok(Self::from_valid_table(name, mul))
    }

    /// Builds a group from a table already known to be a group with identity 0.
    pub(crate) fn from_valid_table(name: &str, mul: Vec<Vec<usize>>) -> Self {
        let n = mul.len();
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| mul[a][b] == 0).expect("row is a permutation"))
            .collect();
        Self {
            name: name.to_string(),
            order: n,
            mul,
            inv,
        }
    }

    /// Closure of permutations of `0..degree`, enumerated breadth-first from
    /// the identity with generators applied in the order given.
    ///
    /// A permutation is written as its image list `[p(0), .., p(degree-1)]`
    /// and the product `a * b` is the composite `a ∘ b`.
    pub fn from_permutation_generators(
        name: &str,
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self> {
        Self::permutation_closure(name, degree, generators, cap).map(|(g, _)| g)
    }

    /// Like [`FiniteGroup::from_permutation_generators`], also returning the
    /// permutation behind each element index.
    pub fn permutation_closure(
        name: &str,
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        for (k, g) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidInput(format!(
                    "generator {k} is not a permutation of 0..{degree}"
                )));
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in generators {
                let p = compose(&elements[e], g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let mul = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        Ok((Self::from_valid_table(name, mul), elements))
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_valid_table(&format!("Z{n}"), mul)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).renamed("1")
    }

    /// Direct product with element `(a, b)` at index `a + |self| * b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order, other.order);
        let mul = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x % n, y % n) + n * other.mul(x / n, y / n))
                    .collect()
            })
            .collect();
        Self::from_valid_table(&format!("{}x{}", self.name, other.name), mul)
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `h g h^-1`
    #[inline]
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    /// `a b a^-1 b^-1`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn product_of(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(0, |acc, x| self.mul(acc, x))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in subset {
            if x >= self.order {
                return false;
            }
            member[x] = true;
        }
        member[0]
            && subset
                .iter()
                .all(|&a| subset.iter().all(|&b| member[self.mul(a, self.inv(b))]))
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// Subgroup on `elements` (which must contain 0 and be closed), reindexed
    /// in the order given.
    pub fn subgroup(&self, name: &str, elements: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(elements) {
            return Err(Error::NotASubgroup(format!("{elements:?}")));
        }
        let mut elems = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let mut local = vec![usize::MAX; self.order];
        for (k, &x) in elems.iter().enumerate() {
            local[x] = k;
        }
        let mul = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| local[self.mul(a, b)]).collect())
            .collect();
        Ok((FiniteGroup::from_valid_table(name, mul), elems))
    }
}

fn associativity_witness(mul: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = mul.len();
    for a in 0..n {
        for b in 0..n {
            let ab = mul[a][b];
            for c in 0..n {
                if mul[ab][c] != mul[a][mul[b][c]] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// A structure-preserving map between two finite groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Homomorphism {
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&x| x >= target.order()) {
            return Err(Error::InvalidExtension("map has the wrong shape".into()));
        }
        if map[0] != 0 {
            return Err(Error::InvalidExtension("identity is not preserved".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidExtension(format!(
                        "map is not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Self { map })
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self, target_order: usize) -> bool {
        let mut seen = vec![false; target_order];
        self.map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
    }

    pub fn is_surjective(&self, target_order: usize) -> bool {
        let mut seen = vec![false; target_order];
        self.map.iter().for_each(|&x| seen[x] = true);
        seen.into_iter().all(|s| s)
    }

    pub fn kernel(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&x| self.map[x] == 0).collect()
    }
}

/// Conjugacy classes of a finite group.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyClassification {
    pub class_of: Vec<usize>,
    /// Each class sorted ascending; classes ordered by their minimal element.
    pub classes: Vec<Vec<usize>>,
    pub centralizer_orders: Vec<usize>,
}

impl ConjugacyClassification {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn representative(&self, k: usize) -> usize {
        self.classes[k][0]
    }

    /// Index of the class containing the inverses of class `k`.
    pub fn inverse_class(&self, group: &FiniteGroup, k: usize) -> usize {
        self.class_of[group.inv(self.representative(k))]
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClassification {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let k = classes.len();
        let mut class: Vec<usize> = (0..n).map(|h| g.conj(h, x)).collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            class_of[y] = k;
        }
        classes.push(class);
    }
    let centralizer_orders = classes
        .iter()
        .map(|c| {
            let x = c[0];
            (0..n).filter(|&h| g.mul(h, x) == g.mul(x, h)).count()
        })
        .collect();
    ConjugacyClassification {
        class_of,
        classes,
        centralizer_orders,
    }
}

/// Cheap isomorphism-invariant fingerprint: element order profile and
/// sorted class sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub order_profile: Vec<usize>,
    pub class_sizes: Vec<usize>,
}

pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let mut class_sizes = conjugacy_classes(g).class_sizes();
    class_sizes.sort_unstable();
    Fingerprint {
        order: g.order(),
        order_profile: g.order_profile(),
        class_sizes,
    }
}

/// Automorphism check for a permutation of the elements of `g`.
pub fn is_automorphism(g: &FiniteGroup, map: &[usize]) -> bool {
    let n = g.order();
    if map.len() != n || map[0] != 0 {
        return false;
    }
    let mut seen = vec![false; n];
    if map.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
        return false;
    }
    (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == g.mul(map[a], map[b])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutation_generators("S3", 3, &[vec![1, 2, 0], vec![1, 0, 2]], 100).unwrap()
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_table("1", vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn z2_table() {
        let g = FiniteGroup::from_table("Z2", vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn identity_is_relocated() {
        // Z3 written with identity at index 2
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_table("Z3", t).unwrap();
        for x in 0..3 {
            assert_eq!(g.mul(0, x), x);
            assert_eq!(g.mul(x, 0), x);
        }
    }

    #[test]
    fn perturbed_s3_reports_triple() {
        // swap the symbols of a 2x2 subsquare away from the identity; the
        // table stays Latin with identity 0 but loses associativity
        let mut t = s3().table().to_vec();
        let mut done = false;
        'search: for a in 1..6 {
            for b in a + 1..6 {
                for c in 1..6 {
                    for d in c + 1..6 {
                        if t[a][c] == t[b][d] && t[a][d] == t[b][c] {
                            let (x, y) = (t[a][c], t[a][d]);
                            t[a][c] = y;
                            t[b][d] = y;
                            t[a][d] = x;
                            t[b][c] = x;
                            done = true;
                            break 'search;
                        }
                    }
                }
            }
        }
        assert!(done);
        match FiniteGroup::from_table("bad", t.clone()) {
            Err(Error::NotAGroup {
                witness: Some((a, b, c)),
                ..
            }) => assert_ne!(t[t[a][b]][c], t[a][t[b][c]]),
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn latin_but_nonassociative_has_witness() {
        // a Latin square with identity 0 of order 5 that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table("loop", t.clone()) {
            Err(Error::NotAGroup {
                witness: Some((a, b, c)),
                ..
            }) => assert_ne!(t[t[a][b]][c], t[a][t[b][c]]),
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn malformed_tables() {
        assert!(matches!(
            FiniteGroup::from_table("x", vec![vec![0, 1], vec![1]]),
            Err(Error::MalformedTable { row: 1, .. })
        ));
        assert!(matches!(
            FiniteGroup::from_table("x", vec![vec![0, 1], vec![1, 7]]),
            Err(Error::MalformedTable { row: 1, col: 1, .. })
        ));
        assert!(matches!(
            FiniteGroup::from_table("x", vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 2, 1]]),
            Err(Error::MalformedTable { row: 2, col: 1, .. })
        ));
    }

    #[test]
    fn permutation_closures() {
        assert_eq!(s3().order(), 6);
        let triv = FiniteGroup::from_permutation_generators("1", 2, &[vec![0, 1]], 10).unwrap();
        assert_eq!(triv.order(), 1);
        let v4 = FiniteGroup::from_permutation_generators("V4", 4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 10).unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.is_abelian());
        assert!(matches!(
            FiniteGroup::from_permutation_generators("S4", 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], 10),
            Err(Error::OrderCapExceeded { cap: 10 })
        ));
    }

    #[test]
    fn s3_classes() {
        let cc = conjugacy_classes(&s3());
        let mut pairs: Vec<(usize, usize)> = cc
            .class_sizes()
            .into_iter()
            .zip(cc.centralizer_orders.iter().copied())
            .collect();
        pairs.sort_unstable();
        assert_eq!(pairs, vec![(1, 6), (2, 3), (3, 2)]);
    }

    #[test]
    fn q8_classes() {
        let q8 = named_group("Q8").unwrap();
        let mut sizes = conjugacy_classes(&q8).class_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn abelian_classes_are_singletons() {
        let g = FiniteGroup::cyclic(4).direct_product(&FiniteGroup::cyclic(2));
        let cc = conjugacy_classes(&g);
        assert_eq!(cc.num_classes(), 8);
    }
}

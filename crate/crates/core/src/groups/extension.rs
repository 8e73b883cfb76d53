use serde::Serialize;

use super::{is_automorphism, FiniteGroup, Homomorphism};
use crate::error::{Error, Result};

/// An extension `1 -> G -> H -> Q -> 1` together with a set-theoretic
/// section `s` of the projection and the derived `tau`.
///
/// `tau[q1][q2]` is the element of `G` with
/// `s(q1) s(q2) = i(tau) s(q1 q2)`, and `ad[q][g]` is
/// `s(q) i(g) s(q)^-1` pulled back to `G`.
#[derive(Debug, Clone, Serialize)]
pub struct GroupExtension {
    pub g: FiniteGroup,
    pub h: FiniteGroup,
    pub q: FiniteGroup,
    pub incl: Homomorphism,
    pub proj: Homomorphism,
    pub section: Vec<usize>,
    pub tau: Vec<Vec<usize>>,
    #[serde(skip)]
    ad: Vec<Vec<usize>>,
    #[serde(skip)]
    g_of_h: Vec<Option<usize>>,
}

impl GroupExtension {
    /// Assembles and validates an extension from its pieces; `tau` is
    /// derived from the section.
    pub fn new(
        g: FiniteGroup,
        h: FiniteGroup,
        q: FiniteGroup,
        incl: Homomorphism,
        proj: Homomorphism,
        section: Vec<usize>,
    ) -> Result<Self> {
        if !incl.is_injective(h.order()) {
            return Err(Error::InvalidExtension("i is not injective".into()));
        }
        if !proj.is_surjective(q.order()) {
            return Err(Error::InvalidExtension("j is not surjective".into()));
        }
        let mut image: Vec<usize> = incl.as_slice().to_vec();
        image.sort_unstable();
        if image != proj.kernel() {
            return Err(Error::InvalidExtension("image(i) differs from kernel(j)".into()));
        }
        if section.len() != q.order() || section.iter().any(|&x| x >= h.order()) {
            return Err(Error::InvalidExtension("section has the wrong shape".into()));
        }
        if section[0] != 0 {
            return Err(Error::InvalidExtension("section does not send 1 to 1".into()));
        }
        if let Some(x) = (0..q.order()).find(|&x| proj.apply(section[x]) != x) {
            return Err(Error::InvalidExtension(format!("j(s({x})) != {x}")));
        }

        let mut g_of_h = vec![None; h.order()];
        for x in 0..g.order() {
            g_of_h[incl.apply(x)] = Some(x);
        }
        let pull = |y: usize| g_of_h[y].expect("element lies in the kernel");
        let tau: Vec<Vec<usize>> = (0..q.order())
            .map(|a| {
                (0..q.order())
                    .map(|b| {
                        let lhs = h.mul(section[a], section[b]);
                        pull(h.mul(lhs, h.inv(section[q.mul(a, b)])))
                    })
                    .collect()
            })
            .collect();
        let ad: Vec<Vec<usize>> = (0..q.order())
            .map(|a| {
                (0..g.order())
                    .map(|x| pull(h.conj(section[a], incl.apply(x))))
                    .collect()
            })
            .collect();
        let ext = Self {
            g,
            h,
            q,
            incl,
            proj,
            section,
            tau,
            ad,
            g_of_h,
        };
        ext.validate()?;
        Ok(ext)
    }

    /// Re-checks every structural invariant, including the cocycle identity
    /// for `tau` in exact integer arithmetic.
    pub fn validate(&self) -> Result<()> {
        let (g, h, q) = (&self.g, &self.h, &self.q);
        if h.order() != g.order() * q.order() {
            return Err(Error::InvalidExtension("|H| != |G||Q|".into()));
        }
        for a in 0..q.order() {
            if self.tau[0][a] != 0 || self.tau[a][0] != 0 {
                return Err(Error::InvalidExtension(format!("tau not normalized at {a}")));
            }
            for b in 0..q.order() {
                let lhs = h.mul(self.section[a], self.section[b]);
                let rhs = h.mul(self.incl.apply(self.tau[a][b]), self.section[q.mul(a, b)]);
                if lhs != rhs {
                    return Err(Error::InvalidExtension(format!("s({a})s({b}) != i(tau) s({a}{b})")));
                }
            }
        }
        if let Some((a, b, c)) = self.tau_cocycle_violation() {
            return Err(Error::InvalidExtension(format!(
                "tau cocycle identity fails at ({a}, {b}, {c})"
            )));
        }
        Ok(())
    }

    /// First triple violating
    /// `tau(a,b) tau(ab,c) = Ad_{s(a)}(tau(b,c)) tau(a,bc)`.
    pub fn tau_cocycle_violation(&self) -> Option<(usize, usize, usize)> {
        let (g, q) = (&self.g, &self.q);
        let n = q.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = g.mul(self.tau[a][b], self.tau[q.mul(a, b)][c]);
                    let rhs = g.mul(self.ad[a][self.tau[b][c]], self.tau[a][q.mul(b, c)]);
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// `G x Q` with `(g1,q1)(g2,q2) = (g1 q1(g2), q1 q2)`, element `(g,q)` at
    /// index `q |G| + g`, and `s(q) = (1,q)`.
    pub fn semidirect_product(g: &FiniteGroup, q: &FiniteGroup, action: &[Vec<usize>]) -> Result<Self> {
        if action.len() != q.order() {
            return Err(Error::NotAnAction(format!(
                "expected {} automorphisms, got {}",
                q.order(),
                action.len()
            )));
        }
        for (k, map) in action.iter().enumerate() {
            if !is_automorphism(g, map) {
                return Err(Error::NotAnAction(format!("map for {k} is not an automorphism")));
            }
        }
        for a in 0..q.order() {
            for b in 0..q.order() {
                let ab = q.mul(a, b);
                if (0..g.order()).any(|x| action[ab][x] != action[a][action[b][x]]) {
                    return Err(Error::NotAnAction(format!(
                        "action is not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        let trivial = vec![vec![0; q.order()]; q.order()];
        Self::from_twisted_product(g, q, action, &trivial)
    }

    /// `G x Q` with `(g1,q1)(g2,q2) = (g1 a_{q1}(g2) tau(q1,q2), q1 q2)`.
    pub fn from_cocycle(g: &FiniteGroup, q: &FiniteGroup, action: &[Vec<usize>], tau: &[Vec<usize>]) -> Result<Self> {
        if action.len() != q.order() {
            return Err(Error::NotAnAction(format!(
                "expected {} automorphisms, got {}",
                q.order(),
                action.len()
            )));
        }
        for (k, map) in action.iter().enumerate() {
            if !is_automorphism(g, map) {
                return Err(Error::NotAnAction(format!("map for {k} is not an automorphism")));
            }
        }
        if tau.len() != q.order()
            || tau
                .iter()
                .any(|row| row.len() != q.order() || row.iter().any(|&x| x >= g.order()))
        {
            return Err(Error::InvalidInput("tau has the wrong shape".into()));
        }
        if (0..g.order()).any(|x| action[0][x] != x) {
            return Err(Error::BadNormalization("the identity of Q acts nontrivially".into()));
        }
        if let Some(a) = (0..q.order()).find(|&a| tau[0][a] != 0 || tau[a][0] != 0) {
            return Err(Error::BadNormalization(format!("tau(1,{a}) or tau({a},1) is not 1")));
        }
        Self::from_twisted_product(g, q, action, tau)
    }

    fn from_twisted_product(
        g: &FiniteGroup,
        q: &FiniteGroup,
        action: &[Vec<usize>],
        tau: &[Vec<usize>],
    ) -> Result<Self> {
        let (n, m) = (g.order(), q.order());
        let mul: Vec<Vec<usize>> = (0..n * m)
            .map(|x| {
                let (g1, q1) = (x % n, x / n);
                (0..n * m)
                    .map(|y| {
                        let (g2, q2) = (y % n, y / n);
                        let gg = g.mul(g.mul(g1, action[q1][g2]), tau[q1][q2]);
                        q.mul(q1, q2) * n + gg
                    })
                    .collect()
            })
            .collect();
        if let Some(w) = super::associativity_witness(&mul) {
            return Err(Error::NotAssociative { witness: w });
        }
        let name = format!("{}.{}", g.name(), q.name());
        let h = FiniteGroup::from_valid_table(&name, mul);
        let incl = Homomorphism::new(g, &h, (0..n).collect())?;
        let proj = Homomorphism::new(&h, q, (0..n * m).map(|x| x / n).collect())?;
        let section = (0..m).map(|a| a * n).collect();
        Self::new(g.clone(), h, q.clone(), incl, proj, section)
    }

    /// Extension with `G = N` and `Q = H/N`. Elements of `G` are the
    /// elements of `N` in increasing order; cosets are ordered by their
    /// minimal element, which is also the section value.
    pub fn from_quotient(h: &FiniteGroup, normal: &[usize]) -> Result<Self> {
        let (g, elems) = h.subgroup(&format!("N<{}", h.name()), normal)?;
        for &x in &elems {
            for y in 0..h.order() {
                let c = h.conj(y, x);
                if elems.binary_search(&c).is_err() {
                    return Err(Error::NotNormal { element: x, by: y });
                }
            }
        }
        let mut coset_min = vec![usize::MAX; h.order()];
        let mut reps = Vec::new();
        for x in 0..h.order() {
            if coset_min[x] == usize::MAX {
                reps.push(x);
                for &k in &elems {
                    coset_min[h.mul(x, k)] = x;
                }
            }
        }
        let coset_index = |x: usize| reps.binary_search(&coset_min[x]).expect("coset rep");
        let qmul: Vec<Vec<usize>> = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_index(h.mul(a, b))).collect())
            .collect();
        let q = FiniteGroup::from_valid_table(&format!("{}/N", h.name()), qmul);
        let incl = Homomorphism::new(&g, h, elems.clone())?;
        let proj = Homomorphism::new(h, &q, (0..h.order()).map(coset_index).collect())?;
        Self::new(g, h.clone(), q, incl, proj, reps)
    }

    /// The same extension with a different section; `tau` is recomputed.
    pub fn with_section(&self, section: Vec<usize>) -> Result<Self> {
        Self::new(
            self.g.clone(),
            self.h.clone(),
            self.q.clone(),
            self.incl.clone(),
            self.proj.clone(),
            section,
        )
    }

    /// The section picking the largest index in each coset (with `s(1)=1`).
    pub fn alternate_section(&self) -> Vec<usize> {
        let mut s = vec![0; self.q.order()];
        for x in 0..self.h.order() {
            let a = self.proj.apply(x);
            if a != 0 {
                s[a] = s[a].max(x);
            }
        }
        s
    }

    #[inline]
    pub fn tau(&self, a: usize, b: usize) -> usize {
        self.tau[a][b]
    }

    /// `Ad_{s(q)}(x)` as an element of `G`.
    #[inline]
    pub fn ad(&self, q: usize, x: usize) -> usize {
        self.ad[q][x]
    }

    pub fn ad_table(&self) -> &[Vec<usize>] {
        &self.ad
    }

    #[inline]
    pub fn s(&self, q: usize) -> usize {
        self.section[q]
    }

    /// Preimage of `h` under `i`, if `h` lies in the kernel of `j`.
    #[inline]
    pub fn to_g(&self, h: usize) -> Option<usize> {
        self.g_of_h[h]
    }

    /// `h -> (h s(j(h))^-1, j(h))`
    pub fn alpha(&self, h: usize) -> (usize, usize) {
        let a = self.proj.apply(h);
        let x = self.h.mul(h, self.h.inv(self.section[a]));
        (self.g_of_h[x].expect("in kernel"), a)
    }

    /// `(g, q) -> i(g) s(q)`
    pub fn alpha_inv(&self, g: usize, q: usize) -> usize {
        self.h.mul(self.incl.apply(g), self.section[q])
    }

    /// Whether some section is a homomorphism. Exhaustive with propagation;
    /// returns `None` when `|Q|` exceeds `max_q`.
    pub fn is_split(&self, max_q: usize) -> Option<bool> {
        let m = self.q.order();
        if m > max_q {
            return None;
        }
        let fibers: Vec<Vec<usize>> = (0..m)
            .map(|a| (0..self.h.order()).filter(|&x| self.proj.apply(x) == a).collect())
            .collect();
        let mut s = vec![None; m];
        s[0] = Some(0);
        Some(self.split_search(&fibers, s))
    }

    fn split_search(&self, fibers: &[Vec<usize>], s: Vec<Option<usize>>) -> bool {
        let Some(s) = self.propagate(s) else {
            return false;
        };
        match s.iter().position(Option::is_none) {
            None => true,
            Some(a) => fibers[a].iter().any(|&x| {
                let mut t = s.clone();
                t[a] = Some(x);
                self.split_search(fibers, t)
            }),
        }
    }

    /// Closes a partial section under products; `None` on a conflict.
    fn propagate(&self, mut s: Vec<Option<usize>>) -> Option<Vec<Option<usize>>> {
        let m = self.q.order();
        loop {
            let mut changed = false;
            for a in 0..m {
                let Some(sa) = s[a] else { continue };
                for b in 0..m {
                    let Some(sb) = s[b] else { continue };
                    let ab = self.q.mul(a, b);
                    let p = self.h.mul(sa, sb);
                    match s[ab] {
                        Some(x) if x != p => return None,
                        Some(_) => {}
                        None => {
                            s[ab] = Some(p);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return Some(s);
            }
        }
    }

    /// Whether every `Ad_{s(q)}` is inner on `G` (trivial outer action).
    pub fn acts_by_inner(&self) -> bool {
        (0..self.q.order())
            .all(|a| (0..self.g.order()).any(|y| (0..self.g.order()).all(|x| self.ad[a][x] == self.g.conj(y, x))))
    }

    /// Whether every `s(q)` centralizes `G`.
    pub fn section_centralizes(&self) -> bool {
        (0..self.q.order()).all(|a| (0..self.g.order()).all(|x| self.ad[a][x] == x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conjugacy_classes, fingerprint, named_group};

    fn inversion(n: usize) -> Vec<Vec<usize>> {
        vec![(0..n).collect(), (0..n).map(|x| (n - x) % n).collect()]
    }

    fn sorted_sizes(g: &FiniteGroup) -> Vec<usize> {
        let mut v = conjugacy_classes(g).class_sizes();
        v.sort_unstable();
        v
    }

    #[test]
    fn trivial_action_is_direct_product() {
        let z2 = FiniteGroup::cyclic(2);
        let ext = GroupExtension::semidirect_product(&z2, &z2, &[vec![0, 1], vec![0, 1]]).unwrap();
        assert!(ext.h.is_abelian());
        assert_eq!(ext.h.order_profile(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn z3_by_inversion_is_s3() {
        let ext = GroupExtension::semidirect_product(&FiniteGroup::cyclic(3), &FiniteGroup::cyclic(2), &inversion(3))
            .unwrap();
        assert_eq!(sorted_sizes(&ext.h), vec![1, 2, 3]);
        assert_eq!(ext.is_split(24), Some(true));
    }

    #[test]
    fn z4_by_inversion_is_d4() {
        let ext = GroupExtension::semidirect_product(&FiniteGroup::cyclic(4), &FiniteGroup::cyclic(2), &inversion(4))
            .unwrap();
        assert_eq!(conjugacy_classes(&ext.h).num_classes(), 5);
        assert_eq!(fingerprint(&ext.h), fingerprint(&named_group("D4").unwrap()));
    }

    #[test]
    fn non_action_rejected() {
        let z3 = FiniteGroup::cyclic(3);
        let bad = vec![vec![0, 1, 2], vec![0, 1, 1]];
        assert!(matches!(
            GroupExtension::semidirect_product(&z3, &FiniteGroup::cyclic(2), &bad),
            Err(Error::NotAnAction(_))
        ));
        // order-2 element of Q acting by an order-3 automorphism of Z7 fails
        let z7 = FiniteGroup::cyclic(7);
        let times2 = (0..7).map(|x| (2 * x) % 7).collect();
        assert!(matches!(
            GroupExtension::semidirect_product(&z7, &FiniteGroup::cyclic(2), &[(0..7).collect(), times2]),
            Err(Error::NotAnAction(_))
        ));
    }

    #[test]
    fn klein_cocycle_gives_q8() {
        let z2 = FiniteGroup::cyclic(2);
        let k4 = z2.direct_product(&z2);
        // Q = {1, i, j, k} with a + 2b encoding; i^2 = j^2 = k^2 = -1, ij = k, ji = -k
        let mut tau = vec![vec![0usize; 4]; 4];
        // multiply unit quaternions: sign of e_a e_b where 1 -> 0, i -> 1, j -> 2, k -> 3
        let sign = [[0, 0, 0, 0], [0, 1, 0, 1], [0, 1, 1, 0], [0, 0, 1, 1]];
        for a in 0..4 {
            for b in 0..4 {
                tau[a][b] = sign[a][b];
            }
        }
        let id = vec![vec![0, 1]; 4];
        let ext = GroupExtension::from_cocycle(&z2, &k4, &id, &tau).unwrap();
        assert_eq!(ext.h.order(), 8);
        let involutions = (1..8).filter(|&x| ext.h.element_order(x) == 2).count();
        assert_eq!(involutions, 1);
        assert_eq!(ext.is_split(24), Some(false));
        assert_eq!(ext.tau, tau);
    }

    #[test]
    fn bad_cocycles_rejected() {
        let z2 = FiniteGroup::cyclic(2);
        let id = vec![vec![0, 1]; 2];
        assert!(matches!(
            GroupExtension::from_cocycle(&z2, &z2, &id, &[vec![1, 0], vec![0, 0]]),
            Err(Error::BadNormalization(_))
        ));
        let z3 = FiniteGroup::cyclic(3);
        let id3 = vec![vec![0, 1, 2]; 3];
        // tau(1,1) = 1 only: not a cocycle
        let tau = vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 0]];
        assert!(matches!(
            GroupExtension::from_cocycle(&z3, &z3, &id3, &tau),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn cocycle_roundtrip_from_quotient() {
        let s4 = named_group("S4").unwrap();
        let (_, perms) = crate::groups::catalog::s4_with_perms();
        let v4: Vec<usize> = (0..24)
            .filter(|&x| {
                let p = &perms[x];
                (0..4).all(|i| p[p[i]] == i) && ((0..4).all(|i| p[i] != i) || x == 0)
            })
            .collect();
        assert_eq!(v4.len(), 4);
        let ext = GroupExtension::from_quotient(&s4, &v4).unwrap();
        let back = GroupExtension::from_cocycle(&ext.g, &ext.q, ext.ad_table(), &ext.tau).unwrap();
        assert_eq!(fingerprint(&back.h), fingerprint(&s4));
        // alpha is an isomorphism H -> G x_{s,tau} Q
        for x in 0..24 {
            for y in 0..24 {
                let (g1, q1) = ext.alpha(x);
                let (g2, q2) = ext.alpha(y);
                let (g3, q3) = ext.alpha(s4.mul(x, y));
                assert_eq!(back.h.mul(q1 * 4 + g1, q2 * 4 + g2), q3 * 4 + g3);
            }
            let (g, q) = ext.alpha(x);
            assert_eq!(ext.alpha_inv(g, q), x);
        }
    }

    #[test]
    fn s3_over_a3() {
        let s3 = named_group("S3").unwrap();
        let a3: Vec<usize> = (0..6).filter(|&x| s3.element_order(x) != 2).collect();
        let ext = GroupExtension::from_quotient(&s3, &a3).unwrap();
        assert_eq!(ext.q.order(), 2);
        assert!(ext.tau_cocycle_violation().is_none());
    }

    #[test]
    fn q8_over_center_is_nonsplit() {
        let q8 = named_group("Q8").unwrap();
        let ext = GroupExtension::from_quotient(&q8, &[0, 4]).unwrap();
        assert_eq!(ext.q.order_profile(), vec![1, 2, 2, 2]);
        assert!(ext.tau.iter().flatten().any(|&t| t != 0));
        assert_eq!(ext.is_split(24), Some(false));
    }

    #[test]
    fn trivial_normal_subgroup() {
        let s3 = named_group("S3").unwrap();
        let ext = GroupExtension::from_quotient(&s3, &[0]).unwrap();
        assert_eq!(ext.g.order(), 1);
        assert_eq!(ext.q.order(), 6);
        assert!(ext.tau.iter().flatten().all(|&t| t == 0));
    }

    #[test]
    fn non_normal_rejected() {
        let s3 = named_group("S3").unwrap();
        let t = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        assert!(matches!(
            GroupExtension::from_quotient(&s3, &[0, t]),
            Err(Error::NotNormal { .. })
        ));
        assert!(matches!(
            GroupExtension::from_quotient(&s3, &[0, 1, 2]),
            Err(Error::NotASubgroup(_)) | Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn alternate_section_keeps_invariants() {
        let q8 = named_group("Q8").unwrap();
        let ext = GroupExtension::from_quotient(&q8, &[0, 4]).unwrap();
        let alt = ext.with_section(ext.alternate_section()).unwrap();
        assert!(alt.tau_cocycle_violation().is_none());
        assert_ne!(alt.section, ext.section);
    }
}

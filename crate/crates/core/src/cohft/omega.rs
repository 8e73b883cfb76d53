//! The counting invariant `Omega_g^H(<h_1>, ..., <h_n>)`: exact enumeration
//! and the character-sum formula.

use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::{conjugacy_classes, ConjugacyClassification, FiniteGroup};
use crate::reps::IrrepSet;

/// Default bound on the enumeration work of [`OmegaCounter`].
pub const DEFAULT_BRUTE_CAP: u128 = 100_000_000;

/// An exact rational, serialized as `{"num": .., "den": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exact(pub Ratio<i128>);

impl Exact {
    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("den", &(*self.0.denom() as i64))?;
        m.serialize_entry("num", &(*self.0.numer() as i64))?;
        m.end()
    }
}

/// Exact evaluation of `Omega_g^H` by enumeration.
///
/// The distribution of `prod_j [a_j, b_j]` over `H` is enumerated once per
/// genus (`|H|^{2g}` tuples) and cached; the insertions are folded in by
/// enumerating each class against the running distribution of `prod sigma_k`.
pub struct OmegaCounter {
    group: FiniteGroup,
    classes: ConjugacyClassification,
    cap: u128,
    commutators: HashMap<usize, Vec<u64>>,
}

impl OmegaCounter {
    pub fn new(group: &FiniteGroup, cap: u128) -> Self {
        Self {
            classes: conjugacy_classes(group),
            group: group.clone(),
            cap,
            commutators: HashMap::new(),
        }
    }

    pub fn classes(&self) -> &ConjugacyClassification {
        &self.classes
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Enumeration work for a request: the commutator pass (unless cached)
    /// plus one sweep of `H` per element of each inserted class.
    pub fn work(&self, genus: usize, classes: &[usize]) -> u128 {
        let n = self.group.order() as u128;
        let pass = if genus == 0 || self.commutators.contains_key(&genus) {
            0
        } else {
            n.saturating_pow(2 * genus as u32)
        };
        let sweep: u128 = classes.iter().map(|&k| self.classes.classes[k].len() as u128 * n).sum();
        pass + sweep
    }

    /// `#{(a_1, b_1, ..., a_g, b_g) : prod [a_j, b_j] = x}` for every `x`.
    pub fn commutator_distribution(&mut self, genus: usize) -> &[u64] {
        let n = self.group.order();
        if !self.commutators.contains_key(&genus) {
            let mut dist = vec![0u64; n];
            let mut stack = vec![(0usize, 0usize)];
            // depth-first over genus-many pairs, carrying the partial product
            while let Some((depth, acc)) = stack.pop() {
                if depth == genus {
                    dist[acc] += 1;
                    continue;
                }
                for a in 0..n {
                    for b in 0..n {
                        stack.push((depth + 1, self.group.mul(acc, self.group.commutator(a, b))));
                    }
                }
            }
            self.commutators.insert(genus, dist);
        }
        &self.commutators[&genus]
    }

    /// Number of solutions of `prod [a_j, b_j] = prod sigma_k` with
    /// `sigma_k` in class `classes[k]`.
    pub fn count(&mut self, genus: usize, classes: &[usize]) -> Result<u128> {
        let work = self.work(genus, classes);
        if work > self.cap {
            return Err(Error::CapExceeded { work, cap: self.cap });
        }
        if let Some(&k) = classes.iter().find(|&&k| k >= self.classes.num_classes()) {
            return Err(Error::InvalidInput(format!("no conjugacy class with index {k}")));
        }
        let n = self.group.order();
        let mut sigma = vec![0u128; n];
        sigma[0] = 1;
        for &k in classes {
            let mut next = vec![0u128; n];
            for (x, &m) in sigma.iter().enumerate() {
                if m == 0 {
                    continue;
                }
                for &s in &self.classes.classes[k] {
                    next[self.group.mul(x, s)] += m;
                }
            }
            sigma = next;
        }
        let dist = self.commutator_distribution(genus);
        Ok(sigma.iter().zip(dist).map(|(&a, &b)| a * b as u128).sum())
    }

    /// `Omega_g^H = count / |H|`, exactly.
    pub fn omega(&mut self, genus: usize, classes: &[usize]) -> Result<Exact> {
        let count = self.count(genus, classes)?;
        Ok(Exact(Ratio::new(count as i128, self.group.order() as i128)))
    }
}

/// `sum_pi (|H|/d_pi)^{2g-2} prod_k |<h_k>| chi_pi(h_k) / d_pi`.
pub fn omega_character_formula(
    irreps: &IrrepSet,
    classes: &ConjugacyClassification,
    genus: usize,
    insertions: &[usize],
) -> Complex64 {
    let order = irreps.group_order as f64;
    irreps
        .irreps
        .iter()
        .map(|pi| {
            let d = pi.dim as f64;
            let mut z = Complex64::new((order / d).powi(2 * genus as i32 - 2), 0.0);
            for &k in insertions {
                z *= pi.character[classes.representative(k)] * classes.classes[k].len() as f64 / d;
            }
            z
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::named_group;
    use crate::reps::irreducible_representations;

    fn s3() -> FiniteGroup {
        named_group("S3").unwrap()
    }

    /// Class index of the transpositions and of the 3-cycles.
    fn s3_classes(cc: &ConjugacyClassification) -> (usize, usize) {
        let t = (0..cc.num_classes()).find(|&k| cc.classes[k].len() == 3).unwrap();
        let c = (0..cc.num_classes()).find(|&k| cc.classes[k].len() == 2).unwrap();
        (t, c)
    }

    #[test]
    fn s3_oracle_values() {
        let g = s3();
        let mut oc = OmegaCounter::new(&g, DEFAULT_BRUTE_CAP);
        assert_eq!(oc.omega(1, &[]).unwrap().0, Ratio::from_integer(3));
        assert_eq!(oc.omega(0, &[0, 0, 0]).unwrap().0, Ratio::new(1, 6));
        let (t, c) = s3_classes(oc.classes());
        assert_eq!(oc.omega(0, &[t, t, c]).unwrap().0, Ratio::from_integer(1));
        assert_eq!(oc.count(0, &[t, t, c]).unwrap(), 6);
    }

    #[test]
    fn character_formula_matches_enumeration_on_s3() {
        let g = s3();
        let irreps = irreducible_representations(&g, 0).unwrap();
        let mut oc = OmegaCounter::new(&g, DEFAULT_BRUTE_CAP);
        let cc = oc.classes().clone();
        let (t, c) = s3_classes(&cc);
        for genus in 0..3 {
            for ins in [vec![], vec![0], vec![t, t], vec![t, t, c], vec![c, c, c, t]] {
                let exact = oc.omega(genus, &ins).unwrap().to_f64();
                let chi = omega_character_formula(&irreps, &cc, genus, &ins);
                assert!(
                    (chi.re - exact).abs() < 1e-9 && chi.im.abs() < 1e-9,
                    "g={genus} {ins:?}"
                );
            }
        }
    }

    #[test]
    fn cap_is_enforced_and_cache_lowers_work() {
        let g = named_group("S4").unwrap();
        let mut small = OmegaCounter::new(&g, 100);
        assert!(matches!(small.omega(1, &[]), Err(Error::CapExceeded { .. })));
        let mut oc2 = OmegaCounter::new(&g, 1000);
        assert_eq!(oc2.work(1, &[]), 576);
        oc2.commutator_distribution(1);
        assert_eq!(oc2.work(1, &[]), 0);
        // genus 1 with no insertions counts commuting pairs: |H| * #classes
        assert_eq!(oc2.count(1, &[]).unwrap(), 24 * 5);
    }

    #[test]
    fn exact_serializes_as_num_den() {
        let v = serde_json::to_string(&Exact(Ratio::new(2, 6))).unwrap();
        assert_eq!(v, r#"{"den":3,"num":1}"#);
    }
}

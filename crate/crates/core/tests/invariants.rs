//! Randomized invariants: group axioms, cocycle identities under random
//! gauges, multilinearity of correlators, and Omega against naive counting.

use gerbe_dual::cohft::{omega_character_formula, FrobeniusData, OmegaCounter, DEFAULT_BRUTE_CAP};
use gerbe_dual::groups::{catalog, conjugacy_classes, named_group, FiniteGroup, GroupExtension};
use gerbe_dual::mackey::{DualData, DualOptions};
use gerbe_dual::reps::irreducible_representations;
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

fn cyclic_subgroup(g: &FiniteGroup, x: usize) -> Vec<usize> {
    let mut out = vec![0];
    let mut y = x;
    while y != 0 {
        out.push(y);
        y = g.mul(y, x);
    }
    out.sort_unstable();
    out
}

/// Tuples `(a1, b1, .., ag, bg, s1, .., sn)` with `prod [a,b] = prod s`,
/// enumerated without any caching.
fn naive_count(g: &FiniteGroup, genus: usize, classes: &[Vec<usize>]) -> u128 {
    fn rec(g: &FiniteGroup, genus: usize, classes: &[Vec<usize>], left: usize, right: usize) -> u128 {
        if genus > 0 {
            let mut total = 0;
            for a in 0..g.order() {
                for b in 0..g.order() {
                    total += rec(g, genus - 1, classes, g.mul(left, g.commutator(a, b)), right);
                }
            }
            return total;
        }
        match classes.split_first() {
            None => u128::from(left == right),
            Some((cls, rest)) => cls.iter().map(|&s| rec(g, 0, rest, left, g.mul(right, s))).sum(),
        }
    }
    rec(g, genus, classes, 0, 0)
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b)),
        len,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_of_cyclic_groups_are_groups(m in 1usize..6, n in 1usize..6, a in 0usize..36, b in 0usize..36, c in 0usize..36) {
        let g = FiniteGroup::cyclic(m).direct_product(&FiniteGroup::cyclic(n));
        let k = g.order();
        let (a, b, c) = (a % k, b % k, c % k);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        prop_assert_eq!(g.mul(a, b), g.mul(b, a));
        let cc = conjugacy_classes(&g);
        prop_assert_eq!(cc.num_classes(), k);
        prop_assert_eq!(k % g.element_order(a), 0);
    }

    #[test]
    fn quotients_by_cyclic_subgroups_satisfy_cocycle_identities(m in 2usize..5, n in 1usize..4, x in 0usize..12, seed in 0u64..1000) {
        let h = FiniteGroup::cyclic(m).direct_product(&FiniteGroup::cyclic(n));
        let normal = cyclic_subgroup(&h, x % h.order());
        let ext = GroupExtension::from_quotient(&h, &normal).unwrap();
        prop_assert_eq!(ext.g.order() * ext.q.order(), h.order());
        prop_assert!(ext.tau_cocycle_violation().is_none());
        let d = DualData::compute(&ext, DualOptions { seed, ..Default::default() }).unwrap();
        prop_assert!(d.cocycle_residual() < 1e-9);
        prop_assert_eq!(d.action_residual(), 0);
        let sizes: usize = d.orbits.iter().map(|o| o.members.len()).sum();
        prop_assert_eq!(sizes, d.num_irreps());
    }

    #[test]
    fn catalog_cocycles_hold_in_every_gauge(k in 0usize..10, seed in 0u64..10_000, alternate in any::<bool>()) {
        let entries = catalog();
        let e = &entries[k % entries.len()];
        let ext = if alternate {
            e.extension.with_section(e.extension.alternate_section()).unwrap()
        } else {
            e.extension.clone()
        };
        prop_assert!(ext.tau_cocycle_violation().is_none());
        let d = DualData::compute(&ext, DualOptions { seed, ..Default::default() }).unwrap();
        prop_assert!(d.cocycle_residual() < 1e-9, "{}: {:e}", e.name, d.cocycle_residual());
        prop_assert!(d.intertwiner_residual() < 1e-9);
        for rho in 0..d.num_irreps() {
            for q in 0..d.q().order() {
                prop_assert!((d.c(rho, 0, q) - 1.0).norm() < 1e-9);
                prop_assert!((d.c(rho, q, q).norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn correlators_are_multilinear(x in complex_vec(3), y in complex_vec(3), z in complex_vec(3), a in -2.0f64..2.0, genus in 0usize..3) {
        let s3 = named_group("S3").unwrap();
        let fd = FrobeniusData::group_center(&s3).unwrap();
        let to_h = |v: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![Complex64::new(0.0, 0.0); s3.order()];
            for (k, b) in fd.basis.iter().enumerate() {
                for (o, bi) in out.iter_mut().zip(b) {
                    *o += v[k] * bi;
                }
            }
            out
        };
        let (xh, yh, zh) = (to_h(&x), to_h(&y), to_h(&z));
        let combo: Vec<Complex64> = xh.iter().zip(&yh).map(|(p, q)| p * a + q).collect();
        let lhs = fd.correlator(genus, &[combo, zh.clone()]);
        let rhs = fd.correlator(genus, &[xh.clone(), zh.clone()]) * a + fd.correlator(genus, &[yh.clone(), zh.clone()]);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
        let swapped = fd.correlator(genus, &[zh, xh.clone()]);
        prop_assert!((swapped - fd.correlator(genus, &[xh, to_h(&z)])).norm() <= 1e-9 * (1.0 + swapped.norm()));
    }

    #[test]
    fn omega_matches_naive_counting(name in prop::sample::select(vec!["S3", "Q8", "D4", "Z4", "V4"]), genus in 0usize..2, picks in prop::collection::vec(0usize..5, 0..4)) {
        let g = named_group(name).unwrap();
        let cc = conjugacy_classes(&g);
        let ins: Vec<usize> = picks.iter().map(|p| p % cc.num_classes()).collect();
        let members: Vec<Vec<usize>> = ins.iter().map(|&k| cc.classes[k].clone()).collect();
        let expected = naive_count(&g, genus, &members);
        let mut counter = OmegaCounter::new(&g, DEFAULT_BRUTE_CAP);
        prop_assert_eq!(counter.count(genus, &ins).unwrap(), expected);
        let omega = counter.omega(genus, &ins).unwrap().0;
        prop_assert_eq!(omega, Ratio::new(expected as i128, g.order() as i128));
        let irreps = irreducible_representations(&g, 7).unwrap();
        let z = omega_character_formula(&irreps, &cc, genus, &ins);
        prop_assert!((z.re - expected as f64 / g.order() as f64).abs() < 1e-8 && z.im.abs() < 1e-8);
    }
}

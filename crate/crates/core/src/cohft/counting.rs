//! How many conjugacy classes of `H` lie over a class of `Q`, and the
//! orthogonality relation for characters of `G` twisted by `Q`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::groups::{conjugacy_classes, ConjugacyClassification, SPLIT_SEARCH_MAX_Q};
use crate::linalg::{self, ONE};
use crate::mackey::DualData;
use crate::report::Check;

#[derive(Debug, Clone, Serialize)]
pub struct Specialization {
    pub name: String,
    pub value: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountRow {
    pub q_class: usize,
    pub q_representative: usize,
    pub direct: usize,
    pub formula: usize,
    pub specializations: Vec<Specialization>,
    pub agree: bool,
}

/// Classes of `H` contained in the preimage of Q-class `k`.
pub fn count_conjugacy_direct(dual: &DualData, q_classes: &ConjugacyClassification, k: usize) -> usize {
    let ext = &dual.ext;
    conjugacy_classes(&ext.h)
        .classes
        .iter()
        .filter(|cls| q_classes.class_of[ext.proj.apply(cls[0])] == k)
        .count()
}

fn centralizer(dual: &DualData, q: usize) -> Vec<usize> {
    let g = dual.q();
    (0..g.order()).filter(|&x| g.mul(x, q) == g.mul(q, x)).collect()
}

/// `C(q)`-orbits on the irreps fixed by `q`.
fn fixed_orbits(dual: &DualData, q: usize, cq: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; dual.num_irreps()];
    let mut orbits = Vec::new();
    for rho in 0..dual.num_irreps() {
        if seen[rho] || dual.act(q, rho) != rho {
            continue;
        }
        let mut orbit: Vec<usize> = cq.iter().map(|&x| dual.act(x, rho)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &r in &orbit {
            seen[r] = true;
        }
        orbits.push(orbit);
    }
    orbits
}

fn stabilizer_in(dual: &DualData, cq: &[usize], rho: usize) -> Vec<usize> {
    cq.iter().copied().filter(|&x| dual.act(x, rho) == rho).collect()
}

/// `tau(q1, q) tau(q, q1)^-1` in `G`.
fn tau_commutator(dual: &DualData, q1: usize, q: usize) -> usize {
    let g = &dual.ext.g;
    g.mul(dual.ext.tau(q1, q), g.inv(dual.ext.tau(q, q1)))
}

/// General count: orbits with a member where `c(q1,q)/c(q,q1) = 1` on
/// its stabilizer in `C(q)`.
fn general_count(dual: &DualData, q: usize, tol: f64) -> usize {
    let cq = centralizer(dual, q);
    fixed_orbits(dual, q, &cq)
        .iter()
        .filter(|orbit| {
            orbit.iter().any(|&rho| {
                stabilizer_in(dual, &cq, rho)
                    .iter()
                    .all(|&q1| (dual.c(rho, q1, q) / dual.c(rho, q, q1) - ONE).norm() < tol)
            })
        })
        .count()
}

/// The general count and every specialization whose hypotheses hold.
pub fn count_conjugacy_formula(
    dual: &DualData,
    q_classes: &ConjugacyClassification,
    k: usize,
    tol: f64,
) -> Result<(usize, Vec<Specialization>)> {
    let q = q_classes.representative(k);
    let general = general_count(dual, q, tol);
    let cq = centralizer(dual, q);
    let abelian = dual.ext.g.is_abelian();
    let mut specs = Vec::new();
    if abelian {
        // one-dimensional irreps: gamma is the value of rho on the commutator of lifts
        let value = fixed_orbits(dual, q, &cq)
            .iter()
            .filter(|orbit| {
                orbit.iter().any(|&rho| {
                    let chi = &dual.irreps.irreps[rho].character;
                    stabilizer_in(dual, &cq, rho)
                        .iter()
                        .all(|&q1| (chi[tau_commutator(dual, q1, q)] - ONE).norm() < tol)
                })
            })
            .count();
        specs.push(Specialization {
            name: "abelian".into(),
            value,
        });
        if dual.ext.is_split(SPLIT_SEARCH_MAX_Q) == Some(true) {
            specs.push(Specialization {
                name: "abelian_split".into(),
                value: fixed_orbits(dual, q, &cq).len(),
            });
        }
    }
    if dual.is_trivial_band() && dual.ext.section_centralizes() {
        let value = (0..dual.num_irreps())
            .filter(|&rho| {
                cq.iter().all(|&q1| {
                    let m = dual.rho(rho, tau_commutator(dual, q1, q));
                    linalg::max_abs_diff(m, &linalg::identity(dual.dim(rho))) < tol
                })
            })
            .count();
        specs.push(Specialization {
            name: "trivial_band".into(),
            value,
        });
    }
    if let Some(s) = specs.iter().find(|s| s.value != general) {
        return Err(Error::SpecializationMismatch {
            name: s.name.clone(),
            special: s.value,
            general,
        });
    }
    Ok((general, specs))
}

/// One row per conjugacy class of `Q`.
pub fn counting_table(dual: &DualData, tol: f64) -> Result<Vec<CountRow>> {
    let qc = conjugacy_classes(dual.q());
    (0..qc.num_classes())
        .map(|k| {
            let direct = count_conjugacy_direct(dual, &qc, k);
            let (formula, specializations) = count_conjugacy_formula(dual, &qc, k, tol)?;
            Ok(CountRow {
                q_class: k,
                q_representative: qc.representative(k),
                direct,
                formula,
                specializations,
                agree: direct == formula,
            })
        })
        .collect()
}

pub fn counting_checks(dual: &DualData, tol: f64) -> Vec<Check> {
    let classes_of_h = conjugacy_classes(&dual.ext.h).num_classes();
    match counting_table(dual, tol) {
        Ok(rows) => {
            let total: usize = rows.iter().map(|r| r.formula).sum();
            let mut checks: Vec<Check> = rows
                .iter()
                .map(|r| {
                    Check::boolean(format!("count over <{}>", r.q_representative), r.agree)
                        .with_details(serde_json::to_value(r).expect("serializable"))
                })
                .collect();
            checks.push(
                Check::boolean("counts sum to the number of classes of H", total == classes_of_h)
                    .with_details(json!({ "sum": total, "classes_of_H": classes_of_h })),
            );
            checks
        }
        Err(e) => {
            vec![Check::boolean("counting specializations", false).with_details(json!({ "error": e.to_string() }))]
        }
    }
}

/// `sum_rho sum_q chi_rho(g1^-1) chi_{q(rho)}(g2)`.
pub fn orthogonality_sum(dual: &DualData, g1: usize, g2: usize) -> Complex64 {
    let g = &dual.ext.g;
    let mut s = Complex64::new(0.0, 0.0);
    for rho in 0..dual.num_irreps() {
        let a = dual.irreps.irreps[rho].character[g.inv(g1)];
        for q in 0..dual.q().order() {
            s += a * dual.irreps.irreps[dual.act(q, rho)].character[g2];
        }
    }
    s
}

/// `|C_H(g1)|` if `g1` and `g2` are conjugate in `H`, else `0`.
pub fn orthogonality_expected(dual: &DualData, hc: &ConjugacyClassification, g1: usize, g2: usize) -> f64 {
    let (h1, h2) = (dual.ext.incl.apply(g1), dual.ext.incl.apply(g2));
    if hc.class_of[h1] == hc.class_of[h2] {
        hc.centralizer_orders[hc.class_of[h1]] as f64
    } else {
        0.0
    }
}

/// The generalized orthogonality relation over all pairs in `G x G`.
pub fn orthogonality_check(dual: &DualData, tol: f64) -> Check {
    let (g, h) = (&dual.ext.g, &dual.ext.h);
    let hc = conjugacy_classes(h);
    let mut worst: f64 = 0.0;
    for g1 in 0..g.order() {
        for g2 in 0..g.order() {
            let s = orthogonality_sum(dual, g1, g2);
            worst = worst.max((s - orthogonality_expected(dual, &hc, g1, g2)).norm());
        }
    }
    Check::residual("generalized orthogonality", worst, tol).with_details(json!({
        "pairs": g.order() * g.order(),
        "value_at_identity": orthogonality_sum(dual, 0, 0).re,
        "order_of_H": h.order(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, catalog_entry};
    use crate::mackey::DualOptions;

    fn rows(name: &str) -> Vec<CountRow> {
        let e = catalog_entry(name).unwrap().extension;
        let d = DualData::compute(&e, DualOptions::default()).unwrap();
        counting_table(&d, 1e-8).unwrap()
    }

    #[test]
    fn q8_and_s3_rows() {
        let q8: Vec<usize> = rows("q8_over_k4").iter().map(|r| r.direct).collect();
        assert_eq!(q8, vec![2, 1, 1, 1]);
        let r = rows("q8_over_k4");
        assert!(r.iter().all(|r| r.agree));
        assert!(r[0].specializations.iter().any(|s| s.name == "trivial_band"));
        let s3 = rows("s3_split");
        assert_eq!(s3.iter().map(|r| r.formula).collect::<Vec<_>>(), vec![2, 1]);
        assert!(s3[0].specializations.iter().any(|s| s.name == "abelian_split"));
    }

    #[test]
    fn trivial_quotient_gives_all_classes() {
        let r = rows("z3_over_trivial");
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].direct, 3);
        assert_eq!(r[0].formula, 3);
    }

    #[test]
    fn catalog_counts_and_orthogonality() {
        for entry in catalog() {
            let d = DualData::compute(&entry.extension, DualOptions::default()).unwrap();
            for c in counting_checks(&d, 1e-8) {
                assert!(c.pass, "{}: {} {}", entry.name, c.name, c.details);
            }
            let o = orthogonality_check(&d, 1e-8);
            assert!(o.pass, "{}: {:e}", entry.name, o.max_residual);
        }
    }
}

//! Oracle agreement for `Omega_g^H`, the decomposition of correlators of
//! `BH` over orbits, and the cutting recursions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;

use super::frobenius::FrobeniusData;
use super::omega::{omega_character_formula, Exact, OmegaCounter};
use crate::algebra::Vector;
use crate::error::{Error, Result};
use crate::groups::{ConjugacyClassification, FiniteGroup};
use crate::linalg::ZERO;
use crate::morita::CenterIso;
use crate::report::Check;
use crate::reps::IrrepSet;

/// How correlators of `Z(C[H])` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteForce,
    Frobenius,
    Character,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" | "brute-force" => Ok(Method::BruteForce),
            "frobenius" => Ok(Method::Frobenius),
            "character" | "character-formula" => Ok(Method::Character),
            other => Err(Error::InvalidInput(format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::BruteForce => "brute-force",
            Method::Frobenius => "frobenius",
            Method::Character => "character",
        })
    }
}

/// Non-decreasing sequences of length `n` over `0..k`.
pub fn multisets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in start..k {
            cur.push(a);
            rec(k, n, a, cur, out);
            cur.pop();
        }
    }
    rec(k, n, 0, &mut cur, &mut out);
    out
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// `Omega_g^H` on class-index insertions by a chosen method, cached.
pub struct OmegaEvaluator<'a> {
    counter: OmegaCounter,
    irreps: Option<&'a IrrepSet>,
    cache: HashMap<(Method, usize, Vec<usize>), Complex64>,
}

impl<'a> OmegaEvaluator<'a> {
    pub fn new(group: &FiniteGroup, cap: u128, irreps: Option<&'a IrrepSet>) -> Self {
        Self {
            counter: OmegaCounter::new(group, cap),
            irreps,
            cache: HashMap::new(),
        }
    }

    pub fn classes(&self) -> &ConjugacyClassification {
        self.counter.classes()
    }

    pub fn counter(&mut self) -> &mut OmegaCounter {
        &mut self.counter
    }

    pub fn omega(&mut self, method: Method, genus: usize, classes: &[usize]) -> Result<Complex64> {
        let mut key = classes.to_vec();
        key.sort_unstable();
        if let Some(&z) = self.cache.get(&(method, genus, key.clone())) {
            return Ok(z);
        }
        let z = match method {
            Method::BruteForce => Complex64::new(self.counter.omega(genus, &key)?.to_f64(), 0.0),
            Method::Character => {
                let irreps = self
                    .irreps
                    .ok_or_else(|| Error::InvalidInput("character formula needs irreps of H".into()))?;
                omega_character_formula(irreps, self.counter.classes(), genus, &key)
            }
            Method::Frobenius => return Err(Error::InvalidInput("use FrobeniusData for the frobenius method".into())),
        };
        self.cache.insert((method, genus, key), z);
        Ok(z)
    }

    /// Multilinear extension to central insertions, expanded on class sums.
    pub fn correlator(&mut self, method: Method, genus: usize, insertions: &[Vector]) -> Result<Complex64> {
        let cc = self.classes().clone();
        let coeffs: Vec<Vec<(usize, Complex64)>> = insertions
            .iter()
            .map(|x| {
                (0..cc.num_classes())
                    .map(|k| (k, x[cc.representative(k)]))
                    .filter(|(_, z)| z.norm() > 0.0)
                    .collect()
            })
            .collect();
        let mut total = ZERO;
        let mut idx = vec![0usize; insertions.len()];
        if coeffs.iter().any(|c| c.is_empty()) {
            return Ok(ZERO);
        }
        loop {
            let classes: Vec<usize> = idx.iter().zip(&coeffs).map(|(&i, c)| c[i].0).collect();
            let w: Complex64 = idx.iter().zip(&coeffs).map(|(&i, c)| c[i].1).product();
            total += w * self.omega(method, genus, &classes)?;
            // odometer over the supports
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return Ok(total);
                }
                idx[pos] += 1;
                if idx[pos] < coeffs[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub genus: usize,
    pub classes: Vec<usize>,
    pub brute_force: Option<Exact>,
    pub character: [f64; 2],
    pub frobenius: [f64; 2],
    pub pass: bool,
}

/// Enumeration, character formula and Frobenius correlator on every
/// class-sum instance with `g <= max_genus`, `n <= max_n`.
pub fn oracle_agreement(
    group: &FiniteGroup,
    irreps: &IrrepSet,
    cap: u128,
    max_genus: usize,
    max_n: usize,
    tol: f64,
) -> Result<(Vec<OracleRow>, Check)> {
    let fd = FrobeniusData::group_center(group)?;
    let mut counter = OmegaCounter::new(group, cap);
    let cc = counter.classes().clone();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for genus in 0..=max_genus {
        for n in 0..=max_n {
            for classes in multisets(cc.num_classes(), n) {
                let brute = match counter.omega(genus, &classes) {
                    Ok(x) => Some(x),
                    Err(Error::CapExceeded { .. }) => None,
                    Err(e) => return Err(e),
                };
                let chi = omega_character_formula(irreps, &cc, genus, &classes);
                // class sums sit at the basis positions of their classes
                let ins: Vec<Vector> = classes
                    .iter()
                    .map(|&k| fd.basis[fd.labels.iter().position(|l| l.class == k).unwrap()].clone())
                    .collect();
                let frob = fd.correlator(genus, &ins);
                let mut r = (chi - frob).norm() / (1.0 + frob.norm());
                match brute {
                    Some(b) => {
                        let b = Complex64::new(b.to_f64(), 0.0);
                        r = r
                            .max((b - chi).norm() / (1.0 + b.norm()))
                            .max((b - frob).norm() / (1.0 + b.norm()));
                    }
                    None => skipped += 1,
                }
                worst = worst.max(r);
                rows.push(OracleRow {
                    genus,
                    classes,
                    brute_force: brute,
                    character: pair(chi),
                    frobenius: pair(frob),
                    pass: r < tol,
                });
            }
        }
    }
    let check = Check::residual(format!("Omega oracles agree on {}", group.name()), worst, tol)
        .with_details(json!({ "instances": rows.len(), "brute_force_skipped": skipped }));
    Ok((rows, check))
}

/// One basis element of a twisted stabilizer center, pulled back to `Z(C[H])`.
#[derive(Debug, Clone)]
pub struct Insertion {
    pub orbit: usize,
    pub index: usize,
    /// Class representative in `Q`.
    pub q_representative: usize,
    pub in_h: Vector,
}

/// Both sides of the decomposition: `(Z(C[H]), tr_H)` and the twisted
/// stabilizer centers with their own traces.
pub struct GwSetup {
    pub group: FrobeniusData,
    pub twisted: Vec<FrobeniusData>,
    pub insertions: Vec<Insertion>,
    /// `dim rho_k / |G|` per orbit.
    pub scale: Vec<f64>,
    pub order_g: usize,
}

impl GwSetup {
    pub fn new(ci: &CenterIso<'_>) -> Result<Self> {
        let group = FrobeniusData::group_center(&ci.dual.ext.h)?;
        let twisted: Vec<FrobeniusData> = ci
            .stabilizers
            .iter()
            .map(FrobeniusData::stabilizer_center)
            .collect::<Result<_>>()?;
        let mut insertions = Vec::new();
        for (k, fd) in twisted.iter().enumerate() {
            for (j, e) in fd.basis.iter().enumerate() {
                let phi: Vec<Vector> = ci
                    .stabilizers
                    .iter()
                    .enumerate()
                    .map(|(i, s)| if i == k { e.clone() } else { vec![ZERO; s.order()] })
                    .collect();
                insertions.push(Insertion {
                    orbit: k,
                    index: j,
                    q_representative: ci.stabilizers[k].elems[fd.labels[j].representative],
                    in_h: ci.j_inverse(&phi),
                });
            }
        }
        let order_g = ci.dual.ext.g.order();
        let scale = ci.stabilizers.iter().map(|s| s.dim as f64 / order_g as f64).collect();
        Ok(Self {
            group,
            twisted,
            insertions,
            scale,
            order_g,
        })
    }

    /// `(dim rho_k / |G|)^{2-2g}`.
    pub fn factor(&self, orbit: usize, genus: usize) -> f64 {
        self.scale[orbit].powi(2 - 2 * genus as i32)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GwRow {
    pub genus: usize,
    /// `(orbit, basis index)` per insertion.
    pub insertions: Vec<[usize; 2]>,
    pub method: Method,
    pub lhs: [f64; 2],
    pub rhs: Option<[f64; 2]>,
    pub factor: Option<f64>,
    pub ratio: Option<f64>,
    pub mixed: bool,
    pub residual: f64,
    pub pass: bool,
}

/// Tolerances for the decomposition comparison.
#[derive(Debug, Clone, Copy)]
pub struct GwTolerance {
    pub vanishing: f64,
    pub relative: f64,
}

impl Default for GwTolerance {
    fn default() -> Self {
        Self {
            vanishing: 1e-10,
            relative: 1e-8,
        }
    }
}

/// Every multiset of `n` pulled-back basis elements at genus `g`: mixed
/// orbits must vanish, matched ones must equal the scaled twisted value.
pub fn gw_decomposition_rows(
    setup: &GwSetup,
    eval: Option<&mut OmegaEvaluator<'_>>,
    method: Method,
    genus: usize,
    n: usize,
    tol: GwTolerance,
) -> Result<Vec<GwRow>> {
    let mut eval = eval;
    let mut rows = Vec::new();
    for choice in multisets(setup.insertions.len(), n) {
        let ins: Vec<&Insertion> = choice.iter().map(|&a| &setup.insertions[a]).collect();
        let vecs: Vec<Vector> = ins.iter().map(|x| x.in_h.clone()).collect();
        let lhs = match method {
            Method::Frobenius => setup.group.correlator(genus, &vecs),
            m => eval
                .as_deref_mut()
                .ok_or_else(|| Error::InvalidInput(format!("method {m} needs an Omega evaluator")))?
                .correlator(m, genus, &vecs)?,
        };
        let orbit = ins.first().map(|x| x.orbit);
        let mixed = ins.iter().any(|x| Some(x.orbit) != orbit);
        let labels: Vec<[usize; 2]> = ins.iter().map(|x| [x.orbit, x.index]).collect();
        let row = match orbit.filter(|_| !mixed) {
            None => {
                // n = 0 has no orbit to compare against; it is reported as the sum over orbits
                let expected: Complex64 = if orbit.is_none() {
                    (0..setup.twisted.len())
                        .map(|k| setup.twisted[k].correlator(genus, &[]) * setup.factor(k, genus))
                        .sum()
                } else {
                    ZERO
                };
                let residual = (lhs - expected).norm();
                let pass = if orbit.is_none() {
                    residual <= tol.relative * lhs.norm().max(expected.norm()).max(1e-300) || residual < 1e-12
                } else {
                    residual < tol.vanishing
                };
                GwRow {
                    genus,
                    insertions: labels,
                    method,
                    lhs: pair(lhs),
                    rhs: None,
                    factor: None,
                    ratio: None,
                    mixed,
                    residual,
                    pass,
                }
            }
            Some(k) => {
                let idx: Vec<usize> = ins.iter().map(|x| x.index).collect();
                let rhs = setup.twisted[k].basis_correlator(genus, &idx);
                let factor = setup.factor(k, genus);
                let expected = rhs * factor;
                let diff = (lhs - expected).norm();
                let scale = lhs.norm().max(expected.norm());
                // values that are zero up to roundoff are held to the vanishing tolerance
                let residual = if scale > tol.vanishing { diff / scale } else { diff };
                GwRow {
                    genus,
                    insertions: labels,
                    method,
                    lhs: pair(lhs),
                    rhs: Some(pair(rhs)),
                    factor: Some(factor),
                    ratio: if rhs.norm() > 1e-12 { Some((lhs / rhs).re) } else { None },
                    mixed,
                    residual,
                    pass: diff < tol.vanishing || residual <= tol.relative,
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Summary checks over rows: vanishing of mixed correlators and the
/// scaling of matched ones.
pub fn gw_summary(rows: &[GwRow], tol: GwTolerance, label: &str) -> Vec<Check> {
    let mixed: Vec<&GwRow> = rows.iter().filter(|r| r.mixed).collect();
    let matched: Vec<&GwRow> = rows.iter().filter(|r| !r.mixed).collect();
    let worst_mixed = mixed.iter().map(|r| r.residual).fold(0.0, f64::max);
    let worst_matched = matched.iter().map(|r| r.residual).fold(0.0, f64::max);
    vec![
        Check {
            name: format!("{label}: mixed-orbit correlators vanish"),
            pass: mixed.iter().all(|r| r.pass),
            max_residual: worst_mixed,
            details: json!({ "instances": mixed.len(), "tolerance": tol.vanishing }),
        },
        Check {
            name: format!("{label}: matched correlators scale by (dim/|G|)^(2-2g)"),
            pass: matched.iter().all(|r| r.pass),
            max_residual: worst_matched,
            details: json!({ "instances": matched.len(), "tolerance": tol.relative }),
        },
    ]
}

/// The decomposition over `g in 0..=max_genus`, `n in 1..=max_n`.
pub fn gw_decomposition_check(setup: &GwSetup, max_genus: usize, max_n: usize, tol: GwTolerance) -> Result<Vec<Check>> {
    let mut rows = Vec::new();
    for genus in 0..=max_genus {
        for n in 1..=max_n {
            rows.extend(gw_decomposition_rows(setup, None, Method::Frobenius, genus, n, tol)?);
        }
    }
    Ok(gw_summary(&rows, tol, "decomposition"))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

/// Forgetting tails, cutting loops and cutting trees for a Frobenius
/// algebra with class-labelled basis, weights `|C(q)|`.
pub fn cutting_axiom_check(fd: &FrobeniusData, label: &str, max_genus: usize, max_n: usize, tol: f64) -> Vec<Check> {
    let one = fd
        .labels
        .iter()
        .position(|l| l.class == 0)
        .expect("identity class is always regular");
    let weights: Vec<f64> = fd.labels.iter().map(|l| l.centralizer_order as f64).collect();
    let (mut tails, mut loops, mut trees) = (0.0f64, 0.0f64, 0.0f64);
    let mut counts = [0usize; 3];
    for genus in 0..=max_genus {
        for n in 0..=max_n {
            for p in multisets(fd.dim(), n) {
                let lhs = fd.basis_correlator(genus, &p);
                if n < max_n {
                    let mut with_one = vec![one];
                    with_one.extend(&p);
                    tails = tails.max(rel(lhs, fd.basis_correlator(genus, &with_one)));
                    counts[0] += 1;
                }
                if genus >= 1 {
                    let rhs: Complex64 = (0..fd.dim())
                        .map(|a| {
                            let mut ins = vec![a, fd.labels[a].inverse];
                            ins.extend(&p);
                            fd.basis_correlator(genus - 1, &ins) * weights[a]
                        })
                        .sum();
                    loops = loops.max(rel(lhs, rhs));
                    counts[1] += 1;
                }
                for mask in 0..(1usize << n) {
                    let p1: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| p[i]).collect();
                    let p2: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| p[i]).collect();
                    for g1 in 0..=genus {
                        let rhs: Complex64 = (0..fd.dim())
                            .map(|a| {
                                let mut left = p1.clone();
                                left.push(a);
                                let mut right = vec![fd.labels[a].inverse];
                                right.extend(&p2);
                                fd.basis_correlator(g1, &left) * fd.basis_correlator(genus - g1, &right) * weights[a]
                            })
                            .sum();
                        trees = trees.max(rel(lhs, rhs));
                        counts[2] += 1;
                    }
                }
            }
        }
    }
    vec![
        Check::residual(format!("{label}: forgetting tails"), tails, tol)
            .with_details(json!({ "instances": counts[0] })),
        Check::residual(format!("{label}: cutting loops"), loops, tol).with_details(json!({ "instances": counts[1] })),
        Check::residual(format!("{label}: cutting trees"), trees, tol).with_details(json!({ "instances": counts[2] })),
    ]
}

/// The same recursions for `Omega_g^H` in exact arithmetic.
pub fn cutting_axiom_check_exact(counter: &mut OmegaCounter, max_genus: usize, max_n: usize) -> Result<Vec<Check>> {
    let cc = counter.classes().clone();
    let group = counter.group().clone();
    let k = cc.num_classes();
    let inv: Vec<usize> = (0..k).map(|a| cc.inverse_class(&group, a)).collect();
    let weight = |a: usize| Ratio::from_integer(cc.centralizer_orders[a] as i128);
    let mut cache: HashMap<(usize, Vec<usize>), Ratio<i128>> = HashMap::new();
    let mut omega = |genus: usize, classes: Vec<usize>| -> Result<Ratio<i128>> {
        let mut key = classes;
        key.sort_unstable();
        if let Some(v) = cache.get(&(genus, key.clone())) {
            return Ok(*v);
        }
        let v = counter.omega(genus, &key)?.0;
        cache.insert((genus, key), v);
        Ok(v)
    };
    let mut failures = [0usize; 3];
    let mut counts = [0usize; 3];
    for genus in 0..=max_genus {
        for n in 0..=max_n {
            for p in multisets(k, n) {
                let lhs = omega(genus, p.clone())?;
                if n < max_n {
                    let mut with_one = vec![0];
                    with_one.extend(&p);
                    failures[0] += usize::from(omega(genus, with_one)? != lhs);
                    counts[0] += 1;
                }
                if genus >= 1 {
                    let mut rhs = Ratio::from_integer(0);
                    for a in 0..k {
                        let mut ins = vec![a, inv[a]];
                        ins.extend(&p);
                        rhs += omega(genus - 1, ins)? * weight(a);
                    }
                    failures[1] += usize::from(rhs != lhs);
                    counts[1] += 1;
                }
                for mask in 0..(1usize << n) {
                    let p1: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| p[i]).collect();
                    let p2: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| p[i]).collect();
                    for g1 in 0..=genus {
                        let mut rhs = Ratio::from_integer(0);
                        for a in 0..k {
                            let mut left = p1.clone();
                            left.push(a);
                            let mut right = vec![inv[a]];
                            right.extend(&p2);
                            rhs += omega(g1, left)? * omega(genus - g1, right)? * weight(a);
                        }
                        failures[2] += usize::from(rhs != lhs);
                        counts[2] += 1;
                    }
                }
            }
        }
    }
    let name = group.name().to_string();
    let mk = |i: usize, what: &str| {
        Check::boolean(format!("Omega of {name}: {what} (exact)"), failures[i] == 0)
            .with_details(json!({ "instances": counts[i], "failures": failures[i] }))
    };
    Ok(vec![
        mk(0, "forgetting tails"),
        mk(1, "cutting loops"),
        mk(2, "cutting trees"),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialRow {
    pub orbit: usize,
    pub genus: usize,
    pub insertions: Vec<usize>,
    /// Prefactor on the `BH` side.
    pub bh: [f64; 2],
    /// Twisted prefactor on the orbit side.
    pub twisted: [f64; 2],
    /// The genus parameter of the orbit's potential is rescaled by this.
    pub epsilon_scale: f64,
}

/// Omega/Lambda prefactors of both potentials for matched insertions.
pub fn potential_coefficients(setup: &GwSetup, max_genus: usize, max_n: usize) -> Vec<PotentialRow> {
    let mut rows = Vec::new();
    for (k, fd) in setup.twisted.iter().enumerate() {
        let members: Vec<&Insertion> = setup.insertions.iter().filter(|x| x.orbit == k).collect();
        for genus in 0..=max_genus {
            for n in 1..=max_n {
                for choice in multisets(members.len(), n) {
                    let vecs: Vec<Vector> = choice.iter().map(|&a| members[a].in_h.clone()).collect();
                    let idx: Vec<usize> = choice.iter().map(|&a| members[a].index).collect();
                    rows.push(PotentialRow {
                        orbit: k,
                        genus,
                        insertions: idx.clone(),
                        bh: pair(setup.group.correlator(genus, &vecs)),
                        twisted: pair(fd.basis_correlator(genus, &idx)),
                        epsilon_scale: 1.0 / setup.scale[k],
                    });
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog_entry, named_group};
    use crate::mackey::{DualData, DualOptions};
    use crate::reps::irreducible_representations;

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(5, 4).len(), 70);
    }

    #[test]
    fn s3_oracles_agree() {
        let g = named_group("S3").unwrap();
        let irreps = irreducible_representations(&g, 0).unwrap();
        let (rows, check) = oracle_agreement(&g, &irreps, 100_000_000, 2, 4, 1e-8).unwrap();
        assert!(check.pass, "{}", check.max_residual);
        assert!(rows.iter().all(|r| r.brute_force.is_some()));
    }

    #[test]
    fn untwisted_cutting_exact_for_s3() {
        let g = named_group("S3").unwrap();
        let mut oc = OmegaCounter::new(&g, 100_000_000);
        for c in cutting_axiom_check_exact(&mut oc, 2, 3).unwrap() {
            assert!(c.pass, "{}", c.name);
        }
    }

    #[test]
    fn q8_decomposition_genus_zero() {
        let e = catalog_entry("q8_over_k4").unwrap().extension;
        let d = DualData::compute(&e, DualOptions::default()).unwrap();
        let ci = CenterIso::new(&d, 1e-9).unwrap();
        let setup = GwSetup::new(&ci).unwrap();
        let rows = gw_decomposition_rows(&setup, None, Method::Frobenius, 0, 3, GwTolerance::default()).unwrap();
        assert!(rows.iter().all(|r| r.pass));
        // 1-dim orbits: factor (1/2)^2
        let one_dim = setup.scale.iter().position(|&s| (s - 0.5).abs() < 1e-12).unwrap();
        assert!((setup.factor(one_dim, 0) - 0.25).abs() < 1e-15);
        assert!(rows.iter().any(|r| !r.mixed && r.factor == Some(0.25)));
        // the brute-force expansion reproduces the Frobenius values
        let mut ev = OmegaEvaluator::new(&e.h, 100_000_000, None);
        let brute =
            gw_decomposition_rows(&setup, Some(&mut ev), Method::BruteForce, 1, 2, GwTolerance::default()).unwrap();
        assert!(brute.iter().all(|r| r.pass));
    }

    #[test]
    fn twisted_cutting_on_q8() {
        let e = catalog_entry("q8_over_k4").unwrap().extension;
        let d = DualData::compute(&e, DualOptions::default()).unwrap();
        for s in d.stabilizers().unwrap() {
            let fd = FrobeniusData::stabilizer_center(&s).unwrap();
            for c in cutting_axiom_check(&fd, "q8", 2, 3, 1e-8) {
                assert!(c.pass, "{} {:e}", c.name, c.max_residual);
            }
        }
    }
}

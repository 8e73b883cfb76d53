//! Unitary irreducible representations by splitting the regular
//! representation with random elements of its commutant.

use std::cmp::Ordering;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{conjugacy_classes, ConjugacyClassification, FiniteGroup};
use crate::linalg::{self, c, CMat};

/// Gap below which eigenvalues are clustered together.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
/// Fresh random draws before giving up on a decomposition.
pub const RETRY_CAP: usize = 8;

#[derive(Debug, Clone)]
pub struct UnitaryIrrep {
    pub dim: usize,
    pub matrices: Vec<CMat>,
    pub character: Vec<Complex64>,
}

impl UnitaryIrrep {
    fn from_matrices(matrices: Vec<CMat>) -> Self {
        let dim = matrices[0].nrows();
        let character = matrices.iter().map(linalg::trace).collect();
        Self {
            dim,
            matrices,
            character,
        }
    }

    #[inline]
    pub fn at(&self, g: usize) -> &CMat {
        &self.matrices[g]
    }

    /// Largest deviation from `rho(1) = I`, `rho(ab) = rho(a) rho(b)` and
    /// unitarity.
    pub fn homomorphism_residual(&self, group: &FiniteGroup) -> f64 {
        let n = group.order();
        let mut r = linalg::max_abs_diff(&self.matrices[0], &linalg::identity(self.dim));
        for a in 0..n {
            r = r.max(linalg::unitarity_residual(&self.matrices[a]));
            for b in 0..n {
                let prod = &self.matrices[a] * &self.matrices[b];
                r = r.max(linalg::max_abs_diff(&prod, &self.matrices[group.mul(a, b)]));
            }
        }
        r
    }

    /// `(1/|G|) sum |chi|^2`
    pub fn character_norm(&self) -> f64 {
        self.character.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.character.len() as f64
    }
}

#[derive(Debug, Clone)]
pub struct IrrepSet {
    pub group_order: usize,
    pub irreps: Vec<UnitaryIrrep>,
    pub seed: u64,
}

impl IrrepSet {
    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    /// Index of the irrep whose character matches `chi` within `tol`.
    pub fn find_by_character(&self, chi: &[Complex64], tol: f64) -> Option<usize> {
        self.irreps
            .iter()
            .position(|r| r.character.iter().zip(chi).all(|(a, b)| (a - b).norm() < tol))
    }

    /// `(1/|G|) sum_g chi_a(g) conj(chi_b(g))`
    pub fn character_inner(&self, a: usize, b: usize) -> Complex64 {
        let (x, y) = (&self.irreps[a].character, &self.irreps[b].character);
        x.iter().zip(y).map(|(u, v)| u * v.conj()).sum::<Complex64>() / self.group_order as f64
    }

    /// Max deviation of `sum_rho dim chi_rho(g)` from `|G| delta_{g,1}`.
    pub fn regular_character_residual(&self) -> f64 {
        (0..self.group_order)
            .map(|g| {
                let s: Complex64 = self.irreps.iter().map(|r| r.character[g] * r.dim as f64).sum();
                let expect = if g == 0 { self.group_order as f64 } else { 0.0 };
                (s - expect).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn regular_character_check(&self, tol: f64) -> bool {
        self.regular_character_residual() < tol
    }

    /// Max deviation from Schur orthogonality of matrix coefficients.
    pub fn schur_residual(&self) -> f64 {
        let n = self.group_order as f64;
        let mut worst: f64 = 0.0;
        for (i, ri) in self.irreps.iter().enumerate() {
            for (j, rj) in self.irreps.iter().enumerate() {
                for a in 0..ri.dim {
                    for b in 0..ri.dim {
                        for cc in 0..rj.dim {
                            for d in 0..rj.dim {
                                let s: Complex64 = (0..self.group_order)
                                    .map(|g| ri.matrices[g][(a, b)] * rj.matrices[g][(cc, d)].conj())
                                    .sum::<Complex64>()
                                    / n;
                                let expect = if i == j && a == cc && b == d {
                                    1.0 / ri.dim as f64
                                } else {
                                    0.0
                                };
                                worst = worst.max((s - expect).norm());
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    /// Class x irrep values, `table[irrep][class]`.
    pub fn character_table(&self, cc: &ConjugacyClassification) -> Vec<Vec<Complex64>> {
        self.irreps
            .iter()
            .map(|r| cc.classes.iter().map(|k| r.character[k[0]]).collect())
            .collect()
    }

    /// Checks every irrep and the completeness identities.
    pub fn validate(&self, group: &FiniteGroup, tol: f64) -> Result<()> {
        let total: usize = self.irreps.iter().map(|r| r.dim * r.dim).sum();
        if total != group.order() {
            return Err(Error::DecompositionFailed(format!(
                "sum of squared dimensions is {total}, expected {}",
                group.order()
            )));
        }
        let classes = conjugacy_classes(group).num_classes();
        if self.irreps.len() != classes {
            return Err(Error::DecompositionFailed(format!(
                "found {} irreps for {classes} conjugacy classes",
                self.irreps.len()
            )));
        }
        for (k, r) in self.irreps.iter().enumerate() {
            if r.matrices.len() != group.order() {
                return Err(Error::DecompositionFailed(format!("irrep {k} has the wrong length")));
            }
            let res = r.homomorphism_residual(group);
            if res > tol {
                return Err(Error::DecompositionFailed(format!(
                    "irrep {k} is not a unitary homomorphism (residual {res:e})"
                )));
            }
            if (r.character_norm() - 1.0).abs() > tol {
                return Err(Error::DecompositionFailed(format!("irrep {k} is reducible")));
            }
        }
        for a in 0..self.irreps.len() {
            for b in 0..a {
                if self.character_inner(a, b).norm() > tol {
                    return Err(Error::DecompositionFailed(format!("irreps {a} and {b} are isomorphic")));
                }
            }
        }
        Ok(())
    }
}

/// Computes one unitary irrep per isomorphism class, ordered by dimension
/// and then by character (values compared in element order, larger real
/// part first, then larger imaginary part), so the trivial irrep comes
/// first. The matrices depend on `seed`; the characters and ordering do not.
pub fn irreducible_representations(group: &FiniteGroup, seed: u64) -> Result<IrrepSet> {
    irreducible_representations_with(group, seed, DEFAULT_CLUSTER_TOL)
}

pub fn irreducible_representations_with(group: &FiniteGroup, seed: u64, cluster_tol: f64) -> Result<IrrepSet> {
    let mut last_err = None;
    for attempt in 0..RETRY_CAP as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(attempt));
        match decompose(group, &mut rng, cluster_tol) {
            Ok(irreps) => {
                let set = IrrepSet {
                    group_order: group.order(),
                    irreps,
                    seed,
                };
                match set.validate(group, 1e-8) {
                    Ok(()) => return Ok(set),
                    Err(e) => last_err = Some(e),
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::DecompositionFailed("no attempts".into())))
}

fn decompose(group: &FiniteGroup, rng: &mut ChaCha8Rng, cluster_tol: f64) -> Result<Vec<UnitaryIrrep>> {
    let n = group.order();
    // left regular representation as permutation matrices
    let regular: Vec<CMat> = (0..n)
        .map(|g| {
            let mut m = CMat::zeros(n, n);
            for x in 0..n {
                m[(group.mul(g, x), x)] = linalg::ONE;
            }
            m
        })
        .collect();
    let mut found: Vec<UnitaryIrrep> = Vec::new();
    let mut pending = vec![regular];
    let mut total = 0;
    while let Some(rep) = pending.pop() {
        if total == n {
            break;
        }
        for block in split(&rep, rng, cluster_tol)? {
            let irrep = UnitaryIrrep::from_matrices(block);
            if (irrep.character_norm() - 1.0).abs() > 1e-6 {
                pending.push(irrep.matrices);
                continue;
            }
            let duplicate = found.iter().any(|r| {
                r.dim == irrep.dim
                    && r.character
                        .iter()
                        .zip(&irrep.character)
                        .all(|(a, b)| round6(*a) == round6(*b))
            });
            if !duplicate {
                total += irrep.dim * irrep.dim;
                found.push(irrep);
            }
        }
    }
    found.sort_by(compare_irreps);
    Ok(found)
}

/// Splits a unitary representation along the eigenspaces of a random
/// Hermitian element of its commutant.
fn split(rep: &[CMat], rng: &mut ChaCha8Rng, cluster_tol: f64) -> Result<Vec<Vec<CMat>>> {
    let d = rep[0].nrows();
    let a = linalg::random_hermitian(rng, d);
    let mut avg = CMat::zeros(d, d);
    for m in rep {
        avg += m * &a * m.adjoint();
    }
    avg.scale_mut(1.0 / rep.len() as f64);
    let avg = (&avg + avg.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(avg);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(cl) if (eig.eigenvalues[i] - eig.eigenvalues[*cl.last().unwrap()]).abs() < cluster_tol => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    if clusters.len() == 1 && d > 1 {
        // either irreducible already or an unlucky draw; the caller decides
        return Ok(vec![rep.to_vec()]);
    }
    let mut blocks = Vec::with_capacity(clusters.len());
    for cl in clusters {
        let u = CMat::from_fn(d, cl.len(), |r, k| eig.eigenvectors[(r, cl[k])]);
        let block: Vec<CMat> = rep.iter().map(|m| u.adjoint() * m * &u).collect();
        // invariance of the eigenspace
        let leak = rep
            .iter()
            .zip(&block)
            .map(|(m, b)| linalg::max_abs_diff(&(m * &u), &(&u * b)))
            .fold(0.0, f64::max);
        if leak > 1e-7 {
            return Err(Error::DecompositionFailed(format!(
                "eigenspace is not invariant (leak {leak:e})"
            )));
        }
        blocks.push(block);
    }
    Ok(blocks)
}

fn round6(z: Complex64) -> (i64, i64) {
    ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)
}

fn compare_irreps(a: &UnitaryIrrep, b: &UnitaryIrrep) -> Ordering {
    a.dim.cmp(&b.dim).then_with(|| {
        for (x, y) in a.character.iter().zip(&b.character) {
            let (xr, xi) = round6(*x);
            let (yr, yi) = round6(*y);
            let o = yr.cmp(&xr).then(yi.cmp(&xi));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// On-disk form of one irrep: `{dim, matrices: [[[ [re, im] ]]]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct IrrepDump {
    pub dim: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn dump_irreps(set: &IrrepSet) -> Vec<IrrepDump> {
    set.irreps
        .iter()
        .map(|r| IrrepDump {
            dim: r.dim,
            matrices: r
                .matrices
                .iter()
                .map(|m| {
                    (0..r.dim)
                        .map(|i| (0..r.dim).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                        .collect()
                })
                .collect(),
        })
        .collect()
}

/// Rebuilds and validates an irrep set from its dump; the ordering is
/// normalized the same way as for computed sets.
pub fn load_irreps(group: &FiniteGroup, dump: &[IrrepDump], tol: f64) -> Result<IrrepSet> {
    let mut irreps = Vec::with_capacity(dump.len());
    for (k, d) in dump.iter().enumerate() {
        if d.matrices.len() != group.order()
            || d.matrices
                .iter()
                .any(|m| m.len() != d.dim || m.iter().any(|row| row.len() != d.dim))
        {
            return Err(Error::InvalidInput(format!("irrep {k} has the wrong shape")));
        }
        let mats = d
            .matrices
            .iter()
            .map(|m| CMat::from_fn(d.dim, d.dim, |i, j| c(m[i][j][0], m[i][j][1])))
            .collect();
        irreps.push(UnitaryIrrep::from_matrices(mats));
    }
    irreps.sort_by(compare_irreps);
    let set = IrrepSet {
        group_order: group.order(),
        irreps,
        seed: 0,
    };
    set.validate(group, tol)?;
    Ok(set)
}

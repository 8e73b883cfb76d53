//! The dual of an extension: the Q-action on irreps of G, intertwiners,
//! the U(1) cocycle on the action groupoid, and the algebras built from
//! them.

mod crossed;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::MonomialAlgebra;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupExtension};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::reps::{irreducible_representations, IrrepSet};

pub use crossed::{CrossedElement, CrossedProduct};

/// Fresh random matrices tried per intertwiner.
pub const INTERTWINER_RETRY_CAP: usize = 8;
/// Character matching tolerance for the action table.
pub const MATCH_TOL: f64 = 1e-6;
/// Distance within which a cocycle value is snapped to a root of unity.
pub const SNAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct DualOptions {
    pub seed: u64,
    pub tol: f64,
    pub snap_roots: bool,
}

impl Default for DualOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            tol: 1e-9,
            snap_roots: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub representative: usize,
    pub members: Vec<usize>,
    /// Elements of `Q` fixing the representative, ascending.
    pub stabilizer: Vec<usize>,
}

/// Everything needed to reproduce gauge-dependent values.
#[derive(Debug, Clone, Serialize)]
pub struct GaugeRecord {
    pub section: Vec<usize>,
    pub seed: u64,
    pub phase_convention: String,
    pub snap_roots: bool,
}

#[derive(Debug, Clone)]
pub struct DualData {
    pub ext: GroupExtension,
    pub irreps: IrrepSet,
    /// `action[q][rho]` is the index of `q(rho)`.
    pub action: Vec<Vec<usize>>,
    /// `intertwiners[q][rho]` maps `V_rho` to `V_{q(rho)}`.
    pub intertwiners: Vec<Vec<CMat>>,
    /// `cocycle[rho][q1][q2]`
    pub cocycle: Vec<Vec<Vec<Complex64>>>,
    pub orbits: Vec<Orbit>,
    pub orbit_of: Vec<usize>,
    pub gauge: GaugeRecord,
}

impl DualData {
    /// Runs the whole construction: irreps of `G`, the action, intertwiners,
    /// the cocycle and the orbit structure, verifying every invariant.
    pub fn compute(ext: &GroupExtension, opts: DualOptions) -> Result<Self> {
        let irreps = irreducible_representations(&ext.g, opts.seed)?;
        Self::from_irreps(ext, irreps, opts)
    }

    pub fn from_irreps(ext: &GroupExtension, irreps: IrrepSet, opts: DualOptions) -> Result<Self> {
        let action = q_action_on_irreps(ext, &irreps)?;
        let intertwiners = compute_intertwiners(ext, &irreps, &action, opts.seed)?;
        let mut cocycle = compute_cocycle(ext, &irreps, &action, &intertwiners, opts.tol)?;
        if opts.snap_roots {
            snap_to_roots(&mut cocycle, ext.h.order());
        }
        let (orbits, orbit_of) = orbit_decomposition(&action);
        let dual = Self {
            ext: ext.clone(),
            irreps,
            action,
            intertwiners,
            cocycle,
            orbits,
            orbit_of,
            gauge: GaugeRecord {
                section: ext.section.clone(),
                seed: opts.seed,
                phase_convention: "T_1 = I; otherwise the first entry of T with modulus above 1e-6 \
                                   in row-major order is real and positive"
                    .into(),
                snap_roots: opts.snap_roots,
            },
        };
        let r = dual.cocycle_residual();
        if r > opts.tol {
            return Err(Error::NotScalar {
                irrep: 0,
                q1: 0,
                q2: 0,
                residual: r,
            });
        }
        Ok(dual)
    }

    pub fn num_irreps(&self) -> usize {
        self.irreps.len()
    }

    pub fn dim(&self, rho: usize) -> usize {
        self.irreps.irreps[rho].dim
    }

    #[inline]
    pub fn act(&self, q: usize, rho: usize) -> usize {
        self.action[q][rho]
    }

    #[inline]
    pub fn c(&self, rho: usize, q1: usize, q2: usize) -> Complex64 {
        self.cocycle[rho][q1][q2]
    }

    #[inline]
    pub fn t(&self, q: usize, rho: usize) -> &CMat {
        &self.intertwiners[q][rho]
    }

    #[inline]
    pub fn rho(&self, rho: usize, g: usize) -> &CMat {
        &self.irreps.irreps[rho].matrices[g]
    }

    pub fn q(&self) -> &FiniteGroup {
        &self.ext.q
    }

    pub fn is_trivial_band(&self) -> bool {
        self.action
            .iter()
            .all(|row| row.iter().enumerate().all(|(r, &x)| r == x))
    }

    /// Max over all checks of: `|c| = 1`, normalization, and the groupoid
    /// cocycle identity
    /// `c^{q1 rho}(q2,q3) c^rho(q1,q2q3) = c^rho(q1q2,q3) c^rho(q1,q2)`.
    pub fn cocycle_residual(&self) -> f64 {
        let q = self.q();
        let m = q.order();
        let mut worst: f64 = 0.0;
        for rho in 0..self.num_irreps() {
            for a in 0..m {
                worst = worst.max((self.c(rho, 0, a) - ONE).norm());
                worst = worst.max((self.c(rho, a, 0) - ONE).norm());
                for b in 0..m {
                    worst = worst.max((self.c(rho, a, b).norm() - 1.0).abs());
                    for cc in 0..m {
                        let lhs = self.c(self.act(a, rho), b, cc) * self.c(rho, a, q.mul(b, cc));
                        let rhs = self.c(rho, q.mul(a, b), cc) * self.c(rho, a, b);
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
        }
        worst
    }

    /// Max residual of the defining relation
    /// `rho(Ad_{s(q)} g) = T^-1 q(rho)(g) T` and of `T_1 = I`.
    pub fn intertwiner_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for q in 0..self.q().order() {
            for rho in 0..self.num_irreps() {
                let t = self.t(q, rho);
                let target = self.act(q, rho);
                worst = worst.max(linalg::unitarity_residual(t));
                if q == 0 {
                    worst = worst.max(linalg::max_abs_diff(t, &linalg::identity(t.nrows())));
                }
                for g in 0..self.ext.g.order() {
                    let lhs = self.rho(target, g) * t;
                    let rhs = t * self.rho(rho, self.ext.ad(q, g));
                    worst = worst.max(linalg::max_abs_diff(&lhs, &rhs));
                }
            }
        }
        worst
    }

    /// Max residual of
    /// `T_{q2}^{q1 rho} T_{q1}^rho = c^rho(q1,q2) T_{q1 q2}^rho rho(tau(q1,q2))^-1`.
    pub fn composition_residual(&self) -> f64 {
        let q = self.q();
        let mut worst: f64 = 0.0;
        for rho in 0..self.num_irreps() {
            for a in 0..q.order() {
                for b in 0..q.order() {
                    let lhs = self.t(b, self.act(a, rho)) * self.t(a, rho);
                    let tau = self.ext.tau(a, b);
                    let rhs = (self.t(q.mul(a, b), rho) * self.rho(rho, self.ext.g.inv(tau))) * self.c(rho, a, b);
                    worst = worst.max(linalg::max_abs_diff(&lhs, &rhs));
                }
            }
        }
        worst
    }

    /// Number of violations of `(q1 q2)(rho) = q2(q1(rho))`.
    pub fn action_residual(&self) -> usize {
        let q = self.q();
        let mut bad = 0;
        for a in 0..q.order() {
            for b in 0..q.order() {
                for rho in 0..self.num_irreps() {
                    if self.act(q.mul(a, b), rho) != self.act(b, self.act(a, rho)) {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }

    /// A copy with every cocycle value multiplied by `exp(i eps)`; used to
    /// confirm the checks notice a corrupted cocycle.
    pub fn perturb_cocycle(&mut self, eps: f64) {
        let phase = Complex64::from_polar(1.0, eps);
        for z in self.cocycle.iter_mut().flatten().flatten() {
            *z *= phase;
        }
    }

    /// The twisted groupoid algebra `C(Ghat x Q, c)` with basis `(rho, q)`
    /// at index `rho |Q| + q` and product
    /// `(rho,q)(rho',q') = c^rho(q,q') (rho,qq')` when `rho' = q(rho)`.
    pub fn groupoid_algebra(&self) -> MonomialAlgebra {
        let (n, m) = (self.num_irreps(), self.q().order());
        let q = self.q();
        let table = (0..n * m)
            .map(|x| {
                let (rho, a) = (x / m, x % m);
                (0..n * m)
                    .map(|y| {
                        let (sigma, b) = (y / m, y % m);
                        (sigma == self.act(a, rho)).then(|| (rho * m + q.mul(a, b), self.c(rho, a, b)))
                    })
                    .collect()
            })
            .collect();
        let mut unit = vec![ZERO; n * m];
        for rho in 0..n {
            unit[rho * m] = ONE;
        }
        MonomialAlgebra::new(table, unit)
    }

    #[inline]
    pub fn groupoid_index(&self, rho: usize, q: usize) -> usize {
        rho * self.q().order() + q
    }

    /// The stabilizer of orbit `k` as a group (elements reindexed in
    /// ascending order of their index in `Q`) and its restricted cocycle.
    pub fn restrict_cocycle(&self, k: usize) -> Result<StabilizerData> {
        let orbit = &self.orbits[k];
        let (group, elems) = self.q().subgroup(&format!("Stab{k}"), &orbit.stabilizer)?;
        let rho = orbit.representative;
        let c: Vec<Vec<Complex64>> = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| self.c(rho, a, b)).collect())
            .collect();
        let data = StabilizerData {
            orbit: k,
            representative: rho,
            dim: self.dim(rho),
            group,
            elems,
            c,
        };
        let r = data.cocycle_residual();
        if r > 1e-8 {
            return Err(Error::NotScalar {
                irrep: rho,
                q1: 0,
                q2: 0,
                residual: r,
            });
        }
        Ok(data)
    }

    pub fn stabilizers(&self) -> Result<Vec<StabilizerData>> {
        (0..self.orbits.len()).map(|k| self.restrict_cocycle(k)).collect()
    }

    pub fn crossed_product(&self) -> CrossedProduct<'_> {
        CrossedProduct::new(self)
    }
}

/// A stabilizer subgroup with the cocycle restricted to it.
#[derive(Debug, Clone)]
pub struct StabilizerData {
    pub orbit: usize,
    pub representative: usize,
    pub dim: usize,
    pub group: FiniteGroup,
    /// `elems[i]` is the element of `Q` at local index `i`.
    pub elems: Vec<usize>,
    /// `c[i][j]` in local indices.
    pub c: Vec<Vec<Complex64>>,
}

impl StabilizerData {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn local(&self, q: usize) -> Option<usize> {
        self.elems.binary_search(&q).ok()
    }

    pub fn algebra(&self) -> MonomialAlgebra {
        MonomialAlgebra::twisted_group_algebra(&self.group, &self.c)
    }

    /// Ordinary group 2-cocycle identity on the stabilizer.
    pub fn cocycle_residual(&self) -> f64 {
        let g = &self.group;
        let n = g.order();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.c[b][c] * self.c[a][g.mul(b, c)];
                    let rhs = self.c[g.mul(a, b)][c] * self.c[a][b];
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }
}

/// `action[q][rho]`: the irrep whose character is `g -> chi_rho(Ad_{s(q)} g)`.
pub fn q_action_on_irreps(ext: &GroupExtension, irreps: &IrrepSet) -> Result<Vec<Vec<usize>>> {
    (0..ext.q.order())
        .map(|q| {
            (0..irreps.len())
                .map(|rho| {
                    let chi = &irreps.irreps[rho].character;
                    let twisted: Vec<Complex64> = (0..ext.g.order()).map(|g| chi[ext.ad(q, g)]).collect();
                    irreps
                        .find_by_character(&twisted, MATCH_TOL)
                        .ok_or(Error::MatchFailed { irrep: rho, q })
                })
                .collect()
        })
        .collect()
}

/// Unitary `T_q^rho : V_rho -> V_{q(rho)}` with
/// `q(rho)(g) T = T rho(Ad_{s(q)} g)`, obtained by averaging a random matrix.
pub fn compute_intertwiners(
    ext: &GroupExtension,
    irreps: &IrrepSet,
    action: &[Vec<usize>],
    seed: u64,
) -> Result<Vec<Vec<CMat>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1e55);
    let n = ext.g.order();
    let mut out = Vec::with_capacity(ext.q.order());
    for q in 0..ext.q.order() {
        let mut row = Vec::with_capacity(irreps.len());
        for rho in 0..irreps.len() {
            let d = irreps.irreps[rho].dim;
            if q == 0 {
                row.push(linalg::identity(d));
                continue;
            }
            let target = &irreps.irreps[action[q][rho]];
            let source = &irreps.irreps[rho];
            let mut found = None;
            for _ in 0..INTERTWINER_RETRY_CAP {
                let x = linalg::random_matrix(&mut rng, d, d);
                let mut t = CMat::zeros(d, d);
                for g in 0..n {
                    t += &target.matrices[g] * &x * source.matrices[ext.ad(q, g)].adjoint();
                }
                let lambda = (t.adjoint() * &t)[(0, 0)].re;
                if lambda > 1e-8 * (n * n) as f64 {
                    t.scale_mut(1.0 / lambda.sqrt());
                    fix_phase(&mut t);
                    found = Some(t);
                    break;
                }
            }
            row.push(found.ok_or(Error::IntertwinerNotFound {
                irrep: rho,
                q,
                attempts: INTERTWINER_RETRY_CAP,
            })?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Makes the first entry of modulus above `1e-6` (row-major) real positive.
fn fix_phase(t: &mut CMat) {
    let (r, c) = t.shape();
    for i in 0..r {
        for j in 0..c {
            let z = t[(i, j)];
            if z.norm() > 1e-6 {
                let phase = z.conj() / z.norm();
                *t *= phase;
                return;
            }
        }
    }
}

/// `c^rho(q1,q2)` read off
/// `T_{q2}^{q1 rho} T_{q1}^rho rho(tau(q1,q2)) (T_{q1q2}^rho)^-1 = c I`.
pub fn compute_cocycle(
    ext: &GroupExtension,
    irreps: &IrrepSet,
    action: &[Vec<usize>],
    intertwiners: &[Vec<CMat>],
    tol: f64,
) -> Result<Vec<Vec<Vec<Complex64>>>> {
    let q = &ext.q;
    let m = q.order();
    let mut c = vec![vec![vec![ONE; m]; m]; irreps.len()];
    for rho in 0..irreps.len() {
        for a in 0..m {
            for b in 0..m {
                let ab = q.mul(a, b);
                let r = &intertwiners[b][action[a][rho]]
                    * &intertwiners[a][rho]
                    * irreps.irreps[rho].at(ext.tau(a, b))
                    * intertwiners[ab][rho].adjoint();
                let (mut best, mut z) = (0.0, ONE);
                for entry in r.iter() {
                    if entry.norm() > best {
                        best = entry.norm();
                        z = *entry;
                    }
                }
                // the largest entry of a scalar matrix sits on the diagonal
                let residual = linalg::max_abs_diff(&r, &(linalg::identity(r.nrows()) * z));
                if residual > tol {
                    return Err(Error::NotScalar {
                        irrep: rho,
                        q1: a,
                        q2: b,
                        residual,
                    });
                }
                c[rho][a][b] = z;
            }
        }
    }
    Ok(c)
}

/// Replaces each value by the nearest `m`-th root of unity, smallest
/// `m <= max_order` first, when one lies within [`SNAP_TOL`].
pub fn snap_to_roots(c: &mut [Vec<Vec<Complex64>>], max_order: usize) {
    for z in c.iter_mut().flatten().flatten() {
        let angle = z.arg();
        for m in 1..=max_order.max(1) {
            let k = (angle * m as f64 / (2.0 * PI)).round();
            let root = Complex64::from_polar(1.0, 2.0 * PI * k / m as f64);
            if (*z - root).norm() < SNAP_TOL {
                *z = root;
                break;
            }
        }
    }
}

/// Orbits in order of their smallest member (which is the representative),
/// and the orbit index of each irrep.
pub fn orbit_decomposition(action: &[Vec<usize>]) -> (Vec<Orbit>, Vec<usize>) {
    let n = action.first().map_or(0, Vec::len);
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for rho in 0..n {
        if orbit_of[rho] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = action.iter().map(|row| row[rho]).collect();
        members.sort_unstable();
        members.dedup();
        for &x in &members {
            orbit_of[x] = orbits.len();
        }
        let stabilizer = (0..action.len()).filter(|&q| action[q][rho] == rho).collect();
        orbits.push(Orbit {
            representative: rho,
            members,
            stabilizer,
        });
    }
    (orbits, orbit_of)
}

/// Compares the action table under the stored section and under the
/// alternate (largest-index) section; true when they agree.
pub fn action_is_section_independent(ext: &GroupExtension, irreps: &IrrepSet) -> Result<bool> {
    let base = q_action_on_irreps(ext, irreps)?;
    let alt = ext.with_section(ext.alternate_section())?;
    Ok(base == q_action_on_irreps(&alt, irreps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog_entry;

    fn dual(name: &str) -> DualData {
        DualData::compute(&catalog_entry(name).unwrap().extension, DualOptions::default()).unwrap()
    }

    #[test]
    fn central_kernel_has_trivial_band() {
        assert!(dual("q8_over_k4").is_trivial_band());
        assert!(dual("z4_over_z2").is_trivial_band());
    }

    #[test]
    fn s3_swaps_nontrivial_characters() {
        let d = dual("s3_split");
        assert_eq!(d.action[1], vec![0, 2, 1]);
        let orbits: Vec<(Vec<usize>, Vec<usize>)> = d
            .orbits
            .iter()
            .map(|o| (o.members.clone(), o.stabilizer.clone()))
            .collect();
        assert_eq!(orbits, vec![(vec![0], vec![0, 1]), (vec![1, 2], vec![0])]);
    }

    #[test]
    fn s4_over_z2_swaps_complex_characters_of_a4() {
        let d = dual("s4_over_z2");
        let complex: Vec<usize> = (0..d.num_irreps())
            .filter(|&r| d.irreps.irreps[r].character.iter().any(|z| z.im.abs() > 1e-6))
            .collect();
        assert_eq!(complex.len(), 2);
        assert_eq!(d.act(1, complex[0]), complex[1]);
        // the 3-dimensional irrep is fixed and gets a genuine matrix intertwiner
        let three = (0..d.num_irreps()).find(|&r| d.dim(r) == 3).unwrap();
        assert_eq!(d.act(1, three), three);
        assert!(d.intertwiner_residual() < 1e-9);
    }

    #[test]
    fn s4_over_s3_orbits() {
        let d = dual("s4_over_s3");
        let sizes: Vec<(usize, usize)> = d.orbits.iter().map(|o| (o.members.len(), o.stabilizer.len())).collect();
        assert_eq!(sizes, vec![(1, 6), (3, 2)]);
    }

    #[test]
    fn direct_product_has_trivial_cocycle() {
        let d = dual("z2xs3");
        for z in d.cocycle.iter().flatten().flatten() {
            assert!((z - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn one_dimensional_intertwiners_are_one() {
        let d = dual("s3_split");
        for q in 0..2 {
            for rho in 0..3 {
                if d.dim(rho) == 1 {
                    assert!((d.t(q, rho)[(0, 0)] - ONE).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn all_invariants_hold_on_catalog() {
        for e in crate::groups::catalog() {
            let d = DualData::compute(&e.extension, DualOptions::default()).unwrap();
            assert_eq!(d.action_residual(), 0, "{}", e.name);
            assert!(d.intertwiner_residual() < 1e-9, "{}", e.name);
            assert!(d.composition_residual() < 1e-9, "{}", e.name);
            assert!(d.cocycle_residual() < 1e-9, "{}", e.name);
            assert!(action_is_section_independent(&e.extension, &d.irreps).unwrap());
            let dims: usize = (0..d.num_irreps()).map(|r| d.dim(r) * d.dim(r)).sum();
            assert_eq!(dims * e.extension.q.order(), e.extension.h.order());
            for s in d.stabilizers().unwrap() {
                assert!(s.cocycle_residual() < 1e-9);
            }
        }
    }

    #[test]
    fn q8_sign_character_has_nontrivial_commutator_phase() {
        let d = dual("q8_over_k4");
        let sign = 1;
        let mut found = false;
        for a in 0..4 {
            for b in 0..4 {
                let anti = d.c(sign, a, b) / d.c(sign, b, a);
                let comm = d.ext.to_g(d.ext.h.commutator(d.ext.s(a), d.ext.s(b))).unwrap();
                let expect = d.irreps.irreps[sign].character[comm];
                assert!((anti - expect).norm() < 1e-9, "{a} {b}");
                found |= (anti + ONE).norm() < 1e-9;
            }
        }
        assert!(found);
    }

    #[test]
    fn snapping_keeps_identities() {
        let e = catalog_entry("s4_over_z2").unwrap().extension;
        let d = DualData::compute(
            &e,
            DualOptions {
                snap_roots: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(d.cocycle_residual() < 1e-12);
    }

    #[test]
    fn perturbation_is_detected() {
        let mut d = dual("s3_split");
        d.perturb_cocycle(1e-3);
        assert!(d.cocycle_residual() > 1e-4);
    }

    #[test]
    fn groupoid_algebra_is_associative() {
        for name in ["q8_over_k4", "s4_over_s3", "s4_over_z2"] {
            let d = dual(name);
            let b = d.groupoid_algebra();
            assert!(b.associativity_residual() < 1e-9, "{name}");
            let i = d.groupoid_index(0, 0);
            let p = b.mul(&b.basis(i), &b.basis(i));
            assert!(crate::algebra::max_diff(&p, &b.basis(i)) < 1e-12);
        }
    }
}

//! Centers of `C[H]` and of the twisted groupoid algebra, and the explicit
//! isomorphism `I` between them.

use num_complex::Complex64;
use serde_json::json;

use super::{Bimodules, OrbitMorita};
use crate::algebra::{self, MonomialAlgebra, Vector};
use crate::error::{Error, Result};
use crate::groups::{conjugacy_classes, ConjugacyClassification};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::mackey::{DualData, StabilizerData};
use crate::report::Check;

/// Center bases and their decomposition into blocks indexed by the
/// conjugacy classes of `Q`.
#[derive(Debug, Clone)]
pub struct CenterData {
    pub h_classes: ConjugacyClassification,
    pub q_classes: ConjugacyClassification,
    /// Class sums of `H`, one per class.
    pub class_sums: Vec<Vector>,
    /// Q-class containing the image of each H-class.
    pub h_class_block: Vec<usize>,
    /// Basis of `Z(B)` from the commutant solve, as columns.
    pub groupoid_center: CMat,
    pub block_dims_solve: Vec<usize>,
    pub block_dims_structural: Vec<usize>,
}

impl CenterData {
    pub fn compute(dual: &DualData, tol: f64) -> Result<Self> {
        let h = &dual.ext.h;
        let h_classes = conjugacy_classes(h);
        let q_classes = conjugacy_classes(dual.q());
        let class_sums = center_basis_group_algebra(&h_classes, h.order());
        let h_class_block = h_classes
            .classes
            .iter()
            .map(|k| q_classes.class_of[dual.ext.proj.apply(k[0])])
            .collect();
        let b = dual.groupoid_algebra();
        let groupoid_center = b.center_basis(tol);
        let block_dims_solve: Vec<usize> = (0..q_classes.num_classes())
            .map(|k| b.center_basis_on(&block_support(dual, &q_classes, k), tol).ncols())
            .collect();
        let block_dims_structural: Vec<usize> = (0..q_classes.num_classes())
            .map(|k| structural_center(dual, &q_classes.classes[k], tol).ncols())
            .collect();
        let solve: usize = block_dims_solve.iter().sum();
        let structural: usize = block_dims_structural.iter().sum();
        if solve != groupoid_center.ncols() || solve != structural || block_dims_solve != block_dims_structural {
            return Err(Error::MismatchedCenters {
                solve: groupoid_center.ncols(),
                structural,
            });
        }
        Ok(Self {
            h_classes,
            q_classes,
            class_sums,
            h_class_block,
            groupoid_center,
            block_dims_solve,
            block_dims_structural,
        })
    }

    pub fn dim(&self) -> usize {
        self.groupoid_center.ncols()
    }

    /// Number of H-classes lying over each Q-class.
    pub fn group_block_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.q_classes.num_classes()];
        for &b in &self.h_class_block {
            dims[b] += 1;
        }
        dims
    }
}

/// Class sums `1_{<h>}` in the group basis.
pub fn center_basis_group_algebra(cc: &ConjugacyClassification, order: usize) -> Vec<Vector> {
    cc.classes
        .iter()
        .map(|k| {
            let mut v = vec![ZERO; order];
            for &x in k {
                v[x] = ONE;
            }
            v
        })
        .collect()
}

/// Basis indices `(rho, q)` with `q(rho) = rho` and `q` in Q-class `k`.
fn block_support(dual: &DualData, q_classes: &ConjugacyClassification, k: usize) -> Vec<usize> {
    let mut s = Vec::new();
    for rho in 0..dual.num_irreps() {
        for &q in &q_classes.classes[k] {
            if dual.act(q, rho) == rho {
                s.push(dual.groupoid_index(rho, q));
            }
        }
    }
    s.sort_unstable();
    s
}

/// Center elements supported on the isotropy over a Q-class, from the
/// conjugation relations
/// `c^{rho0}(q0,q') a_{q0(rho0),q'} = c^{rho0}(q0 q' q0^-1, q0) a_{rho0, q0 q' q0^-1}`
/// for `q'` fixing `q0(rho0)`.
fn structural_center(dual: &DualData, class: &[usize], tol: f64) -> CMat {
    let q = dual.q();
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for rho in 0..dual.num_irreps() {
        for &a in class {
            if dual.act(a, rho) == rho {
                unknowns.push((rho, a));
            }
        }
    }
    if unknowns.is_empty() {
        return CMat::zeros(0, 0);
    }
    let index = |rho: usize, a: usize| unknowns.iter().position(|&u| u == (rho, a));
    let mut rows: Vec<Vec<(usize, Complex64)>> = Vec::new();
    for rho0 in 0..dual.num_irreps() {
        for q0 in 0..q.order() {
            let sigma = dual.act(q0, rho0);
            for &qp in class {
                if dual.act(qp, sigma) != sigma {
                    continue;
                }
                let r = q.conj(q0, qp);
                let lhs = index(sigma, qp).expect("isotropy");
                let rhs = index(rho0, r).expect("conjugate stays in the isotropy");
                rows.push(vec![(lhs, dual.c(rho0, q0, qp)), (rhs, -dual.c(rho0, r, q0))]);
            }
        }
    }
    let mut m = CMat::zeros(rows.len().max(1), unknowns.len());
    for (i, row) in rows.iter().enumerate() {
        for &(j, z) in row {
            m[(i, j)] += z;
        }
    }
    linalg::nullspace(&m, tol)
}

/// The isomorphism `I : Z(C[H]) -> Z(B)` and the orbit-level maps composed
/// with it.
pub struct CenterIso<'a> {
    pub dual: &'a DualData,
    pub bimodules: Bimodules<'a>,
    pub h_algebra: MonomialAlgebra,
    pub center: CenterData,
    pub stabilizers: Vec<StabilizerData>,
    tol: f64,
}

impl<'a> CenterIso<'a> {
    pub fn new(dual: &'a DualData, tol: f64) -> Result<Self> {
        Ok(Self {
            dual,
            bimodules: Bimodules::new(dual),
            h_algebra: MonomialAlgebra::group_algebra(&dual.ext.h),
            center: CenterData::compute(dual, tol)?,
            stabilizers: dual.stabilizers()?,
            tol,
        })
    }

    /// `I(f)`, after checking that `f` is central.
    pub fn apply(&self, f: &[Complex64]) -> Result<Vector> {
        let residual = self.h_algebra.central_residual(f);
        if residual > self.tol * (1.0 + algebra::norm_inf(f)) {
            return Err(Error::NotCentral { residual });
        }
        Ok(self.apply_formula(f))
    }

    /// `I(f) = sum_q sum_{rho: q(rho)=rho} sum_g f(g,q)/dim tr(rho(g) T_q^-1) (rho,q)`
    /// with `f(g,q)` the coefficient of `i(g)s(q)`.
    pub fn apply_formula(&self, f: &[Complex64]) -> Vector {
        let d = self.dual;
        let (n, m) = (d.ext.g.order(), d.q().order());
        let mut out = vec![ZERO; self.bimodules.b.dim()];
        for q in 0..m {
            for rho in 0..d.num_irreps() {
                if d.act(q, rho) != rho {
                    continue;
                }
                let tinv = d.t(q, rho).adjoint();
                let mut s = ZERO;
                for g in 0..n {
                    let z = f[d.ext.alpha_inv(g, q)];
                    if z != ZERO {
                        s += z * linalg::trace(&(d.rho(rho, g) * &tinv));
                    }
                }
                out[d.groupoid_index(rho, q)] = s / d.dim(rho) as f64;
            }
        }
        out
    }

    /// The same map obtained from the bimodules: `Phi(chi(alpha(f)))`.
    pub fn apply_via_bimodules(&self, f: &[Complex64]) -> Vector {
        self.bimodules.phi(&self.bimodules.a.from_group_algebra(f))
    }

    /// `I'_k`: restriction of a center element of `B` to the stabilizer of
    /// orbit `k`, `sum_{q in Stab} a_{rho_k, q} u_q`.
    pub fn restrict(&self, k: usize, z: &[Complex64]) -> Vector {
        let s = &self.stabilizers[k];
        s.elems
            .iter()
            .map(|&q| z[self.dual.groupoid_index(s.representative, q)])
            .collect()
    }

    /// `J(f) = (I'_k(I(f)))_k`
    pub fn j_map(&self, f: &[Complex64]) -> Vec<Vector> {
        let z = self.apply_formula(f);
        (0..self.stabilizers.len()).map(|k| self.restrict(k, &z)).collect()
    }

    /// Preimage under `J` of a tuple of stabilizer center elements, found by
    /// solving in the class-sum basis.
    pub fn j_inverse(&self, phi: &[Vector]) -> Vector {
        let sums = &self.center.class_sums;
        let images: Vec<Vector> = sums.iter().map(|f| self.j_map(f).concat()).collect();
        let rows = images[0].len();
        let m = CMat::from_fn(rows, images.len(), |i, j| images[j][i]);
        let b = CMat::from_fn(rows, 1, |i, _| phi.concat()[i]);
        let x = m.svd(true, true).solve(&b, 1e-12).expect("svd solve");
        let mut f = vec![ZERO; self.dual.ext.h.order()];
        for (j, s) in sums.iter().enumerate() {
            for (h, &z) in s.iter().enumerate() {
                f[h] += z * x[(j, 0)];
            }
        }
        f
    }

    /// Matrix of `I` on the class-sum basis, columns `I(1_{<h>})`.
    pub fn matrix(&self) -> CMat {
        let cols: Vec<Vector> = self.center.class_sums.iter().map(|f| self.apply_formula(f)).collect();
        CMat::from_fn(self.bimodules.b.dim(), cols.len(), |i, j| cols[j][i])
    }

    /// Unit, multiplicativity, bijectivity, centrality of images and the
    /// agreement of the formula with the bimodule route.
    pub fn isomorphism_checks(&self) -> Vec<Check> {
        let b = &self.bimodules.b;
        let sums = &self.center.class_sums;
        let images: Vec<Vector> = sums.iter().map(|f| self.apply_formula(f)).collect();
        let mut delta = vec![ZERO; self.dual.ext.h.order()];
        delta[0] = ONE;
        let unit = algebra::max_diff(&self.apply_formula(&delta), b.unit());
        let mut mult: f64 = 0.0;
        for (i, f1) in sums.iter().enumerate() {
            for (j, f2) in sums.iter().enumerate() {
                let lhs = self.apply_formula(&self.h_algebra.mul(f1, f2));
                let rhs = b.mul(&images[i], &images[j]);
                mult = mult.max(algebra::max_diff(&lhs, &rhs));
            }
        }
        let central = images.iter().map(|z| b.central_residual(z)).fold(0.0, f64::max);
        let routes = sums
            .iter()
            .zip(&images)
            .map(|(f, z)| algebra::max_diff(&self.apply_via_bimodules(f), z))
            .fold(0.0, f64::max);
        let rank = linalg::rank(&self.matrix(), 1e-9);
        let dims = json!({
            "classes_of_H": self.center.h_classes.num_classes(),
            "center_dim_solve": self.center.dim(),
            "rank_of_I": rank,
        });
        vec![
            Check::residual("I(1) = 1", unit, self.tol),
            Check::residual("I(f1 f2) = I(f1) I(f2) on class sums", mult, self.tol),
            Check::residual("I(f) is central", central, self.tol),
            Check::residual("I agrees with the bimodule-induced map", routes, self.tol),
            Check::boolean(
                "I is bijective",
                rank == self.center.dim() && rank == self.center.h_classes.num_classes(),
            )
            .with_details(dims),
        ]
    }

    /// For each conjugacy class of `Q`: `I` maps the H-classes over it into
    /// the matching block of `Z(B)` and is onto that block.
    pub fn conjugacy_block_check(&self) -> Vec<Check> {
        let d = self.dual;
        let m = d.q().order();
        let qc = &self.center.q_classes;
        let group_dims = self.center.group_block_dims();
        (0..qc.num_classes())
            .map(|k| {
                let members: Vec<usize> = (0..self.center.class_sums.len())
                    .filter(|&i| self.center.h_class_block[i] == k)
                    .collect();
                let images: Vec<Vector> = members
                    .iter()
                    .map(|&i| self.apply_formula(&self.center.class_sums[i]))
                    .collect();
                let leak = images
                    .iter()
                    .flat_map(|z| z.iter().enumerate())
                    .filter(|(idx, _)| qc.class_of[idx % m] != k)
                    .map(|(_, z)| z.norm())
                    .fold(0.0, f64::max);
                let rank = if images.is_empty() {
                    0
                } else {
                    linalg::rank(&CMat::from_fn(images[0].len(), images.len(), |i, j| images[j][i]), 1e-9)
                };
                let ok = leak < self.tol
                    && rank == group_dims[k]
                    && rank == self.center.block_dims_solve[k]
                    && rank == self.center.block_dims_structural[k];
                Check {
                    name: format!("block <{}>", qc.representative(k)),
                    pass: ok,
                    max_residual: leak,
                    details: json!({
                        "q_representative": qc.representative(k),
                        "group_dim": group_dims[k],
                        "groupoid_dim_solve": self.center.block_dims_solve[k],
                        "groupoid_dim_structural": self.center.block_dims_structural[k],
                        "rank": rank,
                    }),
                }
            })
            .collect()
    }

    /// Per-orbit weights `(dim rho_k / |G|)^2`.
    pub fn trace_weights(&self) -> Vec<f64> {
        let g = self.dual.ext.g.order() as f64;
        self.stabilizers.iter().map(|s| (s.dim as f64 / g).powi(2)).collect()
    }

    /// `tr_H(f) = sum_k (dim_k/|G|)^2 tr_k(J_k(f))` on every class sum, where
    /// `tr_H` reads `1/|H|` times the identity coefficient and `tr_k` reads
    /// `1/|Stab_k|` times the coefficient of `u_1`.
    pub fn trace_pullback_check(&self) -> Check {
        let h = self.dual.ext.h.order() as f64;
        let weights = self.trace_weights();
        let mut worst: f64 = 0.0;
        for f in &self.center.class_sums {
            let lhs = f[0] / h;
            let rhs: Complex64 = self
                .j_map(f)
                .iter()
                .zip(&self.stabilizers)
                .zip(&weights)
                .map(|((u, s), w)| u[0] / s.order() as f64 * *w)
                .sum();
            worst = worst.max((lhs - rhs).norm());
        }
        Check::residual("trace pullback", worst, self.tol).with_details(json!({ "weights": weights }))
    }

    /// `I'_k` computed through the orbit bimodules agrees with restriction.
    pub fn orbit_map_check(&self) -> Check {
        let mut worst: f64 = 0.0;
        for k in 0..self.stabilizers.len() {
            let om = OrbitMorita::new(self.dual, &self.stabilizers[k]);
            for f in &self.center.class_sums {
                let z = self.apply_formula(f);
                worst = worst.max(algebra::max_diff(&om.i_prime(&z), &self.restrict(k, &z)));
            }
        }
        Check::residual("I'_k via orbit bimodules equals restriction", worst, self.tol)
    }
}

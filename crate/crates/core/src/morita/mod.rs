//! Morita equivalence between the crossed product `A` and the twisted
//! groupoid algebra `B`, the centers of both sides, and the explicit
//! center isomorphism.

mod center;
mod orbit;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{self, MonomialAlgebra, Vector};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::mackey::{CrossedElement, CrossedProduct, DualData};
use crate::report::Check;

pub use center::{CenterData, CenterIso};
pub use orbit::OrbitMorita;

/// Default number of random samples per identity.
pub const DEFAULT_SAMPLES: usize = 100;

/// Elements of `M = ⊕ V_rho x Q` (`blocks[rho][q]` a column) or of
/// `N = ⊕ V_rho^* x Q` (`blocks[rho][q]` a row).
#[derive(Debug, Clone)]
pub struct ModuleElement {
    pub blocks: Vec<Vec<CMat>>,
}

impl ModuleElement {
    pub fn max_diff(&self, other: &ModuleElement) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .map(|(a, b)| linalg::max_abs_diff(a, b))
            .fold(0.0, f64::max)
    }

    pub fn add_assign(&mut self, other: &ModuleElement) {
        for (a, b) in self.blocks.iter_mut().flatten().zip(other.blocks.iter().flatten()) {
            *a += b;
        }
    }
}

/// The bimodules `_A M_B` and `_B N_A` with the pairings
/// `Xi : M x N -> A` and `Theta : N x M -> B`.
pub struct Bimodules<'a> {
    pub dual: &'a DualData,
    pub a: CrossedProduct<'a>,
    pub b: MonomialAlgebra,
}

impl<'a> Bimodules<'a> {
    pub fn new(dual: &'a DualData) -> Self {
        Self {
            dual,
            a: dual.crossed_product(),
            b: dual.groupoid_algebra(),
        }
    }

    fn m_len(&self) -> usize {
        self.dual.q().order()
    }

    pub fn m_zero(&self) -> ModuleElement {
        let d = self.dual;
        ModuleElement {
            blocks: (0..d.num_irreps())
                .map(|r| (0..self.m_len()).map(|_| CMat::zeros(d.dim(r), 1)).collect())
                .collect(),
        }
    }

    pub fn n_zero(&self) -> ModuleElement {
        let d = self.dual;
        ModuleElement {
            blocks: (0..d.num_irreps())
                .map(|r| (0..self.m_len()).map(|_| CMat::zeros(1, d.dim(r))).collect())
                .collect(),
        }
    }

    /// `(xi_i^rho, q)`
    pub fn m_basis(&self, rho: usize, i: usize, q: usize) -> ModuleElement {
        let mut m = self.m_zero();
        m.blocks[rho][q][(i, 0)] = ONE;
        m
    }

    /// `(eta^i_rho, q)`
    pub fn n_basis(&self, rho: usize, i: usize, q: usize) -> ModuleElement {
        let mut n = self.n_zero();
        n.blocks[rho][q][(0, i)] = ONE;
        n
    }

    /// `(x_{rho0}, q0)(xi_rho, q) = c^{rho0}(q0,q) x T_{q0}^{rho0 dagger} xi`
    /// at `(rho0, q0 q)` when `rho = q0(rho0)`.
    pub fn act_a_m(&self, a: &CrossedElement, m: &ModuleElement) -> ModuleElement {
        let d = self.dual;
        let q = d.q();
        let mut out = self.m_zero();
        for q0 in 0..q.order() {
            for rho0 in 0..d.num_irreps() {
                let x = &a.blocks[q0][rho0];
                let rho = d.act(q0, rho0);
                let xt = x * d.t(q0, rho0).adjoint();
                for q1 in 0..q.order() {
                    let v = &xt * &m.blocks[rho][q1] * d.c(rho0, q0, q1);
                    out.blocks[rho0][q.mul(q0, q1)] += v;
                }
            }
        }
        out
    }

    /// `(xi_rho, q)(rho1, q1) = c^rho(q,q1) xi` at `(rho, q q1)` when
    /// `rho1 = q(rho)`.
    pub fn act_m_b(&self, m: &ModuleElement, b: &[Complex64]) -> ModuleElement {
        let d = self.dual;
        let q = d.q();
        let mut out = self.m_zero();
        for rho in 0..d.num_irreps() {
            for q0 in 0..q.order() {
                let rho1 = d.act(q0, rho);
                for q1 in 0..q.order() {
                    let z = b[d.groupoid_index(rho1, q1)];
                    if z != ZERO {
                        let v = &m.blocks[rho][q0] * (z * d.c(rho, q0, q1));
                        out.blocks[rho][q.mul(q0, q1)] += v;
                    }
                }
            }
        }
        out
    }

    /// `(rho0, q0)(eta_rho, q) = c^rho(q q0^-1, q0) eta` at `(rho, q q0^-1)`
    /// when `rho0 = (q q0^-1)(rho)`.
    pub fn act_b_n(&self, b: &[Complex64], n: &ModuleElement) -> ModuleElement {
        let d = self.dual;
        let q = d.q();
        let mut out = self.n_zero();
        for rho in 0..d.num_irreps() {
            for q1 in 0..q.order() {
                for q0 in 0..q.order() {
                    let p = q.mul(q1, q.inv(q0));
                    let z = b[d.groupoid_index(d.act(p, rho), q0)];
                    if z != ZERO {
                        let v = &n.blocks[rho][q1] * (z * d.c(rho, p, q0));
                        out.blocks[rho][p] += v;
                    }
                }
            }
        }
        out
    }

    /// `(eta_rho, q)(x_rho, q0) = c^rho(q0, q0^-1 q) eta x T_{q0}^{rho dagger}`
    /// in `V^*_{q0(rho)}` at label `q0^-1 q`.
    pub fn act_n_a(&self, n: &ModuleElement, a: &CrossedElement) -> ModuleElement {
        let d = self.dual;
        let q = d.q();
        let mut out = self.n_zero();
        for rho in 0..d.num_irreps() {
            for q0 in 0..q.order() {
                let xt = &a.blocks[q0][rho] * d.t(q0, rho).adjoint();
                let target = d.act(q0, rho);
                for q1 in 0..q.order() {
                    let label = q.mul(q.inv(q0), q1);
                    let v = &n.blocks[rho][q1] * &xt * d.c(rho, q0, label);
                    out.blocks[target][label] += v;
                }
            }
        }
        out
    }

    /// `Xi((xi_rho, q), (eta_rho', q'))` with `p = q q'^-1`: zero unless
    /// `p(rho) = rho'`, else
    /// `(xi eta T_p^rho c^{rho'}(p^-1, q) / c^{rho'}(p^-1, p), p)`.
    pub fn xi(&self, m: &ModuleElement, n: &ModuleElement) -> CrossedElement {
        let d = self.dual;
        let q = d.q();
        let mut out = self.a.zero();
        for rho in 0..d.num_irreps() {
            for qa in 0..q.order() {
                let xi = &m.blocks[rho][qa];
                if linalg::max_abs(xi) == 0.0 {
                    continue;
                }
                for qb in 0..q.order() {
                    let p = q.mul(qa, q.inv(qb));
                    let rho2 = d.act(p, rho);
                    let eta = &n.blocks[rho2][qb];
                    if linalg::max_abs(eta) == 0.0 {
                        continue;
                    }
                    let pinv = q.inv(p);
                    let z = d.c(rho2, pinv, qa) / d.c(rho2, pinv, p);
                    out.blocks[p][rho] += xi * eta * d.t(p, rho) * z;
                }
            }
        }
        out
    }

    /// `Theta((eta_rho, q), (xi_rho, q')) = eta(xi) / c^rho(q, q^-1 q')`
    /// times `(q(rho), q^-1 q')`.
    pub fn theta(&self, n: &ModuleElement, m: &ModuleElement) -> Vector {
        let d = self.dual;
        let q = d.q();
        let mut out = vec![ZERO; self.b.dim()];
        for rho in 0..d.num_irreps() {
            for qa in 0..q.order() {
                let eta = &n.blocks[rho][qa];
                for qb in 0..q.order() {
                    let pairing = (eta * &m.blocks[rho][qb])[(0, 0)];
                    if pairing == ZERO {
                        continue;
                    }
                    let label = q.mul(q.inv(qa), qb);
                    out[d.groupoid_index(d.act(qa, rho), label)] += pairing / d.c(rho, qa, label);
                }
            }
        }
        out
    }

    fn random_m(&self, rng: &mut ChaCha8Rng) -> ModuleElement {
        let mut m = self.m_zero();
        for v in m.blocks.iter_mut().flatten() {
            *v = linalg::random_matrix(rng, v.nrows(), 1);
        }
        m
    }

    fn random_n(&self, rng: &mut ChaCha8Rng) -> ModuleElement {
        let mut n = self.n_zero();
        for v in n.blocks.iter_mut().flatten() {
            *v = linalg::random_matrix(rng, 1, v.ncols());
        }
        n
    }

    fn random_a(&self, rng: &mut ChaCha8Rng) -> CrossedElement {
        let mut a = self.a.zero();
        for v in a.blocks.iter_mut().flatten() {
            *v = linalg::random_matrix(rng, v.nrows(), v.ncols());
        }
        a
    }

    fn random_b(&self, rng: &mut ChaCha8Rng) -> Vector {
        (0..self.b.dim())
            .map(|_| linalg::c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    /// Bimodule axioms for `M` and `N`, bimodule-map identities for `Xi` and
    /// `Theta`, and the two compatibility identities, each on `samples`
    /// random inputs.
    pub fn check(&self, samples: usize, seed: u64, tol: f64) -> Vec<Check> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb1_0d);
        let mut worst = [0.0f64; 16];
        let names = [
            "M: unit of A acts trivially",
            "M: (a1 a2) m = a1 (a2 m)",
            "M: m (b1 b2) = (m b1) b2",
            "M: (a m) b = a (m b)",
            "N: n (a1 a2) = (n a1) a2",
            "N: (b1 b2) n = b1 (b2 n)",
            "N: (b n) a = b (n a)",
            "Xi(a m, n) = a Xi(m, n)",
            "Xi(m, n a) = Xi(m, n) a",
            "Xi(m b, n) = Xi(m, b n)",
            "Theta(b n, m) = b Theta(n, m)",
            "Theta(n, m b) = Theta(n, m) b",
            "Theta(n a, m) = Theta(n, a m)",
            "Xi(m, n) m' = m Theta(n, m')",
            "Theta(n, m) n' = n Xi(m, n')",
            "N: unit of B acts trivially",
        ];
        let unit_a = self.a.unit();
        let unit_b = self.b.unit().clone();
        for _ in 0..samples {
            let (m, m2) = (self.random_m(&mut rng), self.random_m(&mut rng));
            let (n, n2) = (self.random_n(&mut rng), self.random_n(&mut rng));
            let (a1, a2) = (self.random_a(&mut rng), self.random_a(&mut rng));
            let (b1, b2) = (self.random_b(&mut rng), self.random_b(&mut rng));
            let r = [
                self.act_a_m(&unit_a, &m).max_diff(&m),
                self.act_a_m(&self.a.mul(&a1, &a2), &m)
                    .max_diff(&self.act_a_m(&a1, &self.act_a_m(&a2, &m))),
                self.act_m_b(&m, &self.b.mul(&b1, &b2))
                    .max_diff(&self.act_m_b(&self.act_m_b(&m, &b1), &b2)),
                self.act_m_b(&self.act_a_m(&a1, &m), &b1)
                    .max_diff(&self.act_a_m(&a1, &self.act_m_b(&m, &b1))),
                self.act_n_a(&n, &self.a.mul(&a1, &a2))
                    .max_diff(&self.act_n_a(&self.act_n_a(&n, &a1), &a2)),
                self.act_b_n(&self.b.mul(&b1, &b2), &n)
                    .max_diff(&self.act_b_n(&b1, &self.act_b_n(&b2, &n))),
                self.act_n_a(&self.act_b_n(&b1, &n), &a1)
                    .max_diff(&self.act_b_n(&b1, &self.act_n_a(&n, &a1))),
                self.xi(&self.act_a_m(&a1, &m), &n)
                    .max_diff(&self.a.mul(&a1, &self.xi(&m, &n))),
                self.xi(&m, &self.act_n_a(&n, &a1))
                    .max_diff(&self.a.mul(&self.xi(&m, &n), &a1)),
                self.xi(&self.act_m_b(&m, &b1), &n)
                    .max_diff(&self.xi(&m, &self.act_b_n(&b1, &n))),
                algebra::max_diff(
                    &self.theta(&self.act_b_n(&b1, &n), &m),
                    &self.b.mul(&b1, &self.theta(&n, &m)),
                ),
                algebra::max_diff(
                    &self.theta(&n, &self.act_m_b(&m, &b1)),
                    &self.b.mul(&self.theta(&n, &m), &b1),
                ),
                algebra::max_diff(
                    &self.theta(&self.act_n_a(&n, &a1), &m),
                    &self.theta(&n, &self.act_a_m(&a1, &m)),
                ),
                self.act_a_m(&self.xi(&m, &n), &m2)
                    .max_diff(&self.act_m_b(&m, &self.theta(&n, &m2))),
                self.act_n_a(&n, &self.xi(&m, &n2))
                    .max_diff(&self.act_b_n(&self.theta(&n, &m), &n2)),
                self.act_b_n(&unit_b, &n).max_diff(&n),
            ];
            for (w, x) in worst.iter_mut().zip(r) {
                *w = w.max(x);
            }
        }
        let mut checks: Vec<Check> = names
            .iter()
            .zip(worst)
            .map(|(name, w)| Check::residual(*name, w, tol).with_details(json!({ "samples": samples })))
            .collect();
        checks.push(Check::residual(
            "sum_i Xi((xi_i,1),(eta^i,1)) = 1_A",
            self.unit_residual(),
            tol,
        ));
        let (rank_xi, rank_theta) = self.pairing_ranks();
        checks.push(
            Check::boolean("Xi is surjective", rank_xi == self.a.dim())
                .with_details(json!({ "rank": rank_xi, "dim": self.a.dim() })),
        );
        checks.push(
            Check::boolean("Theta is surjective", rank_theta == self.b.dim())
                .with_details(json!({ "rank": rank_theta, "dim": self.b.dim() })),
        );
        checks
    }

    /// `|sum_{rho,i} Xi((xi_i^rho,1),(eta^i_rho,1)) - 1_A|`
    pub fn unit_residual(&self) -> f64 {
        let d = self.dual;
        let mut total = self.a.zero();
        for rho in 0..d.num_irreps() {
            for i in 0..d.dim(rho) {
                total.add_assign(&self.xi(&self.m_basis(rho, i, 0), &self.n_basis(rho, i, 0)));
            }
        }
        total.max_diff(&self.a.unit())
    }

    /// Ranks of `Xi` and `Theta` on all pairs of basis vectors.
    pub fn pairing_ranks(&self) -> (usize, usize) {
        let d = self.dual;
        let m = d.q().order();
        let basis: Vec<(usize, usize, usize)> = (0..d.num_irreps())
            .flat_map(|r| (0..d.dim(r)).flat_map(move |i| (0..m).map(move |q| (r, i, q))))
            .collect();
        let mut xi_cols = Vec::new();
        let mut theta_cols = Vec::new();
        for &(r1, i1, q1) in &basis {
            let mb = self.m_basis(r1, i1, q1);
            let nb = self.n_basis(r1, i1, q1);
            for &(r2, i2, q2) in &basis {
                let x = self.xi(&mb, &self.n_basis(r2, i2, q2)).flatten();
                if algebra::norm_inf(&x) > 0.0 {
                    xi_cols.push(x);
                }
                let t = self.theta(&nb, &self.m_basis(r2, i2, q2));
                if algebra::norm_inf(&t) > 0.0 {
                    theta_cols.push(t);
                }
            }
        }
        let rank_of = |cols: &[Vector], rows: usize| {
            if cols.is_empty() {
                return 0;
            }
            linalg::rank(&CMat::from_fn(rows, cols.len(), |i, j| cols[j][i]), 1e-9)
        };
        (rank_of(&xi_cols, self.a.dim()), rank_of(&theta_cols, self.b.dim()))
    }

    /// `Phi(z) = sum_rho (1/dim) sum_i Theta((eta^i_rho,1), z (xi_i^rho,1))`,
    /// the center map induced by the bimodules.
    pub fn phi(&self, z: &CrossedElement) -> Vector {
        let d = self.dual;
        let mut out = vec![ZERO; self.b.dim()];
        for rho in 0..d.num_irreps() {
            let w = ONE / d.dim(rho) as f64;
            for i in 0..d.dim(rho) {
                let zm = self.act_a_m(z, &self.m_basis(rho, i, 0));
                let t = self.theta(&self.n_basis(rho, i, 0), &zm);
                out = algebra::add(&out, &algebra::scale(&t, w));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog_entry;
    use crate::mackey::DualOptions;

    fn dual(name: &str) -> DualData {
        DualData::compute(&catalog_entry(name).unwrap().extension, DualOptions::default()).unwrap()
    }

    #[test]
    fn theta_on_dual_basis_pair() {
        let d = dual("s4_over_z2");
        let bm = Bimodules::new(&d);
        let rho = (0..d.num_irreps()).find(|&r| d.dim(r) == 3).unwrap();
        let t = bm.theta(&bm.n_basis(rho, 1, 0), &bm.m_basis(rho, 1, 0));
        let mut expect = vec![ZERO; bm.b.dim()];
        expect[d.groupoid_index(rho, 0)] = ONE;
        assert!(algebra::max_diff(&t, &expect) < 1e-12);
    }

    #[test]
    fn morita_identities_hold() {
        for name in ["s3_split", "q8_over_k4", "s4_over_z2", "d4_split"] {
            let d = dual(name);
            let bm = Bimodules::new(&d);
            for c in bm.check(20, 1, 1e-9) {
                assert!(c.pass, "{name}: {} ({:e})", c.name, c.max_residual);
            }
        }
    }
}

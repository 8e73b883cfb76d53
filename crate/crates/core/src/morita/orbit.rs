//! Morita context between `B` and the twisted group algebra of one
//! stabilizer, on the delta basis of groupoid arrows.
//!
//! `M_k` is spanned by arrows `(rho_k, q)` leaving the representative and
//! `N_k` by arrows `(sigma_q, q)` with `q(sigma_q) = rho_k`; both are
//! indexed by `q` in `Q`.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{self, MonomialAlgebra, Vector};
use crate::linalg::{self, ZERO};
use crate::mackey::{DualData, StabilizerData};
use crate::report::Check;

pub struct OrbitMorita<'a> {
    dual: &'a DualData,
    stab: &'a StabilizerData,
    /// `sigma[q]` is the source of the arrow labelled `q` ending at `rho_k`.
    sigma: Vec<usize>,
}

impl<'a> OrbitMorita<'a> {
    pub fn new(dual: &'a DualData, stab: &'a StabilizerData) -> Self {
        let q = dual.q();
        let sigma = (0..q.order())
            .map(|a| dual.act(q.inv(a), stab.representative))
            .collect();
        Self { dual, stab, sigma }
    }

    fn rho(&self) -> usize {
        self.stab.representative
    }

    fn n(&self) -> usize {
        self.dual.q().order()
    }

    /// `u_{q0} delta_q = c^{rho_k}(q0, q) delta_{q0 q}`
    pub fn stab_m(&self, u: &[Complex64], m: &[Complex64]) -> Vector {
        let q = self.dual.q();
        let mut out = vec![ZERO; self.n()];
        for (i, &z) in u.iter().enumerate() {
            let q0 = self.stab.elems[i];
            for (a, &w) in m.iter().enumerate() {
                out[q.mul(q0, a)] += z * w * self.dual.c(self.rho(), q0, a);
            }
        }
        out
    }

    /// `delta_q (rho, q1) = c^{rho_k}(q, q1) delta_{q q1}` when `rho = q(rho_k)`
    pub fn m_b(&self, m: &[Complex64], b: &[Complex64]) -> Vector {
        let d = self.dual;
        let q = d.q();
        let mut out = vec![ZERO; self.n()];
        for (a, &w) in m.iter().enumerate() {
            let target = d.act(a, self.rho());
            for q1 in 0..q.order() {
                let z = b[d.groupoid_index(target, q1)];
                out[q.mul(a, q1)] += w * z * d.c(self.rho(), a, q1);
            }
        }
        out
    }

    /// `(rho0, q0) delta_q = c^{rho0}(q0, q) delta_{q0 q}` when `q0(rho0) = sigma_q`
    pub fn b_n(&self, b: &[Complex64], n: &[Complex64]) -> Vector {
        let d = self.dual;
        let q = d.q();
        let mut out = vec![ZERO; self.n()];
        for (a, &w) in n.iter().enumerate() {
            for rho0 in 0..d.num_irreps() {
                for q0 in 0..q.order() {
                    if d.act(q0, rho0) != self.sigma[a] {
                        continue;
                    }
                    let z = b[d.groupoid_index(rho0, q0)];
                    out[q.mul(q0, a)] += z * w * d.c(rho0, q0, a);
                }
            }
        }
        out
    }

    /// `delta_q u_{q0} = c^{sigma_q}(q, q0) delta_{q q0}`
    pub fn n_stab(&self, n: &[Complex64], u: &[Complex64]) -> Vector {
        let q = self.dual.q();
        let mut out = vec![ZERO; self.n()];
        for (a, &w) in n.iter().enumerate() {
            for (i, &z) in u.iter().enumerate() {
                let q0 = self.stab.elems[i];
                out[q.mul(a, q0)] += w * z * self.dual.c(self.sigma[a], a, q0);
            }
        }
        out
    }

    /// `X(delta_{q0}, delta_{q1}) = c^{rho_k}(q0, q1) u_{q0 q1}` when
    /// `sigma_{q1} = q0(rho_k)`.
    pub fn x(&self, m: &[Complex64], n: &[Complex64]) -> Vector {
        let q = self.dual.q();
        let mut out = vec![ZERO; self.stab.order()];
        for (a, &w) in m.iter().enumerate() {
            if w == ZERO {
                continue;
            }
            for (b, &v) in n.iter().enumerate() {
                if v == ZERO || self.sigma[b] != self.dual.act(a, self.rho()) {
                    continue;
                }
                let local = self.stab.local(q.mul(a, b)).expect("loop at rho_k");
                out[local] += w * v * self.dual.c(self.rho(), a, b);
            }
        }
        out
    }

    /// `Y(delta_{q0}, delta_{q1}) = c^{sigma_{q0}}(q0, q1) (sigma_{q0}, q0 q1)`
    pub fn y(&self, n: &[Complex64], m: &[Complex64]) -> Vector {
        let d = self.dual;
        let q = d.q();
        let mut out = vec![ZERO; d.num_irreps() * q.order()];
        for (a, &w) in n.iter().enumerate() {
            for (b, &v) in m.iter().enumerate() {
                let s = self.sigma[a];
                out[d.groupoid_index(s, q.mul(a, b))] += w * v * d.c(s, a, b);
            }
        }
        out
    }

    fn delta(&self, a: usize) -> Vector {
        let mut v = vec![ZERO; self.n()];
        v[a] = linalg::ONE;
        v
    }

    /// `I'_k(f) = (1/|Q|) sum_q c^{rho_k}(q, q^-1)^-1 X(delta_q f, delta_{q^-1})`
    pub fn i_prime(&self, f: &[Complex64]) -> Vector {
        let q = self.dual.q();
        let mut out = vec![ZERO; self.stab.order()];
        for a in 0..q.order() {
            let ainv = q.inv(a);
            let w = self.m_b(&self.delta(a), f);
            let x = self.x(&w, &self.delta(ainv));
            let z = linalg::ONE / self.dual.c(self.rho(), a, ainv) / q.order() as f64;
            out = algebra::add(&out, &algebra::scale(&x, z));
        }
        out
    }

    /// Bimodule axioms, bimodule-map identities for `X`, `Y`, the two
    /// compatibilities, and `(1/|Q|) sum_q c(q,q^-1)^-1 X(delta_q, delta_{q^-1}) = 1`.
    pub fn check(&self, samples: usize, seed: u64, tol: f64) -> Vec<Check> {
        let b_alg = self.dual.groupoid_algebra();
        let s_alg: MonomialAlgebra = self.stab.algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0b17);
        let rv = |rng: &mut ChaCha8Rng, n: usize| -> Vector {
            (0..n)
                .map(|_| linalg::c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        };
        let names = [
            "M_k: (u1 u2) m = u1 (u2 m)",
            "M_k: m (b1 b2) = (m b1) b2",
            "M_k: (u m) b = u (m b)",
            "N_k: (b1 b2) n = b1 (b2 n)",
            "N_k: n (u1 u2) = (n u1) u2",
            "N_k: (b n) u = b (n u)",
            "X(u m, n) = u X(m, n)",
            "X(m, n u) = X(m, n) u",
            "X(m b, n) = X(m, b n)",
            "Y(b n, m) = b Y(n, m)",
            "Y(n, m b) = Y(n, m) b",
            "Y(n u, m) = Y(n, u m)",
            "X(m, n) m' = m Y(n, m')",
            "Y(n, m) n' = n X(m, n')",
        ];
        let mut worst = [0.0f64; 14];
        let (nb, ns, nq) = (b_alg.dim(), s_alg.dim(), self.n());
        for _ in 0..samples {
            let (m, m2, n, n2) = (rv(&mut rng, nq), rv(&mut rng, nq), rv(&mut rng, nq), rv(&mut rng, nq));
            let (u1, u2) = (rv(&mut rng, ns), rv(&mut rng, ns));
            let (b1, b2) = (rv(&mut rng, nb), rv(&mut rng, nb));
            let md = algebra::max_diff;
            let r = [
                md(
                    &self.stab_m(&s_alg.mul(&u1, &u2), &m),
                    &self.stab_m(&u1, &self.stab_m(&u2, &m)),
                ),
                md(&self.m_b(&m, &b_alg.mul(&b1, &b2)), &self.m_b(&self.m_b(&m, &b1), &b2)),
                md(
                    &self.m_b(&self.stab_m(&u1, &m), &b1),
                    &self.stab_m(&u1, &self.m_b(&m, &b1)),
                ),
                md(&self.b_n(&b_alg.mul(&b1, &b2), &n), &self.b_n(&b1, &self.b_n(&b2, &n))),
                md(
                    &self.n_stab(&n, &s_alg.mul(&u1, &u2)),
                    &self.n_stab(&self.n_stab(&n, &u1), &u2),
                ),
                md(
                    &self.n_stab(&self.b_n(&b1, &n), &u1),
                    &self.b_n(&b1, &self.n_stab(&n, &u1)),
                ),
                md(&self.x(&self.stab_m(&u1, &m), &n), &s_alg.mul(&u1, &self.x(&m, &n))),
                md(&self.x(&m, &self.n_stab(&n, &u1)), &s_alg.mul(&self.x(&m, &n), &u1)),
                md(&self.x(&self.m_b(&m, &b1), &n), &self.x(&m, &self.b_n(&b1, &n))),
                md(&self.y(&self.b_n(&b1, &n), &m), &b_alg.mul(&b1, &self.y(&n, &m))),
                md(&self.y(&n, &self.m_b(&m, &b1)), &b_alg.mul(&self.y(&n, &m), &b1)),
                md(&self.y(&self.n_stab(&n, &u1), &m), &self.y(&n, &self.stab_m(&u1, &m))),
                md(&self.stab_m(&self.x(&m, &n), &m2), &self.m_b(&m, &self.y(&n, &m2))),
                md(&self.b_n(&self.y(&n, &m), &n2), &self.n_stab(&n, &self.x(&m, &n2))),
            ];
            for (w, x) in worst.iter_mut().zip(r) {
                *w = w.max(x);
            }
        }
        let k = self.stab.orbit;
        let mut checks: Vec<Check> = names
            .iter()
            .zip(worst)
            .map(|(name, w)| {
                Check::residual(format!("orbit {k}: {name}"), w, tol).with_details(json!({ "samples": samples }))
            })
            .collect();
        // normalized X reproduces the unit of the stabilizer algebra
        let q = self.dual.q();
        let mut unit = vec![ZERO; self.stab.order()];
        for a in 0..q.order() {
            let x = self.x(&self.delta(a), &self.delta(q.inv(a)));
            let z = linalg::ONE / self.dual.c(self.rho(), a, q.inv(a)) / q.order() as f64;
            unit = algebra::add(&unit, &algebra::scale(&x, z));
        }
        checks.push(Check::residual(
            format!("orbit {k}: normalized X(delta_q, delta_q^-1) averages to 1"),
            algebra::max_diff(&unit, s_alg.unit()),
            tol,
        ));
        checks
    }
}

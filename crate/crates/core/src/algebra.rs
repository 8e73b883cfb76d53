//! Finite-dimensional algebras whose basis products are scalar multiples of
//! basis elements (or zero): group algebras, twisted group algebras and
//! twisted groupoid algebras.

use num_complex::Complex64;

use crate::groups::FiniteGroup;
use crate::linalg::{self, CMat, ONE, ZERO};

pub type Vector = Vec<Complex64>;

#[derive(Debug, Clone)]
pub struct MonomialAlgebra {
    dim: usize,
    /// `table[i][j] = Some((k, z))` means `e_i e_j = z e_k`.
    table: Vec<Vec<Option<(usize, Complex64)>>>,
    unit: Vector,
}

impl MonomialAlgebra {
    pub fn new(table: Vec<Vec<Option<(usize, Complex64)>>>, unit: Vector) -> Self {
        Self {
            dim: table.len(),
            table,
            unit,
        }
    }

    /// `C[G]` with basis the group elements.
    pub fn group_algebra(g: &FiniteGroup) -> Self {
        Self::twisted_group_algebra(g, &vec![vec![ONE; g.order()]; g.order()])
    }

    /// `C(G, c)` with `u_a u_b = c(a, b) u_{ab}`.
    pub fn twisted_group_algebra(g: &FiniteGroup, c: &[Vec<Complex64>]) -> Self {
        let n = g.order();
        let table = (0..n)
            .map(|a| (0..n).map(|b| Some((g.mul(a, b), c[a][b]))).collect())
            .collect();
        let mut unit = vec![ZERO; n];
        unit[0] = ONE / c[0][0];
        Self::new(table, unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn basis_mul(&self, i: usize, j: usize) -> Option<(usize, Complex64)> {
        self.table[i][j]
    }

    pub fn basis(&self, i: usize) -> Vector {
        let mut v = vec![ZERO; self.dim];
        v[i] = ONE;
        v
    }

    pub fn mul(&self, a: &[Complex64], b: &[Complex64]) -> Vector {
        let mut out = vec![ZERO; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == ZERO {
                    continue;
                }
                if let Some((k, z)) = self.table[i][j] {
                    out[k] += x * y * z;
                }
            }
        }
        out
    }

    /// Largest `|(ab)c - a(bc)|` over all basis triples.
    pub fn associativity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let left = self.table[i][j].and_then(|(ij, z)| self.table[ij][k].map(|(r, w)| (r, z * w)));
                    let right = self.table[j][k].and_then(|(jk, z)| self.table[i][jk].map(|(r, w)| (r, z * w)));
                    let r = match (left, right) {
                        (None, None) => 0.0,
                        (Some((_, z)), None) | (None, Some((_, z))) => z.norm(),
                        (Some((a, z)), Some((b, w))) if a == b => (z - w).norm(),
                        (Some((_, z)), Some((_, w))) => z.norm().max(w.norm()),
                    };
                    worst = worst.max(r);
                }
            }
        }
        worst
    }

    /// Matrix of `f -> f e_i - e_i f` stacked over all `i`.
    pub fn commutator_system(&self) -> CMat {
        let n = self.dim;
        let mut m = CMat::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                // column j: e_j e_i - e_i e_j
                if let Some((k, z)) = self.table[j][i] {
                    m[(i * n + k, j)] += z;
                }
                if let Some((k, z)) = self.table[i][j] {
                    m[(i * n + k, j)] -= z;
                }
            }
        }
        m
    }

    /// Basis of the center as columns, by solving the commutant equations.
    pub fn center_basis(&self, tol: f64) -> CMat {
        linalg::nullspace(&self.commutator_system(), tol)
    }

    /// Center restricted to elements supported on `support`.
    pub fn center_basis_on(&self, support: &[usize], tol: f64) -> CMat {
        let full = self.commutator_system();
        let sub = CMat::from_fn(full.nrows(), support.len(), |r, k| full[(r, support[k])]);
        let null = linalg::nullspace(&sub, tol);
        CMat::from_fn(self.dim, null.ncols(), |r, k| {
            support.iter().position(|&s| s == r).map_or(ZERO, |p| null[(p, k)])
        })
    }

    /// Largest `|f e_i - e_i f|` over basis elements.
    pub fn central_residual(&self, f: &[Complex64]) -> f64 {
        (0..self.dim)
            .map(|i| {
                let e = self.basis(i);
                let a = self.mul(f, &e);
                let b = self.mul(&e, f);
                a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn norm_inf(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn scale(a: &[Complex64], z: Complex64) -> Vector {
    a.iter().map(|x| x * z).collect()
}

pub fn add(a: &[Complex64], b: &[Complex64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn column(m: &CMat, k: usize) -> Vector {
    m.column(k).iter().copied().collect()
}

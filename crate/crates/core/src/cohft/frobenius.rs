//! Commutative Frobenius algebras spanned by (twisted) class sums, with
//! correlators `tr(x_1 ... x_n K^g)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{self, MonomialAlgebra, Vector};
use crate::error::{Error, Result};
use crate::groups::{conjugacy_classes, FiniteGroup};
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::mackey::StabilizerData;

/// Largest condition number of the Gram matrix accepted as non-degenerate.
pub const MAX_CONDITION: f64 = 1e10;

/// One basis element `e_<q>` of the center.
#[derive(Debug, Clone, Serialize)]
pub struct ClassLabel {
    /// Index of the class in the group's conjugacy classification.
    pub class: usize,
    pub representative: usize,
    pub size: usize,
    pub centralizer_order: usize,
    /// Position of `e_<q^-1>` in the basis.
    pub inverse: usize,
}

#[derive(Debug, Clone)]
pub struct FrobeniusData {
    algebra: MonomialAlgebra,
    /// Center basis in the coordinates of the ambient algebra.
    pub basis: Vec<Vector>,
    pub labels: Vec<ClassLabel>,
    /// `tr(x) = sum_i trace[i] x_i`.
    trace: Vector,
    pub gram: CMat,
    pub condition: f64,
    /// `tr(e_a e^b) = delta_ab`.
    pub dual_basis: Vec<Vector>,
    /// `K = sum_a e_a e^a`.
    pub handle: Vector,
}

impl FrobeniusData {
    pub fn new(algebra: MonomialAlgebra, basis: Vec<Vector>, labels: Vec<ClassLabel>, trace: Vector) -> Result<Self> {
        let n = basis.len();
        let tr = |x: &[Complex64]| -> Complex64 { x.iter().zip(&trace).map(|(a, b)| a * b).sum() };
        let gram = CMat::from_fn(n, n, |a, b| tr(&algebra.mul(&basis[a], &basis[b])));
        let condition = if n == 0 { 1.0 } else { linalg::condition_number(&gram) };
        if !(condition < MAX_CONDITION) {
            return Err(Error::SingularPairing { cond: condition });
        }
        let inv = gram
            .clone()
            .try_inverse()
            .ok_or(Error::SingularPairing { cond: condition })?;
        let dual_basis: Vec<Vector> = (0..n)
            .map(|a| {
                (0..n).fold(vec![ZERO; algebra.dim()], |acc, b| {
                    algebra::add(&acc, &algebra::scale(&basis[b], inv[(b, a)]))
                })
            })
            .collect();
        let handle = (0..n).fold(vec![ZERO; algebra.dim()], |acc, a| {
            algebra::add(&acc, &algebra.mul(&basis[a], &dual_basis[a]))
        });
        Ok(Self {
            algebra,
            basis,
            labels,
            trace,
            gram,
            condition,
            dual_basis,
            handle,
        })
    }

    /// `Z(C[H])` on the class sums with `tr(f) = f(1)/|H|`.
    pub fn group_center(group: &FiniteGroup) -> Result<Self> {
        let n = group.order();
        Self::twisted_center(group, &vec![vec![ONE; n]; n])
    }

    /// `Z(C(K, c))` on the normalized twisted class sums of the c-regular
    /// classes, with `tr(x) = c(1,1) x_1 / |K|`.
    ///
    /// Each `e_<q>` has unit-modulus coefficients on its class, and
    /// `e_<q^-1> = e_<q>^*` so that `tr(e_<q> e_<q^-1>) = 1/|C(q)|`.
    pub fn twisted_center(group: &FiniteGroup, c: &[Vec<Complex64>]) -> Result<Self> {
        let alg = MonomialAlgebra::twisted_group_algebra(group, c);
        let n = group.order();
        let cc = conjugacy_classes(group);
        let inverse_u = |x: usize| -> Vector {
            let xi = group.inv(x);
            algebra::scale(&alg.basis(xi), ONE / (c[x][xi] * c[0][0]))
        };
        let star = |v: &[Complex64]| -> Vector {
            let mut out = vec![ZERO; n];
            for (x, z) in v.iter().enumerate() {
                if *z != ZERO {
                    out[group.inv(x)] += z.conj() / (c[x][group.inv(x)] * c[0][0]);
                }
            }
            out
        };
        let mut elems: Vec<Option<Vector>> = vec![None; cc.num_classes()];
        for k in 0..cc.num_classes() {
            if elems[k].is_some() || !is_regular(group, c, cc.representative(k)) {
                continue;
            }
            let q = cc.representative(k);
            let uq = alg.basis(q);
            let mut z = vec![ZERO; n];
            for x in 0..n {
                z = algebra::add(&z, &alg.mul(&alg.mul(&alg.basis(x), &uq), &inverse_u(x)));
            }
            let e = algebra::scale(&z, ONE / z[q]);
            let ki = cc.inverse_class(group, k);
            if ki == k {
                let mu = star(&e)[q] / e[q];
                elems[k] = Some(algebra::scale(&e, mu.sqrt()));
            } else {
                elems[ki] = Some(star(&e));
                elems[k] = Some(e);
            }
        }
        let regular: Vec<usize> = (0..cc.num_classes()).filter(|&k| elems[k].is_some()).collect();
        let labels = regular
            .iter()
            .map(|&k| ClassLabel {
                class: k,
                representative: cc.representative(k),
                size: cc.classes[k].len(),
                centralizer_order: cc.centralizer_orders[k],
                inverse: regular
                    .iter()
                    .position(|&j| j == cc.inverse_class(group, k))
                    .expect("inverse of a regular class is regular"),
            })
            .collect();
        let basis = regular.iter().map(|&k| elems[k].clone().unwrap()).collect();
        let mut trace = vec![ZERO; n];
        trace[0] = c[0][0] / n as f64;
        Self::new(alg, basis, labels, trace)
    }

    /// Twisted center of a stabilizer with its restricted cocycle.
    pub fn stabilizer_center(stab: &StabilizerData) -> Result<Self> {
        Self::twisted_center(&stab.group, &stab.c)
    }

    pub fn algebra(&self) -> &MonomialAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn unit(&self) -> &Vector {
        self.algebra.unit()
    }

    pub fn trace(&self, x: &[Complex64]) -> Complex64 {
        x.iter().zip(&self.trace).map(|(a, b)| a * b).sum()
    }

    pub fn mul(&self, a: &[Complex64], b: &[Complex64]) -> Vector {
        self.algebra.mul(a, b)
    }

    /// `tr(x_1 ... x_n K^g)`.
    pub fn correlator(&self, genus: usize, insertions: &[Vector]) -> Complex64 {
        let mut acc = self.unit().clone();
        for x in insertions {
            acc = self.mul(&acc, x);
        }
        for _ in 0..genus {
            acc = self.mul(&acc, &self.handle);
        }
        self.trace(&acc)
    }

    /// Correlator of basis elements given by position.
    pub fn basis_correlator(&self, genus: usize, indices: &[usize]) -> Complex64 {
        let ins: Vec<Vector> = indices.iter().map(|&a| self.basis[a].clone()).collect();
        self.correlator(genus, &ins)
    }

    /// Largest `|K x - x K|` over the basis of the ambient algebra.
    pub fn handle_central_residual(&self) -> f64 {
        self.algebra.central_residual(&self.handle)
    }

    /// `max |G - G^T|`.
    pub fn symmetry_residual(&self) -> f64 {
        linalg::max_abs_diff(&self.gram, &self.gram.transpose())
    }

    /// `max |tr(e_a e_b) - delta_{b, a^-1} / |C(a)||`.
    pub fn normalization_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, la) in self.labels.iter().enumerate() {
            for b in 0..self.dim() {
                let expect = if b == la.inverse {
                    1.0 / la.centralizer_order as f64
                } else {
                    0.0
                };
                worst = worst.max((self.gram[(a, b)] - expect).norm());
            }
        }
        worst
    }

    /// Expansion coefficients of a central element in the basis.
    pub fn coordinates(&self, x: &[Complex64]) -> Vector {
        self.dual_basis.iter().map(|d| self.trace(&self.mul(x, d))).collect()
    }
}

/// `c(q1, q) = c(q, q1)` for every `q1` commuting with `q`.
pub fn is_regular(group: &FiniteGroup, c: &[Vec<Complex64>], q: usize) -> bool {
    (0..group.order())
        .filter(|&x| group.mul(x, q) == group.mul(q, x))
        .all(|x| (c[x][q] / c[q][x] - ONE).norm() < 1e-8)
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularClass {
    /// Representative as an element of `Q`.
    pub representative: usize,
    pub size: usize,
    pub regular: bool,
}

/// c-regular classes of one stabilizer.
#[derive(Debug, Clone, Serialize)]
pub struct RegularClassReport {
    pub orbit: usize,
    pub irrep: usize,
    pub stabilizer_order: usize,
    pub classes: Vec<RegularClass>,
    pub regular_count: usize,
    /// Dimension of the center of `C(Stab, c)` from a commutant solve.
    pub center_dim: usize,
}

pub fn c_regular_classes(stab: &StabilizerData, tol: f64) -> RegularClassReport {
    let cc = conjugacy_classes(&stab.group);
    let classes: Vec<RegularClass> = (0..cc.num_classes())
        .map(|k| RegularClass {
            representative: stab.elems[cc.representative(k)],
            size: cc.classes[k].len(),
            regular: is_regular(&stab.group, &stab.c, cc.representative(k)),
        })
        .collect();
    RegularClassReport {
        orbit: stab.orbit,
        irrep: stab.representative,
        stabilizer_order: stab.order(),
        regular_count: classes.iter().filter(|c| c.regular).count(),
        classes,
        center_dim: stab.algebra().center_basis(tol).ncols(),
    }
}

//! The crossed product `(⊕_rho End V_rho) x_{T,tau} Q` and the map from the
//! group algebra of `H` into it.

use num_complex::Complex64;

use super::DualData;
use crate::algebra::Vector;
use crate::linalg::{self, CMat, ZERO};

/// `blocks[q][rho]` is the `End(V_rho)` component at label `q`.
#[derive(Debug, Clone)]
pub struct CrossedElement {
    pub blocks: Vec<Vec<CMat>>,
}

impl CrossedElement {
    pub fn max_diff(&self, other: &CrossedElement) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
            .map(|(a, b)| linalg::max_abs_diff(a, b))
            .fold(0.0, f64::max)
    }

    pub fn add_assign(&mut self, other: &CrossedElement) {
        for (a, b) in self.blocks.iter_mut().flatten().zip(other.blocks.iter().flatten()) {
            *a += b;
        }
    }

    pub fn scale(&self, z: Complex64) -> CrossedElement {
        CrossedElement {
            blocks: self
                .blocks
                .iter()
                .map(|row| row.iter().map(|m| m * z).collect())
                .collect(),
        }
    }

    /// Coefficients in a fixed order (labels, then irreps, then entries
    /// row-major).
    pub fn flatten(&self) -> Vector {
        let mut v = Vec::new();
        for m in self.blocks.iter().flatten() {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    v.push(m[(i, j)]);
                }
            }
        }
        v
    }
}

pub struct CrossedProduct<'a> {
    dual: &'a DualData,
}

impl<'a> CrossedProduct<'a> {
    pub fn new(dual: &'a DualData) -> Self {
        Self { dual }
    }

    pub fn dim(&self) -> usize {
        let d = self.dual;
        (0..d.num_irreps()).map(|r| d.dim(r) * d.dim(r)).sum::<usize>() * d.q().order()
    }

    pub fn zero(&self) -> CrossedElement {
        let d = self.dual;
        CrossedElement {
            blocks: (0..d.q().order())
                .map(|_| (0..d.num_irreps()).map(|r| CMat::zeros(d.dim(r), d.dim(r))).collect())
                .collect(),
        }
    }

    pub fn unit(&self) -> CrossedElement {
        let mut x = self.zero();
        for (r, m) in x.blocks[0].iter_mut().enumerate() {
            *m = linalg::identity(self.dual.dim(r));
        }
        x
    }

    /// `(x_rho, q1)(y_{q1 rho}, q2) = (x T_{q1}^{rho dagger} y T_{q1}^rho rho(tau(q1,q2)), q1 q2)`
    pub fn mul(&self, a: &CrossedElement, b: &CrossedElement) -> CrossedElement {
        let d = self.dual;
        let q = d.q();
        let mut out = self.zero();
        for q1 in 0..q.order() {
            for rho in 0..d.num_irreps() {
                let x = &a.blocks[q1][rho];
                if linalg::max_abs(x) == 0.0 {
                    continue;
                }
                let t = d.t(q1, rho);
                let target = d.act(q1, rho);
                for q2 in 0..q.order() {
                    let y = &b.blocks[q2][target];
                    if linalg::max_abs(y) == 0.0 {
                        continue;
                    }
                    let prod = x * t.adjoint() * y * t * d.rho(rho, d.ext.tau(q1, q2));
                    out.blocks[q.mul(q1, q2)][rho] += prod;
                }
            }
        }
        out
    }

    /// `chi(g, q) = sum_rho (rho(g), q)`
    pub fn chi(&self, g: usize, q: usize) -> CrossedElement {
        let mut x = self.zero();
        for (r, m) in x.blocks[q].iter_mut().enumerate() {
            *m = self.dual.rho(r, g).clone();
        }
        x
    }

    /// `chi(alpha(h))` for `h` in `H`.
    pub fn chi_alpha(&self, h: usize) -> CrossedElement {
        let (g, q) = self.dual.ext.alpha(h);
        self.chi(g, q)
    }

    /// Linear extension of `chi o alpha` to the group algebra of `H`.
    pub fn from_group_algebra(&self, f: &[Complex64]) -> CrossedElement {
        let mut x = self.zero();
        for (h, &z) in f.iter().enumerate() {
            if z != ZERO {
                x.add_assign(&self.chi_alpha(h).scale(z));
            }
        }
        x
    }

    /// Inverse of [`CrossedProduct::from_group_algebra`] by Fourier
    /// inversion: `f(g,q) = (1/|G|) sum_rho dim tr(rho(g^-1) x_{q,rho})`.
    pub fn to_group_algebra(&self, x: &CrossedElement) -> Vector {
        let d = self.dual;
        let (n, m) = (d.ext.g.order(), d.q().order());
        let mut f = vec![ZERO; n * m];
        for q in 0..m {
            for g in 0..n {
                let ginv = d.ext.g.inv(g);
                let s: Complex64 = (0..d.num_irreps())
                    .map(|r| linalg::trace(&(d.rho(r, ginv) * &x.blocks[q][r])) * d.dim(r) as f64)
                    .sum();
                f[d.ext.alpha_inv(g, q)] = s / n as f64;
            }
        }
        f
    }

    /// Largest `|chi(alpha(ab)) - chi(alpha(a)) chi(alpha(b))|` over all pairs.
    pub fn multiplicativity_residual(&self) -> f64 {
        let h = &self.dual.ext.h;
        let images: Vec<CrossedElement> = (0..h.order()).map(|x| self.chi_alpha(x)).collect();
        let mut worst: f64 = 0.0;
        for a in 0..h.order() {
            for b in 0..h.order() {
                let p = self.mul(&images[a], &images[b]);
                worst = worst.max(p.max_diff(&images[h.mul(a, b)]));
            }
        }
        worst
    }

    /// Rank of the images of the group basis of `H`.
    pub fn image_rank(&self) -> usize {
        let h = self.dual.ext.h.order();
        let cols: Vec<Vector> = (0..h).map(|x| self.chi_alpha(x).flatten()).collect();
        let m = CMat::from_fn(cols[0].len(), h, |i, j| cols[j][i]);
        linalg::rank(&m, 1e-9)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog_entry;
    use crate::mackey::DualOptions;

    #[test]
    fn identity_maps_to_unit() {
        let e = catalog_entry("s3_split").unwrap().extension;
        let d = DualData::compute(&e, DualOptions::default()).unwrap();
        let a = d.crossed_product();
        assert!(a.chi_alpha(0).max_diff(&a.unit()) < 1e-12);
    }

    #[test]
    fn chi_alpha_is_an_isomorphism() {
        for name in ["s3_split", "q8_over_k4", "s4_over_z2", "s4_over_s3"] {
            let e = catalog_entry(name).unwrap().extension;
            let d = DualData::compute(&e, DualOptions::default()).unwrap();
            let a = d.crossed_product();
            assert_eq!(a.dim(), e.h.order());
            assert!(a.multiplicativity_residual() < 1e-9, "{name}");
            assert_eq!(a.image_rank(), e.h.order(), "{name}");
            // Fourier inversion recovers delta functions
            for h in 0..e.h.order() {
                let f = a.to_group_algebra(&a.chi_alpha(h));
                for (x, z) in f.iter().enumerate() {
                    let expect = if x == h { 1.0 } else { 0.0 };
                    assert!((z - expect).norm() < 1e-9);
                }
            }
        }
    }
}

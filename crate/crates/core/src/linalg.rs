//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn unitarity_residual(m: &CMat) -> f64 {
    max_abs_diff(&(m.adjoint() * m), &identity(m.ncols()))
}

pub fn trace(m: &CMat) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Matrix with independent standard complex Gaussian-like entries drawn
/// uniformly from the unit square; good enough for generic-position draws.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let a = random_matrix(rng, n, n);
    (&a + a.adjoint()).scale(0.5)
}

/// Orthonormal basis (as columns) of the null space of `m`, using singular
/// values below `tol` relative to the largest one.
pub fn nullspace(m: &CMat, tol: f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    // pad to at least square so that V is complete
    let padded = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    let null_rows: Vec<usize> = (0..vt.nrows())
        .filter(|&k| svd.singular_values[k] <= tol * smax)
        .collect();
    let mut out = CMat::zeros(cols, null_rows.len());
    for (j, &k) in null_rows.iter().enumerate() {
        for i in 0..cols {
            out[(i, j)] = vt[(k, i)].conj();
        }
    }
    out
}

/// Numerical rank with singular values above `tol` relative to the largest.
pub fn rank(m: &CMat, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Ratio of largest to smallest singular value.
pub fn condition_number(m: &CMat) -> f64 {
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Solves `m x = b` for square invertible `m` via LU.
pub fn solve(m: &CMat, b: &CMat) -> Option<CMat> {
    m.clone().lu().solve(b)
}

/// Rounds to 12 decimals and clears negative zero, for stable output.
pub fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let n = nullspace(&m, 1e-10);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&m * &n)) < 1e-12);
        assert!(unitarity_residual(&n) < 1e-12);
    }

    #[test]
    fn rank_and_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(&mut rng, 4, 2);
        let b = &a * a.adjoint();
        assert_eq!(rank(&b, 1e-10), 2);
        assert!(condition_number(&b) > 1e10);
        assert!(condition_number(&identity(3)) < 1.0 + 1e-12);
    }

    #[test]
    fn rounding_clears_negative_zero() {
        assert_eq!(round12(-1e-15).to_bits(), 0.0f64.to_bits());
        assert_eq!(round12(0.1234567890123456), 0.123456789012);
    }
}

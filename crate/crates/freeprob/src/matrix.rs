//! Dense complex square matrices of small dimension.
//!
//! These model the coefficient algebra `B = M_k(C)`: ambient dimensions stay
//! in the single digits, so everything is a plain row-major `Vec<Complex64>`
//! with no blocking or factorization machinery. A small cyclic-Jacobi
//! eigensolver for real symmetric matrices covers the two places spectra are
//! needed: positive-semidefiniteness of covariance data and spectral norms.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense complex `k x k` matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// `z * I`.
    pub fn scalar(dim: usize, z: Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = z;
        }
        m
    }

    /// The 1x1 matrix holding a single complex number.
    pub fn from_complex(z: Complex64) -> Self {
        SquareMatrix {
            dim: 1,
            entries: vec![z],
        }
    }

    /// Matrix unit `E_{rs}` (1 at row r, column s, zero elsewhere).
    pub fn unit(dim: usize, r: usize, s: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(r, s)] = Complex64::ONE;
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(
                row.len(),
                dim,
                "rows of a square matrix must have length dim"
            );
            entries.extend_from_slice(row);
        }
        SquareMatrix { dim, entries }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for s in 0..dim {
                m[(r, s)] = f(r, s);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The single entry of a 1x1 matrix.
    pub fn as_complex(&self) -> Complex64 {
        assert_eq!(self.dim, 1, "as_complex is only defined for 1x1 matrices");
        self.entries[0]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, s| self[(s, r)].conj())
    }

    pub fn scale(&self, z: Complex64) -> Self {
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * z).collect(),
        }
    }

    /// Selfadjoint part `(M + M*) / 2`.
    pub fn re_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale(Complex64::new(0.5, 0.0))
    }

    /// Antiselfadjoint part divided by i: `(M - M*) / 2i`, itself selfadjoint.
    pub fn im_part(&self) -> Self {
        let adj = self.adjoint();
        (self - &adj).scale(Complex64::new(0.0, -0.5))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn is_selfadjoint(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Operator 2-norm: square root of the top eigenvalue of `M* M`.
    pub fn spectral_norm(&self) -> f64 {
        let gram = &self.adjoint() * self;
        hermitian_eigenvalues(&gram)
            .into_iter()
            .fold(0.0_f64, f64::max)
            .max(0.0)
            .sqrt()
    }

    /// Writes `block` (of dimension `bdim`) at block position `(br, bs)` of a
    /// matrix partitioned into `bdim x bdim` tiles.
    pub fn set_block(&mut self, br: usize, bs: usize, block: &SquareMatrix) {
        let b = block.dim;
        assert!(self.dim.is_multiple_of(b) && (br + 1) * b <= self.dim && (bs + 1) * b <= self.dim);
        for r in 0..b {
            for s in 0..b {
                self[(br * b + r, bs * b + s)] = block[(r, s)];
            }
        }
    }

    /// Reads the `bdim x bdim` tile at block position `(br, bs)`.
    pub fn block(&self, br: usize, bs: usize, bdim: usize) -> SquareMatrix {
        SquareMatrix::from_fn(bdim, |r, s| self[(br * bdim + r, bs * bdim + s)])
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = Complex64;
    fn index(&self, (r, s): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.dim + s]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (r, s): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.dim + s]
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix(dim={})", self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|s| format!("{:.4}{:+.4}i", self[(r, s)].re, self[(r, s)].im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &SquareMatrix {
    type Output = SquareMatrix;
    fn add(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix addition needs equal dimensions");
        SquareMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SquareMatrix {
    type Output = SquareMatrix;
    fn sub(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(
            self.dim, rhs.dim,
            "matrix subtraction needs equal dimensions"
        );
        SquareMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &SquareMatrix {
    type Output = SquareMatrix;
    fn neg(self) -> SquareMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product needs equal dimensions");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for r in 0..n {
            for t in 0..n {
                let a = self[(r, t)];
                if a == Complex64::ZERO {
                    continue;
                }
                for s in 0..n {
                    out[(r, s)] += a * rhs[(t, s)];
                }
            }
        }
        out
    }
}

/// Random matrix with independent complex Gaussian entries (unit variance).
pub fn random_complex(dim: usize, rng: &mut impl Rng) -> SquareMatrix {
    SquareMatrix::from_fn(dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Random selfadjoint matrix: Gaussian-entry matrix symmetrized as `(M + M*) / 2`.
pub fn random_selfadjoint(dim: usize, rng: &mut impl Rng) -> SquareMatrix {
    random_complex(dim, rng).re_part()
}

/// Eigenvalues and eigenvectors of a real symmetric matrix (row-major, `n x n`)
/// by cyclic Jacobi rotations. Returns `(values, vectors)` with `vectors[j]`
/// the eigenvector for `values[j]`.
pub fn sym_eigen(mat: &[f64], n: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert_eq!(mat.len(), n * n);
    let mut a = mat.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = mat.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p * n + i];
                    let aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let vectors: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| v[i * n + j]).collect())
        .collect();
    (values, vectors)
}

/// Eigenvalues of a complex Hermitian matrix via the real `2k x 2k` embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of the input, doubled.
pub fn hermitian_eigenvalues(m: &SquareMatrix) -> Vec<f64> {
    let k = m.dim();
    let n = 2 * k;
    let mut real = vec![0.0; n * n];
    for r in 0..k {
        for s in 0..k {
            let z = m[(r, s)];
            real[r * n + s] = z.re;
            real[r * n + (s + k)] = -z.im;
            real[(r + k) * n + s] = z.im;
            real[(r + k) * n + (s + k)] = z.re;
        }
    }
    let (mut vals, _) = sym_eigen(&real, n);
    // Each eigenvalue appears twice; keep one copy of each pair.
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (0..k).map(|i| vals[2 * i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_adjoint() {
        let a = SquareMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0)],
        ]);
        let b = SquareMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let ab = &a * &b;
        // (AB)* = B* A*
        let lhs = ab.adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn selfadjoint_parts() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m = random_complex(3, &mut rng);
        let re = m.re_part();
        let im = m.im_part();
        assert!(re.is_selfadjoint(1e-14));
        assert!(im.is_selfadjoint(1e-14));
        // M = Re(M) + i Im(M)
        let rebuilt = &re + &im.scale(c(0.0, 1.0));
        assert!(rebuilt.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn jacobi_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let (mut vals, vecs) = sym_eigen(&[2.0, 1.0, 1.0, 2.0], 2);
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        for v in vecs {
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_norm_diag() {
        let mut d = SquareMatrix::zeros(3);
        d[(0, 0)] = c(-4.0, 0.0);
        d[(1, 1)] = c(2.0, 0.0);
        d[(2, 2)] = c(0.0, 3.0);
        assert!((d.spectral_norm() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn spectral_norm_of_hermitian_power() {
        // For selfadjoint A, |A^3| = |A|^3 exactly.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a = random_selfadjoint(3, &mut rng);
        let a3 = &(&a * &a) * &a;
        assert!((a3.spectral_norm() - a.spectral_norm().powi(3)).abs() < 1e-9);
    }
}

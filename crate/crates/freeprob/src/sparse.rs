//! Column-major sparse complex matrices.
//!
//! Fock-space operators are huge and almost empty (a handful of entries per
//! column), and everything downstream is either operator-on-vector folds or
//! small products, so a plain `Vec<Vec<(row, value)>>` per column is all the
//! structure needed.

use num_complex::Complex64;

/// Square sparse matrix; `cols[c]` lists `(row, value)` sorted by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat {
    dim: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMat {
    pub fn zeros(dim: usize) -> Self {
        SparseMat {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for c in 0..dim {
            m.cols[c].push((c, Complex64::ONE));
        }
        m
    }

    /// Builds from `(row, col, value)` triplets, summing duplicates and
    /// dropping exact zeros.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut cols: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r},{c}) outside dim {dim}");
            cols[c].push((r, v));
        }
        for col in &mut cols {
            col.sort_by_key(|&(r, _)| r);
            let mut compact: Vec<(usize, Complex64)> = Vec::with_capacity(col.len());
            for &(r, v) in col.iter() {
                match compact.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => compact.push((r, v)),
                }
            }
            compact.retain(|&(_, v)| v != Complex64::ZERO);
            *col = compact;
        }
        SparseMat { dim, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn col(&self, c: usize) -> &[(usize, Complex64)] {
        &self.cols[c]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    /// Matrix-vector product `self * x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "vector length must match dimension");
        let mut y = vec![Complex64::ZERO; self.dim];
        for (c, &xc) in x.iter().enumerate() {
            if xc == Complex64::ZERO {
                continue;
            }
            for &(r, v) in &self.cols[c] {
                y[r] += v * xc;
            }
        }
        y
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.entries().map(|(r, c, v)| (c, r, v.conj())))
    }

    /// Matrix product `self * rhs` by combining columns of `self`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product needs equal dimensions");
        let mut cols: Vec<Vec<(usize, Complex64)>> = Vec::with_capacity(self.dim);
        let mut scratch = vec![Complex64::ZERO; self.dim];
        for j in 0..self.dim {
            let mut touched: Vec<usize> = Vec::new();
            for &(t, w) in &rhs.cols[j] {
                for &(r, v) in &self.cols[t] {
                    if scratch[r] == Complex64::ZERO {
                        touched.push(r);
                    }
                    scratch[r] += v * w;
                }
            }
            touched.sort_unstable();
            let col: Vec<(usize, Complex64)> = touched
                .iter()
                .map(|&r| (r, scratch[r]))
                .filter(|&(_, v)| v != Complex64::ZERO)
                .collect();
            for &r in &touched {
                scratch[r] = Complex64::ZERO;
            }
            cols.push(col);
        }
        SparseMat {
            dim: self.dim,
            cols,
        }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|&(r, v)| (r, v * z)).collect())
            .collect();
        SparseMat {
            dim: self.dim,
            cols,
        }
    }

    /// `Σ z_i * M_i` over matrices of one dimension.
    pub fn linear_combination(terms: &[(Complex64, &SparseMat)]) -> Self {
        assert!(
            !terms.is_empty(),
            "empty linear combination has no dimension"
        );
        let dim = terms[0].1.dim;
        Self::from_triplets(
            dim,
            terms.iter().flat_map(|&(z, m)| {
                assert_eq!(m.dim, dim, "linear combination needs equal dimensions");
                m.entries().map(move |(r, c, v)| (r, c, z * v))
            }),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        let neg = other.scale(-Complex64::ONE);
        SparseMat::linear_combination(&[(Complex64::ONE, self), (Complex64::ONE, &neg)]).max_abs()
    }
}

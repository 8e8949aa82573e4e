//! Cyclic block-coefficient matrices in `M_n(M_m) ≅ M_{nm}` whose ordered
//! products single out the identity permutation after corner compression.
//! The full products of cyclically shifted factors are themselves nonzero
//! (a diagonal block carries the inner matrix), so the raw product does not
//! vanish for those shifts; each report records both readings.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use itertools::Itertools;

pub const MAX_TENSOR_LENGTH: usize = 6;

/// `B_1, ..., B_n` in block form: factor `j` (1-based) carries its only
/// nonzero `m x m` block at position `(j, j+1 mod n)`, equal to the inner
/// matrix for `j = 1` and to the identity otherwise.
pub struct CyclicCoefficients {
    n: usize,
    m: usize,
    inner: SquareMatrix,
    bs: Vec<SquareMatrix>,
}

pub fn build_cyclic_coefficients(
    n: usize,
    m: usize,
    inner: &SquareMatrix,
) -> Result<CyclicCoefficients> {
    if n < 2 {
        return Err(Error::Degenerate(
            "cyclic coefficients need at least two factors",
        ));
    }
    if n > MAX_TENSOR_LENGTH {
        return Err(Error::SizeLimit {
            what: "tensor length",
            requested: n,
            limit: MAX_TENSOR_LENGTH,
        });
    }
    if m == 0 || inner.dim() != m {
        return Err(Error::DimensionMismatch {
            context: "inner matrix size",
            expected: m,
            found: inner.dim(),
        });
    }
    let identity = SquareMatrix::identity(m);
    let bs = (0..n)
        .map(|j| {
            let block = if j == 0 { inner } else { &identity };
            let mut b = SquareMatrix::zeros(n * m);
            b.set_block(j, (j + 1) % n, block);
            b
        })
        .collect();
    Ok(CyclicCoefficients {
        n,
        m,
        inner: inner.clone(),
        bs,
    })
}

impl CyclicCoefficients {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn inner(&self) -> &SquareMatrix {
        &self.inner
    }

    pub fn factors(&self) -> &[SquareMatrix] {
        &self.bs
    }
}

/// `B_σ(1) B_σ(2) ... B_σ(n)` for a 0-based permutation of `0..n`.
pub fn permutation_product(sigma: &[usize], cc: &CyclicCoefficients) -> Result<SquareMatrix> {
    let n = cc.n;
    if sigma.len() != n {
        return Err(Error::DimensionMismatch {
            context: "permutation length",
            expected: n,
            found: sigma.len(),
        });
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::Degenerate("not a permutation"));
        }
        seen[s] = true;
    }
    let mut product = cc.bs[sigma[0]].clone();
    for &s in &sigma[1..] {
        product = &product * &cc.bs[s];
    }
    Ok(product)
}

/// One permutation's outcome: whether the corner-compressed product matches
/// the expected value (the inner matrix in the leading corner for the
/// identity, zero otherwise), and whether the raw product is zero.
#[derive(Clone, Debug)]
pub struct SigmaRecord {
    pub sigma: Vec<usize>,
    pub is_identity: bool,
    pub corrected_holds: bool,
    pub raw_product_zero: bool,
    pub deviation: f64,
}

#[derive(Clone, Debug)]
pub struct SymmetrizationReport {
    pub n: usize,
    pub m: usize,
    pub records: Vec<SigmaRecord>,
    pub corrected_all_hold: bool,
    /// Permutations whose raw product is nonzero. Nontrivial cyclic shifts
    /// land here: their product is the inner matrix on a diagonal block.
    pub nonzero_raw_products: usize,
}

/// Checks, over every permutation, that compressing the product by the
/// leading corner block isolates the identity permutation: the compressed
/// product equals the corner-embedded inner matrix for the identity and
/// vanishes otherwise. Comparisons are exact; the block products move
/// entries without rounding.
pub fn verify_symmetrization(
    n: usize,
    m: usize,
    inner: &SquareMatrix,
) -> Result<SymmetrizationReport> {
    let cc = build_cyclic_coefficients(n, m, inner)?;
    let dim = n * m;
    let mut corner = SquareMatrix::zeros(dim);
    corner.set_block(0, 0, &SquareMatrix::identity(m));
    let mut corner_inner = SquareMatrix::zeros(dim);
    corner_inner.set_block(0, 0, inner);

    let mut records = Vec::new();
    for sigma in (0..n).permutations(n) {
        let product = permutation_product(&sigma, &cc)?;
        let compressed = &corner * &product;
        let is_identity = sigma.iter().enumerate().all(|(i, &s)| i == s);
        let expected = if is_identity {
            &corner_inner
        } else {
            &SquareMatrix::zeros(dim)
        };
        let deviation = compressed.max_abs_diff(expected);
        records.push(SigmaRecord {
            sigma,
            is_identity,
            corrected_holds: deviation == 0.0,
            raw_product_zero: product.max_abs() == 0.0,
            deviation,
        });
    }
    let corrected_all_hold = records.iter().all(|r| r.corrected_holds);
    let nonzero_raw_products = records
        .iter()
        .filter(|r| !r.is_identity && !r.raw_product_zero)
        .count();
    Ok(SymmetrizationReport {
        n,
        m,
        records,
        corrected_all_hold,
        nonzero_raw_products,
    })
}

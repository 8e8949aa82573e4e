//! Standard polynomials `s_d(X_1,...,X_d) = Σ_σ sgn(σ) X_σ(1)...X_σ(d)`,
//! their vanishing on matrices of small size, and exhaustive witness search
//! for the sharpness of the degree bound.

use crate::error::{Error, Result};
use crate::matrix::{random_complex, SquareMatrix};
use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// `d!` products stay tractable up to here.
pub const MAX_STANDARD_DEGREE: usize = 8;

/// A degree together with matching arguments.
pub struct StandardPolyInstance {
    degree: usize,
    args: Vec<SquareMatrix>,
}

impl StandardPolyInstance {
    pub fn new(args: Vec<SquareMatrix>) -> Result<Self> {
        let degree = args.len();
        if degree == 0 {
            return Err(Error::Degenerate("standard polynomial of degree 0"));
        }
        let dim = args[0].dim();
        for a in &args {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "standard polynomial arguments",
                    expected: dim,
                    found: a.dim(),
                });
            }
        }
        Ok(StandardPolyInstance { degree, args })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn args(&self) -> &[SquareMatrix] {
        &self.args
    }

    pub fn evaluate(&self) -> Result<SquareMatrix> {
        standard_polynomial(&self.args)
    }
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in (i + 1)..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `Σ_{σ ∈ S_d} sgn(σ) X_{σ(1)} ... X_{σ(d)}`.
pub fn standard_polynomial(args: &[SquareMatrix]) -> Result<SquareMatrix> {
    let d = args.len();
    if d == 0 {
        return Err(Error::Degenerate("standard polynomial of degree 0"));
    }
    if d > MAX_STANDARD_DEGREE {
        return Err(Error::SizeLimit {
            what: "standard polynomial degree",
            requested: d,
            limit: MAX_STANDARD_DEGREE,
        });
    }
    let dim = args[0].dim();
    for a in args {
        if a.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "standard polynomial arguments",
                expected: dim,
                found: a.dim(),
            });
        }
    }
    let mut acc = SquareMatrix::zeros(dim);
    for perm in (0..d).permutations(d) {
        let sign = permutation_sign(&perm);
        let mut product = args[perm[0]].clone();
        for &idx in &perm[1..] {
            product = &product * &args[idx];
        }
        acc = &acc + &product.scale(Complex64::new(sign, 0.0));
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct AlTrial {
    pub trial: u64,
    pub norm: f64,
}

/// `s_{2n}` on random `M_n` tuples: the largest entry of each evaluation.
pub fn verify_al_vanishing(n: usize, trials: u64, seed: u64) -> Result<Vec<AlTrial>> {
    if n == 0 || n > 3 {
        return Err(Error::SizeLimit {
            what: "matrix size for vanishing check",
            requested: n,
            limit: 3,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let args: Vec<SquareMatrix> = (0..2 * n).map(|_| random_complex(n, &mut rng)).collect();
        let value = standard_polynomial(&args)?;
        out.push(AlTrial {
            trial,
            norm: value.max_abs(),
        });
    }
    Ok(out)
}

type Unit = (usize, usize);

fn unit_product(word: &[Unit]) -> Option<Unit> {
    let mut acc = word[0];
    for &(c, d) in &word[1..] {
        if acc.1 != c {
            return None;
        }
        acc = (acc.0, d);
    }
    Some(acc)
}

/// Symbolic `s_d` on a tuple of matrix units, as a coefficient map.
fn symbolic_standard(units: &[Unit]) -> HashMap<Unit, i64> {
    let d = units.len();
    let mut coeffs: HashMap<Unit, i64> = HashMap::new();
    for perm in (0..d).permutations(d) {
        let word: Vec<Unit> = perm.iter().map(|&i| units[i]).collect();
        if let Some(result) = unit_product(&word) {
            let sign = if permutation_sign(&perm) > 0.0 { 1 } else { -1 };
            let entry = coeffs.entry(result).or_insert(0);
            *entry += sign;
            if *entry == 0 {
                coeffs.remove(&result);
            }
        }
    }
    coeffs
}

/// Exhaustive search for a matrix-unit tuple on which `s_{2n-1}` does not
/// vanish on `M_n`. Tuples with repeated units vanish by alternation, and
/// reordering only flips the sign, so the search ranges over combinations of
/// distinct units.
pub fn find_nonvanishing_witness(n: usize) -> Result<Option<StandardPolyInstance>> {
    if n == 0 || n > 3 {
        return Err(Error::SizeLimit {
            what: "matrix size for witness search",
            requested: n,
            limit: 3,
        });
    }
    let d = 2 * n - 1;
    let units: Vec<Unit> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    for tuple in units.iter().copied().combinations(d) {
        if !symbolic_standard(&tuple).is_empty() {
            let args = tuple
                .into_iter()
                .map(|(a, b)| SquareMatrix::unit(n, a, b))
                .collect();
            return Ok(Some(StandardPolyInstance::new(args)?));
        }
    }
    Ok(None)
}

//! Closed-form moment evaluators: the free Wick sum over non-crossing pair
//! partitions, the classical Wick sum over all pair partitions, and
//! star-moments of circular elements expanded over real and imaginary parts.

use crate::error::{Error, Result};
use crate::matrix::sym_eigen;
use crate::ncpart::{enumerate_ncpp, enumerate_pairings};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// Named jointly-(semi)circular variables with their covariance matrix
/// `cov[i][j] = φ(x_i x_j)`. Symmetry and positive semidefiniteness are
/// enforced at construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawCovarianceSpec")]
pub struct CovarianceSpec {
    names: Vec<String>,
    cov: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCovarianceSpec {
    names: Vec<String>,
    cov: Vec<Vec<f64>>,
}

impl TryFrom<RawCovarianceSpec> for CovarianceSpec {
    type Error = Error;
    fn try_from(raw: RawCovarianceSpec) -> Result<Self> {
        CovarianceSpec::new(raw.names, raw.cov)
    }
}

impl CovarianceSpec {
    pub fn new(names: Vec<String>, cov: Vec<Vec<f64>>) -> Result<Self> {
        let m = names.len();
        if cov.len() != m || cov.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidCovariance(format!(
                "covariance must be {m}x{m} to match {m} names"
            )));
        }
        for (i, row) in cov.iter().enumerate() {
            for (j, &v) in row.iter().enumerate().take(i) {
                if (v - cov[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidCovariance(format!(
                        "asymmetric at ({i},{j}): {} vs {}",
                        v, cov[j][i]
                    )));
                }
            }
        }
        let flat: Vec<f64> = cov.iter().flatten().copied().collect();
        let (eigvals, _) = sym_eigen(&flat, m);
        if let Some(bad) = eigvals.iter().find(|&&l| l < -1e-10) {
            return Err(Error::InvalidCovariance(format!(
                "not positive semidefinite: eigenvalue {bad}"
            )));
        }
        Ok(CovarianceSpec { names, cov })
    }

    /// Standard family: `m` variables, identity covariance.
    pub fn standard(m: usize) -> Self {
        let names = (1..=m).map(|i| format!("s{i}")).collect();
        let cov = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        CovarianceSpec { names, cov }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.cov[i][j]
    }

    pub fn cov(&self) -> &[Vec<f64>] {
        &self.cov
    }

    /// Rows `f_i` with `<f_i, f_j> = cov[i][j]`, from the spectral
    /// factorization. Tiny negative eigenvalues are clamped to zero.
    pub fn factor_rows(&self) -> Vec<Vec<f64>> {
        let m = self.len();
        let flat: Vec<f64> = self.cov.iter().flatten().copied().collect();
        let (eigvals, eigvecs) = sym_eigen(&flat, m);
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|t| eigvecs[t][i] * eigvals[t].max(0.0).sqrt())
                    .collect()
            })
            .collect()
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        for &v in word {
            if v >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    len: self.len(),
                });
            }
        }
        Ok(())
    }
}

type SharedPairings = Rc<Vec<Vec<(usize, usize)>>>;
type PairingCache = RefCell<HashMap<usize, SharedPairings>>;

thread_local! {
    static NCPP_CACHE: PairingCache = RefCell::new(HashMap::new());
    static PAIRING_CACHE: PairingCache = RefCell::new(HashMap::new());
}

/// Non-crossing pairings of `{1..n}` as pair lists, cached per length.
pub(crate) fn ncpp_pairs(n: usize) -> Result<SharedPairings> {
    NCPP_CACHE.with(|cache| {
        if let Some(hit) = cache.borrow().get(&n) {
            return Ok(Rc::clone(hit));
        }
        let pairs: Vec<Vec<(usize, usize)>> =
            enumerate_ncpp(n)?.iter().map(|p| p.as_pairs()).collect();
        let rc = Rc::new(pairs);
        cache.borrow_mut().insert(n, Rc::clone(&rc));
        Ok(rc)
    })
}

fn all_pairs(n: usize) -> Result<SharedPairings> {
    PAIRING_CACHE.with(|cache| {
        if let Some(hit) = cache.borrow().get(&n) {
            return Ok(Rc::clone(hit));
        }
        let pairs: Vec<Vec<(usize, usize)>> = enumerate_pairings(n)?
            .iter()
            .map(|p| p.blocks().iter().map(|b| (b[0], b[1])).collect())
            .collect();
        let rc = Rc::new(pairs);
        cache.borrow_mut().insert(n, Rc::clone(&rc));
        Ok(rc)
    })
}

fn pairing_sum(word: &[usize], spec: &CovarianceSpec, pairings: &[Vec<(usize, usize)>]) -> f64 {
    pairings
        .iter()
        .map(|pairing| {
            pairing
                .iter()
                .map(|&(k, l)| spec.entry(word[k - 1], word[l - 1]))
                .product::<f64>()
        })
        .sum()
}

/// Joint moment of a semicircular family: sum over non-crossing pairings of
/// products of covariances. Zero for odd length.
pub fn free_wick_moment(word: &[usize], spec: &CovarianceSpec) -> Result<f64> {
    spec.check_word(word)?;
    if word.is_empty() {
        return Ok(1.0);
    }
    if word.len() % 2 == 1 {
        return Ok(0.0);
    }
    let pairings = ncpp_pairs(word.len())?;
    Ok(pairing_sum(word, spec, &pairings))
}

/// Joint moment of a Gaussian family: same sum over all pairings.
pub fn classical_wick_moment(word: &[usize], spec: &CovarianceSpec) -> Result<f64> {
    spec.check_word(word)?;
    if word.is_empty() {
        return Ok(1.0);
    }
    if word.len() % 2 == 1 {
        return Ok(0.0);
    }
    let pairings = all_pairs(word.len())?;
    Ok(pairing_sum(word, spec, &pairings))
}

/// Word in circular variables and their adjoints: `(variable, starred)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarWord(pub Vec<(usize, bool)>);

impl StarWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Star-moment of circular variables `c_j = s_{2j} + i s_{2j+1}`, where
/// `real_spec` is the covariance of the underlying real family `s_0..s_{2m-1}`
/// (normalization is the caller's choice). Expands every letter over its real
/// and imaginary part and sums the free Wick moments of the 2^len real words.
pub fn circular_star_moment(word: &StarWord, real_spec: &CovarianceSpec) -> Result<Complex64> {
    if !real_spec.len().is_multiple_of(2) {
        return Err(Error::InvalidCovariance(
            "circular star-moments need an even number of real variables".into(),
        ));
    }
    for &(var, _) in &word.0 {
        if 2 * var + 1 >= real_spec.len() {
            return Err(Error::IndexOutOfRange {
                index: var,
                len: real_spec.len() / 2,
            });
        }
    }
    let n = word.len();
    let mut total = Complex64::ZERO;
    let mut real_word = vec![0usize; n];
    for mask in 0u32..(1u32 << n) {
        let mut coeff = Complex64::ONE;
        for (pos, &(var, starred)) in word.0.iter().enumerate() {
            if mask & (1 << pos) == 0 {
                real_word[pos] = 2 * var;
            } else {
                real_word[pos] = 2 * var + 1;
                coeff *= Complex64::new(0.0, if starred { -1.0 } else { 1.0 });
            }
        }
        if coeff != Complex64::ZERO {
            total += coeff * free_wick_moment(&real_word, real_spec)?;
        }
    }
    Ok(total)
}

/// Covariance of the real parts of `m` independent standard circular
/// variables: `2m` real variables of variance 1/2 each.
pub fn standard_circular_real_spec(m: usize) -> CovarianceSpec {
    let names = (0..2 * m)
        .map(|i| format!("c{}_{}", i / 2 + 1, if i % 2 == 0 { "re" } else { "im" }))
        .collect();
    let cov = (0..2 * m)
        .map(|i| (0..2 * m).map(|j| if i == j { 0.5 } else { 0.0 }).collect())
        .collect();
    CovarianceSpec { names, cov }
}

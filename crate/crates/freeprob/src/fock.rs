//! Truncated Fock-space operator models.
//!
//! Two concrete models share one operator type: the full Fock space over `m`
//! modes truncated at tensor depth `d` (free creation prepends a letter,
//! annihilation strips one), and the bosonic occupation-number space with
//! total-occupation cutoff (ladder operators with square-root factors).
//!
//! Truncation is kept sound by degree bookkeeping: generators have degree 1,
//! products add degrees, linear combinations take the maximum. A vacuum
//! expectation whose total degree fits within the depth is exact, because a
//! product of `p` generators applied to the vacuum never reaches level `p/2 +
//! 1`; longer products are refused rather than approximated.

use crate::error::{Error, Result};
use crate::sparse::SparseMat;
use crate::wick::CovarianceSpec;
use num_complex::Complex64;
use std::collections::HashMap;

/// Ceiling on basis dimensions; enumeration beyond this is a caller mistake.
pub const MAX_BASIS_DIM: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Free,
    Bosonic,
}

/// Identity of a truncated basis; operators interoperate only on equal keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisKey {
    pub model: Model,
    pub modes: usize,
    pub depth: usize,
    pub dim: usize,
}

impl BasisKey {
    fn ensure_matches(&self, other: &BasisKey, context: &str) -> Result<()> {
        if self != other {
            return Err(Error::BasisMismatch(format!(
                "{context}: {self:?} vs {other:?}"
            )));
        }
        Ok(())
    }
}

/// Words of length `0..=depth` over `modes` letters; the empty word (index 0)
/// is the vacuum. Words of one level are ordered lexicographically.
pub struct FreeFockBasis {
    modes: usize,
    depth: usize,
    /// `offsets[l]` = index of the first word of level `l`; last entry = dim.
    offsets: Vec<usize>,
}

impl FreeFockBasis {
    pub fn new(modes: usize, depth: usize) -> Result<Self> {
        if modes == 0 || depth == 0 {
            return Err(Error::Degenerate("Fock basis needs modes >= 1, depth >= 1"));
        }
        let mut offsets = vec![0usize];
        let mut level_size = 1usize;
        for _ in 0..=depth {
            let next = offsets.last().unwrap() + level_size;
            if next > MAX_BASIS_DIM {
                return Err(Error::SizeLimit {
                    what: "free Fock basis dimension",
                    requested: next,
                    limit: MAX_BASIS_DIM,
                });
            }
            offsets.push(next);
            level_size *= modes;
        }
        Ok(FreeFockBasis {
            modes,
            depth,
            offsets,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn key(&self) -> BasisKey {
        BasisKey {
            model: Model::Free,
            modes: self.modes,
            depth: self.depth,
            dim: self.dim(),
        }
    }

    pub fn level_of(&self, index: usize) -> usize {
        debug_assert!(index < self.dim());
        self.offsets.partition_point(|&o| o <= index) - 1
    }

    /// Index of a word given as letters in `0..modes`.
    pub fn index_of(&self, word: &[usize]) -> usize {
        assert!(word.len() <= self.depth, "word longer than depth");
        let mut in_level = 0usize;
        for &letter in word {
            assert!(letter < self.modes, "letter outside mode range");
            in_level = in_level * self.modes + letter;
        }
        self.offsets[word.len()] + in_level
    }

    pub fn word_of(&self, index: usize) -> Vec<usize> {
        let level = self.level_of(index);
        let mut in_level = index - self.offsets[level];
        let mut word = vec![0usize; level];
        for slot in (0..level).rev() {
            word[slot] = in_level % self.modes;
            in_level /= self.modes;
        }
        word
    }
}

/// Occupation tuples `(n_1..n_m)` with total occupation at most `cutoff`,
/// ordered lexicographically; the all-zero tuple (index 0) is the vacuum.
pub struct BosonBasis {
    modes: usize,
    cutoff: usize,
    states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl BosonBasis {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        if modes == 0 || cutoff == 0 {
            return Err(Error::Degenerate(
                "boson basis needs modes >= 1, cutoff >= 1",
            ));
        }
        let mut states = Vec::new();
        let mut current = vec![0usize; modes];
        loop {
            states.push(current.clone());
            if states.len() > MAX_BASIS_DIM {
                return Err(Error::SizeLimit {
                    what: "boson basis dimension",
                    requested: states.len(),
                    limit: MAX_BASIS_DIM,
                });
            }
            // Lexicographic successor within the simplex: bump the last slot
            // while budget remains, else carry leftward.
            let total: usize = current.iter().sum();
            if total < cutoff {
                *current.last_mut().unwrap() += 1;
                continue;
            }
            let mut slot = modes;
            while slot > 0 && current[slot - 1] == 0 {
                slot -= 1;
            }
            if slot <= 1 {
                break;
            }
            current[slot - 1] = 0;
            current[slot - 2] += 1;
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(BosonBasis {
            modes,
            cutoff,
            states,
            index,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn key(&self) -> BasisKey {
        BasisKey {
            model: Model::Bosonic,
            modes: self.modes,
            depth: self.cutoff,
            dim: self.dim(),
        }
    }

    pub fn state(&self, index: usize) -> &[usize] {
        &self.states[index]
    }

    pub fn level_of(&self, index: usize) -> usize {
        self.states[index].iter().sum()
    }

    fn index_of(&self, state: &[usize]) -> usize {
        self.index[state]
    }
}

/// Sparse operator bound to one truncated basis, carrying the degree used for
/// the truncation-soundness check.
#[derive(Clone, Debug)]
pub struct FockOperator {
    mat: SparseMat,
    key: BasisKey,
    degree: usize,
}

impl FockOperator {
    pub fn identity(key: BasisKey) -> Self {
        FockOperator {
            mat: SparseMat::identity(key.dim),
            key,
            degree: 0,
        }
    }

    pub fn matrix(&self) -> &SparseMat {
        &self.mat
    }

    pub fn key(&self) -> &BasisKey {
        &self.key
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn adjoint(&self) -> Self {
        FockOperator {
            mat: self.mat.adjoint(),
            key: self.key.clone(),
            degree: self.degree,
        }
    }

    /// Operator product `self * rhs`; degrees add.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.key.ensure_matches(&rhs.key, "operator product")?;
        Ok(FockOperator {
            mat: self.mat.matmul(&rhs.mat),
            key: self.key.clone(),
            degree: self.degree + rhs.degree,
        })
    }

    /// `Σ z_i T_i`; the degree is the maximum of the term degrees.
    pub fn linear_combination(terms: &[(Complex64, &FockOperator)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or(Error::Degenerate("empty linear combination of operators"))?;
        let mut degree = 0;
        for (_, t) in terms {
            first
                .key
                .ensure_matches(&t.key, "operator linear combination")?;
            degree = degree.max(t.degree);
        }
        let mats: Vec<(Complex64, &SparseMat)> = terms.iter().map(|&(z, t)| (z, &t.mat)).collect();
        Ok(FockOperator {
            mat: SparseMat::linear_combination(&mats),
            key: first.key.clone(),
            degree,
        })
    }

    pub fn scale(&self, z: Complex64) -> Self {
        FockOperator {
            mat: self.mat.scale(z),
            key: self.key.clone(),
            degree: self.degree,
        }
    }
}

fn check_mode_vector(f: &[f64], modes: usize) -> Result<()> {
    if f.len() != modes {
        return Err(Error::DimensionMismatch {
            context: "mode vector",
            expected: modes,
            found: f.len(),
        });
    }
    Ok(())
}

/// Free creation: prepends letters weighted by `f`; the top level maps to 0.
pub fn creation_free(f: &[f64], basis: &FreeFockBasis) -> Result<FockOperator> {
    check_mode_vector(f, basis.modes)?;
    let m = basis.modes;
    let mut triplets = Vec::new();
    let mut level_size = 1usize;
    for level in 0..basis.depth {
        for in_level in 0..level_size {
            let src = basis.offsets[level] + in_level;
            for (letter, &weight) in f.iter().enumerate() {
                if weight != 0.0 {
                    let dst = basis.offsets[level + 1] + letter * level_size + in_level;
                    triplets.push((dst, src, Complex64::new(weight, 0.0)));
                }
            }
        }
        level_size *= m;
    }
    Ok(FockOperator {
        mat: SparseMat::from_triplets(basis.dim(), triplets),
        key: basis.key(),
        degree: 1,
    })
}

/// Free annihilation: strips the leading letter with weight `<f, letter>`;
/// kills the vacuum.
pub fn annihilation_free(f: &[f64], basis: &FreeFockBasis) -> Result<FockOperator> {
    check_mode_vector(f, basis.modes)?;
    let m = basis.modes;
    let mut triplets = Vec::new();
    let mut tail_size = 1usize;
    for level in 1..=basis.depth {
        for in_level in 0..tail_size {
            let dst = basis.offsets[level - 1] + in_level;
            for (letter, &weight) in f.iter().enumerate() {
                if weight != 0.0 {
                    let src = basis.offsets[level] + letter * tail_size + in_level;
                    triplets.push((dst, src, Complex64::new(weight, 0.0)));
                }
            }
        }
        tail_size *= m;
    }
    Ok(FockOperator {
        mat: SparseMat::from_triplets(basis.dim(), triplets),
        key: basis.key(),
        degree: 1,
    })
}

/// Free Gaussian sum `G0(f) = a(f) + a*(f)`.
pub fn gaussian_free(f: &[f64], basis: &FreeFockBasis) -> Result<FockOperator> {
    let a = annihilation_free(f, basis)?;
    let astar = creation_free(f, basis)?;
    FockOperator::linear_combination(&[(Complex64::ONE, &a), (Complex64::ONE, &astar)])
}

fn creation_bosonic(f: &[f64], basis: &BosonBasis) -> Result<FockOperator> {
    check_mode_vector(f, basis.modes)?;
    let mut triplets = Vec::new();
    for (src, state) in basis.states.iter().enumerate() {
        if basis.level_of(src) >= basis.cutoff {
            continue;
        }
        for (mode, &weight) in f.iter().enumerate() {
            if weight != 0.0 {
                let mut bumped = state.clone();
                bumped[mode] += 1;
                let factor = ((state[mode] + 1) as f64).sqrt();
                triplets.push((
                    basis.index_of(&bumped),
                    src,
                    Complex64::new(weight * factor, 0.0),
                ));
            }
        }
    }
    Ok(FockOperator {
        mat: SparseMat::from_triplets(basis.dim(), triplets),
        key: basis.key(),
        degree: 1,
    })
}

fn annihilation_bosonic(f: &[f64], basis: &BosonBasis) -> Result<FockOperator> {
    check_mode_vector(f, basis.modes)?;
    let mut triplets = Vec::new();
    for (src, state) in basis.states.iter().enumerate() {
        for (mode, &weight) in f.iter().enumerate() {
            if weight != 0.0 && state[mode] > 0 {
                let mut lowered = state.clone();
                lowered[mode] -= 1;
                let factor = (state[mode] as f64).sqrt();
                triplets.push((
                    basis.index_of(&lowered),
                    src,
                    Complex64::new(weight * factor, 0.0),
                ));
            }
        }
    }
    Ok(FockOperator {
        mat: SparseMat::from_triplets(basis.dim(), triplets),
        key: basis.key(),
        degree: 1,
    })
}

/// Bosonic Gaussian sum `G1(f)` with square-root ladder factors.
pub fn gaussian_bosonic(f: &[f64], basis: &BosonBasis) -> Result<FockOperator> {
    let a = annihilation_bosonic(f, basis)?;
    let astar = creation_bosonic(f, basis)?;
    FockOperator::linear_combination(&[(Complex64::ONE, &a), (Complex64::ONE, &astar)])
}

/// `<Omega, T_1 ... T_p Omega>` by folding sparse applications onto the
/// vacuum. Exactness is guarded: the summed operator degrees must fit within
/// the basis depth.
pub fn vacuum_expectation(ops: &[&FockOperator]) -> Result<Complex64> {
    let Some(first) = ops.first() else {
        return Ok(Complex64::ONE);
    };
    let mut total_degree = 0usize;
    for op in ops {
        first.key.ensure_matches(&op.key, "vacuum expectation")?;
        total_degree += op.degree;
    }
    if total_degree > first.key.depth {
        return Err(Error::TruncationUnsound {
            degree: total_degree,
            depth: first.key.depth,
        });
    }
    let mut state = vec![Complex64::ZERO; first.key.dim];
    state[0] = Complex64::ONE;
    for op in ops.iter().rev() {
        state = op.mat.apply(&state);
    }
    Ok(state[0])
}

/// Fock realization of a semicircular family with the given covariance:
/// `G0(f_i)` over factor rows `f_i` on a fresh basis of matching mode count.
pub fn realize_semicircular_family(
    spec: &CovarianceSpec,
    depth: usize,
) -> Result<Vec<FockOperator>> {
    if spec.is_empty() {
        return Err(Error::Degenerate("empty covariance family"));
    }
    let basis = FreeFockBasis::new(spec.len(), depth)?;
    spec.factor_rows()
        .iter()
        .map(|row| gaussian_free(row, &basis))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wick::{classical_wick_moment, free_wick_moment};

    fn e(i: usize, m: usize) -> Vec<f64> {
        let mut f = vec![0.0; m];
        f[i] = 1.0;
        f
    }

    fn expect_real(value: Complex64) -> f64 {
        assert!(value.im.abs() < 1e-12);
        value.re
    }

    #[test]
    fn creation_on_vacuum_and_top_level() {
        let basis = FreeFockBasis::new(2, 3).unwrap();
        let astar = creation_free(&e(0, 2), &basis).unwrap();
        let mut vac = vec![Complex64::ZERO; basis.dim()];
        vac[0] = Complex64::ONE;
        let out = astar.matrix().apply(&vac);
        assert_eq!(out[basis.index_of(&[0])], Complex64::ONE);
        assert_eq!(out.iter().filter(|z| **z != Complex64::ZERO).count(), 1);

        let mut top = vec![Complex64::ZERO; basis.dim()];
        top[basis.index_of(&[1, 1, 1])] = Complex64::ONE;
        let killed = astar.matrix().apply(&top);
        assert!(killed.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn creation_is_isometric_below_top() {
        let basis = FreeFockBasis::new(2, 4).unwrap();
        let astar = creation_free(&e(1, 2), &basis).unwrap();
        // A vector supported on levels < depth keeps its norm.
        let mut v = vec![Complex64::ZERO; basis.dim()];
        v[basis.index_of(&[0, 1])] = Complex64::new(0.6, 0.0);
        v[basis.index_of(&[1, 0, 1])] = Complex64::new(0.0, 0.8);
        let w = astar.matrix().apply(&v);
        let norm = |x: &[Complex64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm(&w) - norm(&v)).abs() < 1e-14);
    }

    #[test]
    fn annihilation_strips_leading_letter() {
        let basis = FreeFockBasis::new(2, 3).unwrap();
        let a = annihilation_free(&e(0, 2), &basis).unwrap();
        let mut vac = vec![Complex64::ZERO; basis.dim()];
        vac[0] = Complex64::ONE;
        assert!(a.matrix().apply(&vac).iter().all(|z| z.norm() == 0.0));

        let mut word12 = vec![Complex64::ZERO; basis.dim()];
        word12[basis.index_of(&[0, 1])] = Complex64::ONE;
        let out = a.matrix().apply(&word12);
        assert_eq!(out[basis.index_of(&[1])], Complex64::ONE);
    }

    #[test]
    fn annihilation_is_adjoint_of_creation_below_top() {
        let basis = FreeFockBasis::new(2, 3).unwrap();
        let top = basis.dim() - 4; // first index of level 3 for 2 modes
        assert_eq!(basis.level_of(top), 3);
        let a = annihilation_free(&[0.3, -1.2], &basis).unwrap();
        let from_adjoint = creation_free(&[0.3, -1.2], &basis).unwrap().adjoint();
        let max_diff = a
            .matrix()
            .entries()
            .map(|(r, c, v)| {
                let other: Complex64 = from_adjoint
                    .matrix()
                    .col(c)
                    .iter()
                    .find(|&&(rr, _)| rr == r)
                    .map(|&(_, v)| v)
                    .unwrap_or(Complex64::ZERO);
                if r < top && c < top {
                    (v - other).norm()
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-15);
    }

    #[test]
    fn word_index_roundtrip() {
        let basis = FreeFockBasis::new(3, 4).unwrap();
        for idx in 0..basis.dim() {
            let word = basis.word_of(idx);
            assert_eq!(basis.index_of(&word), idx);
            assert_eq!(word.len(), basis.level_of(idx));
        }
    }

    #[test]
    fn free_gaussian_moments() {
        let basis = FreeFockBasis::new(2, 6).unwrap();
        let g1 = gaussian_free(&e(0, 2), &basis).unwrap();
        let g2 = gaussian_free(&e(1, 2), &basis).unwrap();
        assert!((expect_real(vacuum_expectation(&[&g1, &g1]).unwrap()) - 1.0).abs() < 1e-12);
        assert!((expect_real(vacuum_expectation(&[&g1; 4]).unwrap()) - 2.0).abs() < 1e-12);
        assert!((expect_real(vacuum_expectation(&[&g1; 6]).unwrap()) - 5.0).abs() < 1e-12);
        assert!(expect_real(vacuum_expectation(&[&g1, &g2, &g1, &g2]).unwrap()).abs() < 1e-12);
        assert!(expect_real(vacuum_expectation(&[&g1, &g1, &g1]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn bosonic_gaussian_moments() {
        let basis = BosonBasis::new(2, 6).unwrap();
        let g1 = gaussian_bosonic(&e(0, 2), &basis).unwrap();
        let g2 = gaussian_bosonic(&e(1, 2), &basis).unwrap();
        assert!((expect_real(vacuum_expectation(&[&g1, &g1]).unwrap()) - 1.0).abs() < 1e-12);
        assert!((expect_real(vacuum_expectation(&[&g1; 4]).unwrap()) - 3.0).abs() < 1e-12);
        assert!((expect_real(vacuum_expectation(&[&g1; 6]).unwrap()) - 15.0).abs() < 1e-12);
        assert!(
            (expect_real(vacuum_expectation(&[&g1, &g2, &g1, &g2]).unwrap()) - 1.0).abs() < 1e-12
        );
    }

    #[test]
    fn single_mode_bosonic_gaussian_is_tridiagonal_sqrt() {
        let basis = BosonBasis::new(1, 4).unwrap();
        let g = gaussian_bosonic(&[1.0], &basis).unwrap();
        for (r, c, v) in g.matrix().entries() {
            assert_eq!(r.abs_diff(c), 1);
            let k = r.max(c) as f64;
            assert!((v - Complex64::new(k.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn gaussians_selfadjoint_below_truncation() {
        let free = FreeFockBasis::new(2, 3).unwrap();
        let g0 = gaussian_free(&[0.7, -0.2], &free).unwrap();
        let adj = g0.adjoint();
        for (r, c, v) in g0.matrix().entries() {
            if free.level_of(r) < free.depth() && free.level_of(c) < free.depth() {
                let other: Complex64 = adj
                    .matrix()
                    .col(c)
                    .iter()
                    .find(|&&(rr, _)| rr == r)
                    .map(|&(_, v)| v)
                    .unwrap_or(Complex64::ZERO);
                assert!((v - other).norm() < 1e-12);
            }
        }

        let bose = BosonBasis::new(2, 3).unwrap();
        let g1 = gaussian_bosonic(&[0.7, -0.2], &bose).unwrap();
        let adj = g1.adjoint();
        for (r, c, v) in g1.matrix().entries() {
            if bose.level_of(r) < bose.cutoff() && bose.level_of(c) < bose.cutoff() {
                let other: Complex64 = adj
                    .matrix()
                    .col(c)
                    .iter()
                    .find(|&&(rr, _)| rr == r)
                    .map(|&(_, v)| v)
                    .unwrap_or(Complex64::ZERO);
                assert!((v - other).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn depth_sufficiency() {
        for depth in [4usize, 6] {
            let basis = FreeFockBasis::new(1, depth).unwrap();
            let g = gaussian_free(&[1.0], &basis).unwrap();
            let m4 = expect_real(vacuum_expectation(&[&g; 4]).unwrap());
            assert!((m4 - 2.0).abs() < 1e-12, "depth {depth}");
        }
        for cutoff in [4usize, 6] {
            let basis = BosonBasis::new(1, cutoff).unwrap();
            let g = gaussian_bosonic(&[1.0], &basis).unwrap();
            let m4 = expect_real(vacuum_expectation(&[&g; 4]).unwrap());
            assert!((m4 - 3.0).abs() < 1e-12, "cutoff {cutoff}");
        }
    }

    #[test]
    fn unsound_truncation_is_refused() {
        let basis = FreeFockBasis::new(1, 4).unwrap();
        let g = gaussian_free(&[1.0], &basis).unwrap();
        let err = vacuum_expectation(&[&g; 5]);
        assert!(matches!(
            err,
            Err(Error::TruncationUnsound {
                degree: 5,
                depth: 4
            })
        ));
    }

    #[test]
    fn empty_product_is_one() {
        assert_eq!(vacuum_expectation(&[]).unwrap(), Complex64::ONE);
    }

    #[test]
    fn basis_mismatch_is_refused() {
        let b1 = FreeFockBasis::new(1, 4).unwrap();
        let b2 = FreeFockBasis::new(1, 5).unwrap();
        let g1 = gaussian_free(&[1.0], &b1).unwrap();
        let g2 = gaussian_free(&[1.0], &b2).unwrap();
        assert!(matches!(
            vacuum_expectation(&[&g1, &g2]),
            Err(Error::BasisMismatch(_))
        ));
        assert!(matches!(g1.compose(&g2), Err(Error::BasisMismatch(_))));
    }

    #[test]
    fn boson_basis_size_is_binomial() {
        // C(N + m, m) states with total occupation <= N.
        let binom = |n: usize, k: usize| -> usize {
            let mut acc = 1usize;
            for i in 0..k {
                acc = acc * (n - i) / (i + 1);
            }
            acc
        };
        for (m, n) in [(1usize, 4usize), (2, 3), (3, 5)] {
            let basis = BosonBasis::new(m, n).unwrap();
            assert_eq!(basis.dim(), binom(n + m, m), "m={m} N={n}");
            assert_eq!(basis.state(0), vec![0; m]);
        }
    }

    #[test]
    fn realized_family_matches_wick_oracle() {
        let spec = CovarianceSpec::new(
            vec!["x".into(), "y".into()],
            vec![vec![2.0, 0.7], vec![0.7, 1.0]],
        )
        .unwrap();
        let ops = realize_semicircular_family(&spec, 5).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let got = expect_real(vacuum_expectation(&[&ops[i], &ops[j]]).unwrap());
                assert!((got - spec.entry(i, j)).abs() < 1e-12);
            }
        }
        let word = [0usize, 1, 1, 0];
        let got = expect_real(vacuum_expectation(&[&ops[0], &ops[1], &ops[1], &ops[0]]).unwrap());
        let want = free_wick_moment(&word, &spec).unwrap();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_models_match_both_oracles() {
        let spec = CovarianceSpec::standard(2);
        let free_basis = FreeFockBasis::new(2, 5).unwrap();
        let bose_basis = BosonBasis::new(2, 5).unwrap();
        let g0: Vec<FockOperator> = (0..2)
            .map(|i| gaussian_free(&e(i, 2), &free_basis).unwrap())
            .collect();
        let g1: Vec<FockOperator> = (0..2)
            .map(|i| gaussian_bosonic(&e(i, 2), &bose_basis).unwrap())
            .collect();
        for word in [[0usize, 0, 1, 1], [0, 1, 1, 0], [1, 0, 1, 0]] {
            let free_ops: Vec<&FockOperator> = word.iter().map(|&i| &g0[i]).collect();
            let bose_ops: Vec<&FockOperator> = word.iter().map(|&i| &g1[i]).collect();
            let f = expect_real(vacuum_expectation(&free_ops).unwrap());
            let b = expect_real(vacuum_expectation(&bose_ops).unwrap());
            assert!((f - free_wick_moment(&word, &spec).unwrap()).abs() < 1e-12);
            assert!((b - classical_wick_moment(&word, &spec).unwrap()).abs() < 1e-12);
        }
    }
}

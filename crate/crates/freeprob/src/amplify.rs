//! Matrix amplification: block operators `Σ_j A_j ⊗ x_j` on `C^k ⊗ F`, their
//! block conditional expectation, the operator-valued moment and cumulant
//! functionals evaluated through them, and the randomized verification
//! procedures built on top.
//!
//! Block vectors are stored flat: component `(r, i)` of `C^k ⊗ F` lives at
//! index `r * fock_dim + i`, so the vacuum of the `r`-th block row sits at
//! `r * fock_dim`.

use crate::error::{Error, Result};
use crate::fock::{realize_semicircular_family, BasisKey, FockOperator};
use crate::matrix::{random_complex, random_selfadjoint, SquareMatrix};
use crate::mcx::{moments_to_cumulants, ElementHandle, MomentSource, OpWord};
use crate::sparse::SparseMat;
use crate::wick::{free_wick_moment, CovarianceSpec};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Formal sum `Σ_j A_j ⊗ x_j` with equal coefficient dimensions and one
/// shared Fock basis.
pub struct AmplifiedElement {
    coeff_dim: usize,
    terms: Vec<(SquareMatrix, FockOperator)>,
}

/// Builds the formal sum, validating shared dimensions.
pub fn amplify(coeffs: Vec<SquareMatrix>, xs: Vec<FockOperator>) -> Result<AmplifiedElement> {
    if coeffs.len() != xs.len() {
        return Err(Error::DimensionMismatch {
            context: "amplification term count",
            expected: coeffs.len(),
            found: xs.len(),
        });
    }
    if coeffs.is_empty() {
        return Err(Error::Degenerate("amplification with no terms"));
    }
    let coeff_dim = coeffs[0].dim();
    for a in &coeffs {
        if a.dim() != coeff_dim {
            return Err(Error::DimensionMismatch {
                context: "amplification coefficient dimension",
                expected: coeff_dim,
                found: a.dim(),
            });
        }
    }
    let key = xs[0].key().clone();
    for x in &xs {
        if *x.key() != key {
            return Err(Error::BasisMismatch(
                "amplification terms live on different bases".into(),
            ));
        }
    }
    Ok(AmplifiedElement {
        coeff_dim,
        terms: coeffs.into_iter().zip(xs).collect(),
    })
}

impl AmplifiedElement {
    pub fn coeff_dim(&self) -> usize {
        self.coeff_dim
    }

    pub fn terms(&self) -> &[(SquareMatrix, FockOperator)] {
        &self.terms
    }

    pub fn basis_key(&self) -> &BasisKey {
        self.terms[0].1.key()
    }

    /// Degree for truncation bookkeeping: maximum term degree.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, x)| x.degree())
            .max()
            .unwrap_or(0)
    }

    /// Realizes the sum as a sparse operator on `C^k ⊗ F`.
    pub fn realize(&self) -> BlockOperator {
        let k = self.coeff_dim;
        let fock_dim = self.basis_key().dim;
        let mut triplets: Vec<(usize, usize, Complex64)> = Vec::new();
        for (a, x) in &self.terms {
            for r in 0..k {
                for s in 0..k {
                    let weight = a[(r, s)];
                    if weight == Complex64::ZERO {
                        continue;
                    }
                    for (i, ip, v) in x.matrix().entries() {
                        triplets.push((r * fock_dim + i, s * fock_dim + ip, weight * v));
                    }
                }
            }
        }
        BlockOperator {
            coeff_dim: k,
            key: self.basis_key().clone(),
            degree: self.degree(),
            mat: SparseMat::from_triplets(k * fock_dim, triplets),
        }
    }
}

/// Sparse operator on `C^k ⊗ F` with block bookkeeping.
pub struct BlockOperator {
    coeff_dim: usize,
    key: BasisKey,
    degree: usize,
    mat: SparseMat,
}

impl BlockOperator {
    /// `B ⊗ 1` for a coefficient matrix `B`.
    pub fn coeff_embed(b: &SquareMatrix, key: &BasisKey) -> Self {
        let k = b.dim();
        let n = key.dim;
        let mut triplets = Vec::new();
        for r in 0..k {
            for s in 0..k {
                let w = b[(r, s)];
                if w == Complex64::ZERO {
                    continue;
                }
                for i in 0..n {
                    triplets.push((r * n + i, s * n + i, w));
                }
            }
        }
        BlockOperator {
            coeff_dim: k,
            key: key.clone(),
            degree: 0,
            mat: SparseMat::from_triplets(k * n, triplets),
        }
    }

    pub fn coeff_dim(&self) -> usize {
        self.coeff_dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self) -> &SparseMat {
        &self.mat
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.key != rhs.key || self.coeff_dim != rhs.coeff_dim {
            return Err(Error::BasisMismatch(
                "block operator product across different spaces".into(),
            ));
        }
        Ok(BlockOperator {
            coeff_dim: self.coeff_dim,
            key: self.key.clone(),
            degree: self.degree + rhs.degree,
            mat: self.mat.matmul(&rhs.mat),
        })
    }

    fn fock_dim(&self) -> usize {
        self.key.dim
    }
}

/// Blockwise vacuum expectation: entry `(r, s)` is the vacuum-to-vacuum
/// matrix element of the `(r, s)` Fock block.
pub fn block_expectation(t: &BlockOperator) -> SquareMatrix {
    let k = t.coeff_dim;
    let n = t.fock_dim();
    SquareMatrix::from_fn(k, |r, s| {
        t.mat
            .col(s * n)
            .iter()
            .find(|&&(row, _)| row == r * n)
            .map(|&(_, v)| v)
            .unwrap_or(Complex64::ZERO)
    })
}

/// Applies `B ⊗ 1` to a flat block vector without materializing it.
fn apply_coeff(b: &SquareMatrix, v: &[Complex64], fock_dim: usize) -> Vec<Complex64> {
    let k = b.dim();
    let mut out = vec![Complex64::ZERO; v.len()];
    for r in 0..k {
        for s in 0..k {
            let w = b[(r, s)];
            if w == Complex64::ZERO {
                continue;
            }
            let src = &v[s * fock_dim..(s + 1) * fock_dim];
            let dst = &mut out[r * fock_dim..(r + 1) * fock_dim];
            for (d, x) in dst.iter_mut().zip(src) {
                *d += w * x;
            }
        }
    }
    out
}

/// Conditional-expectation source over a family of realized amplified
/// elements: the moment of an interleaved word is computed by applying the
/// factors to `e_s ⊗ Ω` and reading vacuum components, never materializing
/// operator products.
pub struct FamilySource {
    ops: Vec<BlockOperator>,
}

impl FamilySource {
    pub fn new(elements: &[AmplifiedElement]) -> Result<Self> {
        let first = elements.first().ok_or(Error::Degenerate("empty family"))?;
        for e in elements {
            if e.coeff_dim() != first.coeff_dim() {
                return Err(Error::DimensionMismatch {
                    context: "family coefficient dimension",
                    expected: first.coeff_dim(),
                    found: e.coeff_dim(),
                });
            }
            if e.basis_key() != first.basis_key() {
                return Err(Error::BasisMismatch(
                    "family members live on different bases".into(),
                ));
            }
        }
        Ok(FamilySource {
            ops: elements.iter().map(AmplifiedElement::realize).collect(),
        })
    }

    pub fn coeff_dim(&self) -> usize {
        self.ops[0].coeff_dim
    }

    fn op(&self, handle: ElementHandle) -> Result<&BlockOperator> {
        self.ops.get(handle.0).ok_or(Error::IndexOutOfRange {
            index: handle.0,
            len: self.ops.len(),
        })
    }
}

impl MomentSource for FamilySource {
    fn moment(&mut self, word: &OpWord) -> Result<SquareMatrix> {
        let k = self.coeff_dim();
        let key = &self.ops[0].key;
        let fock_dim = key.dim;
        let mut total_degree = 0usize;
        for &h in word.elements() {
            total_degree += self.op(h)?.degree;
        }
        if total_degree > key.depth {
            return Err(Error::TruncationUnsound {
                degree: total_degree,
                depth: key.depth,
            });
        }
        if word.len() > 1 && word.dim() != k {
            return Err(Error::DimensionMismatch {
                context: "word coefficient dimension",
                expected: k,
                found: word.dim(),
            });
        }
        let mut result = SquareMatrix::zeros(k);
        for s in 0..k {
            let mut v = vec![Complex64::ZERO; k * fock_dim];
            v[s * fock_dim] = Complex64::ONE;
            // Factors right to left: the last element first, then the
            // coefficient left of it, and so on.
            let n = word.len();
            v = self.op(word.elements()[n - 1])?.mat.apply(&v);
            for i in (0..n - 1).rev() {
                v = apply_coeff(word.coeff(i), &v, fock_dim);
                v = self.op(word.elements()[i])?.mat.apply(&v);
            }
            for r in 0..k {
                result[(r, s)] = v[r * fock_dim];
            }
        }
        Ok(result)
    }
}

/// Moment functional of a single amplified element:
/// `E[x (B_1 ⊗ 1) x ... (B_p ⊗ 1) x]`.
pub fn opvalued_moment(x: &AmplifiedElement, b_args: &[SquareMatrix]) -> Result<SquareMatrix> {
    let mut source = FamilySource::new(std::slice::from_ref(x))?;
    let word = OpWord::new(
        x.coeff_dim(),
        vec![ElementHandle(0); b_args.len() + 1],
        b_args.to_vec(),
    )?;
    source.moment(&word)
}

/// Cumulant functional of a single amplified element, by inversion of
/// `opvalued_moment` over all sub-words.
pub fn opvalued_cumulant(x: &AmplifiedElement, b_args: &[SquareMatrix]) -> Result<SquareMatrix> {
    let mut source = FamilySource::new(std::slice::from_ref(x))?;
    let word = OpWord::new(
        x.coeff_dim(),
        vec![ElementHandle(0); b_args.len() + 1],
        b_args.to_vec(),
    )?;
    moments_to_cumulants(&word, &mut source)
}

/// Per-trial RNG: one base seed, one ChaCha stream per trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Result of one cumulant-vanishing trial: operator norms of the tested
/// functionals, keyed by order.
#[derive(Clone, Debug)]
pub struct ForwardTrial {
    pub trial: u64,
    pub norms: Vec<(usize, f64)>,
}

/// Vanishing of the cumulant functionals of an amplified semicircular
/// family: per trial, random selfadjoint coefficients build the amplified
/// element and random selfadjoint arguments fill the functional's slots.
pub fn verify_theorem1_forward(
    spec: &CovarianceSpec,
    coeff_dim: usize,
    p_list: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<ForwardTrial>> {
    let p_max = p_list.iter().copied().max().unwrap_or(0);
    let xs = realize_semicircular_family(spec, p_max + 1)?;
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let coeffs: Vec<SquareMatrix> = (0..spec.len())
            .map(|_| random_selfadjoint(coeff_dim, &mut rng))
            .collect();
        let x = amplify(coeffs, xs.clone())?;
        let mut norms = Vec::new();
        for &p in p_list {
            let b_args: Vec<SquareMatrix> = (0..p)
                .map(|_| random_selfadjoint(coeff_dim, &mut rng))
                .collect();
            let xi = opvalued_cumulant(&x, &b_args)?;
            norms.push((p, xi.spectral_norm()));
        }
        out.push(ForwardTrial { trial, norms });
    }
    Ok(out)
}

/// One detection trial: the cumulant norm, the scale it is compared against,
/// and the verdict.
#[derive(Clone, Debug)]
pub struct DetectionTrial {
    pub trial: u64,
    pub norm: f64,
    pub scale: f64,
    pub detected: bool,
}

#[derive(Clone, Debug)]
pub struct DetectionReport {
    pub threshold: f64,
    pub trials: Vec<DetectionTrial>,
    pub detections: usize,
}

/// Samples random selfadjoint coefficient tuples of size `p + 1` (the matrix
/// dimension the degree argument singles out) and reports, per trial, the
/// maximum over its sampled tuples of the order-`p` cumulant functional with
/// identity arguments in operator norm. The threshold is `threshold_factor`
/// times the median over all sampled tuples of the coefficient scale
/// `max_j |A_j|^(p+1)`; for a selfadjoint matrix that power equals the norm
/// of its `(p+1)`-th power, so a structurally nonvanishing cumulant tracks
/// the scale while a vanishing one sits at rounding level far below it.
pub fn detect_nonsemicircular(
    xs: &[FockOperator],
    p: usize,
    trials: u64,
    samples_per_trial: usize,
    seed: u64,
    threshold_factor: f64,
) -> Result<DetectionReport> {
    let coeff_dim = p + 1;
    let b_args = vec![SquareMatrix::identity(coeff_dim); p];
    let mut per_trial: Vec<(u64, f64, f64)> = Vec::with_capacity(trials as usize);
    let mut all_scales: Vec<f64> = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut max_norm = 0.0_f64;
        let mut max_scale = 0.0_f64;
        for _ in 0..samples_per_trial.max(1) {
            let coeffs: Vec<SquareMatrix> = (0..xs.len())
                .map(|_| random_selfadjoint(coeff_dim, &mut rng))
                .collect();
            let scale = coeffs
                .iter()
                .map(SquareMatrix::spectral_norm)
                .fold(0.0_f64, f64::max)
                .powi(p as i32 + 1);
            let x = amplify(coeffs, xs.to_vec())?;
            let xi = opvalued_cumulant(&x, &b_args)?;
            max_norm = max_norm.max(xi.spectral_norm());
            max_scale = max_scale.max(scale);
            all_scales.push(scale);
        }
        per_trial.push((trial, max_norm, max_scale));
    }
    all_scales.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if all_scales.is_empty() {
        0.0
    } else {
        all_scales[all_scales.len() / 2]
    };
    let threshold = threshold_factor * median;
    let trials_out: Vec<DetectionTrial> = per_trial
        .into_iter()
        .map(|(trial, norm, scale)| DetectionTrial {
            trial,
            norm,
            scale,
            detected: norm > threshold,
        })
        .collect();
    let detections = trials_out.iter().filter(|t| t.detected).count();
    Ok(DetectionReport {
        threshold,
        trials: trials_out,
        detections,
    })
}

/// One equality-chain trial: word length and the largest entry difference
/// between the operator-side expectation and the combinatorial expansion.
#[derive(Clone, Debug)]
pub struct ChainTrial {
    pub trial: u64,
    pub word_len: usize,
    pub max_diff: f64,
}

/// Operator-side block expectation of a product of amplified semicircular
/// elements versus the combinatorial expansion: coefficients multiply in
/// word order, scalar moments come from the non-crossing pairing sum.
pub fn verify_theorem2_chain(
    spec: &CovarianceSpec,
    coeff_dim: usize,
    max_word_len: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<ChainTrial>> {
    let xs = realize_semicircular_family(spec, max_word_len.max(1))?;
    let g = spec.len();
    let mut out = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        for word_len in 1..=max_word_len {
            // One fresh amplified element per word position.
            let elements: Vec<AmplifiedElement> = (0..word_len)
                .map(|_| {
                    let coeffs: Vec<SquareMatrix> = (0..g)
                        .map(|_| random_complex(coeff_dim, &mut rng))
                        .collect();
                    amplify(coeffs, xs.clone())
                })
                .collect::<Result<_>>()?;

            let mut source = FamilySource::new(&elements)?;
            let word = OpWord::new(
                coeff_dim,
                (0..word_len).map(ElementHandle).collect(),
                vec![SquareMatrix::identity(coeff_dim); word_len - 1],
            )?;
            let operator_side = source.moment(&word)?;

            let mut combinatorial = SquareMatrix::zeros(coeff_dim);
            let mut j_word = vec![0usize; word_len];
            loop {
                let mut product = elements[0].terms()[j_word[0]].0.clone();
                for pos in 1..word_len {
                    product = &product * &elements[pos].terms()[j_word[pos]].0;
                }
                let scalar = free_wick_moment(&j_word, spec)?;
                if scalar != 0.0 {
                    combinatorial = &combinatorial + &product.scale(Complex64::new(scalar, 0.0));
                }
                // Odometer over {0..g-1}^word_len.
                let mut pos = word_len;
                while pos > 0 {
                    j_word[pos - 1] += 1;
                    if j_word[pos - 1] < g {
                        break;
                    }
                    j_word[pos - 1] = 0;
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
            }
            out.push(ChainTrial {
                trial,
                word_len,
                max_diff: operator_side.max_abs_diff(&combinatorial),
            });
        }
    }
    Ok(out)
}

/// Verdict of one complex-amplification trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ComplexCheckTrial {
    pub trial: u64,
    pub max_norm: f64,
    pub combinations_tested: usize,
    pub status: CheckStatus,
}

/// Decomposes `Σ_j A_j ⊗ c_j` (complex coefficients over circular elements)
/// into its two selfadjoint amplified parts, then checks that both parts and
/// sampled selfadjoint combinations have vanishing cumulant functionals for
/// the listed orders, including mixed words over the pair.
///
/// Sampled combinations: real scalar pairs `(β I, γ I)`, plus pairs `(B, B)`
/// for selfadjoint `B` commuting with every coefficient part when the
/// commutant search finds any. A trial with no testable combination is
/// inconclusive rather than failed.
pub fn complex_semicircular_check(
    num_circular: usize,
    coeff_dim: usize,
    p_list: &[usize],
    trials: u64,
    seed: u64,
    tol: f64,
) -> Result<Vec<ComplexCheckTrial>> {
    let p_max = p_list.iter().copied().max().unwrap_or(0);
    let real_spec = crate::wick::standard_circular_real_spec(num_circular);
    let xs = realize_semicircular_family(&real_spec, p_max + 1)?;
    let mut out = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let coeffs: Vec<SquareMatrix> = (0..num_circular)
            .map(|_| random_complex(coeff_dim, &mut rng))
            .collect();

        // c~ = s~_1 + i s~_2 with selfadjoint parts built from Re/Im of the
        // coefficients over the real generators of each circular variable.
        let mut part1_coeffs = Vec::new();
        let mut part2_coeffs = Vec::new();
        let mut part_xs = Vec::new();
        for (j, a) in coeffs.iter().enumerate() {
            let re = a.re_part();
            let im = a.im_part();
            part1_coeffs.push(re.clone());
            part1_coeffs.push(-&im);
            part2_coeffs.push(im);
            part2_coeffs.push(re);
            part_xs.push(xs[2 * j].clone());
            part_xs.push(xs[2 * j + 1].clone());
        }
        let s1 = amplify(part1_coeffs.clone(), part_xs.clone())?;
        let s2 = amplify(part2_coeffs.clone(), part_xs.clone())?;

        let mut max_norm = 0.0_f64;
        let check_element =
            |x: &AmplifiedElement, max_norm: &mut f64, rng: &mut ChaCha8Rng| -> Result<()> {
                for &p in p_list {
                    let b_args: Vec<SquareMatrix> =
                        (0..p).map(|_| random_selfadjoint(coeff_dim, rng)).collect();
                    let xi = opvalued_cumulant(x, &b_args)?;
                    *max_norm = max_norm.max(xi.spectral_norm());
                }
                Ok(())
            };
        check_element(&s1, &mut max_norm, &mut rng)?;
        check_element(&s2, &mut max_norm, &mut rng)?;

        // Mixed words over the pair (s~_1, s~_2).
        {
            let mut source = FamilySource::new(&[
                amplify(part1_coeffs.clone(), part_xs.clone())?,
                amplify(part2_coeffs.clone(), part_xs.clone())?,
            ])?;
            for &p in p_list {
                if p == 0 {
                    continue;
                }
                let handles: Vec<ElementHandle> = (0..=p).map(|i| ElementHandle(i % 2)).collect();
                let b_args: Vec<SquareMatrix> = (0..p)
                    .map(|_| random_selfadjoint(coeff_dim, &mut rng))
                    .collect();
                let word = OpWord::new(coeff_dim, handles, b_args)?;
                let xi = moments_to_cumulants(&word, &mut source)?;
                max_norm = max_norm.max(xi.spectral_norm());
            }
        }

        // Selfadjoint combinations b1 s~_1 + b2 s~_2.
        let mut combinations: Vec<(SquareMatrix, SquareMatrix)> = Vec::new();
        for _ in 0..3 {
            use rand::Rng;
            let beta: f64 = rng.random_range(-2.0..2.0);
            let gamma: f64 = rng.random_range(-2.0..2.0);
            combinations.push((
                SquareMatrix::scalar(coeff_dim, Complex64::new(beta, 0.0)),
                SquareMatrix::scalar(coeff_dim, Complex64::new(gamma, 0.0)),
            ));
        }
        let all_parts: Vec<SquareMatrix> = part1_coeffs
            .iter()
            .chain(part2_coeffs.iter())
            .cloned()
            .collect();
        for b in hermitian_commutant(&all_parts, 2, &mut rng) {
            combinations.push((b.clone(), b));
        }

        let combinations_tested = combinations.len();
        for (b1, b2) in &combinations {
            // Combination coefficients: b1 * (part1 coeffs) + b2 * (part2).
            let combo_coeffs: Vec<SquareMatrix> = part1_coeffs
                .iter()
                .zip(&part2_coeffs)
                .map(|(c1, c2)| &(b1 * c1) + &(b2 * c2))
                .collect();
            let combo = amplify(combo_coeffs, part_xs.clone())?;
            check_element(&combo, &mut max_norm, &mut rng)?;
        }

        let status = if combinations_tested == 0 {
            CheckStatus::Inconclusive
        } else if max_norm <= tol {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        out.push(ComplexCheckTrial {
            trial,
            max_norm,
            combinations_tested,
            status,
        });
    }
    Ok(out)
}

/// Random selfadjoint elements of the commutant of a set of matrices,
/// excluding multiples of the identity. Solves the real-linear system
/// `[B, C_j] = 0` over the Hermitian matrices by Gaussian elimination and
/// samples combinations of the non-identity part of the solution space.
fn hermitian_commutant(
    cs: &[SquareMatrix],
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<SquareMatrix> {
    let k = cs.first().map_or(0, SquareMatrix::dim);
    if k == 0 {
        return Vec::new();
    }
    // Real basis of Hermitian k x k matrices.
    let mut basis: Vec<SquareMatrix> = Vec::new();
    for r in 0..k {
        basis.push(SquareMatrix::unit(k, r, r));
    }
    for r in 0..k {
        for s in (r + 1)..k {
            let mut sym = SquareMatrix::zeros(k);
            sym[(r, s)] = Complex64::ONE;
            sym[(s, r)] = Complex64::ONE;
            basis.push(sym);
            let mut asym = SquareMatrix::zeros(k);
            asym[(r, s)] = Complex64::new(0.0, 1.0);
            asym[(s, r)] = Complex64::new(0.0, -1.0);
            basis.push(asym);
        }
    }
    let d = basis.len();
    // Rows: real and imaginary parts of every entry of [E_t, C_j].
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for c in cs {
        for r in 0..k {
            for s in 0..k {
                let mut row_re = vec![0.0; d];
                let mut row_im = vec![0.0; d];
                for (t, e) in basis.iter().enumerate() {
                    let comm = &(e * c) - &(c * e);
                    row_re[t] = comm[(r, s)].re;
                    row_im[t] = comm[(r, s)].im;
                }
                rows.push(row_re);
                rows.push(row_im);
            }
        }
    }
    let null = real_nullspace(&mut rows, d);
    // Remove the identity direction (always present) and sample the rest.
    let identity_coords: Vec<f64> = (0..d).map(|t| if t < k { 1.0 } else { 0.0 }).collect();
    let mut directions: Vec<Vec<f64>> = Vec::new();
    for v in null {
        let proj: f64 = v
            .iter()
            .zip(&identity_coords)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / (k as f64);
        let reduced: Vec<f64> = v
            .iter()
            .zip(&identity_coords)
            .map(|(a, b)| a - proj * b)
            .collect();
        if reduced.iter().map(|x| x * x).sum::<f64>().sqrt() > 1e-8 {
            directions.push(reduced);
        }
    }
    if directions.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for _ in 0..samples {
        use rand::Rng;
        let mut combo = vec![0.0; d];
        for dir in &directions {
            let w: f64 = rng.random_range(-1.0..1.0);
            for (c, x) in combo.iter_mut().zip(dir) {
                *c += w * x;
            }
        }
        let mut b = SquareMatrix::zeros(k);
        for (t, e) in basis.iter().enumerate() {
            b = &b + &e.scale(Complex64::new(combo[t], 0.0));
        }
        out.push(b);
    }
    out
}

/// Basis of the nullspace of the row system, by Gaussian elimination with
/// partial pivoting. Rows are consumed in place.
fn real_nullspace(rows: &mut [Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..d {
        let pivot_row = (rank..rows.len())
            .filter(|&r| rows[r][col].abs() > 1e-9)
            .max_by(|&a, &b| rows[a][col].abs().partial_cmp(&rows[b][col].abs()).unwrap());
        let Some(pr) = pivot_row else { continue };
        rows.swap(rank, pr);
        let lead = rows[rank][col];
        for x in rows[rank].iter_mut() {
            *x /= lead;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let f = row[col];
            if r != rank && f.abs() > 0.0 {
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x -= p * f;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0.0; d];
            v[fc] = 1.0;
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -rows[prow][fc];
            }
            v
        })
        .collect()
}

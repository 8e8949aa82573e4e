//! Moment-cumulant transforms with matrix coefficients.
//!
//! Words are interleaved products `x_{i_0} b_1 x_{i_1} b_2 ... x_{i_n}` with
//! square-matrix coefficients. The transform in each direction runs over
//! non-crossing partitions; a partition term is evaluated through its nesting
//! forest, with the value of an inner block multiplying into the coefficient
//! slot immediately left of the element that follows the block. A block that
//! ends the ground set multiplies on the right of its outer factor instead,
//! which is the same rule applied at the top-level chain.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::ncpart::{enumerate_nc, NcPartition};
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// Index of an element in whatever family the caller evaluates over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElementHandle(pub usize);

/// Interleaved word: `n` element handles with `n-1` coefficient matrices
/// between consecutive elements. Both textbook placements ("b right of the
/// preceding element" and "b left of the following element") describe the
/// same interleaving, so this is the single normal form.
#[derive(Clone, Debug)]
pub struct OpWord {
    dim: usize,
    elements: Vec<ElementHandle>,
    coeffs: Vec<SquareMatrix>,
}

impl OpWord {
    pub fn new(
        dim: usize,
        elements: Vec<ElementHandle>,
        coeffs: Vec<SquareMatrix>,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Degenerate("empty word"));
        }
        if coeffs.len() + 1 != elements.len() {
            return Err(Error::DimensionMismatch {
                context: "interleaved coefficient count",
                expected: elements.len() - 1,
                found: coeffs.len(),
            });
        }
        for c in &coeffs {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "coefficient dimension",
                    expected: dim,
                    found: c.dim(),
                });
            }
        }
        Ok(OpWord {
            dim,
            elements,
            coeffs,
        })
    }

    /// Scalar word: 1x1 identity coefficients throughout.
    pub fn scalar(handles: &[usize]) -> Self {
        let elements = handles.iter().map(|&h| ElementHandle(h)).collect();
        let coeffs = vec![SquareMatrix::identity(1); handles.len().saturating_sub(1)];
        OpWord {
            dim: 1,
            elements,
            coeffs,
        }
    }

    /// Number of elements; at least 1 by construction.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Always false: words carry at least one element.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ElementHandle] {
        &self.elements
    }

    /// Coefficient between elements `i` and `i+1` (0-based).
    pub fn coeff(&self, i: usize) -> &SquareMatrix {
        &self.coeffs[i]
    }
}

/// Conditional expectation of interleaved words.
pub trait MomentSource {
    fn moment(&mut self, word: &OpWord) -> Result<SquareMatrix>;
}

/// Per-order cumulant evaluator of interleaved words.
pub trait CumulantSource {
    fn cumulant(&mut self, word: &OpWord) -> Result<SquareMatrix>;
}

/// Adapter turning a closure into a `MomentSource`.
pub struct MomentFn<F>(pub F);

impl<F> MomentSource for MomentFn<F>
where
    F: FnMut(&OpWord) -> Result<SquareMatrix>,
{
    fn moment(&mut self, word: &OpWord) -> Result<SquareMatrix> {
        (self.0)(word)
    }
}

/// Adapter turning a closure into a `CumulantSource`.
pub struct CumulantFn<F>(pub F);

impl<F> CumulantSource for CumulantFn<F>
where
    F: FnMut(&OpWord) -> Result<SquareMatrix>,
{
    fn cumulant(&mut self, word: &OpWord) -> Result<SquareMatrix> {
        (self.0)(word)
    }
}

thread_local! {
    static NC_CACHE: RefCell<HashMap<usize, Rc<Vec<NcPartition>>>> = RefCell::new(HashMap::new());
}

fn nc_list(n: usize) -> Result<Rc<Vec<NcPartition>>> {
    NC_CACHE.with(|cache| {
        if let Some(hit) = cache.borrow().get(&n) {
            return Ok(Rc::clone(hit));
        }
        let rc = Rc::new(enumerate_nc(n)?);
        cache.borrow_mut().insert(n, Rc::clone(&rc));
        Ok(rc)
    })
}

/// Evaluates one partition term. Root subtrees multiply left to right with
/// the gap coefficients between them; inside a subtree, each child block's
/// value is folded into the coefficient slot left of the next outer element.
pub fn k_pi_evaluate(
    pi: &NcPartition,
    word: &OpWord,
    kfn: &mut impl CumulantSource,
) -> Result<SquareMatrix> {
    if pi.n() != word.len() {
        return Err(Error::DimensionMismatch {
            context: "partition order vs word length",
            expected: word.len(),
            found: pi.n(),
        });
    }
    // Root subtrees fill their hulls and tile the ground set left to right,
    // so consecutive factors are joined by the coefficient right after the
    // previous subtree's last position.
    let mut acc: Option<(SquareMatrix, usize)> = None;
    for &root in pi.roots() {
        let val = eval_subtree(pi, root, word, kfn)?;
        let (lo, hi) = hull(pi, root);
        acc = Some(match acc {
            None => (val, hi),
            Some((prev, prev_end)) => {
                debug_assert_eq!(prev_end + 1, lo, "root subtrees must tile");
                (&(&prev * word.coeff(prev_end - 1)) * &val, hi)
            }
        });
    }
    Ok(acc.expect("partition has at least one block").0)
}

fn hull(pi: &NcPartition, block: usize) -> (usize, usize) {
    let b = &pi.blocks()[block];
    (b[0], *b.last().expect("nonempty block"))
}

/// Value of the subtree rooted at `block`: the outer cumulant of the block's
/// elements, with each gap's children composed into the covering coefficient.
fn eval_subtree(
    pi: &NcPartition,
    block: usize,
    word: &OpWord,
    kfn: &mut impl CumulantSource,
) -> Result<SquareMatrix> {
    let positions = &pi.blocks()[block];
    let elements: Vec<ElementHandle> = positions.iter().map(|&v| word.elements()[v - 1]).collect();
    let mut coeffs: Vec<SquareMatrix> = Vec::with_capacity(positions.len() - 1);
    let mut child_iter = pi.children(block).iter().peekable();
    for gap in positions.windows(2) {
        let (lo, hi) = (gap[0], gap[1]);
        let mut composed = word.coeff(lo - 1).clone();
        while let Some(&&child) = child_iter.peek() {
            let (clo, chi) = hull(pi, child);
            if clo > hi {
                break;
            }
            debug_assert!(lo < clo && chi < hi, "child escapes its gap");
            let val = eval_subtree(pi, child, word, kfn)?;
            // The child's subtree fills (clo..=chi); the next factor of this
            // slot is the coefficient right after position chi.
            composed = &(&composed * &val) * word.coeff(chi - 1);
            child_iter.next();
        }
        coeffs.push(composed);
    }
    debug_assert!(child_iter.next().is_none(), "child beyond the last gap");
    let sub = OpWord::new(word.dim(), elements, coeffs)?;
    kfn.cumulant(&sub)
}

/// `Σ_{π ∈ NC(n)} k_π[word]`.
pub fn cumulants_to_moments(word: &OpWord, kfn: &mut impl CumulantSource) -> Result<SquareMatrix> {
    let mut total = SquareMatrix::zeros(word.dim());
    for pi in nc_list(word.len())?.iter() {
        let term = k_pi_evaluate(pi, word, kfn)?;
        total = &total + &term;
    }
    Ok(total)
}

#[derive(PartialEq, Eq, Hash)]
struct WordKey {
    elements: Vec<usize>,
    coeff_bits: Vec<(u64, u64)>,
}

fn word_key(word: &OpWord) -> WordKey {
    let elements = word.elements().iter().map(|h| h.0).collect();
    let mut coeff_bits = Vec::new();
    for i in 0..word.len() - 1 {
        let c = word.coeff(i);
        for r in 0..c.dim() {
            for s in 0..c.dim() {
                let z = c[(r, s)];
                coeff_bits.push((z.re.to_bits(), z.im.to_bits()));
            }
        }
    }
    WordKey {
        elements,
        coeff_bits,
    }
}

struct Inverter<'a, M: MomentSource> {
    source: &'a mut M,
    memo: HashMap<WordKey, SquareMatrix>,
}

impl<M: MomentSource> Inverter<'_, M> {
    fn kn(&mut self, word: &OpWord) -> Result<SquareMatrix> {
        if word.len() == 1 {
            return self.source.moment(word);
        }
        let key = word_key(word);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let mut value = self.source.moment(word)?;
        for pi in nc_list(word.len())?.iter() {
            if pi.block_count() == 1 {
                continue;
            }
            let term = k_pi_evaluate(pi, word, self)?;
            value = &value - &term;
        }
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

impl<M: MomentSource> CumulantSource for Inverter<'_, M> {
    fn cumulant(&mut self, word: &OpWord) -> Result<SquareMatrix> {
        self.kn(word)
    }
}

/// `k^(n)[word] = μ^(n)[word] − Σ_{π ≠ full block} k_π[word]`, recursing on
/// strictly shorter words; memoized per exact sub-word within one call.
pub fn moments_to_cumulants(word: &OpWord, source: &mut impl MomentSource) -> Result<SquareMatrix> {
    let mut inv = Inverter {
        source,
        memo: HashMap::new(),
    };
    inv.kn(word)
}

/// Order-`p` cumulant functional of the family: the order-(p+1) cumulant of
/// `x_{i_0} b_1 x_{i_1} ... b_p x_{i_p}`, where `p = b_args.len()`. `p = 0`
/// is the plain first cumulant of a single element.
pub fn xi_functional(
    dim: usize,
    indices: &[ElementHandle],
    b_args: &[SquareMatrix],
    source: &mut impl MomentSource,
) -> Result<SquareMatrix> {
    let word = OpWord::new(dim, indices.to_vec(), b_args.to_vec())?;
    moments_to_cumulants(&word, source)
}

/// Moment companion of `xi_functional`: the order-(p+1) moment of the same
/// interleaved word.
pub fn eta_functional(
    dim: usize,
    indices: &[ElementHandle],
    b_args: &[SquareMatrix],
    source: &mut impl MomentSource,
) -> Result<SquareMatrix> {
    let word = OpWord::new(dim, indices.to_vec(), b_args.to_vec())?;
    source.moment(&word)
}

/// Scalar order-2 inversion: `k2(a1,a2) = mu(a1 a2) − mu(a1) mu(a2)`.
pub fn scalar_k2(mu: &mut impl FnMut(&[usize]) -> f64, a1: usize, a2: usize) -> f64 {
    mu(&[a1, a2]) - mu(&[a1]) * mu(&[a2])
}

/// Scalar order-3 inversion derived from the partition sum:
/// `k3 = mu(123) − mu(12)mu(3) − mu(1)mu(23) − mu(2)mu(13) + 2 mu(1)mu(2)mu(3)`.
pub fn scalar_k3(mu: &mut impl FnMut(&[usize]) -> f64, a1: usize, a2: usize, a3: usize) -> f64 {
    mu(&[a1, a2, a3])
        - mu(&[a1, a2]) * mu(&[a3])
        - mu(&[a1]) * mu(&[a2, a3])
        - mu(&[a2]) * mu(&[a1, a3])
        + 2.0 * mu(&[a1]) * mu(&[a2]) * mu(&[a3])
}

/// 1x1 matrix from a real scalar.
pub fn scalar_matrix(x: f64) -> SquareMatrix {
    SquareMatrix::from_complex(Complex64::new(x, 0.0))
}

/// Deterministic random multilinear cumulant system: fixed anchor matrices
/// per (handle, slot, length) threaded through the interleaved coefficients.
/// Being multilinear it is continuous in the coefficients, so roundtrip
/// residuals stay near machine precision; a bit-keyed table would not be.
pub fn multilinear_cumulant_fn(
    dim: usize,
    salt: u64,
) -> impl FnMut(&OpWord) -> Result<SquareMatrix> {
    use rand::SeedableRng;
    let anchor = move |h: ElementHandle, slot: usize, len: usize| -> SquareMatrix {
        let seed = salt
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add((h.0 as u64) << 32)
            .wrapping_add((slot as u64) << 16)
            .wrapping_add(len as u64);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        crate::matrix::random_complex(dim, &mut rng)
    };
    move |word| {
        let n = word.len();
        let mut acc = anchor(word.elements()[0], 0, n);
        for i in 1..n {
            acc = &(&acc * word.coeff(i - 1)) * &anchor(word.elements()[i], i, n);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{random_complex, random_selfadjoint};
    use crate::ncpart::SetPartition;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::hash::{DefaultHasher, Hash, Hasher};

    fn nc(n: usize, blocks: &[&[usize]]) -> NcPartition {
        NcPartition::from_set_partition(
            SetPartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap(),
        )
        .unwrap()
    }

    /// Deterministic pseudo-random matrix function of the exact word content.
    fn hash_fn(dim: usize, salt: u64) -> impl FnMut(&OpWord) -> Result<SquareMatrix> {
        move |word| {
            let mut hasher = DefaultHasher::new();
            salt.hash(&mut hasher);
            word_key(word).hash(&mut hasher);
            let mut rng = ChaCha8Rng::seed_from_u64(hasher.finish());
            Ok(random_complex(dim, &mut rng))
        }
    }

    use super::multilinear_cumulant_fn as multilinear_fn;

    /// Scalar moment source: product of coefficients times a per-length
    /// moment of the single underlying variable.
    fn scalar_source(moments: Vec<f64>) -> impl FnMut(&OpWord) -> Result<SquareMatrix> {
        move |word| {
            let mut value = Complex64::new(moments[word.len() - 1], 0.0);
            for i in 0..word.len() - 1 {
                value *= word.coeff(i).as_complex();
            }
            Ok(SquareMatrix::from_complex(value))
        }
    }

    #[test]
    fn order_one_moment_equals_cumulant() {
        let word = OpWord::scalar(&[7]);
        let mut kfn = CumulantFn(|_: &OpWord| Ok(scalar_matrix(2.5)));
        let mu = cumulants_to_moments(&word, &mut kfn).unwrap();
        assert_eq!(mu.as_complex().re, 2.5);

        let mut src = MomentFn(scalar_source(vec![0.3]));
        let k = moments_to_cumulants(&word, &mut src).unwrap();
        assert_eq!(k.as_complex().re, 0.3);
    }

    #[test]
    fn order_two_moment_is_k2_plus_k1_squared() {
        let word = OpWord::scalar(&[0, 0]);
        let mut kfn =
            CumulantFn(|w: &OpWord| Ok(scalar_matrix(if w.len() == 1 { 3.0 } else { 5.0 })));
        let mu = cumulants_to_moments(&word, &mut kfn).unwrap();
        assert!((mu.as_complex().re - (5.0 + 3.0 * 3.0)).abs() < 1e-14);
    }

    #[test]
    fn nested_singleton_feeds_the_left_coefficient_slot() {
        // Partition {(1,3),(2)} on a matrix word must evaluate to
        // k2 applied with composed coefficient b1 * k1 * b2, in that order.
        let dim = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b1 = random_complex(dim, &mut rng);
        let b2 = random_complex(dim, &mut rng);
        let k1_value = random_complex(dim, &mut rng);
        let word = OpWord::new(
            dim,
            vec![ElementHandle(0), ElementHandle(1), ElementHandle(2)],
            vec![b1.clone(), b2.clone()],
        )
        .unwrap();
        let k1 = k1_value.clone();
        let mut kfn = CumulantFn(move |w: &OpWord| {
            Ok(if w.len() == 1 {
                k1.clone()
            } else {
                // Echo the composed coefficient so the test can see it.
                w.coeff(0).clone()
            })
        });
        let pi = nc(3, &[&[1, 3], &[2]]);
        let got = k_pi_evaluate(&pi, &word, &mut kfn).unwrap();
        let want = &(&b1 * &k1_value) * &b2;
        assert!(got.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn singleton_partition_is_ordered_product() {
        let dim = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b1 = random_complex(dim, &mut rng);
        let b2 = random_complex(dim, &mut rng);
        let k_a = random_complex(dim, &mut rng);
        let k_b = random_complex(dim, &mut rng);
        let k_c = random_complex(dim, &mut rng);
        let word = OpWord::new(
            dim,
            vec![ElementHandle(0), ElementHandle(1), ElementHandle(2)],
            vec![b1.clone(), b2.clone()],
        )
        .unwrap();
        let (ka, kb, kc) = (k_a.clone(), k_b.clone(), k_c.clone());
        let mut kfn = CumulantFn(move |w: &OpWord| {
            Ok(match w.elements()[0].0 {
                0 => ka.clone(),
                1 => kb.clone(),
                _ => kc.clone(),
            })
        });
        let pi = nc(3, &[&[1], &[2], &[3]]);
        let got = k_pi_evaluate(&pi, &word, &mut kfn).unwrap();
        let want = &(&(&(&k_a * &b1) * &k_b) * &b2) * &k_c;
        assert!(got.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn full_block_passes_word_through() {
        let word = OpWord::scalar(&[0, 1, 2, 3]);
        let mut seen = Vec::new();
        {
            let mut kfn = CumulantFn(|w: &OpWord| {
                seen.push(w.len());
                Ok(scalar_matrix(1.0))
            });
            let pi = nc(4, &[&[1, 2, 3, 4]]);
            k_pi_evaluate(&pi, &word, &mut kfn).unwrap();
        }
        assert_eq!(seen, vec![4]);
    }

    #[test]
    fn split_partition_factorizes() {
        // {(1,2),(3,5),(4)} splits at the gap after position 2.
        let dim = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let coeffs: Vec<SquareMatrix> = (0..4).map(|_| random_complex(dim, &mut rng)).collect();
        let word = OpWord::new(dim, (0..5).map(ElementHandle).collect(), coeffs.clone()).unwrap();
        let mut kfn = CumulantFn(hash_fn(dim, 99));
        let pi = nc(5, &[&[1, 2], &[3, 5], &[4]]);
        let whole = k_pi_evaluate(&pi, &word, &mut kfn).unwrap();

        let left_word = OpWord::new(
            dim,
            vec![ElementHandle(0), ElementHandle(1)],
            vec![coeffs[0].clone()],
        )
        .unwrap();
        let right_word = OpWord::new(
            dim,
            vec![ElementHandle(2), ElementHandle(3), ElementHandle(4)],
            vec![coeffs[2].clone(), coeffs[3].clone()],
        )
        .unwrap();
        let left_pi = nc(2, &[&[1, 2]]);
        let right_pi = nc(3, &[&[1, 3], &[2]]);
        let left = k_pi_evaluate(&left_pi, &left_word, &mut kfn).unwrap();
        // The right sub-word re-creates positions 3..5 with the same element
        // handles and coefficients, so the hash-keyed evaluator agrees.
        let right = k_pi_evaluate(&right_pi, &right_word, &mut kfn).unwrap();
        let want = &(&left * &coeffs[1]) * &right;
        assert!(whole.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn pair_cumulants_only_count_noncrossing_pairings() {
        // Order 4, cumulants vanish except order 2 with value = composed
        // coefficient; the moment is the number of non-crossing pairings.
        let word = OpWord::scalar(&[0, 0, 0, 0]);
        let mut kfn = CumulantFn(|w: &OpWord| {
            Ok(if w.len() == 2 {
                w.coeff(0).clone()
            } else {
                SquareMatrix::zeros(w.dim())
            })
        });
        let mu = cumulants_to_moments(&word, &mut kfn).unwrap();
        assert!((mu.as_complex().re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_inversion_matches_direct_substitution() {
        let mut src = MomentFn(scalar_source(vec![1.0, 3.0]));
        let k2 = moments_to_cumulants(&OpWord::scalar(&[0, 0]), &mut src).unwrap();
        assert!((k2.as_complex().re - 2.0).abs() < 1e-14);

        let mut src = MomentFn(scalar_source(vec![0.0, 1.0, 0.0]));
        let k3 = moments_to_cumulants(&OpWord::scalar(&[0, 0, 0]), &mut src).unwrap();
        assert!(k3.as_complex().norm() < 1e-14);
    }

    #[test]
    fn closed_forms_match_generic_inversion() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            // A full multilinear scalar moment assignment over 3 symbols.
            let mut table: HashMap<Vec<usize>, f64> = HashMap::new();
            let mut mu = {
                let table = &mut table;
                let rng = &mut rng;
                move |w: &[usize]| -> f64 {
                    *table
                        .entry(w.to_vec())
                        .or_insert_with(|| rng.random_range(-1.0..1.0))
                }
            };
            let k2_closed = scalar_k2(&mut mu, 0, 1);
            let k3_closed = scalar_k3(&mut mu, 0, 1, 2);

            let mut snapshot = table.clone();
            let mut src = MomentFn(move |w: &OpWord| {
                let handles: Vec<usize> = w.elements().iter().map(|h| h.0).collect();
                let base = *snapshot.entry(handles).or_insert(0.0);
                let mut value = Complex64::new(base, 0.0);
                for i in 0..w.len() - 1 {
                    value *= w.coeff(i).as_complex();
                }
                Ok(SquareMatrix::from_complex(value))
            });
            let k2_generic = moments_to_cumulants(&OpWord::scalar(&[0, 1]), &mut src).unwrap();
            let k3_generic = moments_to_cumulants(&OpWord::scalar(&[0, 1, 2]), &mut src).unwrap();
            assert!((k2_generic.as_complex().re - k2_closed).abs() < 1e-12);
            assert!((k3_generic.as_complex().re - k3_closed).abs() < 1e-12);
        }
    }

    #[test]
    fn roundtrip_recovers_cumulants_scalar_and_matrix() {
        for (dim, max_order, cases) in [(1usize, 5usize, 12usize), (2, 4, 6)] {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + dim as u64);
            for case in 0..cases {
                let salt = 31 * dim as u64 + case as u64;
                for order in 1..=max_order {
                    let elements: Vec<ElementHandle> = (0..order)
                        .map(|_| ElementHandle(rng.random_range(0..3)))
                        .collect();
                    let coeffs: Vec<SquareMatrix> = (0..order - 1)
                        .map(|_| random_selfadjoint(dim, &mut rng))
                        .collect();
                    let word = OpWord::new(dim, elements, coeffs).unwrap();

                    let mut direct = CumulantFn(multilinear_fn(dim, salt));
                    let expected = direct.cumulant(&word).unwrap();
                    let mut mu_from_k = MomentFn(|w: &OpWord| {
                        cumulants_to_moments(w, &mut CumulantFn(multilinear_fn(dim, salt)))
                    });
                    let recovered = moments_to_cumulants(&word, &mut mu_from_k).unwrap();
                    assert!(
                        recovered.max_abs_diff(&expected) < 1e-12,
                        "dim={dim} order={order} case={case} diff={}",
                        recovered.max_abs_diff(&expected)
                    );
                }
            }
        }
    }

    #[test]
    fn scalar_xi_factors_through_coefficients() {
        let moments = vec![0.4, 1.3, -0.2, 0.9];
        let handles = [ElementHandle(0), ElementHandle(0), ElementHandle(0)];
        let b: Vec<SquareMatrix> = vec![scalar_matrix(1.7), scalar_matrix(-0.6)];
        let mut src = MomentFn(scalar_source(moments.clone()));
        let with_b = xi_functional(1, &handles, &b, &mut src).unwrap();
        let mut src = MomentFn(scalar_source(moments));
        let unit = xi_functional(
            1,
            &handles,
            &[scalar_matrix(1.0), scalar_matrix(1.0)],
            &mut src,
        )
        .unwrap();
        let product = 1.7 * -0.6;
        assert!((with_b.as_complex() - unit.as_complex() * product).norm() < 1e-13);
    }

    #[test]
    fn eta_is_the_plain_moment() {
        let mut src = MomentFn(scalar_source(vec![0.0, 1.0, 0.0, 2.0]));
        let handles = [ElementHandle(0), ElementHandle(0)];
        let eta = eta_functional(1, &handles, &[scalar_matrix(1.0)], &mut src).unwrap();
        assert!((eta.as_complex().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn word_construction_rejects_bad_shapes() {
        assert!(matches!(
            OpWord::new(1, vec![], vec![]),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            OpWord::new(
                2,
                vec![ElementHandle(0), ElementHandle(1)],
                vec![SquareMatrix::identity(3)]
            ),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            OpWord::new(2, vec![ElementHandle(0), ElementHandle(1)], vec![]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partition_order_must_match_word_length() {
        let word = OpWord::scalar(&[0, 1]);
        let pi = nc(3, &[&[1, 2, 3]]);
        let mut kfn = CumulantFn(|_: &OpWord| Ok(scalar_matrix(0.0)));
        assert!(matches!(
            k_pi_evaluate(&pi, &word, &mut kfn),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

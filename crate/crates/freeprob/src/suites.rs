//! Executes a parsed scenario and produces a report.
//!
//! Numeric knobs resolve in precedence order: an explicit command-line flag
//! wins, then the scenario payload, then the built-in default. The effective
//! values are stamped into the report's environment block.

use crate::amplify::{
    complex_semicircular_check, detect_nonsemicircular, verify_theorem1_forward,
    verify_theorem2_chain, CheckStatus,
};
use crate::error::{Error, Result};
use crate::fock::{
    gaussian_bosonic, gaussian_free, realize_semicircular_family, vacuum_expectation, BosonBasis,
    FockOperator, FreeFockBasis,
};
use crate::matrix::random_complex;
use crate::mcx::{
    cumulants_to_moments, moments_to_cumulants, multilinear_cumulant_fn, scalar_k2, scalar_k3,
    CumulantFn, ElementHandle, MomentFn, OpWord,
};
use crate::ncpart::{
    catalan_number, enumerate_nc, enumerate_ncpp, enumerate_set_partitions, NcPartition,
};
use crate::report::{digest_hex, Environment, Report};
use crate::scenario::{
    AlParams, AmplifiedVanishingParams, ChainParams, CircularParams, ComplexCheckParams,
    CumulantsPayload, DetectionParams, FockPayload, MomentsPayload, PartitionsPayload, Scenario,
    ScenarioBody, SymfockParams, VerifyPayload,
};
use crate::standard_poly::{find_nonvanishing_witness, verify_al_vanishing};
use crate::symfock::verify_symmetrization;
use crate::wick::{
    circular_star_moment, classical_wick_moment, free_wick_moment, standard_circular_real_spec,
    CovarianceSpec, StarWord,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::time::Instant;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_TRIALS: u64 = 50;

/// Command-line overrides; `None` means not given.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub depth: Option<usize>,
    pub trials: Option<u64>,
}

fn pick<T: Copy>(flag: Option<T>, payload: Option<T>, default: T) -> T {
    flag.or(payload).unwrap_or(default)
}

/// Runs the scenario and stamps timing into the returned report.
pub fn run_scenario(scenario: &Scenario, raw: &[u8], config: &RunConfig) -> Result<Report> {
    let started = Instant::now();
    let digest = digest_hex(raw);
    let mut report = match &scenario.body {
        ScenarioBody::Partitions(p) => run_partitions(&scenario.name, digest, config, p)?,
        ScenarioBody::Moments(p) => run_moments(&scenario.name, digest, config, p)?,
        ScenarioBody::Cumulants(p) => run_cumulants(&scenario.name, digest, config, p)?,
        ScenarioBody::Fock(p) => run_fock(&scenario.name, digest, config, p)?,
        ScenarioBody::Verify(v) => run_verify(&scenario.name, digest, config, v)?,
    };
    report.finish(started.elapsed().as_millis());
    Ok(report)
}

fn base_env(config: &RunConfig) -> Environment {
    Environment {
        seed: config.seed.unwrap_or(DEFAULT_SEED),
        tol: config.tol.unwrap_or(DEFAULT_TOL),
        depth: config.depth,
        trials: config.trials.unwrap_or(DEFAULT_TRIALS),
    }
}

fn run_partitions(
    name: &str,
    digest: String,
    config: &RunConfig,
    p: &PartitionsPayload,
) -> Result<Report> {
    let mut report = Report::new(name, digest, base_env(config));
    for n in 1..=p.max_n {
        let generated = enumerate_nc(n)?.len() as u64;
        let filtered = enumerate_set_partitions(n)?
            .into_iter()
            .filter(|sp| NcPartition::from_set_partition(sp.clone()).is_ok())
            .count() as u64;
        let expected = catalan_number(n);
        report.check_count(format!("nc_count_generated_n{n}"), generated, expected);
        report.check_count(format!("nc_count_filtered_n{n}"), filtered, expected);
    }
    for k in 1..=p.max_pair_order {
        let count = enumerate_ncpp(2 * k)?.len() as u64;
        report.check_count(format!("ncpp_count_2k{}", 2 * k), count, catalan_number(k));
    }
    Ok(report)
}

fn run_moments(
    name: &str,
    digest: String,
    config: &RunConfig,
    p: &MomentsPayload,
) -> Result<Report> {
    let mut env = base_env(config);
    env.tol = pick(config.tol, p.tolerance, DEFAULT_TOL);
    let tol = env.tol;
    let mut report = Report::new(name, digest, env);
    if let Some(exp) = &p.expected_free {
        if exp.len() != p.words.len() {
            return Err(Error::InvalidScenario(
                "expected_free length differs from words".into(),
            ));
        }
    }
    if let Some(exp) = &p.expected_classical {
        if exp.len() != p.words.len() {
            return Err(Error::InvalidScenario(
                "expected_classical length differs from words".into(),
            ));
        }
    }
    for (i, word) in p.words.iter().enumerate() {
        let free = free_wick_moment(word, &p.covariance)?;
        let classical = classical_wick_moment(word, &p.covariance)?;
        if word.len() % 2 == 1 {
            report.check_le(format!("odd_word{i}_free"), free.abs(), 0.0);
            report.check_le(format!("odd_word{i}_classical"), classical.abs(), 0.0);
        }
        if let Some(exp) = &p.expected_free {
            report.check_le(format!("free_word{i}_dev"), (free - exp[i]).abs(), tol);
            report.annotate_last(format!("word {word:?}, value {free}"));
        }
        if let Some(exp) = &p.expected_classical {
            report.check_le(
                format!("classical_word{i}_dev"),
                (classical - exp[i]).abs(),
                tol,
            );
            report.annotate_last(format!("word {word:?}, value {classical}"));
        }
    }
    Ok(report)
}

fn run_cumulants(
    name: &str,
    digest: String,
    config: &RunConfig,
    p: &CumulantsPayload,
) -> Result<Report> {
    let mut env = base_env(config);
    env.seed = pick(config.seed, p.seed, DEFAULT_SEED);
    env.tol = pick(config.tol, p.tolerance, 1e-12);
    let seed = env.seed;
    let tol = env.tol;
    let mut report = Report::new(name, digest, env);

    for spec in &p.systems {
        for order in 1..=spec.max_order {
            let mut worst = 0.0_f64;
            for case in 0..spec.count {
                let salt = seed
                    .wrapping_mul(0x2545_f491_4f6c_dd1d)
                    .wrapping_add((spec.dim as u64) << 48)
                    .wrapping_add((order as u64) << 40)
                    .wrapping_add(case);
                let mut rng = ChaCha8Rng::seed_from_u64(salt);
                let elements: Vec<ElementHandle> = (0..order)
                    .map(|_| ElementHandle(rng.random_range(0..3)))
                    .collect();
                let coeffs: Vec<_> = (0..order - 1)
                    .map(|_| random_complex(spec.dim, &mut rng))
                    .collect();
                let word = OpWord::new(spec.dim, elements, coeffs)?;
                let mut forward = MomentFn(|w: &OpWord| {
                    cumulants_to_moments(
                        w,
                        &mut CumulantFn(multilinear_cumulant_fn(spec.dim, salt)),
                    )
                });
                let recovered = moments_to_cumulants(&word, &mut forward)?;
                let mut direct = CumulantFn(multilinear_cumulant_fn(spec.dim, salt));
                use crate::mcx::CumulantSource;
                let expected = direct.cumulant(&word)?;
                worst = worst.max(recovered.max_abs_diff(&expected));
            }
            report.check_le(
                format!("roundtrip_dim{}_order{order}", spec.dim),
                worst,
                tol,
            );
            report.annotate_last(format!("{} random systems", spec.count));
        }
    }

    let mut worst2 = 0.0_f64;
    let mut worst3 = 0.0_f64;
    for case in 0..p.closed_form_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37).wrapping_add(case));
        let mut table: HashMap<Vec<usize>, f64> = HashMap::new();
        for len in 1..=3usize {
            let mut word = vec![0usize; len];
            loop {
                table.insert(word.clone(), rng.random_range(-2.0..2.0));
                let mut pos = len;
                while pos > 0 {
                    word[pos - 1] += 1;
                    if word[pos - 1] < 3 {
                        break;
                    }
                    word[pos - 1] = 0;
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
            }
        }
        let vars: Vec<usize> = (0..3).map(|_| rng.random_range(0..3)).collect();
        let mut mu = |w: &[usize]| table[&w.to_vec()];
        let k2_closed = scalar_k2(&mut mu, vars[0], vars[1]);
        let k3_closed = scalar_k3(&mut mu, vars[0], vars[1], vars[2]);

        let mut source = MomentFn(|w: &OpWord| {
            let mut value = table[&w.elements().iter().map(|h| h.0).collect::<Vec<_>>()];
            for i in 0..w.len() - 1 {
                value *= w.coeff(i).as_complex().re;
            }
            Ok(crate::mcx::scalar_matrix(value))
        });
        let k2_generic = moments_to_cumulants(&OpWord::scalar(&vars[..2]), &mut source)?;
        let k3_generic = moments_to_cumulants(&OpWord::scalar(&vars), &mut source)?;
        worst2 = worst2.max((k2_generic.as_complex().re - k2_closed).abs());
        worst3 = worst3.max((k3_generic.as_complex().re - k3_closed).abs());
    }
    report.check_le("closed_form_order2_dev", worst2, tol);
    report.check_le("closed_form_order3_dev", worst3, tol);
    report.annotate_last(format!("{} random moment tables", p.closed_form_samples));
    Ok(report)
}

fn run_fock(name: &str, digest: String, config: &RunConfig, p: &FockPayload) -> Result<Report> {
    let depth = pick(config.depth, p.depth, p.max_word_len + 1);
    let mut env = base_env(config);
    env.tol = pick(config.tol, p.tolerance, DEFAULT_TOL);
    env.depth = Some(depth);
    let tol = env.tol;
    let mut report = Report::new(name, digest, env);

    let g = p.covariance.len();
    let free_ops = realize_semicircular_family(&p.covariance, depth)?;
    let boson_basis = BosonBasis::new(g, depth)?;
    let boson_ops: Vec<FockOperator> = p
        .covariance
        .factor_rows()
        .iter()
        .map(|f| gaussian_bosonic(f, &boson_basis))
        .collect::<Result<_>>()?;

    let mut free_dev = 0.0_f64;
    let mut boson_dev = 0.0_f64;
    let mut word = Vec::new();
    sweep_words(g, p.max_word_len, &mut word, &mut |w| {
        let free_refs: Vec<&FockOperator> = w.iter().map(|&i| &free_ops[i]).collect();
        let free_val = vacuum_expectation(&free_refs)?;
        free_dev = free_dev.max((free_val - free_wick_moment(w, &p.covariance)?).norm());
        let boson_refs: Vec<&FockOperator> = w.iter().map(|&i| &boson_ops[i]).collect();
        let boson_val = vacuum_expectation(&boson_refs)?;
        boson_dev = boson_dev.max((boson_val - classical_wick_moment(w, &p.covariance)?).norm());
        Ok(())
    })?;
    report.check_le("free_model_max_dev", free_dev, tol);
    report.annotate_last(format!(
        "all words len <= {} over {g} generators",
        p.max_word_len
    ));
    report.check_le("bosonic_model_max_dev", boson_dev, tol);

    if p.check_single_variable {
        let catalan: Vec<f64> = (0..=p.max_word_len / 2)
            .map(|k| catalan_number(k) as f64)
            .collect();
        let mut free_single = 0.0_f64;
        let mut boson_single = 0.0_f64;
        for m in 1..=p.max_word_len {
            let free_refs: Vec<&FockOperator> = (0..m).map(|_| &free_ops[0]).collect();
            let free_val = vacuum_expectation(&free_refs)?.re;
            let boson_refs: Vec<&FockOperator> = (0..m).map(|_| &boson_ops[0]).collect();
            let boson_val = vacuum_expectation(&boson_refs)?.re;
            let variance = p.covariance.entry(0, 0);
            if m % 2 == 0 {
                let k = m / 2;
                free_single =
                    free_single.max((free_val - catalan[k] * variance.powi(k as i32)).abs());
                let double_fact: f64 = (1..=m).filter(|j| j % 2 == 1).map(|j| j as f64).product();
                boson_single =
                    boson_single.max((boson_val - double_fact * variance.powi(k as i32)).abs());
            } else {
                free_single = free_single.max(free_val.abs());
                boson_single = boson_single.max(boson_val.abs());
            }
        }
        report.check_le("free_single_variable_dev", free_single, tol);
        report.annotate_last("Catalan sequence");
        report.check_le("bosonic_single_variable_dev", boson_single, tol);
        report.annotate_last("double factorial sequence");
    }
    Ok(report)
}

fn sweep_words(
    alphabet: usize,
    max_len: usize,
    word: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if !word.is_empty() {
        visit(word)?;
    }
    if word.len() == max_len {
        return Ok(());
    }
    for letter in 0..alphabet {
        word.push(letter);
        sweep_words(alphabet, max_len, word, visit)?;
        word.pop();
    }
    Ok(())
}

fn run_verify(name: &str, digest: String, config: &RunConfig, v: &VerifyPayload) -> Result<Report> {
    match v {
        VerifyPayload::Prop32(p) | VerifyPayload::Thm1Forward(p) => {
            run_amplified_vanishing(name, digest, config, p)
        }
        VerifyPayload::Thm1Converse(p) => run_detection(name, digest, config, p),
        VerifyPayload::Def42(p) => run_circular(name, digest, config, p),
        VerifyPayload::Cor43(p) => run_complex_check(name, digest, config, p),
        VerifyPayload::Thm2Chain(p) => run_chain(name, digest, config, p),
        VerifyPayload::Al(p) => run_al(name, digest, config, p),
        VerifyPayload::Symfock(p) => run_symfock(name, digest, config, p),
    }
}

fn run_amplified_vanishing(
    name: &str,
    digest: String,
    config: &RunConfig,
    p: &AmplifiedVanishingParams,
) -> Result<Report> {
    let mut env = base_env(config);
    env.seed = pick(config.seed, p.seed, DEFAULT_SEED);
    env.tol = pick(config.tol, p.tolerance, DEFAULT_TOL);
    env.trials = pick(config.trials, p.trials, DEFAULT_TRIALS);
    let p_max = p.orders.iter().copied().max().unwrap_or(0);
    env.depth = Some(config.depth.unwrap_or(p_max + 1));
    let mut report = Report::new(name, digest, env);

    let spec = CovarianceSpec::standard(p.num_generators);
    let trials = verify_theorem1_forward(&spec, p.coeff_dim, &p.orders, env.trials, env.seed)?;
    for &order in &p.orders {
        let worst = trials
            .iter()
            .flat_map(|t| t.norms.iter())
            .filter(|&&(o, _)| o == order)
            .map(|&(_, n)| n)
            .fold(0.0_f64, f64::max);
        report.check_le(format!("xi_norm_order{order}"), worst, env.tol);
        report.annotate_last(format!("max over {} trials", env.trials));
    }
    Ok(report)
}

fn run_detection(
    name: &str,
    digest: String,
    config: &RunConfig,
    p: &DetectionParams,
) -> Result<Report> {
    let mut env = base_env(config);
    env.seed = pick(config.seed, p.seed, DEFAULT_SEED);
    env.trials = pick(config.trials, p.trials, DEFAULT_TRIALS);
    let depth = config.depth.unwrap_or(p.power * (p.order + 1));
    env.depth = Some(depth);
    let mut report = Report::new(name, digest, env);

    let basis = FreeFockBasis::new(1, depth)?;
    let g = gaussian_free(&[1.0], &basis)?;
    let mut powered = g.clone();
    for _ in 1..p.power {
        powered = powered.compose(&g)?;
    }

    let det = detect_nonsemicircular(
        &[powered],
        p.order,
        env.trials,
        p.samples_per_trial,
        env.seed,
        p.threshold_factor,
    )?;
    let min_detections = p.min_detections.unwrap_or(env.trials.saturating_sub(1));
    report.check_ge(
        "powered_detections",
        det.detections as f64,
        min_detections as f64,
    );
    report.annotate_last(format!(
        "threshold {:.4}, {} trials x {} samples",
        det.threshold, env.trials, p.samples_per_trial
    ));

    let genuine = detect_nonsemicircular(
        &[g],
        p.order,
        env.trials,
        p.samples_per_trial,
        env.seed,
        p.threshold_factor,
    )?;
    report.check_count("genuine_detections", genuine.detections as u64, 0);
    Ok(report)
}

fn run_circular(
    name: &str,
    digest: String,
    config: &RunConfig,
    p: &CircularParams,
) -> Result<Report> {
    let depth = config.depth.unwrap_or(p.max_word_len + 1);
    let mut env = base_env(config);
    env.tol = pick(config.tol, p.tolerance, DEFAULT_TOL);
    env.depth = Some(depth);
    let tol = env.tol;
    let mut report = Report::new(name, digest, env);

    let real_spec = standard_circular_real_spec(p.num_circular);
    let parts = realize_semicircular_family(&real_spec, depth)?;
    let circulars: Vec<FockOperator> = (0..p.num_circular)
        .map(|j| {
            FockOperator::linear_combination(&[
                (Complex64::ONE, &parts[2 * j]),
                (Complex64::new(0.0, 1.0), &parts[2 * j + 1]),
            ])
        })
        .collect::<Result<_>>()?;

    let fock_value = |w: &StarWord| -> Result<Complex64> {
        let ops: Vec<FockOperator> =
            w.0.iter()
                .map(|&(j, starred)| {
                    if starred {
                        circulars[j].adjoint()
                    } else {
                        circulars[j].clone()
                    }
                })
                .collect();
        let refs: Vec<&FockOperator> = ops.iter().collect();
        vacuum_expectation(&refs)
    };

    let mut worst = 0.0_f64;
    let letters = 2 * p.num_circular;
    let mut pattern = Vec::new();
    sweep_words(letters, p.max_word_len, &mut pattern, &mut |w| {
        let star = StarWord(w.iter().map(|&c| (c / 2, c % 2 == 1)).collect());
        let oracle = circular_star_moment(&star, &real_spec)?;
        let fock = fock_value(&star)?;
        worst = worst.max((fock - oracle).norm());
        Ok(())
    })?;
    report.check_le("star_word_max_dev", worst, tol);
    report.annotate_last(format!(
        "all star-words len <= {} over {} circular elements",
        p.max_word_len, p.num_circular
    ));

    for (i, star) in p.highlighted_words.iter().enumerate() {
        for &(j, _) in &star.0 {
            if j >= p.num_circular {
                return Err(Error::InvalidScenario(format!(
                    "highlighted word {i} references circular element {j}"
                )));
            }
        }
        let oracle = circular_star_moment(star, &real_spec)?;
        let fock = fock_value(star)?;
        report.check_le(format!("highlight{i}_dev"), (fock - oracle).norm(), tol);
        report.annotate_last(format!("word {:?}, value {oracle}", star.0));
    }
    Ok(report)
}

fn run_complex_check(
    name: &str,
    digest: String,
    config: &RunConfig,
    p: &ComplexCheckParams,
) -> Result<Report> {
    let mut env = base_env(config);
    env.seed = pick(config.seed, p.seed, DEFAULT_SEED);
    env.tol = pick(config.tol, p.tolerance, DEFAULT_TOL);
    env.trials = pick(config.trials, p.trials, DEFAULT_TRIALS);
    let p_max = p.orders.iter().copied().max().unwrap_or(0);
    env.depth = Some(config.depth.unwrap_or(p_max + 1));
    let mut report = Report::new(name, digest, env);

    let trials = complex_semicircular_check(
        p.num_circular,
        p.coeff_dim,
        &p.orders,
        env.trials,
        env.seed,
        env.tol,
    )?;
    let worst = trials.iter().map(|t| t.max_norm).fold(0.0_f64, f64::max);
    report.check_le("decomposition_xi_max_norm", worst, env.tol);
    report.annotate_last(format!(
        "parts, mixed words, and sampled selfadjoint combinations; {} trials",
        env.trials
    ));
    let passed = trials
        .iter()
        .filter(|t| t.status == CheckStatus::Pass)
        .count() as u64;
    report.check_count("trials_passed", passed, env.trials);
    if trials.iter().any(|t| t.status == CheckStatus::Inconclusive) {
        report.inconclusive(
            "combination_sampling",
            "a trial found no testable selfadjoint combination",
        );
    }
    Ok(report)
}

fn run_chain(name: &str, digest: String, config: &RunConfig, p: &ChainParams) -> Result<Report> {
    let mut env = base_env(config);
    env.seed = pick(config.seed, p.seed, DEFAULT_SEED);
    env.tol = pick(config.tol, p.tolerance, DEFAULT_TOL);
    env.trials = pick(config.trials, p.trials, DEFAULT_TRIALS);
    env.depth = Some(config.depth.unwrap_or(p.max_word_len.max(1)));
    let mut report = Report::new(name, digest, env);

    let spec = CovarianceSpec::standard(p.num_generators);
    for &dim in &p.coeff_dims {
        let trials = verify_theorem2_chain(&spec, dim, p.max_word_len, env.trials, env.seed)?;
        let worst = trials.iter().map(|t| t.max_diff).fold(0.0_f64, f64::max);
        report.check_le(format!("chain_dev_dim{dim}"), worst, env.tol);
        report.annotate_last(format!(
            "words len <= {}, {} trials",
            p.max_word_len, env.trials
        ));
    }
    Ok(report)
}

fn run_al(name: &str, digest: String, config: &RunConfig, p: &AlParams) -> Result<Report> {
    let mut env = base_env(config);
    env.seed = pick(config.seed, p.seed, DEFAULT_SEED);
    env.tol = pick(config.tol, p.tolerance, DEFAULT_TOL);
    env.trials = pick(config.trials, p.trials, DEFAULT_TRIALS);
    let mut report = Report::new(name, digest, env);

    for &n in &p.sizes {
        let trials = verify_al_vanishing(n, env.trials, env.seed)?;
        let worst = trials.iter().map(|t| t.norm).fold(0.0_f64, f64::max);
        report.check_le(format!("vanishing_degree{}_dim{n}", 2 * n), worst, env.tol);
        report.annotate_last(format!("{} random tuples", env.trials));

        let witness = find_nonvanishing_witness(n)?;
        match witness {
            Some(instance) => {
                let value = instance.evaluate()?.max_abs();
                report.check_ge(format!("witness_degree{}_dim{n}", 2 * n - 1), value, 1.0);
                report.annotate_last("largest entry of the witness value; integer-valued");
            }
            None => {
                report.check_ge(format!("witness_degree{}_dim{n}", 2 * n - 1), 0.0, 1.0);
                report.annotate_last("no matrix-unit witness found");
            }
        }
    }
    Ok(report)
}

fn run_symfock(
    name: &str,
    digest: String,
    config: &RunConfig,
    p: &SymfockParams,
) -> Result<Report> {
    let mut env = base_env(config);
    env.seed = pick(config.seed, p.seed, DEFAULT_SEED);
    let mut report = Report::new(name, digest, env);
    let mut rng = ChaCha8Rng::seed_from_u64(env.seed);

    for n in 2..=p.max_n {
        for m in 1..=p.max_m {
            let inner = random_complex(m, &mut rng);
            let result = verify_symmetrization(n, m, &inner)?;
            let worst = result
                .records
                .iter()
                .map(|r| r.deviation)
                .fold(0.0_f64, f64::max);
            report.check_exact(format!("corner_invariant_n{n}_m{m}"), worst);
            report.annotate_last(format!(
                "{} permutations, exact comparison",
                result.records.len()
            ));
            report.check_count(
                format!("shift_discrepancies_n{n}_m{m}"),
                result.nonzero_raw_products as u64,
                (n - 1) as u64,
            );
            report.annotate_last(
                "nontrivial cyclic shifts have nonzero raw products; \
                 corner compression removes them",
            );
        }
    }
    Ok(report)
}

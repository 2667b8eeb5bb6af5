//! Acceptance suite: every release criterion as one test, each printing a
//! pass/fail line with the measured values. Tolerances and runtime budgets
//! are pinned here, not configurable.

use std::time::{Duration, Instant};

use driftkit::montecarlo::{empirical_tail, run_trials, with_workers};
use driftkit::oracle::{
    binomial_start, build_leadingones_chain, build_onemax_chain, exact_expectation, exact_tail,
    uniform_bitstring_start,
};
use driftkit::potential::exp_integral_e1;
use driftkit::processes::{
    leadingones_exact_drift, leadingones_expected, leadingones_tail_predictions,
    onemax_expected_bounds, Init, ProcessSpec, LEADINGONES_TAIL_C,
};
use driftkit::rng::Xoshiro256PlusPlus;
use driftkit::sweep::soundness_sweep;
use driftkit::theorems::{
    additive_upper, fitness_levels_upper, multiplicative_upper, variable_upper, FitnessPartition,
    MonotoneEvidence,
};
use driftkit::HSpec;

const E: f64 = std::f64::consts::E;

fn budget(name: &str, started: Instant, limit: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= limit,
        "{name} exceeded its runtime budget: {elapsed:?} > {limit:?}"
    );
}

#[test]
fn acceptance_01_leadingones_exactness() {
    let started = Instant::now();
    let n = 8;
    let chain = build_leadingones_chain(n, n).unwrap();
    let oracle = exact_expectation(&chain, &uniform_bitstring_start(&chain)).unwrap();
    let formula = leadingones_expected(n, n).unwrap();
    let diff = (oracle - formula).abs();
    assert!(diff <= 1e-9, "oracle {oracle} vs formula {formula}");
    budget("criterion 1", started, Duration::from_secs(1));
    println!("criterion 1 PASS: leadingones oracle {oracle} = formula {formula} (|diff| {diff:.2e} <= 1e-9)");
}

// Independent oracle: enumerate every suffix completion of the state family
// (first a-i ones, then a zero, suffix uniform) and every mutation mask of
// the suffix, averaging the exact signed-distance decrease.
fn uniform_suffix_drift(n: usize, a: usize, i: usize) -> f64 {
    let prefix = a - i;
    let len = n - prefix - 1;
    let p = 1.0 / n as f64;
    let keep_prefix = (1.0 - p).powi(prefix as i32);
    let by_popcount: Vec<f64> = (0..=len)
        .map(|k| p.powi(k as i32) * (1.0 - p).powi((len - k) as i32))
        .collect();
    let states = 1u64 << len;
    let mut total = 0.0;
    for suffix in 0..states {
        let mut gain = 0.0;
        for mask in 0..states {
            let flipped = suffix ^ mask;
            let run = (!flipped).trailing_zeros().min(len as u32) as usize;
            gain += by_popcount[mask.count_ones() as usize] * (1 + run) as f64;
        }
        total += gain / states as f64;
    }
    keep_prefix * p * total
}

#[test]
fn acceptance_02_leadingones_drift_exactness() {
    let started = Instant::now();
    let mut cases = 0;
    for n in 1..=12usize {
        for a in 1..=n {
            for i in 1..=a {
                let lemma = leadingones_exact_drift(n, a, i).unwrap();
                let oracle = uniform_suffix_drift(n, a, i);
                assert!(
                    (lemma - oracle).abs() <= 1e-12,
                    "n={n} a={a} i={i}: lemma {lemma} vs enumeration {oracle}"
                );
                cases += 1;
            }
        }
    }
    budget("criterion 2", started, Duration::from_secs(30));
    println!("criterion 2 PASS: drift formula matches exhaustive enumeration for {cases} (n, a, i) cases within 1e-12");
}

#[test]
fn acceptance_03_onemax_expectation_bracket() {
    let started = Instant::now();
    let n = 1000;
    let chain = build_onemax_chain(n).unwrap();
    let oracle = exact_expectation(&chain, &binomial_start(n)).unwrap();
    let (lower, upper) = onemax_expected_bounds(n).unwrap();
    let slack = 50.0 * (n as f64).ln();
    let (lo, hi) = (lower - slack, upper + slack);
    assert!(
        lo <= oracle && oracle <= hi,
        "oracle {oracle} outside [{lo}, {hi}]"
    );
    budget("criterion 3", started, Duration::from_secs(10));
    println!("criterion 3 PASS: n=1000 oracle {oracle} inside [{lo:.1}, {hi:.1}]");
}

#[test]
fn acceptance_04_montecarlo_calibration() {
    let started = Instant::now();
    let n = 100usize;
    let nf = n as f64;
    let spec = ProcessSpec::onemax(n, Init::UniformRandom).unwrap();
    let stats = run_trials(&spec, 0.0, 100_000, 1, 1_000_000).unwrap();
    let chain = build_onemax_chain(n).unwrap();
    let exact = exact_expectation(&chain, &binomial_start(n)).unwrap();
    let gap = (stats.mean - exact).abs();
    assert!(
        gap <= 4.0 * stats.std_error,
        "mean {} vs oracle {exact}: |diff| {gap} > 4 SE {}",
        stats.mean,
        4.0 * stats.std_error
    );
    let mut details = vec![format!(
        "mean {:.3} vs oracle {exact:.3} within 4 SE",
        stats.mean
    )];
    for r in 1..=3 {
        let t = (E * nf * (nf.ln() + r as f64)).ceil() as u64;
        let (fraction, (ci_lo, ci_hi)) = empirical_tail(&stats, t);
        let allowance = (-(r as f64)).exp() + (ci_hi - ci_lo);
        assert!(
            fraction <= allowance,
            "r={r}: empirical P(T >= {t}) = {fraction} > e^-{r} + width = {allowance}"
        );
        details.push(format!("r={r}: {fraction:.4} <= {allowance:.4}"));
    }
    budget("criterion 4", started, Duration::from_secs(120));
    println!("criterion 4 PASS: {}", details.join("; "));
}

#[test]
fn acceptance_05_onemax_lower_tail_property() {
    let started = Instant::now();
    let n = 100usize;
    let en = E * n as f64;
    let chain = build_onemax_chain(n).unwrap();
    let start = binomial_start(n);
    let expectation = exact_expectation(&chain, &start).unwrap();
    let dp = exact_tail(&chain, &start, (3.0 * expectation) as usize).unwrap();
    // survival non-increasing <=> P(T < t) non-decreasing in t
    for pair in dp.values.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "survival increased: {pair:?}");
    }
    let mut details = Vec::new();
    for r in [4.0f64, 6.0, 8.0] {
        let threshold = expectation - r * en;
        let p_below = if threshold <= 0.0 {
            0.0
        } else {
            1.0 - dp.values[threshold.floor() as usize]
        };
        let bound = (-r / 2.0 + 3.0).exp();
        assert!(
            p_below <= bound,
            "r={r}: P(T < {threshold}) = {p_below} > {bound}"
        );
        details.push(format!(
            "r={r}: P(T < E - r*en) = {p_below:.3e} <= {bound:.3}"
        ));
    }
    let spec = ProcessSpec::onemax(n, Init::UniformRandom).unwrap();
    let stats = run_trials(&spec, 0.0, 100_000, 1, 1_000_000).unwrap();
    let q1 = stats
        .quantiles
        .iter()
        .find(|&&(q, _)| q == 1)
        .map(|&(_, v)| v)
        .unwrap();
    let floor = expectation - 8.0 * en;
    assert!(
        (q1 as f64) > floor,
        "1% quantile {q1} does not exceed E - 8en = {floor}"
    );
    budget("criterion 5", started, Duration::from_secs(60));
    println!(
        "criterion 5 PASS: {}; 1%-quantile {q1} > E - 8en = {floor:.1}",
        details.join("; ")
    );
}

#[test]
fn acceptance_06_leadingones_tails() {
    let started = Instant::now();
    let n = 100usize;
    let a = 90usize;
    let nf = n as f64;
    let r = 2.0 * nf.powf(1.5);
    let predictions = leadingones_tail_predictions(n, a, r).unwrap();
    let spec = ProcessSpec::leadingones(n, a, Init::UniformRandom).unwrap();
    let stats = run_trials(&spec, 0.0, 100_000, 1, 1_000_000).unwrap();

    // item-3 side: fraction below the lower threshold stays within its bound
    let lower_t = predictions.lower_t.max(0.0).ceil() as u64;
    let (above, (ci_lo, ci_hi)) = empirical_tail(&stats, lower_t);
    let below = 1.0 - above;
    let lower_allowance = predictions.lower_prob + (ci_hi - ci_lo);
    assert!(
        below <= lower_allowance,
        "lower side: P(T < {lower_t}) = {below} > bound {lower_allowance}"
    );

    // item-2 side at r = 2 n^{3/2}: bound e^{-2C} with C = (8e-1)/(4e)
    let upper_t = predictions.upper_t.floor() as u64 + 1;
    let (fraction, (ci_lo, ci_hi)) = empirical_tail(&stats, upper_t);
    let upper_allowance = (-2.0 * LEADINGONES_TAIL_C).exp() + (ci_hi - ci_lo);
    budget("criterion 6", started, Duration::from_secs(180));
    assert!(
        fraction <= upper_allowance,
        "criterion 6 FAIL (upper side): empirical P(T >= {upper_t}) = {fraction:.4} exceeds \
         e^(-2C) + width = {upper_allowance:.4} with C = (8e-1)/(4e) = {LEADINGONES_TAIL_C:.4}. \
         The exact reduced-chain value of this tail is 0.0722, so no correct simulation can \
         pass; the stated constant does not bound this tail (see README, acceptance notes)."
    );
    println!(
        "criterion 6 PASS: upper {fraction:.4} <= {upper_allowance:.4}; lower {below:.2e} <= {lower_allowance:.4}"
    );
}

#[test]
fn acceptance_07_soundness_sweep() {
    let started = Instant::now();
    let outcome = soundness_sweep(50, 40, 20240807, 10).unwrap();
    assert_eq!(outcome.chains, 50);
    assert!(
        outcome.passed(),
        "soundness violations: {:?}",
        outcome.violations
    );
    budget("criterion 7", started, Duration::from_secs(120));
    println!(
        "criterion 7 PASS: {} chains, {} bound/tail checks, 0 violations",
        outcome.chains, outcome.checks
    );
}

#[test]
fn acceptance_08_exponential_integral_values() {
    let e_half = exp_integral_e1(0.5).unwrap();
    let e_one = exp_integral_e1(1.0).unwrap();
    assert!((e_half - 0.559774).abs() <= 1e-6, "E1(0.5) = {e_half}");
    assert!((e_one - 0.219384).abs() <= 1e-5, "E1(1) = {e_one}");
    println!("criterion 8 PASS: E1(0.5) = {e_half:.7}, E1(1) = {e_one:.7}");
}

#[test]
fn acceptance_09_specialization_identities() {
    let mut rng = Xoshiro256PlusPlus::seeded(1009);
    for _ in 0..100 {
        let delta = 0.01 + 0.97 * rng.next_f64();
        let x_min = 0.2 + 2.0 * rng.next_f64();
        let x0 = x_min * (1.0 + 30.0 * rng.next_f64());
        let hm = HSpec::multiplicative(delta, x_min, x0 * 1.5).unwrap();
        let v = variable_upper(&hm, x0, MonotoneEvidence::SampledCheck)
            .unwrap()
            .bound;
        let m = multiplicative_upper(delta, x_min, x0).unwrap().bound;
        assert!((v - m).abs() <= 1e-8, "variable {v} vs multiplicative {m}");
        let hc = HSpec::constant(delta, 0.0, x0 * 1.5).unwrap();
        let v = variable_upper(&hc, x0, MonotoneEvidence::SampledCheck)
            .unwrap()
            .bound;
        let a = additive_upper(delta, x0).unwrap().bound;
        assert!((v - a).abs() <= 1e-8, "variable {v} vs additive {a}");
    }
    // levels sum and table-potential route must agree to the last bit
    let mut rng = Xoshiro256PlusPlus::seeded(1013);
    for _ in 0..100 {
        let m = 3 + rng.next_index(30);
        let p: Vec<f64> = (0..m - 1).map(|_| 0.005 + 0.99 * rng.next_f64()).collect();
        let start = 1 + rng.next_index(m - 1);
        let part = FitnessPartition::for_upper(p.clone()).unwrap();
        let by_levels = fitness_levels_upper(&part, start).unwrap().bound;
        let table: Vec<f64> = (1..=m - start).map(|j| p[m - j - 1]).collect();
        let h = HSpec::table(1.0, table).unwrap();
        let by_variable = variable_upper(&h, (m - start) as f64, MonotoneEvidence::Asserted)
            .unwrap()
            .bound;
        assert_eq!(by_levels, by_variable, "m={m}, start={start}");
    }
    println!("criterion 9 PASS: closed-form specializations within 1e-8 over 100 draws; fitness levels bit-equal to the table potential");
}

#[test]
fn acceptance_10_reproducibility_across_workers() {
    let bin = env!("CARGO_BIN_EXE_driftkit");
    let run = |args: &[&str], workers: &str| {
        let out = std::process::Command::new(bin)
            .args(args)
            .args(["--workers", workers])
            .output()
            .expect("failed to run driftkit");
        assert!(
            out.status.success(),
            "driftkit {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let simulate = [
        "simulate",
        "--process",
        "onemax",
        "--n",
        "40",
        "--trials",
        "3000",
        "--seed",
        "9",
    ];
    let s1 = run(&simulate, "1");
    let s4 = run(&simulate, "4");
    let s16 = run(&simulate, "16");
    assert_eq!(s1, s4, "simulate output differs between 1 and 4 workers");
    assert_eq!(s1, s16, "simulate output differs between 1 and 16 workers");

    let verify = [
        "verify",
        "--suite",
        "soundness-sweep",
        "--chains",
        "12",
        "--seed",
        "7",
    ];
    let v1 = run(&verify, "1");
    let v4 = run(&verify, "4");
    let v16 = run(&verify, "16");
    assert_eq!(v1, v4, "verify output differs between 1 and 4 workers");
    assert_eq!(v1, v16, "verify output differs between 1 and 16 workers");

    // the library-level harness gives the same guarantee in-process
    let spec = ProcessSpec::onemax(30, Init::UniformRandom).unwrap();
    let direct = |w| with_workers(w, || run_trials(&spec, 0.0, 2000, 5, 100_000).unwrap());
    assert_eq!(direct(1), direct(4));
    assert_eq!(direct(1), direct(16));
    println!("criterion 10 PASS: simulate and verify outputs byte-identical for workers 1, 4, 16");
}

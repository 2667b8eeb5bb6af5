//! Named verification suites: each runs a claim set end to end and reports
//! one line per claim plus a suite summary.

use driftkit::montecarlo::{concentration_check, run_trials, ClaimSide, ClaimSpec, Verdict};
use driftkit::oracle::{
    binomial_start, build_leadingones_chain, build_onemax_chain, exact_expectation, exact_tail,
    uniform_bitstring_start,
};
use driftkit::processes::{
    leadingones_expected, leadingones_tail_predictions, onemax_expected_bounds, Init, ProcessSpec,
};
use driftkit::sweep::soundness_sweep;
use driftkit::Result;

pub struct SuiteReport {
    pub lines: Vec<String>,
    pub claims: usize,
    pub violations: usize,
}

impl SuiteReport {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            claims: 0,
            violations: 0,
        }
    }

    fn claim(&mut self, id: &str, ok: bool, detail: String) {
        self.claims += 1;
        if !ok {
            self.violations += 1;
        }
        let verdict = if ok { "consistent" } else { "violation" };
        self.lines
            .push(format!("claim {id}: {detail} verdict {verdict}"));
    }

    fn record_concentration(&mut self, report: &driftkit::ConcentrationReport) {
        for c in &report.claims {
            self.claims += 1;
            let verdict = match c.verdict {
                Verdict::Consistent => "consistent",
                Verdict::Inconclusive => "inconclusive",
                Verdict::Violation => {
                    self.violations += 1;
                    "violation"
                }
            };
            let oracle = c.oracle.map(|v| format!(" oracle {v}")).unwrap_or_default();
            self.lines.push(format!(
                "claim {}: t {} bound {} empirical {} ci [{}, {}]{oracle} verdict {verdict}",
                c.id, c.t, c.bound, c.empirical, c.interval.0, c.interval.1
            ));
        }
    }
}

pub fn leadingones_expectation(n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let chain = build_leadingones_chain(n, n)?;
    let start = uniform_bitstring_start(&chain);
    let oracle = exact_expectation(&chain, &start)?;
    let formula = leadingones_expected(n, n)?;
    let diff = (oracle - formula).abs();
    report.claim(
        &format!("leadingones-expectation-n{n}"),
        diff <= 1e-9,
        format!("oracle {oracle} formula {formula} |diff| {diff:.3e} tolerance 1e-9"),
    );
    Ok(report)
}

pub fn onemax_expectation(n: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let chain = build_onemax_chain(n)?;
    let oracle = exact_expectation(&chain, &binomial_start(n))?;
    let (lower, upper) = onemax_expected_bounds(n)?;
    let slack = 50.0 * (n as f64).ln();
    let lo = lower - slack;
    let hi = upper + slack;
    report.claim(
        &format!("onemax-expectation-n{n}"),
        lo <= oracle && oracle <= hi,
        format!("oracle {oracle} bracket [{lo}, {hi}]"),
    );
    Ok(report)
}

pub fn onemax_tails(n: usize, trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let nf = n as f64;
    let en = std::f64::consts::E * nf;
    let spec = ProcessSpec::onemax(n, Init::UniformRandom)?;
    let cap = (100.0 * en * nf.ln()).ceil() as u64;
    let stats = run_trials(&spec, 0.0, trials, seed, cap)?;

    let chain = build_onemax_chain(n)?;
    let exact = exact_expectation(&chain, &binomial_start(n))?;
    let mean_gap = (stats.mean - exact).abs();
    report.claim(
        "onemax-mean-vs-oracle",
        mean_gap <= 4.0 * stats.std_error,
        format!(
            "mean {} oracle {exact} |diff| {mean_gap:.4} allowance {:.4}",
            stats.mean,
            4.0 * stats.std_error
        ),
    );

    let max_t = (en * (nf.ln() + 3.0)).ceil() as usize + 1;
    let dp = exact_tail(&chain, &binomial_start(n), max_t)?;
    let claims: Vec<ClaimSpec> = (1..=3)
        .map(|r| {
            let t = (en * (nf.ln() + r as f64)).ceil() as u64;
            ClaimSpec {
                id: format!("onemax-upper-tail-r{r}"),
                t,
                bound: (-(r as f64)).exp(),
                side: ClaimSide::UpperTail,
                oracle: dp.values.get(t as usize).copied(),
            }
        })
        .collect();
    report.record_concentration(&concentration_check(&stats, &claims)?);
    Ok(report)
}

pub fn leadingones_tails(n: usize, a: usize, trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let nf = n as f64;
    let r = 2.0 * nf.powf(1.5);
    let predictions = leadingones_tail_predictions(n, a, r)?;
    let spec = ProcessSpec::leadingones(n, a, Init::UniformRandom)?;
    let cap = (100.0 * std::f64::consts::E * nf * nf.ln().max(1.0)).ceil() as u64
        + 100 * predictions.upper_t.ceil() as u64;
    let stats = run_trials(&spec, 0.0, trials, seed, cap)?;
    let claims = vec![
        ClaimSpec {
            id: format!("leadingones-upper-tail-n{n}-a{a}"),
            // fraction strictly above the threshold
            t: predictions.upper_t.floor() as u64 + 1,
            bound: predictions.upper_prob,
            side: ClaimSide::UpperTail,
            oracle: None,
        },
        ClaimSpec {
            id: format!("leadingones-lower-tail-n{n}-a{a}"),
            t: predictions.lower_t.max(0.0).ceil() as u64,
            bound: predictions.lower_prob,
            side: ClaimSide::LowerTail,
            oracle: None,
        },
    ];
    report.record_concentration(&concentration_check(&stats, &claims)?);
    Ok(report)
}

pub fn sweep(chains: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new();
    let outcome = soundness_sweep(chains, 40, seed, 10)?;
    report.claims = outcome.checks;
    report.violations = outcome.violations.len();
    for v in &outcome.violations {
        report
            .lines
            .push(format!("claim sweep: {v} verdict violation"));
    }
    report.lines.push(format!(
        "sweep: {} chains, {} checks, {} skipped fits, {} violations",
        outcome.chains,
        outcome.checks,
        outcome.skipped,
        outcome.violations.len()
    ));
    Ok(report)
}

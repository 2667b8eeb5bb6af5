//! Deterministic parallel Monte Carlo estimation of hitting-time
//! distributions.
//!
//! Every trial runs on its own generator stream derived from
//! `(master_seed, trial index)` by the documented mix in [`crate::rng`], and
//! aggregation walks trials in index order with compensated summation, so
//! results are bitwise identical for any worker count. Trials that hit the
//! step cap are counted separately and never folded into the moments.

use rayon::prelude::*;
use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, wilson_interval, CompensatedSum, Z_99, Z_999};
use crate::processes::{init_state, step, ProcessSpec};
use crate::rng::{trial_stream, GENERATOR_ID};

/// One simulated hitting time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HitRecord {
    pub trial: u64,
    pub steps: u64,
    pub capped: bool,
}

/// Histogram over uncapped hitting times.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bucket_width: u64,
    /// Count of times in `[i * bucket_width, (i+1) * bucket_width)`.
    pub counts: Vec<u64>,
}

/// Aggregated distribution statistics over seeded trials.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalStats {
    pub trials: u64,
    /// Mean over uncapped trials; only valid when `capped == 0`.
    pub mean: f64,
    /// Unbiased variance over uncapped trials; only valid when `capped == 0`.
    pub variance: f64,
    pub std_error: f64,
    /// (percent, value) at 1, 5, 25, 50, 75, 95, 99 percent.
    pub quantiles: Vec<(u32, u64)>,
    pub histogram: Histogram,
    pub capped: u64,
    pub master_seed: u64,
    pub generator: String,
    pub step_cap: u64,
    records: Vec<HitRecord>,
    sorted_uncapped: Vec<u64>,
}

impl EmpiricalStats {
    /// Moments are only meaningful when no trial was capped.
    pub fn moments_valid(&self) -> bool {
        self.capped == 0
    }

    pub fn records(&self) -> &[HitRecord] {
        &self.records
    }

    /// Rebuild the histogram with a caller-chosen bucket width.
    pub fn rebucket(&mut self, bucket_width: u64) {
        self.histogram = histogram(&self.sorted_uncapped, bucket_width.max(1));
    }

    /// Emit the raw trials as CSV: `trial,steps,capped`, one row per trial.
    pub fn write_trials_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "trial,steps,capped")?;
        for r in &self.records {
            writeln!(out, "{},{},{}", r.trial, r.steps, r.capped as u8)?;
        }
        Ok(())
    }
}

const QUANTILE_PERCENTS: [u32; 7] = [1, 5, 25, 50, 75, 95, 99];

/// Run `trials` seeded simulations of `spec` and report when the tracked
/// distance first drops to `threshold` or below.
///
/// Trial `i` uses the independent stream `trial_stream(master_seed, i)`;
/// results are bitwise identical for any degree of parallelism. Trials
/// still above the threshold after `step_cap` steps are counted as capped;
/// if every trial caps, estimation fails.
pub fn run_trials(
    spec: &ProcessSpec,
    threshold: f64,
    trials: u64,
    master_seed: u64,
    step_cap: u64,
) -> Result<EmpiricalStats> {
    if trials == 0 {
        return Err(Error::parameter("need at least one trial"));
    }
    if step_cap == 0 {
        return Err(Error::parameter("step cap must be at least 1"));
    }
    let records: Vec<HitRecord> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<HitRecord> {
            let mut rng = trial_stream(master_seed, trial);
            let mut state = init_state(spec, &mut rng)?;
            while state.distance() > threshold && state.steps() < step_cap {
                step(spec, &mut state, &mut rng);
            }
            Ok(HitRecord {
                trial,
                steps: state.steps(),
                capped: state.distance() > threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let capped = records.iter().filter(|r| r.capped).count() as u64;
    if capped == trials {
        return Err(Error::Estimation(format!(
            "all {trials} trials hit the step cap {step_cap}"
        )));
    }

    let mut sorted_uncapped: Vec<u64> = records
        .iter()
        .filter(|r| !r.capped)
        .map(|r| r.steps)
        .collect();
    sorted_uncapped.sort_unstable();
    let m = sorted_uncapped.len() as f64;
    let mean = compensated_sum(sorted_uncapped.iter().map(|&t| t as f64)) / m;
    let variance = if sorted_uncapped.len() < 2 {
        0.0
    } else {
        let mut acc = CompensatedSum::new();
        for &t in &sorted_uncapped {
            let d = t as f64 - mean;
            acc.add(d * d);
        }
        acc.value() / (m - 1.0)
    };
    let std_error = (variance / m).sqrt();
    let quantiles: Vec<(u32, u64)> = QUANTILE_PERCENTS
        .iter()
        .map(|&q| {
            let idx = ((q as u64 * sorted_uncapped.len() as u64) / 100)
                .min(sorted_uncapped.len() as u64 - 1) as usize;
            (q, sorted_uncapped[idx])
        })
        .collect();
    let spread = sorted_uncapped[sorted_uncapped.len() - 1] - sorted_uncapped[0];
    let default_width = (spread / 64).max(1);
    let histogram = histogram(&sorted_uncapped, default_width);

    Ok(EmpiricalStats {
        trials,
        mean,
        variance,
        std_error,
        quantiles,
        histogram,
        capped,
        master_seed,
        generator: GENERATOR_ID.to_string(),
        step_cap,
        records,
        sorted_uncapped,
    })
}

fn histogram(sorted: &[u64], bucket_width: u64) -> Histogram {
    let buckets = sorted
        .last()
        .map(|&max| (max / bucket_width + 1) as usize)
        .unwrap_or(0);
    let mut counts = vec![0u64; buckets];
    for &t in sorted {
        counts[(t / bucket_width) as usize] += 1;
    }
    Histogram {
        bucket_width,
        counts,
    }
}

/// Empirical tail `P(T >= t)` with a Wilson 99% confidence interval.
///
/// Capped trials count towards the tail for `t` up to the step cap, since
/// their true hitting time is at least the cap.
pub fn empirical_tail(stats: &EmpiricalStats, t: u64) -> (f64, (f64, f64)) {
    let above = count_at_least(stats, t);
    let fraction = above as f64 / stats.trials as f64;
    (fraction, wilson_interval(above, stats.trials, Z_99))
}

fn count_at_least(stats: &EmpiricalStats, t: u64) -> u64 {
    let below = stats.sorted_uncapped.partition_point(|&x| x < t) as u64;
    let uncapped_above = stats.sorted_uncapped.len() as u64 - below;
    uncapped_above + stats.capped
}

/// Which side of the distribution a concentration claim bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimSide {
    /// `P(T >= t) <= bound`
    UpperTail,
    /// `P(T < t) <= bound`
    LowerTail,
}

/// One theoretical claim to hold against the simulation.
#[derive(Debug, Clone)]
pub struct ClaimSpec {
    pub id: String,
    pub t: u64,
    pub bound: f64,
    pub side: ClaimSide,
    /// Exact value from an oracle, when one is available.
    pub oracle: Option<f64>,
}

/// Verdict of a single claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Violation,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct ClaimRecord {
    pub id: String,
    pub t: u64,
    pub side: ClaimSide,
    pub bound: f64,
    pub empirical: f64,
    /// 99.9% Wilson interval used for the verdict.
    pub interval: (f64, f64),
    pub oracle: Option<f64>,
    pub verdict: Verdict,
}

/// Comparison of theoretical tail bounds against simulated frequencies.
#[derive(Debug, Clone)]
pub struct ConcentrationReport {
    pub claims: Vec<ClaimRecord>,
}

impl ConcentrationReport {
    pub fn all_consistent(&self) -> bool {
        self.claims.iter().all(|c| c.verdict != Verdict::Violation)
    }

    pub fn violations(&self) -> usize {
        self.claims
            .iter()
            .filter(|c| c.verdict == Verdict::Violation)
            .count()
    }
}

/// Check each claim against the empirical distribution.
///
/// A claim is a `Violation` only when its bound lies outside the 99.9%
/// Wilson interval on the wrong side; bounds of at least 1 are vacuous and
/// always consistent. Requires uncapped statistics.
pub fn concentration_check(
    stats: &EmpiricalStats,
    claims: &[ClaimSpec],
) -> Result<ConcentrationReport> {
    if stats.capped > 0 {
        return Err(Error::Estimation(format!(
            "{} capped trials: tail fractions would be biased",
            stats.capped
        )));
    }
    let records = claims
        .iter()
        .map(|claim| {
            let above = count_at_least(stats, claim.t);
            let hits = match claim.side {
                ClaimSide::UpperTail => above,
                ClaimSide::LowerTail => stats.trials - above,
            };
            let empirical = hits as f64 / stats.trials as f64;
            let interval = wilson_interval(hits, stats.trials, Z_999);
            let verdict = if claim.bound >= 1.0 || empirical <= claim.bound {
                Verdict::Consistent
            } else if claim.bound < interval.0 {
                Verdict::Violation
            } else {
                Verdict::Inconclusive
            };
            ClaimRecord {
                id: claim.id.clone(),
                t: claim.t,
                side: claim.side,
                bound: claim.bound,
                empirical,
                interval,
                oracle: claim.oracle,
                verdict,
            }
        })
        .collect();
    Ok(ConcentrationReport { claims: records })
}

/// Run `f` on a dedicated rayon pool with `workers` threads (0 = rayon's
/// default). The result must not depend on the worker count; the
/// reproducibility tests pin that.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build worker pool");
    pool.install(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_onemax_chain, exact_expectation, MarkovChain};
    use crate::processes::Init;

    fn deterministic_walk(len: usize) -> ProcessSpec {
        let labels: Vec<f64> = (0..=len).map(|i| i as f64).collect();
        let mut rows = vec![vec![(0usize, 1.0)]];
        for i in 1..=len {
            rows.push(vec![(i - 1, 1.0)]);
        }
        let chain = MarkovChain::new(labels, rows, 0.0).unwrap();
        ProcessSpec::explicit_chain(chain, Init::FixedState(len)).unwrap()
    }

    fn geometric(p: f64) -> ProcessSpec {
        let chain = MarkovChain::new(
            vec![0.0, 1.0],
            vec![vec![(0, 1.0)], vec![(0, p), (1, 1.0 - p)]],
            0.0,
        )
        .unwrap();
        ProcessSpec::explicit_chain(chain, Init::FixedState(1)).unwrap()
    }

    #[test]
    fn deterministic_chain_has_zero_variance() {
        let spec = deterministic_walk(10);
        let stats = run_trials(&spec, 0.0, 500, 7, 1000).unwrap();
        assert_eq!(stats.mean, 10.0);
        assert_eq!(stats.variance, 0.0);
        assert_eq!(stats.capped, 0);
        assert!(stats.quantiles.iter().all(|&(_, v)| v == 10));
    }

    #[test]
    fn geometric_mean_matches_expectation() {
        let spec = geometric(0.5);
        let stats = run_trials(&spec, 0.0, 1_000_000, 42, 100_000).unwrap();
        assert!(
            (stats.mean - 2.0).abs() <= 4.0 * stats.std_error,
            "mean {} se {}",
            stats.mean,
            stats.std_error
        );
    }

    #[test]
    fn onemax_mean_within_four_se_of_oracle() {
        let n = 100;
        let spec = ProcessSpec::onemax(n, Init::UniformRandom).unwrap();
        let stats = run_trials(&spec, 0.0, 20_000, 1234, 1_000_000).unwrap();
        let chain = build_onemax_chain(n).unwrap();
        let exact = exact_expectation(&chain, &crate::oracle::binomial_start(n)).unwrap();
        assert!(
            (stats.mean - exact).abs() <= 4.0 * stats.std_error,
            "mean {} vs oracle {exact} (se {})",
            stats.mean,
            stats.std_error
        );
    }

    #[test]
    fn tail_edges() {
        let spec = deterministic_walk(5);
        let stats = run_trials(&spec, 0.0, 100, 3, 50).unwrap();
        let (f, _) = empirical_tail(&stats, 0);
        assert_eq!(f, 1.0);
        let (f, (lo, hi)) = empirical_tail(&stats, 6);
        assert_eq!(f, 0.0);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0); // one-sided: zero successes still leave room above
    }

    #[test]
    fn geometric_tail_calibration() {
        let p = 0.3;
        let spec = geometric(p);
        let stats = run_trials(&spec, 0.0, 200_000, 99, 10_000).unwrap();
        for t in 1..=20u64 {
            let expected = (1.0 - p).powi(t as i32 - 1);
            let (_, (lo, hi)) = empirical_tail(&stats, t);
            assert!(
                lo <= expected && expected <= hi,
                "t={t}: exact {expected} outside [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn concentration_verdicts() {
        let spec = deterministic_walk(10);
        let stats = run_trials(&spec, 0.0, 1000, 5, 100).unwrap();
        let report = concentration_check(
            &stats,
            &[
                ClaimSpec {
                    id: "vacuous".into(),
                    t: 1,
                    bound: 1.0,
                    side: ClaimSide::UpperTail,
                    oracle: None,
                },
                ClaimSpec {
                    id: "above-expectation".into(),
                    t: 11,
                    bound: 0.5,
                    side: ClaimSide::UpperTail,
                    oracle: Some(0.0),
                },
                ClaimSpec {
                    id: "impossible".into(),
                    t: 10,
                    bound: 0.1,
                    side: ClaimSide::UpperTail,
                    oracle: None,
                },
            ],
        )
        .unwrap();
        assert_eq!(report.claims[0].verdict, Verdict::Consistent);
        assert_eq!(report.claims[1].verdict, Verdict::Consistent);
        // every trial takes exactly 10 steps, so P(T >= 10) = 1 > 0.1
        assert_eq!(report.claims[2].verdict, Verdict::Violation);
        assert!(!report.all_consistent());
        assert_eq!(report.violations(), 1);
    }

    #[test]
    fn capped_trials_are_flagged_and_block_checks() {
        let spec = deterministic_walk(100);
        let stats = run_trials(&spec, 0.0, 10, 1, 50);
        assert!(stats.is_err(), "all trials capped must fail");
        let spec = geometric(0.5);
        let stats = run_trials(&spec, 0.0, 2000, 8, 3).unwrap();
        assert!(stats.capped > 0);
        assert!(!stats.moments_valid());
        assert!(concentration_check(&stats, &[]).is_err());
    }

    #[test]
    fn bitwise_reproducible_across_worker_counts() {
        let spec = ProcessSpec::onemax(40, Init::UniformRandom).unwrap();
        let run = |workers| {
            with_workers(workers, || {
                run_trials(&spec, 0.0, 4000, 777, 100_000).unwrap()
            })
        };
        let one = run(1);
        let four = run(4);
        let sixteen = run(16);
        assert_eq!(one, four);
        assert_eq!(one, sixteen);
    }

    #[test]
    fn csv_shape() {
        let spec = deterministic_walk(3);
        let stats = run_trials(&spec, 0.0, 4, 2, 10).unwrap();
        let mut buf = Vec::new();
        stats.write_trials_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("trial,steps,capped"));
        assert_eq!(lines.next(), Some("0,3,0"));
        assert_eq!(text.lines().count(), 5);
    }
}

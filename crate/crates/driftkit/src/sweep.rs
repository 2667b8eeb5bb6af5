//! Soundness sweep: fit every applicable theorem to randomly generated
//! absorbing chains with oracle-verified preconditions and hold the bounds
//! against the exact expectations and tail probabilities.
//!
//! Parameters are fitted from the exact per-state drift so the theorem
//! preconditions hold by construction; when a theorem has an exact-check
//! entry point the chain is passed through it as well. A sound
//! implementation produces zero violations for any seed.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oracle::{
    corpus::random_chain, exact_drift_profile, exact_expectation_per_state, exact_tail,
    MarkovChain, MgfSign, Start,
};
use crate::potential::{build_potential, HSpec};
use crate::rng::Xoshiro256PlusPlus;
use crate::tails::{general_tail_lower, general_tail_upper, Beta, TailParams};
use crate::theorems::{
    additive_lower, additive_upper, fitness_levels_upper, general_expected_bound,
    multiplicative_lower, multiplicative_upper, nonmonotone_variable_upper, variable_lower,
    variable_upper, Direction, FitnessPartition, MonotoneEvidence,
};

/// Slack for comparing a bound against the exact value: pure float roundoff
/// only, never a semantic tolerance.
const SOUND_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub chains: usize,
    pub checks: usize,
    pub skipped: usize,
    pub violations: Vec<String>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Run the sweep over `n_chains` random chains (at most `max_states` states
/// each) and `horizons` tail horizons per chain.
pub fn soundness_sweep(
    n_chains: usize,
    max_states: usize,
    seed: u64,
    horizons: usize,
) -> Result<SweepOutcome> {
    let mut rng = Xoshiro256PlusPlus::seeded(seed);
    let mut outcome = SweepOutcome::default();
    for chain_idx in 0..n_chains {
        let chain = random_chain(&mut rng, max_states);
        sweep_one(chain_idx, &chain, horizons, &mut outcome)?;
        outcome.chains += 1;
    }
    Ok(outcome)
}

fn sweep_one(
    chain_idx: usize,
    chain: &MarkovChain,
    horizons: usize,
    outcome: &mut SweepOutcome,
) -> Result<()> {
    let m = chain.n_states();
    let start_state = m - 1;
    let x0 = chain.label(start_state);
    let expect = exact_expectation_per_state(chain)?;
    let exact = expect[start_state];
    let drift = chain.exact_drift();
    // labels are 0..m-1 with the single target state 0
    let non_target: Vec<usize> = (1..m).collect();
    let drift_table: Vec<f64> = (1..m).map(|i| drift[i]).collect();
    let all_drift_positive = drift_table.iter().all(|&d| d > 0.0);

    let mut tally = Tally::default();
    {
        let record = |tally: &mut Tally, name: &str, direction: Direction, bound: f64| {
            tally.checks += 1;
            let tol = SOUND_EPS * (1.0 + exact.abs());
            let ok = match direction {
                Direction::Upper => bound + tol >= exact,
                Direction::Lower => bound <= exact + tol,
            };
            if !ok {
                tally.violations.push(format!(
                    "chain {chain_idx}: {name} bound {bound} vs exact {exact}"
                ));
            }
        };

        let max_drift = drift_table
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if max_drift > 0.0 {
            record(
                &mut tally,
                "additive_lower",
                Direction::Lower,
                additive_lower(max_drift, x0)?.bound,
            );
        } else {
            tally.skipped += 1;
        }

        if all_drift_positive {
            let min_drift = drift_table.iter().cloned().fold(f64::INFINITY, f64::min);
            record(
                &mut tally,
                "additive_upper",
                Direction::Upper,
                additive_upper(min_drift, x0)?.bound,
            );

            // monotone under-estimate of the drift: suffix minima
            let mut hmin = drift_table.clone();
            for i in (0..hmin.len() - 1).rev() {
                hmin[i] = hmin[i].min(hmin[i + 1]);
            }
            let h = HSpec::table(1.0, hmin)?;
            record(
                &mut tally,
                "variable_upper",
                Direction::Upper,
                variable_upper(&h, x0, MonotoneEvidence::SampledCheck)?.bound,
            );

            // general upper bound: exact g-drift floor for the hmin potential
            let g = build_potential(h)?;
            let g_drift = exact_g_drift(chain, &g)?;
            let alpha_min = non_target
                .iter()
                .map(|&i| g_drift[i])
                .fold(f64::INFINITY, f64::min);
            if alpha_min > 0.0 {
                record(
                    &mut tally,
                    "general_upper",
                    Direction::Upper,
                    general_expected_bound(&g, alpha_min, x0, Direction::Upper)?.bound,
                );
            } else {
                tally.skipped += 1;
            }

            // multiplicative upper with delta below every drift/x ratio
            let ratio_min = non_target
                .iter()
                .map(|&i| drift[i] / chain.label(i))
                .fold(f64::INFINITY, f64::min);
            record(
                &mut tally,
                "multiplicative_upper",
                Direction::Upper,
                multiplicative_upper(ratio_min.min(0.99), 1.0, x0)?.bound,
            );

            // general lower bound and both tail sides use the exact drift
            // as h: every drift/mgf precondition then holds with equality
            let h_exact = HSpec::table(1.0, drift_table.clone())?;
            let g_exact = build_potential(h_exact)?;
            let g_drift = exact_g_drift(chain, &g_exact)?;
            let alpha_max = non_target
                .iter()
                .map(|&i| g_drift[i])
                .fold(f64::NEG_INFINITY, f64::max);
            if alpha_max > 0.0 {
                record(
                    &mut tally,
                    "general_lower",
                    Direction::Lower,
                    general_expected_bound(&g_exact, alpha_max, x0, Direction::Lower)?.bound,
                );
            } else {
                tally.skipped += 1;
            }

            if let Some(c) = fit_nonmonotone_c(chain, &drift_table) {
                let h = HSpec::table(1.0, drift_table.clone())?;
                match nonmonotone_variable_upper(&h, c, x0, Some(chain)) {
                    Ok(b) => record(&mut tally, "nonmonotone_upper", Direction::Upper, b.bound),
                    Err(Error::Precondition(_)) => tally.skipped += 1,
                    Err(e) => return Err(e),
                }
            } else {
                tally.skipped += 1;
            }

            // tail soundness at `horizons` horizons spread over [0, 2.5 E]
            let lambda = 1.0 / (1.0 + g_exact.eval(x0)?);
            let t_max = (3.0 * exact).ceil() as usize;
            let tail = exact_tail(chain, &Start::State(start_state), t_max)?;
            let exact_at = |t: u64| *tail.values.get(t as usize).unwrap_or(&0.0);
            let up = exact_drift_profile(chain, &g_exact, lambda, MgfSign::Neg)?;
            let lo = exact_drift_profile(chain, &g_exact, lambda, MgfSign::Pos)?;
            let sup_u = non_target.iter().map(|&i| up.mgf[i]).fold(0.0f64, f64::max);
            let sup_l = non_target.iter().map(|&i| lo.mgf[i]).fold(0.0f64, f64::max);
            for k in 1..=horizons {
                let t_star = ((k as f64 / horizons as f64 * 2.5 * exact).round() as u64).max(1);
                let mgf = up.mgf.clone();
                let p_up = TailParams {
                    lambda,
                    beta: Beta::PerState {
                        f: Arc::new(move |x: f64| mgf[x as usize]),
                        sup: Some(sup_u),
                    },
                    a: 0.0,
                    t_star,
                    absorbing: true,
                };
                tally.checks += 1;
                let b = general_tail_upper(&g_exact, &p_up, x0, None)?;
                if b.bound + SOUND_EPS < exact_at(t_star) {
                    tally.violations.push(format!(
                        "chain {chain_idx}: tail_upper t*={t_star} bound {} vs exact {}",
                        b.bound,
                        exact_at(t_star)
                    ));
                }
                let mgf = lo.mgf.clone();
                let p_low = TailParams {
                    lambda,
                    beta: Beta::PerState {
                        f: Arc::new(move |x: f64| mgf[x as usize]),
                        sup: Some(sup_l),
                    },
                    a: 0.0,
                    t_star,
                    absorbing: true,
                };
                tally.checks += 1;
                let b = general_tail_lower(&g_exact, &p_low, x0, None)?;
                let exact_below = 1.0 - exact_at(t_star);
                if b.bound + SOUND_EPS < exact_below {
                    tally.violations.push(format!(
                        "chain {chain_idx}: tail_lower t*={t_star} bound {} vs exact {exact_below}",
                        b.bound
                    ));
                }
            }
        } else {
            tally.skipped += 1;
        }

        if chain.is_monotone() {
            // classical fitness levels over distance levels: the leave
            // probability of the state at distance d bounds level m-d
            let down_mass: Vec<f64> = (1..m)
                .map(|i| {
                    chain
                        .row(i)
                        .iter()
                        .filter(|&&(j, p)| p > 0.0 && chain.label(j) < chain.label(i))
                        .map(|&(_, p)| p)
                        .sum::<f64>()
                })
                .collect();
            if down_mass.iter().all(|&p| p > 0.0 && p <= 1.0) {
                let p_rev: Vec<f64> = down_mass.iter().rev().copied().collect();
                let part = FitnessPartition::for_upper(p_rev)?;
                record(
                    &mut tally,
                    "fitness_levels_upper",
                    Direction::Upper,
                    fitness_levels_upper(&part, 1)?.bound,
                );
            } else {
                tally.skipped += 1;
            }

            // multiplicative lower: delta from the largest drift/x ratio,
            // beta from the exact jump checks
            let ratio_max = non_target
                .iter()
                .map(|&i| drift[i] / chain.label(i))
                .fold(0.0f64, f64::max);
            if ratio_max > 0.0 && ratio_max <= 1.0 {
                let mut done = false;
                for k in 1..=10 {
                    let beta = 0.1 * k as f64;
                    match multiplicative_lower(ratio_max, beta, 1.0, x0, Some(chain)) {
                        Ok(b) => {
                            record(
                                &mut tally,
                                "multiplicative_lower",
                                Direction::Lower,
                                b.bound,
                            );
                            done = true;
                            break;
                        }
                        Err(Error::Precondition(_)) => continue,
                        Err(e) => return Err(e),
                    }
                }
                if !done {
                    tally.skipped += 1;
                }
            } else {
                tally.skipped += 1;
            }

            // variable lower with the support map c and a monotone
            // over-estimate h of the drift through c
            if let Some((h, c_table)) = fit_variable_lower(chain, &drift) {
                let c_map = move |x: f64| {
                    let idx = (x.ceil() as usize).min(c_table.len() - 1);
                    c_table[idx]
                };
                match variable_lower(&h, &c_map, x0, Some(chain)) {
                    Ok(b) => record(&mut tally, "variable_lower", Direction::Lower, b.bound),
                    Err(Error::Precondition(_)) => tally.skipped += 1,
                    Err(e) => return Err(e),
                }
            } else {
                tally.skipped += 1;
            }
        }
    }

    outcome.checks += tally.checks;
    outcome.skipped += tally.skipped;
    outcome.violations.extend(tally.violations);
    Ok(())
}

#[derive(Default)]
struct Tally {
    checks: usize,
    skipped: usize,
    violations: Vec<String>,
}

/// Exact per-state drift of the potential `g` on the chain.
fn exact_g_drift(chain: &MarkovChain, g: &crate::potential::PotentialFunction) -> Result<Vec<f64>> {
    let m = chain.n_states();
    let mut g_of = vec![0.0; m];
    for i in 0..m {
        let l = chain.label(i);
        g_of[i] = if l <= 0.0 { 0.0 } else { g.eval(l)? };
    }
    Ok((0..m)
        .map(|i| {
            if chain.is_target(i) {
                0.0
            } else {
                chain
                    .row(i)
                    .iter()
                    .map(|&(j, p)| p * (g_of[i] - g_of[j]))
                    .sum()
            }
        })
        .collect())
}

/// Minimal `c >= 1` compatible with both the up/down ratio condition and
/// the pairwise `h(min) <= c h(max)` condition, if one exists.
fn fit_nonmonotone_c(chain: &MarkovChain, drift_table: &[f64]) -> Option<f64> {
    let m = chain.n_states();
    let jumps = chain.max_jump();
    let mut worst_ratio = 0.0f64;
    for i in 1..m {
        let mut up = 0.0;
        let mut down = 0.0;
        for &(j, p) in chain.row(i) {
            let diff = chain.label(j) - chain.label(i);
            if diff > 0.0 {
                up += p * diff;
            } else {
                down += p * -diff;
            }
        }
        if down == 0.0 {
            return None;
        }
        worst_ratio = worst_ratio.max(up / down);
    }
    // ratio <= 1/(2c^2)  =>  c <= sqrt(1/(2 ratio))
    let c_cap = if worst_ratio == 0.0 {
        f64::INFINITY
    } else {
        (1.0 / (2.0 * worst_ratio)).sqrt()
    };
    let mut c_need = 1.0f64;
    for i in 1..m {
        for j in 1..m {
            let (x, y) = (chain.label(i), chain.label(j));
            if (x - y).abs() <= jumps[i] {
                let h_lo = drift_table[(x.min(y) as usize) - 1];
                let h_hi = drift_table[(x.max(y) as usize) - 1];
                c_need = c_need.max(h_lo / h_hi);
            }
        }
    }
    // nudge off the boundary so the exact checks do not sit on a knife edge
    let c = c_need * (1.0 + 1e-12);
    (c <= c_cap).then_some(c)
}

/// Monotone `h` and state map `c` for the variable lower bound on a
/// monotone chain: `c` is the suffix-min of per-state support minima, and
/// `h(y)` the cummax of drifts of states whose `c` lies at or below `y`,
/// floored to stay positive.
fn fit_variable_lower(chain: &MarkovChain, drift: &[f64]) -> Option<(HSpec, Vec<f64>)> {
    let m = chain.n_states();
    let mut minsupp = vec![f64::INFINITY; m];
    for i in 1..m {
        for &(j, p) in chain.row(i) {
            if p > 0.0 {
                minsupp[i] = minsupp[i].min(chain.label(j));
            }
        }
    }
    let mut c_table = vec![0.0f64; m];
    let mut running = f64::INFINITY;
    for i in (1..m).rev() {
        running = running.min(minsupp[i]);
        c_table[i] = running.max(0.0);
    }
    let floor = (1..m).map(|i| drift[i]).fold(f64::INFINITY, f64::min);
    if !(floor > 0.0) {
        return None;
    }
    let mut values = vec![0.0f64; m - 1];
    for i in 1..m {
        // h must dominate drift(i) at y = max(c(i), 1) after the constant
        // extension below x_min = 1
        let y = (c_table[i].ceil().max(1.0) as usize).min(m - 1);
        for slot in values.iter_mut().skip(y - 1) {
            *slot = slot.max(drift[i]);
        }
    }
    for v in values.iter_mut() {
        *v = v.max(floor);
    }
    for i in 1..values.len() {
        values[i] = values[i].max(values[i - 1]);
    }
    let h = HSpec::table(1.0, values).ok()?;
    Some((h, c_table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_produces_zero_violations() {
        let outcome = soundness_sweep(30, 40, 4242, 6).unwrap();
        assert_eq!(outcome.chains, 30);
        assert!(outcome.checks > 200, "only {} checks ran", outcome.checks);
        assert!(
            outcome.passed(),
            "soundness violations: {:?}",
            outcome.violations
        );
    }
}

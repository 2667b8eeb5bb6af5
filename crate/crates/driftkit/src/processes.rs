//! Benchmark stochastic processes: the (1+1) EA on OneMax, linear functions
//! and LeadingOnes, plus explicit finite chains, with the closed-form drift
//! and expected-time predictions attached to them.
//!
//! The tracked distance is the number of zeros for OneMax and linear
//! functions (selection for linear functions uses the weighted fitness) and
//! `max(0, a - LeadingOnes(x))` for LeadingOnes with target value `a`.

use crate::error::{Error, Result};
use crate::oracle::MarkovChain;
use crate::rng::Xoshiro256PlusPlus;

/// Explicit constant of the LeadingOnes tail bounds, `(8e-1)/(4e)`.
pub const LEADINGONES_TAIL_C: f64 = (8.0 * std::f64::consts::E - 1.0) / (4.0 * std::f64::consts::E);

#[derive(Debug, Clone)]
pub enum Family {
    OneMax,
    /// Weighted linear function with non-zero weights; maximized.
    Linear {
        weights: Vec<f64>,
    },
    /// LeadingOnes with distance `max(0, a - LO(x))`.
    LeadingOnes {
        a: usize,
    },
    /// An explicit finite chain simulated by its transition rows.
    ExplicitChain(MarkovChain),
}

#[derive(Debug, Clone)]
pub enum Init {
    UniformRandom,
    FixedBits(Vec<bool>),
    /// Start state index of an explicit chain.
    FixedState(usize),
}

/// Immutable description of a benchmark process.
#[derive(Debug, Clone)]
pub struct ProcessSpec {
    family: Family,
    n: usize,
    init: Init,
    /// P(flip count = 0) = (1 - 1/n)^n, cached for the sampler.
    p_zero_flips: f64,
}

impl ProcessSpec {
    pub fn onemax(n: usize, init: Init) -> Result<Self> {
        Self::build(Family::OneMax, n, init)
    }

    pub fn linear(weights: Vec<f64>, init: Init) -> Result<Self> {
        if weights.iter().any(|&w| w == 0.0 || !w.is_finite()) {
            return Err(Error::parameter(
                "linear weights must be non-zero and finite",
            ));
        }
        let n = weights.len();
        Self::build(Family::Linear { weights }, n, init)
    }

    pub fn leadingones(n: usize, a: usize, init: Init) -> Result<Self> {
        if a > n {
            return Err(Error::parameter(format!("target a={a} exceeds n={n}")));
        }
        Self::build(Family::LeadingOnes { a }, n, init)
    }

    pub fn explicit_chain(chain: MarkovChain, init: Init) -> Result<Self> {
        let n = chain.n_states();
        Self::build(Family::ExplicitChain(chain), n, init)
    }

    fn build(family: Family, n: usize, init: Init) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("n must be at least 1"));
        }
        if let (Init::FixedBits(bits), false) = (&init, matches!(family, Family::ExplicitChain(_)))
        {
            if bits.len() != n {
                return Err(Error::parameter("fixed start has wrong bit length"));
            }
        }
        let p_zero_flips = if n == 1 {
            0.0
        } else {
            (1.0 - 1.0 / n as f64).powi(n as i32)
        };
        Ok(Self {
            family,
            n,
            init,
            p_zero_flips,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn init(&self) -> &Init {
        &self.init
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Bits {
        bits: Vec<bool>,
        /// Cached LeadingOnes value; unused by OneMax/linear.
        lo: usize,
    },
    ChainState(usize),
}

/// One simulated configuration: bit string (or chain state), cached distance
/// and step counter.
#[derive(Debug, Clone)]
pub struct ProcessState {
    repr: Repr,
    distance: f64,
    steps: u64,
}

impl ProcessState {
    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

fn leading_ones(bits: &[bool]) -> usize {
    bits.iter().take_while(|&&b| b).count()
}

fn zeros(bits: &[bool]) -> usize {
    bits.iter().filter(|&&b| !b).count()
}

/// Draw the initial state.
pub fn init_state(spec: &ProcessSpec, rng: &mut Xoshiro256PlusPlus) -> Result<ProcessState> {
    let repr = match (&spec.family, &spec.init) {
        (Family::ExplicitChain(chain), Init::FixedState(s)) => {
            if *s >= chain.n_states() {
                return Err(Error::parameter(format!("start state {s} out of range")));
            }
            Repr::ChainState(*s)
        }
        (Family::ExplicitChain(chain), Init::UniformRandom) => {
            Repr::ChainState(rng.next_index(chain.n_states()))
        }
        (Family::ExplicitChain(_), Init::FixedBits(_)) => {
            return Err(Error::parameter("explicit chains start from a state index"))
        }
        (_, Init::FixedState(_)) => {
            return Err(Error::parameter("bitstring processes start from bits"))
        }
        (_, Init::UniformRandom) => {
            let bits: Vec<bool> = (0..spec.n).map(|_| rng.next_u64() & 1 == 1).collect();
            let lo = leading_ones(&bits);
            Repr::Bits { bits, lo }
        }
        (_, Init::FixedBits(b)) => {
            let lo = leading_ones(b);
            Repr::Bits {
                bits: b.clone(),
                lo,
            }
        }
    };
    let distance = distance_of(spec, &repr);
    Ok(ProcessState {
        repr,
        distance,
        steps: 0,
    })
}

fn distance_of(spec: &ProcessSpec, repr: &Repr) -> f64 {
    match (&spec.family, repr) {
        (Family::ExplicitChain(chain), Repr::ChainState(s)) => chain.label(*s),
        (Family::LeadingOnes { a }, Repr::Bits { lo, .. }) => a.saturating_sub(*lo) as f64,
        (_, Repr::Bits { bits, .. }) => zeros(bits) as f64,
        _ => unreachable!("repr matches family by construction"),
    }
}

/// Sample the number of flipped bits, Binomial(n, 1/n), by an inverse-CDF
/// walk from k = 0 (expected O(1) work).
fn sample_flip_count(spec: &ProcessSpec, rng: &mut Xoshiro256PlusPlus) -> usize {
    let n = spec.n;
    if n == 1 {
        return 1;
    }
    let mut u = rng.next_f64();
    let ratio = 1.0 / (n as f64 - 1.0); // p/(1-p) with p = 1/n
    let mut pmf = spec.p_zero_flips;
    let mut k = 0usize;
    loop {
        if u < pmf || k == n {
            return k;
        }
        u -= pmf;
        pmf *= (n - k) as f64 / (k + 1) as f64 * ratio;
        k += 1;
    }
}

/// Fill `out` with distinct flip positions in `0..n`.
fn sample_positions(n: usize, rng: &mut Xoshiro256PlusPlus, out: &mut [usize]) {
    let mut filled = 0;
    while filled < out.len() {
        let idx = rng.next_index(n);
        if !out[..filled].contains(&idx) {
            out[filled] = idx;
            filled += 1;
        }
    }
}

/// Advance the process one (1+1) EA generation (or one chain transition).
///
/// Standard bit mutation: each bit flips independently with probability
/// `1/n` (sampled as flip count, then positions); the offspring is accepted
/// iff the fitness is not worsened. The distance cache is updated
/// incrementally and cross-checked against a full recomputation every 2^16
/// steps in debug builds.
pub fn step(spec: &ProcessSpec, state: &mut ProcessState, rng: &mut Xoshiro256PlusPlus) {
    state.steps += 1;
    if let (Family::ExplicitChain(chain), Repr::ChainState(s)) = (&spec.family, &mut state.repr) {
        let mut u = rng.next_f64();
        let row = chain.row(*s);
        let mut next = *s;
        for &(j, p) in row {
            if u < p {
                next = j;
                break;
            }
            u -= p;
        }
        *s = next;
        state.distance = chain.label(next);
        debug_checksum(spec, state);
        return;
    }

    let k = sample_flip_count(spec, rng);
    if k == 0 {
        debug_checksum(spec, state);
        return;
    }
    let mut buf = [0usize; 64];
    let mut spill: Vec<usize>;
    let flips: &[usize] = if k <= buf.len() {
        sample_positions(spec.n, rng, &mut buf[..k]);
        &buf[..k]
    } else {
        spill = vec![0; k];
        sample_positions(spec.n, rng, &mut spill);
        &spill
    };

    match (&spec.family, &mut state.repr) {
        (Family::OneMax, Repr::Bits { bits, .. }) => {
            let gained_ones: i64 = flips.iter().map(|&i| if bits[i] { -1 } else { 1 }).sum();
            if gained_ones >= 0 {
                for &i in flips {
                    bits[i] = !bits[i];
                }
                state.distance -= gained_ones as f64;
            }
        }
        (Family::Linear { weights }, Repr::Bits { bits, .. }) => {
            let gained_weight: f64 = flips
                .iter()
                .map(|&i| if bits[i] { -weights[i] } else { weights[i] })
                .sum();
            if gained_weight >= 0.0 {
                let mut gained_ones = 0i64;
                for &i in flips {
                    gained_ones += if bits[i] { -1 } else { 1 };
                    bits[i] = !bits[i];
                }
                state.distance -= gained_ones as f64;
            }
        }
        (Family::LeadingOnes { a }, Repr::Bits { bits, lo }) => {
            // a flip inside the all-ones prefix lowers the LO value: reject
            if flips.iter().any(|&i| i < *lo) {
                debug_checksum(spec, state);
                return;
            }
            let flips_leftmost_zero = *lo < spec.n && flips.contains(lo);
            for &i in flips {
                bits[i] = !bits[i];
            }
            if flips_leftmost_zero {
                let mut new_lo = *lo + 1;
                while new_lo < spec.n && bits[new_lo] {
                    new_lo += 1;
                }
                *lo = new_lo;
                state.distance = a.saturating_sub(new_lo) as f64;
            }
            // otherwise the LO value is unchanged and the offspring is
            // accepted as an equal-fitness move
        }
        _ => unreachable!("repr matches family by construction"),
    }
    debug_checksum(spec, state);
}

#[inline]
fn debug_checksum(spec: &ProcessSpec, state: &ProcessState) {
    if cfg!(debug_assertions) && state.steps.is_multiple_of(1 << 16) {
        debug_assert_eq!(
            state.distance,
            distance_of(spec, &state.repr),
            "distance cache diverged at step {}",
            state.steps
        );
    }
}

/// The OneMax one-step drift bracket at `x` zeros:
/// lower `(1-1/n)^{n-x} x/n`, upper `((1-1/n)(1+x/(n-1)^2))^{n-x} x/n`.
pub fn onemax_drift_bounds(n: usize, x: usize) -> Result<(f64, f64)> {
    if x < 1 || x > n {
        return Err(Error::parameter(format!(
            "need 1 <= x <= n, got x={x}, n={n}"
        )));
    }
    let nf = n as f64;
    let xf = x as f64;
    let base = xf / nf;
    let q = 1.0 - 1.0 / nf;
    let e = (n - x) as i32;
    let lower = q.powi(e) * base;
    let upper = (q * (1.0 + xf / ((nf - 1.0) * (nf - 1.0)))).powi(e) * base;
    Ok((lower, upper))
}

/// Leading-order bracket on the OneMax expected optimization time:
/// `(en ln n - 5.9338 n, en ln n - 0.1369 n)`. The O(1)/O(log n) terms of
/// the full statements are dropped; callers that compare against exact
/// values must add their own slack.
pub fn onemax_expected_bounds(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::parameter("needs n >= 2"));
    }
    let nf = n as f64;
    let lead = std::f64::consts::E * nf * nf.ln();
    Ok((lead - 5.9338 * nf, lead - 0.1369 * nf))
}

/// Exact LeadingOnes drift at distance `i` from target `a`:
/// `(2 - 2^{-n+a-i+1}) (1-1/n)^{a-i} / n`.
///
/// The distance here is the signed `a - LO(x)`: an improving step may
/// overshoot the target and its full progress counts, which is what makes
/// the free-rider accounting exact.
pub fn leadingones_exact_drift(n: usize, a: usize, i: usize) -> Result<f64> {
    if i < 1 || i > a || a > n {
        return Err(Error::parameter(format!(
            "need 1 <= i <= a <= n, got i={i}, a={a}, n={n}"
        )));
    }
    let nf = n as f64;
    let riders = 2.0 - 2f64.powi(-((n - a + i - 1) as i32));
    Ok(riders * (1.0 - 1.0 / nf).powi((a - i) as i32) / nf)
}

/// Exact expected time to reach a LeadingOnes value of at least `a` from
/// uniform initialization: `(n^2 - n)/2 ((1 + 1/(n-1))^a - 1)`.
pub fn leadingones_expected(n: usize, a: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::parameter("needs n >= 2"));
    }
    if a > n {
        return Err(Error::parameter(format!("target a={a} exceeds n={n}")));
    }
    let nf = n as f64;
    Ok((nf * nf - nf) / 2.0 * ((1.0 + 1.0 / (nf - 1.0)).powi(a as i32) - 1.0))
}

/// LeadingOnes tail predictions with the explicit proof constant
/// [`LEADINGONES_TAIL_C`].
#[derive(Debug, Clone)]
pub struct LeadingOnesTails {
    /// `n^2/2 ((1+1/(n-1))^a - 1) + r`
    pub upper_t: f64,
    /// `e^{-C r n^{-3/2}}` failure probability for exceeding `upper_t`
    pub upper_prob: f64,
    /// `(n^2-n)/2 ((1+1/(n-1))^a - 1 - 2 ln^2 n / n) - r`
    pub lower_t: f64,
    /// `e^{-C r n^{-3/2}}` failure probability for undershooting `lower_t`;
    /// an additional additive term is only known symbolically, see
    /// [`LeadingOnesTails::lower_extra_term`].
    pub lower_prob: f64,
    /// Symbolic additive failure term of the lower prediction.
    pub lower_extra_term: &'static str,
}

impl LeadingOnesTails {
    pub fn lower_extra_term(&self) -> &'static str {
        self.lower_extra_term
    }
}

/// Thresholds and failure probabilities for the LeadingOnes concentration
/// statements at deviation `r`. Logarithms are natural.
pub fn leadingones_tail_predictions(n: usize, a: usize, r: f64) -> Result<LeadingOnesTails> {
    if n < 2 {
        return Err(Error::parameter("needs n >= 2"));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    if !(a as f64 > 0.0 && a as f64 <= nf - ln_n) {
        return Err(Error::parameter(format!(
            "upper prediction needs 0 < a <= n - ln n, got a={a} (n - ln n = {})",
            nf - ln_n
        )));
    }
    if !((a as f64) >= ln_n * ln_n - 1.0 && a <= n) {
        return Err(Error::parameter(format!(
            "lower prediction needs ln^2 n - 1 <= a <= n, got a={a} (ln^2 n - 1 = {})",
            ln_n * ln_n - 1.0
        )));
    }
    if r < 0.0 {
        return Err(Error::parameter("deviation r must be non-negative"));
    }
    let growth = (1.0 + 1.0 / (nf - 1.0)).powi(a as i32) - 1.0;
    let prob = (-LEADINGONES_TAIL_C * r * nf.powf(-1.5)).exp();
    Ok(LeadingOnesTails {
        upper_t: nf * nf / 2.0 * growth + r,
        upper_prob: prob,
        lower_t: (nf * nf - nf) / 2.0 * (growth - 2.0 * ln_n * ln_n / nf) - r,
        lower_prob: prob,
        lower_extra_term: "e^{-Omega(ln^2 n)}",
    })
}

/// OneMax tail predictions at deviation parameter `r`.
#[derive(Debug, Clone)]
pub struct OneMaxTails {
    /// `en ln n - c_lower n - r e n`
    pub lower_t: f64,
    /// `e^{-r/2}`
    pub lower_prob: f64,
    /// `en ln n + r e n`
    pub upper_t: f64,
    /// `e^{-r}`
    pub upper_prob: f64,
}

/// Thresholds and failure probabilities of the OneMax concentration
/// statement. The lower-side constant is never made explicit by the
/// analysis, so it is caller-supplied as `c_lower`.
pub fn onemax_tail_predictions(n: usize, r: f64, c_lower: f64) -> Result<OneMaxTails> {
    if n < 2 {
        return Err(Error::parameter("needs n >= 2"));
    }
    if r < 0.0 {
        return Err(Error::parameter("deviation r must be non-negative"));
    }
    let nf = n as f64;
    let en = std::f64::consts::E * nf;
    let lead = en * nf.ln();
    Ok(OneMaxTails {
        lower_t: lead - c_lower * nf - r * en,
        lower_prob: (-r / 2.0).exp(),
        upper_t: lead + r * en,
        upper_prob: (-r).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_onemax_chain, exact_expectation};

    #[test]
    fn n1_hits_in_one_step() {
        let spec = ProcessSpec::onemax(1, Init::FixedBits(vec![false])).unwrap();
        let mut rng = Xoshiro256PlusPlus::seeded(1);
        let mut st = init_state(&spec, &mut rng).unwrap();
        assert_eq!(st.distance(), 1.0);
        step(&spec, &mut st, &mut rng);
        assert_eq!(st.distance(), 0.0);
        assert_eq!(st.steps(), 1);
    }

    #[test]
    fn onemax_empirical_drift_matches_chain() {
        let n = 10;
        let x = 4;
        let chain = build_onemax_chain(n).unwrap();
        let exact = chain.exact_drift()[x];
        let spec = ProcessSpec::onemax(n, Init::UniformRandom).unwrap();
        let mut rng = Xoshiro256PlusPlus::seeded(99);
        let trials = 1_000_000u64;
        let mut sum = 0.0;
        let mut sq = 0.0;
        let bits: Vec<bool> = (0..n).map(|i| i >= x).collect();
        for _ in 0..trials {
            let mut st = ProcessState {
                repr: Repr::Bits {
                    bits: bits.clone(),
                    lo: leading_ones(&bits),
                },
                distance: x as f64,
                steps: 0,
            };
            step(&spec, &mut st, &mut rng);
            let d = x as f64 - st.distance();
            sum += d;
            sq += d * d;
        }
        let mean = sum / trials as f64;
        let var = (sq - sum * sum / trials as f64) / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 3.0 * se,
            "empirical {mean} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn leadingones_never_decreases_lo() {
        let n = 20;
        let spec = ProcessSpec::leadingones(n, n, Init::UniformRandom).unwrap();
        let mut rng = Xoshiro256PlusPlus::seeded(5);
        let mut st = init_state(&spec, &mut rng).unwrap();
        let mut last = st.distance();
        for _ in 0..1_000_000 {
            if st.distance() == 0.0 {
                st = init_state(&spec, &mut rng).unwrap();
                last = st.distance();
                continue;
            }
            step(&spec, &mut st, &mut rng);
            assert!(st.distance() <= last, "distance increased");
            last = st.distance();
        }
    }

    #[test]
    fn linear_selection_uses_weights_but_tracks_zeros() {
        // weight vector strongly favours the first bit: flipping it down is
        // rejected even when it would reduce the zero count elsewhere
        let spec = ProcessSpec::linear(vec![100.0, 1.0, 1.0], Init::UniformRandom).unwrap();
        let mut rng = Xoshiro256PlusPlus::seeded(17);
        for _ in 0..10_000 {
            let mut st = init_state(&spec, &mut rng).unwrap();
            let before_first = matches!(&st.repr, Repr::Bits { bits, .. } if bits[0]);
            step(&spec, &mut st, &mut rng);
            if before_first {
                if let Repr::Bits { bits, .. } = &st.repr {
                    assert!(bits[0], "accepted a move that loses the heavy bit");
                }
            }
            let recomputed = distance_of(&spec, &st.repr);
            assert_eq!(st.distance(), recomputed);
        }
    }

    #[test]
    fn drift_bound_formulas() {
        // x = n collapses the bracket to x/n * 1
        let (lo, hi) = onemax_drift_bounds(7, 7).unwrap();
        assert_eq!(lo, 1.0);
        assert_eq!(hi, 1.0);
        let (lo, _) = onemax_drift_bounds(2, 1).unwrap();
        assert_eq!(lo, 0.25);
        assert!(onemax_drift_bounds(5, 0).is_err());
        assert!(onemax_drift_bounds(5, 6).is_err());
    }

    #[test]
    fn drift_bracket_contains_exact_drift() {
        for n in [5usize, 23, 60, 200] {
            let chain = build_onemax_chain(n).unwrap();
            let drift = chain.exact_drift();
            for x in 1..=n {
                let (lo, hi) = onemax_drift_bounds(n, x).unwrap();
                let tol = 1e-11 * (1.0 + drift[x]);
                assert!(
                    lo <= drift[x] + tol && drift[x] <= hi + tol,
                    "n={n}, x={x}: {lo} <= {} <= {hi}",
                    drift[x]
                );
            }
        }
    }

    #[test]
    fn expected_bounds_shape() {
        let (lo, hi) = onemax_expected_bounds(1000).unwrap();
        assert!((lo - 12843.4).abs() < 1.0);
        assert!((hi - 18640.4).abs() < 1.0);
        for n in [2usize, 10, 1000, 1_000_000] {
            let (lo, hi) = onemax_expected_bounds(n).unwrap();
            assert!(lo < hi);
        }
        // both ends approach en ln n: the relative gap shrinks with n
        let rel_gap = |n: usize| {
            let (lo, hi) = onemax_expected_bounds(n).unwrap();
            let lead = std::f64::consts::E * n as f64 * (n as f64).ln();
            ((lead - lo) / lead, (lead - hi) / lead)
        };
        let (lo3, hi3) = rel_gap(1_000);
        let (lo6, hi6) = rel_gap(1_000_000);
        assert!(lo6 < lo3 && hi6 < hi3);
        assert!(lo6 < 0.16 && hi6 < 0.004);
    }

    #[test]
    fn leadingones_drift_formula_cases() {
        // i = a: no prefix to preserve
        let n = 10;
        let v = leadingones_exact_drift(n, 5, 5).unwrap();
        assert!((v - (2.0 - 2f64.powi(-(n as i32) + 1)) / n as f64).abs() < 1e-15);
        // n = a = 2, i = 2: (2 - 1/2) * 1 * 1/2
        let v = leadingones_exact_drift(2, 2, 2).unwrap();
        assert_eq!(v, 0.75);
        assert!(leadingones_exact_drift(5, 3, 4).is_err());
    }

    #[test]
    fn leadingones_drift_matches_uniform_suffix_enumeration() {
        // exhaustive oracle over the family: first a-i ones, a zero, suffix
        // uniform; offspring averaged over all flip masks of the relevant
        // positions
        for n in 2..=9usize {
            for a in 1..=n {
                for i in 1..=a {
                    let lemma = leadingones_exact_drift(n, a, i).unwrap();
                    let oracle = uniform_suffix_drift(n, a, i);
                    assert!(
                        (lemma - oracle).abs() < 1e-12,
                        "n={n} a={a} i={i}: lemma {lemma} vs oracle {oracle}"
                    );
                }
            }
        }
    }

    // Test-only oracle: average the exact one-step decrease of the signed
    // distance a - LO over every suffix completion and every mutation mask.
    // Improvements require flipping the leftmost zero and no prefix bit; the
    // distance then drops by 1 + (ones run after the leftmost zero in the
    // offspring). Overshoot below zero counts in full, matching the
    // threshold-hitting convention behind the drift formula.
    fn uniform_suffix_drift(n: usize, a: usize, i: usize) -> f64 {
        let prefix = a - i; // leading ones
        let suffix_len = n - prefix - 1; // bits after the leftmost zero
        let p = 1.0 / n as f64;
        let keep_prefix = (1.0 - p).powi(prefix as i32);
        let flip_zero = p;
        let mut total = 0.0;
        for suffix in 0u64..(1 << suffix_len) {
            // average over flip masks of the suffix
            let mut gain = 0.0;
            for mask in 0u64..(1 << suffix_len) {
                let flipped = suffix ^ mask;
                let mut run = 0usize;
                while run < suffix_len && (flipped >> run) & 1 == 1 {
                    run += 1;
                }
                let amount = (1 + run) as f64;
                let mask_prob = (0..suffix_len)
                    .map(|b| if (mask >> b) & 1 == 1 { p } else { 1.0 - p })
                    .product::<f64>();
                gain += mask_prob * amount;
            }
            total += gain / (1u64 << suffix_len) as f64;
        }
        keep_prefix * flip_zero * total
    }

    #[test]
    fn leadingones_expected_formula() {
        assert_eq!(leadingones_expected(2, 0).unwrap(), 0.0);
        assert_eq!(leadingones_expected(2, 2).unwrap(), 3.0);
        let chain = crate::oracle::build_leadingones_chain(8, 8).unwrap();
        let start = crate::oracle::uniform_bitstring_start(&chain);
        let oracle = exact_expectation(&chain, &start).unwrap();
        let formula = leadingones_expected(8, 8).unwrap();
        assert!(
            (oracle - formula).abs() < 1e-9,
            "oracle {oracle} vs formula {formula}"
        );
    }

    #[test]
    fn tail_prediction_shapes() {
        let t = leadingones_tail_predictions(100, 90, 0.0).unwrap();
        assert_eq!(t.upper_prob, 1.0);
        let t = leadingones_tail_predictions(100, 90, 2.0 * 100f64.powf(1.5)).unwrap();
        assert!((t.upper_prob - (-2.0 * LEADINGONES_TAIL_C).exp()).abs() < 1e-12);
        assert!(leadingones_tail_predictions(100, 99, 1.0).is_err());

        let t = onemax_tail_predictions(100, 0.0, 6.0).unwrap();
        assert_eq!(t.upper_prob, 1.0);
        let en = std::f64::consts::E * 100.0;
        assert!((t.upper_t - en * 100f64.ln()).abs() < 1e-9);
        let t = onemax_tail_predictions(100, 3.0, 6.0).unwrap();
        assert!((t.lower_prob - (-1.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn onemax_lower_tail_prediction_vs_dp() {
        // n = 100, r = 3, c_lower = 6: the lower threshold sits below 0, so
        // the exact DP probability is 0 and trivially within e^{-1.5}
        let n = 100usize;
        let t = onemax_tail_predictions(n, 3.0, 6.0).unwrap();
        assert!((t.lower_prob - (-1.5f64).exp()).abs() < 1e-15);
        let chain = build_onemax_chain(n).unwrap();
        let exact_below = if t.lower_t <= 0.0 {
            0.0
        } else {
            let dp = crate::oracle::exact_tail(
                &chain,
                &crate::oracle::binomial_start(n),
                t.lower_t.floor() as usize,
            )
            .unwrap();
            1.0 - dp.values[t.lower_t.floor() as usize]
        };
        assert!(exact_below <= t.lower_prob);
    }

    #[test]
    fn onemax_mean_agrees_with_chain_oracle() {
        let n = 30usize;
        let spec = ProcessSpec::onemax(n, Init::UniformRandom).unwrap();
        let chain = build_onemax_chain(n).unwrap();
        let exact = exact_expectation(&chain, &crate::oracle::binomial_start(n)).unwrap();
        let mut rng = Xoshiro256PlusPlus::seeded(3);
        let trials = 20_000u64;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..trials {
            let mut st = init_state(&spec, &mut rng).unwrap();
            while st.distance() > 0.0 {
                step(&spec, &mut st, &mut rng);
            }
            let t = st.steps() as f64;
            sum += t;
            sq += t * t;
        }
        let mean = sum / trials as f64;
        let var = (sq - sum * sum / trials as f64) / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 4.0 * se,
            "mean {mean} vs exact {exact} (se {se})"
        );
    }
}

//! Random absorbing-chain corpus for the soundness sweep.
//!
//! Chains have integer labels `0..m` (label = state index), target state 0,
//! and every non-target state keeps at least 0.3 probability mass on
//! strictly smaller labels, so the target is always reachable and drifts
//! stay bounded away from pathological zero rows. Roughly half the chains
//! are structurally monotone; the rest carry upward transitions to exercise
//! the non-monotone machinery.

use super::MarkovChain;
use crate::rng::Xoshiro256PlusPlus;

/// Generate one random valid absorbing chain with at most `max_states`
/// states (and at least 4).
pub fn random_chain(rng: &mut Xoshiro256PlusPlus, max_states: usize) -> MarkovChain {
    let max_states = max_states.max(4);
    let m = 4 + rng.next_index(max_states - 3);
    let monotone = rng.next_f64() < 0.5;

    let labels: Vec<f64> = (0..m).map(|i| i as f64).collect();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(m);
    rows.push(vec![(0, 1.0)]);
    for i in 1..m {
        let mut weights: Vec<(usize, f64)> = Vec::new();
        // 1..=3 distinct downward edges, always present
        let n_down = 1 + rng.next_index(3.min(i));
        let mut down: Vec<usize> = Vec::new();
        while down.len() < n_down {
            let j = rng.next_index(i);
            if !down.contains(&j) {
                down.push(j);
            }
        }
        let down_mass = 0.3 + 0.65 * rng.next_f64();
        for (k, &j) in down.iter().enumerate() {
            let w = if k + 1 == down.len() {
                1.0
            } else {
                0.2 + 0.8 * rng.next_f64()
            };
            weights.push((j, w * down_mass));
        }
        let raw: f64 = weights.iter().map(|&(_, w)| w).sum();
        for w in &mut weights {
            w.1 *= down_mass / raw;
        }
        let mut used: f64 = weights.iter().map(|&(_, w)| w).sum();
        // optional upward edge
        if !monotone && i + 1 < m && rng.next_f64() < 0.6 {
            let j = i + 1 + rng.next_index(m - i - 1);
            let up = (1.0 - used) * 0.4 * rng.next_f64();
            if up > 0.0 {
                weights.push((j, up));
                used += up;
            }
        }
        // self-loop takes the remainder, adjusted to make the row exact
        weights.push((i, 1.0 - used));
        let total: f64 = weights.iter().map(|&(_, w)| w).sum();
        let largest = weights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .map(|(k, _)| k)
            .expect("non-empty row");
        weights[largest].1 += 1.0 - total;
        weights.sort_by_key(|&(j, _)| j);
        weights.retain(|&(_, w)| w != 0.0);
        rows.push(weights);
    }
    MarkovChain::new(labels, rows, 0.0).expect("generator produced an invalid chain")
}

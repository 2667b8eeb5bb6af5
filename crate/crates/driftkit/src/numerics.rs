//! Shared numeric machinery: compensated summation, adaptive Simpson
//! quadrature, finite differences and binomial confidence intervals.

use crate::error::{Error, Result};

/// Absolute tolerance for the quadrature backend.
pub const QUAD_ABS_TOL: f64 = 1e-10;
/// Relative tolerance for the quadrature backend.
pub const QUAD_REL_TOL: f64 = 1e-9;
/// Subdivision-depth cap for adaptive Simpson.
pub const QUAD_MAX_DEPTH: u32 = 60;

/// Two-sided 99% normal quantile, used for Wilson intervals.
pub const Z_99: f64 = 2.5758293035489004;
/// Two-sided 99.9% normal quantile, used for violation verdicts.
pub const Z_999: f64 = 3.290526731491926;

/// Neumaier-compensated accumulator. Sums like `sum(1/p_i)` with tiny `p_i`
/// must not lose precision, so every level/prefix sum in the crate goes
/// through this.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator of values.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

struct SimpsonState<'a, F> {
    f: &'a F,
    abs_tol: f64,
    rel_tol: f64,
    scale: f64,
    /// Worst tolerance miss observed on a depth-capped panel.
    worst_miss: f64,
}

/// Adaptive Simpson quadrature of `f` over `[lo, hi]`.
///
/// Converges to `QUAD_ABS_TOL` absolute / `QUAD_REL_TOL` relative tolerance;
/// if any panel still misses its budget at depth [`QUAD_MAX_DEPTH`] the
/// achieved estimate is returned inside [`Error::Convergence`]. `lo == hi`
/// returns 0 without evaluating `f`.
pub fn adaptive_simpson<F>(f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if lo == hi {
        return Ok(0.0);
    }
    if !(lo < hi) {
        return Err(Error::parameter(format!(
            "integration bounds out of order: lo={lo}, hi={hi}"
        )));
    }
    let fl = f(lo)?;
    let fm = f(0.5 * (lo + hi))?;
    let fh = f(hi)?;
    let whole = (hi - lo) / 6.0 * (fl + 4.0 * fm + fh);
    let mut state = SimpsonState {
        f: &f,
        abs_tol: QUAD_ABS_TOL,
        rel_tol: QUAD_REL_TOL,
        scale: whole.abs().max(1.0),
        worst_miss: 0.0,
    };
    let estimate = simpson_panel(&mut state, lo, hi, fl, fm, fh, whole, QUAD_ABS_TOL, 0)?;
    if state.worst_miss > 0.0 {
        return Err(Error::Convergence {
            estimate,
            achieved: state.worst_miss,
        });
    }
    Ok(estimate)
}

#[allow(clippy::too_many_arguments)]
fn simpson_panel<F>(
    state: &mut SimpsonState<'_, F>,
    lo: f64,
    hi: f64,
    fl: f64,
    fm: f64,
    fh: f64,
    whole: f64,
    budget: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mid = 0.5 * (lo + hi);
    let lm = 0.5 * (lo + mid);
    let rm = 0.5 * (mid + hi);
    let flm = (state.f)(lm)?;
    let frm = (state.f)(rm)?;
    let left = (mid - lo) / 6.0 * (fl + 4.0 * flm + fm);
    let right = (hi - mid) / 6.0 * (fm + 4.0 * frm + fh);
    let refined = left + right;
    let err = (refined - whole) / 15.0;
    let tol = budget.max(state.rel_tol * state.scale * ((hi - lo) / state.scale).abs().min(1.0));
    if err.abs() <= tol {
        return Ok(refined + err);
    }
    // a panel at machine width that still misses its budget is the same
    // failure as hitting the depth cap
    if depth >= QUAD_MAX_DEPTH || hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        state.worst_miss = state.worst_miss.max(err.abs());
        return Ok(refined + err);
    }
    let half = 0.5 * budget.max(state.abs_tol * 0.5f64.powi(depth as i32 + 1));
    let a = simpson_panel(state, lo, mid, fl, flm, fm, left, half, depth + 1)?;
    let b = simpson_panel(state, mid, hi, fm, frm, fh, right, half, depth + 1)?;
    Ok(a + b)
}

/// Central finite difference with step `max(1e-6, 1e-8 * |x|)`, the scheme
/// used for sampled derivative checks on expression-valued `h`.
pub fn central_diff<F>(f: F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let step = (1e-8 * x.abs()).max(1e-6);
    Ok((f(x + step)? - f(x - step)?) / (2.0 * step))
}

/// Wilson score interval for a binomial proportion at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

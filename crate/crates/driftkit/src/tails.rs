//! Tail (concentration) bounds on hitting times: the general mgf-based
//! upper/lower statements, the derivative-condition corollary, the
//! simplified exponential-moment theorem and the geometric-mixture mgf.
//!
//! All exponentials are accumulated in log space (sums of logs, one final
//! `exp`) so large horizons cannot overflow. Bounds of 1 or more are
//! reported with a vacuous flag, never silently clamped.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;
use crate::potential::{integrate_reciprocal, HSpec, PotentialFunction};

/// Which tail a result bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    /// `P(T_a >= t*)`
    UpperTail,
    /// `P(T_a < t*)`
    LowerTail,
}

/// Bound on the per-step mgf of the potential difference.
#[derive(Clone)]
pub enum Beta {
    Const(f64),
    /// State-dependent bound; products over a run need a trajectory or the
    /// supremum over reachable states.
    PerState {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        sup: Option<f64>,
    },
}

impl std::fmt::Debug for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Beta::Const(b) => write!(f, "Beta::Const({b})"),
            Beta::PerState { sup, .. } => write!(f, "Beta::PerState {{ sup: {sup:?} }}"),
        }
    }
}

/// Parameters of the general tail statements.
#[derive(Debug, Clone)]
pub struct TailParams {
    pub lambda: f64,
    pub beta: Beta,
    /// Target threshold `a >= 0`.
    pub a: f64,
    /// Horizon `t* >= 1`.
    pub t_star: u64,
    /// Whether the states at or below `a` are absorbing.
    pub absorbing: bool,
}

impl TailParams {
    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) {
            return Err(Error::parameter(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.a >= 0.0) {
            return Err(Error::parameter(format!(
                "threshold a must be >= 0, got {}",
                self.a
            )));
        }
        if self.t_star == 0 {
            return Err(Error::parameter("horizon t* must be at least 1"));
        }
        if let Beta::Const(b) = self.beta {
            if !(b > 0.0) {
                return Err(Error::parameter(format!("beta must be positive, got {b}")));
            }
        }
        Ok(())
    }
}

/// A tail bound plus the parameters that produced it.
#[derive(Debug, Clone)]
pub struct TailResult {
    /// Probability bound; may exceed 1 (then flagged vacuous).
    pub bound: f64,
    pub side: TailSide,
    pub params: Vec<(&'static str, f64)>,
    /// True when the bound depends on the states along the run (per-state
    /// beta evaluated on a trajectory or replaced by its supremum).
    pub trajectory_dependent: bool,
    pub vacuous: bool,
}

impl TailResult {
    fn new(
        side: TailSide,
        bound: f64,
        params: Vec<(&'static str, f64)>,
        trajectory_dependent: bool,
    ) -> Result<Self> {
        if !(bound >= 0.0) {
            return Err(Error::parameter(format!("invalid tail bound {bound}")));
        }
        Ok(Self {
            bound,
            side,
            params,
            trajectory_dependent,
            vacuous: bound >= 1.0,
        })
    }
}

impl std::fmt::Display for TailResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "direction: {}",
            match self.side {
                TailSide::UpperTail => "upper-tail P(T >= t*)",
                TailSide::LowerTail => "lower-tail P(T < t*)",
            }
        )?;
        writeln!(f, "bound: {}", self.bound)?;
        for (name, value) in &self.params {
            writeln!(f, "param {name}: {value}")?;
        }
        writeln!(f, "trajectory-dependent: {}", self.trajectory_dependent)?;
        write!(f, "vacuous: {}", self.vacuous)
    }
}

/// Threshold potential for the upper tail: the smallest potential value a
/// surviving state can have. Under the state-space gap no state lies in
/// `(a, x_min)`, so for `a` below `x_min` the value is `g(x_min)`; this is
/// what makes the multiplicative specialization come out as
/// `(1-delta)^{t*-1} X0/x_min`.
fn g_above_threshold(g: &PotentialFunction, a: f64) -> Result<f64> {
    g.eval(a.max(g.h().x_min()))
}

/// Threshold potential for the lower tail: the largest potential value a
/// hit state can have (`g(a)`, and 0 when only the 0 state sits at or
/// below `a`).
fn g_below_threshold(g: &PotentialFunction, a: f64) -> Result<f64> {
    if a < g.h().x_min() {
        Ok(0.0)
    } else {
        g.eval(a)
    }
}

/// Log of the running beta products `ln prod_{r<k} beta(X_r)` for
/// `k = 1..=t_star-1` factors (`partials[k-1]` holds `k` factors; empty for
/// `t_star = 1`).
///
/// A run surviving to time `t*` pins the states `X_0..X_{t*-2}` above the
/// threshold and may hit exactly at `t* - 1` or `t*`, so at most `t* - 1`
/// per-step factors are available to any tail statement; a trajectory
/// therefore needs `t* - 1` states.
fn beta_log_products(params: &TailParams, trajectory: Option<&[f64]>) -> Result<Vec<f64>> {
    let factors = params.t_star as usize - 1;
    match (&params.beta, trajectory) {
        (Beta::Const(b), _) => {
            let lnb = b.ln();
            Ok((1..=factors).map(|k| k as f64 * lnb).collect())
        }
        (Beta::PerState { f, .. }, Some(states)) => {
            if states.len() < factors {
                return Err(Error::parameter(format!(
                    "trajectory has {} states, horizon {} needs {factors}",
                    states.len(),
                    params.t_star
                )));
            }
            let mut acc = CompensatedSum::new();
            let mut partials = Vec::with_capacity(factors);
            for r in 0..factors {
                let b = f(states[r]);
                if !(b > 0.0) {
                    return Err(Error::parameter(format!(
                        "beta({}) = {b} is not positive",
                        states[r]
                    )));
                }
                acc.add(b.ln());
                partials.push(acc.value());
            }
            Ok(partials)
        }
        (Beta::PerState { sup: Some(sup), .. }, None) => {
            if !(*sup > 0.0) {
                return Err(Error::parameter(format!(
                    "sup beta = {sup} is not positive"
                )));
            }
            let lnb = sup.ln();
            Ok((1..=factors).map(|k| k as f64 * lnb).collect())
        }
        (Beta::PerState { sup: None, .. }, None) => Err(Error::parameter(
            "state-dependent beta needs a trajectory or a supremum over reachable states",
        )),
    }
}

fn log_sum_exp(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NEG_INFINITY;
    }
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let mut acc = CompensatedSum::new();
    for &v in values {
        acc.add((v - max).exp());
    }
    max + acc.value().ln()
}

/// Upper tail of the general drift statement:
/// `P(T_a >= t*) <= (prod_{r<t*-1} beta_u(X_r)) e^{lambda (g(X0) - g(a))}`.
///
/// Surviving to `t*` pins `X_{t*-1}` above the threshold, so `t* - 1`
/// per-step mgf factors apply; a `t*`-factor product can undercut the exact
/// tail when every factor is below 1 (the process may hit exactly at `t*`).
pub fn general_tail_upper(
    g: &PotentialFunction,
    params: &TailParams,
    x0: f64,
    trajectory: Option<&[f64]>,
) -> Result<TailResult> {
    params.validate()?;
    if !(x0 > params.a) {
        return Err(Error::parameter(format!(
            "X0 = {x0} must exceed a = {}",
            params.a
        )));
    }
    let partials = beta_log_products(params, trajectory)?;
    let ln_product = partials.last().copied().unwrap_or(0.0);
    let gap = params.lambda * (g.eval(x0)? - g_above_threshold(g, params.a)?);
    let bound = (ln_product + gap).exp();
    TailResult::new(
        TailSide::UpperTail,
        bound,
        vec![
            ("lambda", params.lambda),
            ("a", params.a),
            ("t_star", params.t_star as f64),
            ("x0", x0),
        ],
        matches!(params.beta, Beta::PerState { .. }),
    )
}

/// Lower tail of the general drift statement. The non-absorbing form is
/// `(sum_{s=1}^{t*-1} prod_{r<s} beta_l(X_r)) e^{-lambda (g(X0) - g(a))}`;
/// with absorbing targets the union bound collapses to the product for
/// `X_{t*-1}` alone (`t* - 1` factors). When both forms apply the smaller
/// one is reported, with each echoed in the parameter list.
pub fn general_tail_lower(
    g: &PotentialFunction,
    params: &TailParams,
    x0: f64,
    trajectory: Option<&[f64]>,
) -> Result<TailResult> {
    params.validate()?;
    if !(x0 > params.a) {
        return Err(Error::parameter(format!(
            "X0 = {x0} must exceed a = {}",
            params.a
        )));
    }
    let partials = beta_log_products(params, trajectory)?;
    let gap = -params.lambda * (g.eval(x0)? - g_below_threshold(g, params.a)?);
    // P(X_s <= a) carries s factors; partials[s-1] holds exactly s
    let sum_form = if params.t_star == 1 {
        0.0
    } else {
        (log_sum_exp(&partials) + gap).exp()
    };
    let mut result_params = vec![
        ("lambda", params.lambda),
        ("a", params.a),
        ("t_star", params.t_star as f64),
        ("x0", x0),
        ("sum_form", sum_form),
    ];
    let bound = if params.absorbing {
        let product_form = (partials.last().copied().unwrap_or(0.0) + gap).exp();
        result_params.push(("product_form", product_form));
        sum_form.min(product_form)
    } else {
        sum_form
    };
    TailResult::new(
        TailSide::LowerTail,
        bound,
        result_params,
        matches!(params.beta, Beta::PerState { .. }),
    )
}

/// Which item of the derivative-condition corollary to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryItem {
    /// `h' >= lambda`: upper tail `P(T >= t)`.
    Iii,
    /// `h' <= -lambda`: lower tail `P(T < t)`.
    IvA,
}

/// Tail bounds under a derivative condition on `h`.
///
/// The condition (`h' >= lambda` for the upper item, `h' <= -lambda` for the
/// lower one) is checked on the sampling grid; a violated point is named in
/// the rejection.
pub fn corollary_bounds(
    h: &HSpec,
    lambda: f64,
    x0: f64,
    t: u64,
    which: CorollaryItem,
) -> Result<TailResult> {
    if !(lambda > 0.0) {
        return Err(Error::parameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if t == 0 {
        return Err(Error::parameter("horizon t must be at least 1"));
    }
    if x0 < h.x_min() {
        return Err(Error::parameter(format!(
            "X0 = {x0} below x_min = {}",
            h.x_min()
        )));
    }
    for x in h.sample_points() {
        let d = h.derivative(x)?;
        match which {
            CorollaryItem::Iii => {
                if d < lambda - 1e-9 {
                    return Err(Error::precondition(format!(
                        "h'({x}) = {d} < lambda = {lambda}"
                    )));
                }
            }
            CorollaryItem::IvA => {
                if d > -lambda + 1e-9 {
                    return Err(Error::precondition(format!(
                        "h'({x}) = {d} > -lambda = {}",
                        -lambda
                    )));
                }
            }
        }
    }
    let head = h.x_min() / h.eval(h.x_min())?;
    let integral = integrate_reciprocal(h, h.x_min(), x0)?;
    let params = vec![("lambda", lambda), ("x0", x0), ("t", t as f64)];
    match which {
        CorollaryItem::Iii => {
            let bound = (-lambda * (t as f64 - head - integral)).exp();
            TailResult::new(TailSide::UpperTail, bound, params, false)
        }
        CorollaryItem::IvA => {
            // ln((e^{lambda t} - e^lambda)/(e^lambda - 1)) computed stably
            let z = lambda * (t as f64 - 1.0);
            let ln_grow = if z > 30.0 { z } else { (z.exp() - 1.0).ln() };
            let ln_front = lambda + ln_grow - (lambda.exp() - 1.0).ln();
            let bound = if t == 1 {
                0.0
            } else {
                (ln_front - lambda * (head + integral)).exp()
            };
            TailResult::new(TailSide::LowerTail, bound, params, false)
        }
    }
}

/// Parameters of the simplified exponential-moment tail theorem: a
/// dominating variable `Z` with mgf value `D = E(e^{lambda Z})` and a slack
/// `delta`, from which `eta = min(lambda, delta lambda^2 / (D - 1 - lambda))`.
#[derive(Debug, Clone, Copy)]
pub struct SimplifiedTailParams {
    pub lambda: f64,
    pub d_mgf: f64,
    pub delta: f64,
}

impl SimplifiedTailParams {
    pub fn new(lambda: f64, d_mgf: f64, delta: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(delta > 0.0) {
            return Err(Error::parameter(format!(
                "lambda and delta must be positive, got lambda={lambda}, delta={delta}"
            )));
        }
        if !(d_mgf > 1.0 + lambda) {
            return Err(Error::parameter(format!(
                "need D > 1 + lambda for the eta denominator, got D={d_mgf}, lambda={lambda}"
            )));
        }
        Ok(Self {
            lambda,
            d_mgf,
            delta,
        })
    }

    /// `eta = min(lambda, delta lambda^2 / (D - 1 - lambda))`.
    pub fn eta(&self) -> f64 {
        let candidate = self.delta * self.lambda * self.lambda / (self.d_mgf - 1.0 - self.lambda);
        candidate.min(self.lambda)
    }
}

/// Simplified exponential-moment tail bounds. `G0` is the integral of `1/h`
/// from `x_min` to `X0` (no `x_min/h(x_min)` head term here).
///
/// Upper: `e^{eta (G0 - (1-delta) t*)}`; lower non-absorbing:
/// `e^{eta ((1+delta) t* - G0)} / (eta (1+delta))`; lower absorbing drops
/// the denominator.
pub fn simplified_tail(
    h: &HSpec,
    sp: &SimplifiedTailParams,
    x0: f64,
    t_star: u64,
    side: TailSide,
    absorbing: bool,
) -> Result<TailResult> {
    if t_star == 0 {
        return Err(Error::parameter("horizon t* must be at least 1"));
    }
    if x0 < h.x_min() {
        return Err(Error::parameter(format!(
            "X0 = {x0} below x_min = {}",
            h.x_min()
        )));
    }
    let eta = sp.eta();
    let g0 = integrate_reciprocal(h, h.x_min(), x0)?;
    let params = vec![
        ("lambda", sp.lambda),
        ("D", sp.d_mgf),
        ("delta", sp.delta),
        ("eta", eta),
        ("g0", g0),
        ("t_star", t_star as f64),
    ];
    let bound = match (side, absorbing) {
        (TailSide::UpperTail, _) => (eta * (g0 - (1.0 - sp.delta) * t_star as f64)).exp(),
        (TailSide::LowerTail, true) => (eta * ((1.0 + sp.delta) * t_star as f64 - g0)).exp(),
        (TailSide::LowerTail, false) => {
            (eta * ((1.0 + sp.delta) * t_star as f64 - g0)).exp() / (eta * (1.0 + sp.delta))
        }
    };
    TailResult::new(side, bound, params, false)
}

/// Mgf of `scale * Y` where `Y` is 0 with probability `1 - flip_prob` and
/// geometric with parameter 1/2 on `{1, 2, ...}` otherwise:
/// `(1-q) + q (e^{lambda s}/2) / (1 - e^{lambda s}/2)`.
///
/// Finite only for `lambda * scale < ln 2`.
pub fn mgf_of_geometric_mix(flip_prob: f64, scale: f64, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&flip_prob) {
        return Err(Error::parameter(format!(
            "flip probability {flip_prob} outside [0, 1]"
        )));
    }
    if lambda < 0.0 || scale < 0.0 {
        return Err(Error::parameter("lambda and scale must be non-negative"));
    }
    if lambda * scale >= std::f64::consts::LN_2 {
        return Err(Error::domain(format!(
            "mgf diverges: lambda * scale = {} >= ln 2",
            lambda * scale
        )));
    }
    let half_exp = (lambda * scale).exp() / 2.0;
    Ok((1.0 - flip_prob) + flip_prob * half_exp / (1.0 - half_exp))
}

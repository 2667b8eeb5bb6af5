//! Drift-bound functions `h` and the potential function `g` built from them,
//! plus the exponential integral `E1` needed by closed-form expected-time
//! bounds.
//!
//! For a drift bound `h` on `[x_min, x_max]` the potential is
//! `g(x) = x_min/h(x_min) + integral of 1/h from x_min to x`, with
//! `g(0) = 0`. Integer-table specs extend to reals by `h(x) := h(ceil(x))`
//! and use prefix sums for `g`; anything in the open gap `(0, x_min)` is a
//! domain error, never an extrapolation.

use crate::error::{Error, Result};
use crate::expr::ExprAst;
use crate::numerics::{adaptive_simpson, central_diff, CompensatedSum};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Number of grid points used by sampled positivity/monotonicity/derivative
/// checks, in addition to all table entries.
const SAMPLE_GRID: usize = 1000;

#[derive(Debug, Clone)]
pub enum HKind {
    /// `h(x) = delta` (additive drift).
    Constant { delta: f64 },
    /// `h(x) = delta * x` (multiplicative drift).
    Multiplicative { delta: f64 },
    /// `h(x)` given by an expression in `x` and the instance size `n`.
    Expression { ast: ExprAst, n: f64 },
    /// `h` on the integers `first..first+values.len()`, extended to reals by
    /// `h(x) = h(ceil(x))`.
    Table { first: i64, values: Vec<f64> },
}

/// A drift-bound function `h` on the domain `[x_min, x_max]`.
#[derive(Debug, Clone)]
pub struct HSpec {
    kind: HKind,
    x_min: f64,
    x_max: f64,
}

impl HSpec {
    pub fn constant(delta: f64, x_min: f64, x_max: f64) -> Result<Self> {
        if delta <= 0.0 {
            return Err(Error::parameter(format!(
                "constant h requires delta > 0, got {delta}"
            )));
        }
        // x_min = 0 is allowed here: the additive case needs no gap.
        Self::validated(HKind::Constant { delta }, x_min, x_max, true)
    }

    pub fn multiplicative(delta: f64, x_min: f64, x_max: f64) -> Result<Self> {
        if delta <= 0.0 {
            return Err(Error::parameter(format!(
                "multiplicative h requires delta > 0, got {delta}"
            )));
        }
        Self::validated(HKind::Multiplicative { delta }, x_min, x_max, false)
    }

    pub fn expression(ast: ExprAst, n: f64, x_min: f64, x_max: f64) -> Result<Self> {
        Self::validated(HKind::Expression { ast, n }, x_min, x_max, false)
    }

    /// Table spec on the integers `ceil(x_min)..ceil(x_min)+values.len()`;
    /// the upper domain end is the last table index.
    pub fn table(x_min: f64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::parameter("empty h table"));
        }
        let first = x_min.ceil() as i64;
        let x_max = (first + values.len() as i64 - 1) as f64;
        Self::validated(HKind::Table { first, values }, x_min, x_max, false)
    }

    fn validated(kind: HKind, x_min: f64, x_max: f64, zero_xmin_ok: bool) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::parameter("non-finite domain bounds"));
        }
        if x_min < 0.0 || (x_min == 0.0 && !zero_xmin_ok) {
            return Err(Error::parameter(format!(
                "x_min must be positive for this h kind, got {x_min}"
            )));
        }
        if x_max < x_min {
            return Err(Error::parameter(format!("x_max {x_max} < x_min {x_min}")));
        }
        let h = Self { kind, x_min, x_max };
        for x in h.sample_points() {
            let v = h.eval(x)?;
            if !(v > 0.0) {
                return Err(Error::domain(format!("h({x}) = {v} is not positive")));
            }
        }
        Ok(h)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn kind(&self) -> &HKind {
        &self.kind
    }

    /// Evaluate `h(x)`. Table kind uses the ceiling extension and rejects
    /// arguments outside the tabulated range; other kinds evaluate wherever
    /// their formula is defined.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match &self.kind {
            HKind::Constant { delta } => Ok(*delta),
            HKind::Multiplicative { delta } => Ok(delta * x),
            HKind::Expression { ast, n } => ast.eval(x, *n),
            HKind::Table { first, values } => {
                let idx = x.ceil() as i64 - first;
                if idx < 0 || idx as usize >= values.len() {
                    return Err(Error::domain(format!("table h has no entry for ceil({x})")));
                }
                Ok(values[idx as usize])
            }
        }
    }

    /// `h'(x)`: exact for constant and multiplicative kinds, central finite
    /// differences for expressions. Tables are not differentiable.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        match &self.kind {
            HKind::Constant { .. } => Ok(0.0),
            HKind::Multiplicative { delta } => Ok(*delta),
            HKind::Expression { ast, n } => central_diff(|y| ast.eval(y, *n), x),
            HKind::Table { .. } => Err(Error::domain(
                "integer-table h has no derivative (step function)",
            )),
        }
    }

    /// The sampling grid used by positivity/monotonicity checks: an evenly
    /// spaced grid over the domain plus every table entry.
    pub fn sample_points(&self) -> Vec<f64> {
        let mut pts = Vec::with_capacity(SAMPLE_GRID + 1);
        if self.x_max == self.x_min {
            pts.push(self.x_min);
        } else {
            let lo = if self.x_min == 0.0 {
                // positivity of h is only meaningful on (0, x_max] when the
                // additive convention sets x_min = 0
                self.x_max / SAMPLE_GRID as f64
            } else {
                self.x_min
            };
            for i in 0..=SAMPLE_GRID {
                pts.push(lo + (self.x_max - lo) * i as f64 / SAMPLE_GRID as f64);
            }
        }
        if let HKind::Table { first, values } = &self.kind {
            pts.extend((0..values.len()).map(|i| (*first + i as i64) as f64));
        }
        pts
    }

    /// Sampled monotone-increase check: returns a witness pair
    /// `(x1, x2)` with `x1 < x2` and `h(x1) > h(x2)` if one exists on the
    /// grid, `None` otherwise. Heuristic for expressions, exact for tables.
    pub fn monotonicity_witness(&self) -> Result<Option<(f64, f64)>> {
        let mut pts = self.sample_points();
        pts.sort_by(|a, b| a.total_cmp(b));
        let mut prev: Option<(f64, f64)> = None;
        for x in pts {
            let v = self.eval(x)?;
            if let Some((px, pv)) = prev {
                if pv > v {
                    return Ok(Some((px, x)));
                }
            }
            prev = Some((x, v));
        }
        Ok(None)
    }
}

/// Evaluation strategy a [`PotentialFunction`] was built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    ClosedForm,
    PrefixSum,
    Quadrature,
}

/// The potential function `g` of a drift spec.
#[derive(Debug, Clone)]
pub struct PotentialFunction {
    h: HSpec,
    mode: EvalMode,
    /// Cached constant `x_min / h(x_min)`.
    g_at_xmin: f64,
    /// Prefix sums for table mode: `prefix[i] = g(first + i)`.
    prefix: Vec<f64>,
}

/// Build the potential function of `h` (closed form for constant and
/// multiplicative kinds, prefix sums for tables, adaptive quadrature
/// otherwise).
pub fn build_potential(h: HSpec) -> Result<PotentialFunction> {
    PotentialFunction::build(h)
}

impl PotentialFunction {
    pub fn build(h: HSpec) -> Result<Self> {
        let g_at_xmin = if h.x_min == 0.0 {
            0.0
        } else {
            h.x_min / h.eval(h.x_min)?
        };
        let (mode, prefix) = match &h.kind {
            HKind::Constant { .. } | HKind::Multiplicative { .. } => {
                (EvalMode::ClosedForm, Vec::new())
            }
            HKind::Expression { .. } => (EvalMode::Quadrature, Vec::new()),
            HKind::Table { values, .. } => {
                let mut acc = CompensatedSum::new();
                let mut prefix = Vec::with_capacity(values.len());
                for v in values {
                    acc.add(1.0 / v);
                    prefix.push(acc.value());
                }
                (EvalMode::PrefixSum, prefix)
            }
        };
        Ok(Self {
            h,
            mode,
            g_at_xmin,
            prefix,
        })
    }

    pub fn h(&self) -> &HSpec {
        &self.h
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    /// The cached constant `g(x_min) = x_min / h(x_min)`.
    pub fn g_at_xmin(&self) -> f64 {
        self.g_at_xmin
    }

    /// Evaluate `g(x)`. Defined at 0 and on `[x_min, x_max]`; the gap
    /// `(0, x_min)` and anything beyond `x_max` are domain errors.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        if x < 0.0 || x < self.h.x_min {
            return Err(Error::domain(format!(
                "g is undefined on (0, x_min={}): got {x}",
                self.h.x_min
            )));
        }
        if x > self.h.x_max * (1.0 + 1e-12) {
            return Err(Error::domain(format!(
                "g is undefined beyond x_max={}: got {x}",
                self.h.x_max
            )));
        }
        match (&self.h.kind, self.mode) {
            (HKind::Constant { delta }, _) => Ok(x / delta),
            (HKind::Multiplicative { delta }, _) => {
                Ok(1.0 / delta + (x / self.h.x_min).ln() / delta)
            }
            (HKind::Table { first, .. }, _) => {
                let idx = x.ceil() as i64 - first;
                let idx = idx.clamp(0, self.prefix.len() as i64 - 1) as usize;
                Ok(self.prefix[idx])
            }
            (HKind::Expression { .. }, _) => {
                Ok(self.g_at_xmin + integrate_reciprocal(&self.h, self.h.x_min, x)?)
            }
        }
    }
}

/// Quadrature backend for `g`: the integral of `1/h` over `[lo, hi]`.
///
/// Adaptive Simpson for continuous kinds; exact piecewise evaluation of the
/// ceiling extension for integer tables (each unit cell `(k-1, k]`
/// contributes `len/h(k)`). `lo == hi` returns 0.
pub fn integrate_reciprocal(h: &HSpec, lo: f64, hi: f64) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    if lo < h.x_min || hi > h.x_max * (1.0 + 1e-12) || lo > hi {
        return Err(Error::parameter(format!(
            "integration range [{lo}, {hi}] outside [{}, {}]",
            h.x_min, h.x_max
        )));
    }
    match &h.kind {
        HKind::Table { .. } => {
            let mut acc = CompensatedSum::new();
            let mut start = lo;
            let mut k = lo.floor() + 1.0;
            while start < hi {
                let end = hi.min(k);
                acc.add((end - start) / h.eval(end.min(k))?);
                start = end;
                k += 1.0;
            }
            Ok(acc.value())
        }
        _ => adaptive_simpson(
            |x| {
                let v = h.eval(x)?;
                if v == 0.0 {
                    return Err(Error::domain(format!("h({x}) = 0 inside quadrature")));
                }
                Ok(1.0 / v)
            },
            lo,
            hi,
        ),
    }
}

/// Exponential integral `E1(x)` for `x > 0`.
///
/// Series `-gamma - ln x - sum_k (-x)^k / (k k!)` for `x <= 1` (truncated
/// when a term drops below 1e-16), continued-fraction evaluation (modified
/// Lentz) for `x > 1`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("E1 requires x > 0, got {x}")));
    }
    if x <= 1.0 {
        let mut sum = CompensatedSum::new();
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let contribution = term / k as f64;
            sum.add(contribution);
            if contribution.abs() < 1e-16 {
                break;
            }
        }
        Ok(-EULER_GAMMA - x.ln() - sum.value())
    } else {
        // E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
        let tiny = 1e-300;
        let mut f = x + 1.0;
        let mut c = f;
        let mut d = 0.0;
        for k in 1..200 {
            let a = -((k * k) as f64);
            let b = x + (2 * k + 1) as f64;
            d = b + a * d;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + a / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok((-x).exp() / f)
    }
}

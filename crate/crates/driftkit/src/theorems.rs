//! Expectation bounds (upper and lower) on first hitting times.
//!
//! Every operation returns a [`BoundResult`] carrying the numeric bound,
//! the parameters used, and whether the preconditions were verified exactly
//! against a finite chain or merely asserted by the caller. When a chain is
//! supplied, conditions are checked per state and failures name a witness.

use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;
use crate::oracle::MarkovChain;
use crate::potential::{build_potential, HSpec, PotentialFunction};

/// Whether a bound caps the expectation from above or below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

/// Identifies the statement a bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    AdditiveUpper,
    AdditiveLower,
    GeneralUpper,
    GeneralLower,
    VariableUpper,
    VariableLower,
    NonMonotoneUpper,
    MultiplicativeUpper,
    MultiplicativeLower,
    FitnessLevelsUpper,
    FitnessLevelsLower,
}

impl Theorem {
    pub fn direction(self) -> Direction {
        match self {
            Theorem::AdditiveUpper
            | Theorem::GeneralUpper
            | Theorem::VariableUpper
            | Theorem::NonMonotoneUpper
            | Theorem::MultiplicativeUpper
            | Theorem::FitnessLevelsUpper => Direction::Upper,
            Theorem::AdditiveLower
            | Theorem::GeneralLower
            | Theorem::VariableLower
            | Theorem::MultiplicativeLower
            | Theorem::FitnessLevelsLower => Direction::Lower,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::AdditiveUpper => "additive-upper",
            Theorem::AdditiveLower => "additive-lower",
            Theorem::GeneralUpper => "general-upper",
            Theorem::GeneralLower => "general-lower",
            Theorem::VariableUpper => "variable-upper",
            Theorem::VariableLower => "variable-lower",
            Theorem::NonMonotoneUpper => "nonmonotone-upper",
            Theorem::MultiplicativeUpper => "multiplicative-upper",
            Theorem::MultiplicativeLower => "multiplicative-lower",
            Theorem::FitnessLevelsUpper => "fitness-levels-upper",
            Theorem::FitnessLevelsLower => "fitness-levels-lower",
        }
    }
}

/// Whether the theorem's conditions were checked exactly on a chain or are
/// the caller's responsibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreconditionStatus {
    VerifiedByOracle,
    AssertedByUser,
}

/// A theorem's numeric output plus the parameter set that produced it.
#[derive(Debug, Clone)]
pub struct BoundResult {
    pub bound: f64,
    pub direction: Direction,
    pub theorem: Theorem,
    pub params: Vec<(&'static str, f64)>,
    pub precondition: PreconditionStatus,
}

impl BoundResult {
    fn new(
        theorem: Theorem,
        bound: f64,
        params: Vec<(&'static str, f64)>,
        precondition: PreconditionStatus,
    ) -> Result<Self> {
        if !(bound >= 0.0) {
            return Err(Error::parameter(format!(
                "{} produced an invalid bound {bound}",
                theorem.name()
            )));
        }
        Ok(Self {
            bound,
            direction: theorem.direction(),
            theorem,
            params,
            precondition,
        })
    }
}

impl std::fmt::Display for BoundResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "theorem: {}", self.theorem.name())?;
        writeln!(
            f,
            "direction: {}",
            match self.direction {
                Direction::Upper => "upper",
                Direction::Lower => "lower",
            }
        )?;
        writeln!(f, "bound: {}", self.bound)?;
        for (name, value) in &self.params {
            writeln!(f, "param {name}: {value}")?;
        }
        write!(
            f,
            "precondition: {}",
            match self.precondition {
                PreconditionStatus::VerifiedByOracle => "verified-by-oracle",
                PreconditionStatus::AssertedByUser => "asserted-by-user",
            }
        )
    }
}

/// tolerance for exact per-state comparisons; absorbs pure float roundoff
/// without admitting real violations
const CHECK_EPS: f64 = 1e-9;

/// `E(T) <= X0 / delta_u` under drift at least `delta_u` everywhere.
pub fn additive_upper(delta_u: f64, x0: f64) -> Result<BoundResult> {
    if !(delta_u > 0.0) {
        return Err(Error::parameter(format!(
            "delta_u must be positive, got {delta_u}"
        )));
    }
    if !(x0 >= 0.0) {
        return Err(Error::parameter(format!(
            "X0 must be non-negative, got {x0}"
        )));
    }
    BoundResult::new(
        Theorem::AdditiveUpper,
        x0 / delta_u,
        vec![("delta_u", delta_u), ("x0", x0)],
        PreconditionStatus::AssertedByUser,
    )
}

/// `E(T) >= X0 / delta_l` under drift at most `delta_l` everywhere.
pub fn additive_lower(delta_l: f64, x0: f64) -> Result<BoundResult> {
    if !(delta_l > 0.0) {
        return Err(Error::parameter(format!(
            "delta_l must be positive, got {delta_l}"
        )));
    }
    if !(x0 >= 0.0) {
        return Err(Error::parameter(format!(
            "X0 must be non-negative, got {x0}"
        )));
    }
    BoundResult::new(
        Theorem::AdditiveLower,
        x0 / delta_l,
        vec![("delta_l", delta_l), ("x0", x0)],
        PreconditionStatus::AssertedByUser,
    )
}

/// `E(T) <= g(X0)/alpha` (or `>=` for the lower direction) given a bound
/// `alpha` on the drift of the potential.
pub fn general_expected_bound(
    g: &PotentialFunction,
    alpha: f64,
    x0: f64,
    direction: Direction,
) -> Result<BoundResult> {
    if !(alpha > 0.0) {
        return Err(Error::parameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let theorem = match direction {
        Direction::Upper => Theorem::GeneralUpper,
        Direction::Lower => Theorem::GeneralLower,
    };
    BoundResult::new(
        theorem,
        g.eval(x0)? / alpha,
        vec![("alpha", alpha), ("x0", x0)],
        PreconditionStatus::AssertedByUser,
    )
}

/// How the monotonicity requirement on `h` is discharged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneEvidence {
    /// Sampled grid check (heuristic for expressions, exact for tables).
    SampledCheck,
    /// The caller supplies a monotonicity proof out of band.
    Asserted,
}

/// Variable drift upper bound:
/// `E(T) <= x_min/h(x_min) + integral of 1/h from x_min to X0` for monotone
/// increasing `h` with drift at least `h(X_t)`.
pub fn variable_upper(h: &HSpec, x0: f64, evidence: MonotoneEvidence) -> Result<BoundResult> {
    if evidence == MonotoneEvidence::SampledCheck {
        if let Some((x1, x2)) = h.monotonicity_witness()? {
            return Err(Error::precondition(format!(
                "h is not monotone increasing: h({x1}) > h({x2})"
            )));
        }
    }
    if x0 < h.x_min() {
        return Err(Error::parameter(format!(
            "X0 = {x0} below x_min = {}",
            h.x_min()
        )));
    }
    let g = build_potential(h.clone())?;
    BoundResult::new(
        Theorem::VariableUpper,
        g.eval(x0)?,
        vec![("x_min", h.x_min()), ("x0", x0)],
        PreconditionStatus::AssertedByUser,
    )
}

/// A fitness-based partition with the per-level quantities both fitness
/// level theorems need: lower bounds `p_i` on level-leaving probabilities
/// for the upper bound, and upper bounds `u_i` with viscosity weights
/// `gamma` plus `chi` and a start distribution for the lower bound.
#[derive(Debug, Clone, Default)]
pub struct FitnessPartition {
    /// Level count (levels 1..=m, level m optimal).
    pub m: usize,
    /// `p[i]` bounds level `i+1` from below; length `m-1` when present.
    pub p: Vec<f64>,
    /// `u[i]` bounds level `i+1` from above; length `m-1` when present.
    pub u: Vec<f64>,
    /// `gamma[i][k]` is the weight of traversing from level `i+1` to level
    /// `i+2+k`; each row sums to 1.
    pub gamma: Vec<Vec<f64>>,
    pub chi: f64,
    /// Start mass on levels `1..m` (index 0 = level 1); sums to at most 1.
    pub start: Vec<f64>,
}

impl FitnessPartition {
    /// Partition for the classical upper bound, from level-leaving
    /// probabilities `p_1..p_{m-1}`.
    pub fn for_upper(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::parameter("need at least one level probability"));
        }
        if let Some(bad) = p.iter().position(|&v| !(v > 0.0 && v <= 1.0)) {
            return Err(Error::parameter(format!(
                "p_{} = {} outside (0, 1]",
                bad + 1,
                p[bad]
            )));
        }
        Ok(Self {
            m: p.len() + 1,
            p,
            ..Self::default()
        })
    }

    /// Partition for the lower bound: traversal bounds `u_i`, row-stochastic
    /// weights `gamma_{i,j}` (row `i` covers targets `j = i+1..=m`), the
    /// viscosity `chi`, and the start distribution over levels `1..m`.
    pub fn for_lower(u: Vec<f64>, gamma: Vec<Vec<f64>>, chi: f64, start: Vec<f64>) -> Result<Self> {
        let m = u.len() + 1;
        if u.is_empty() {
            return Err(Error::parameter("need at least one traversal bound"));
        }
        if let Some(bad) = u.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::parameter(format!(
                "u_{} = {} must be positive",
                bad + 1,
                u[bad]
            )));
        }
        if gamma.len() != m - 1 {
            return Err(Error::parameter(format!(
                "gamma needs {} rows, got {}",
                m - 1,
                gamma.len()
            )));
        }
        for (i, row) in gamma.iter().enumerate() {
            if row.len() != m - i - 1 {
                return Err(Error::parameter(format!(
                    "gamma row {} needs {} entries, got {}",
                    i + 1,
                    m - i - 1,
                    row.len()
                )));
            }
            if row.iter().any(|&w| w < 0.0) {
                return Err(Error::parameter(format!(
                    "negative gamma weight in row {}",
                    i + 1
                )));
            }
            let sum = crate::numerics::compensated_sum(row.iter().copied());
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::parameter(format!(
                    "gamma row {} sums to {sum}, must be 1 within 1e-12",
                    i + 1
                )));
            }
        }
        if !(0.0..=1.0).contains(&chi) {
            return Err(Error::parameter(format!("chi = {chi} outside [0, 1]")));
        }
        if start.len() != m - 1 {
            return Err(Error::parameter(format!(
                "start distribution needs {} entries, got {}",
                m - 1,
                start.len()
            )));
        }
        let start_sum = crate::numerics::compensated_sum(start.iter().copied());
        if start.iter().any(|&s| s < 0.0) || start_sum > 1.0 + 1e-12 {
            return Err(Error::parameter(format!(
                "start distribution sums to {start_sum}, must be at most 1"
            )));
        }
        let partition = Self {
            m,
            u,
            gamma,
            chi,
            start,
            ..Self::default()
        };
        if let Some((i, j)) = partition.chi_condition_witness() {
            return Err(Error::precondition(format!(
                "gamma_{{{i},{j}}} < chi * sum_{{k>={j}}} gamma_{{{i},k}}"
            )));
        }
        Ok(partition)
    }

    /// First `(i, j)` violating `gamma_{i,j} >= chi * sum_{k=j}^m
    /// gamma_{i,k}`, if any (1-based level indices).
    fn chi_condition_witness(&self) -> Option<(usize, usize)> {
        for (row_idx, row) in self.gamma.iter().enumerate() {
            let i = row_idx + 1;
            let mut suffix = CompensatedSum::new();
            // walk j from m down to i+1 maintaining sum_{k=j}^m gamma_{i,k}
            for (col_rev, &w) in row.iter().enumerate().rev() {
                suffix.add(w);
                let j = i + 1 + col_rev;
                if w + 1e-15 < self.chi * suffix.value() {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Classical fitness levels: `E(T) <= sum_{i=start_level}^{m-1} 1/p_i`.
pub fn fitness_levels_upper(
    partition: &FitnessPartition,
    start_level: usize,
) -> Result<BoundResult> {
    if partition.p.len() != partition.m - 1 {
        return Err(Error::parameter("partition carries no level probabilities"));
    }
    if start_level < 1 || start_level > partition.m - 1 {
        return Err(Error::parameter(format!(
            "start level {start_level} outside 1..={}",
            partition.m - 1
        )));
    }
    // summed from the top level down: the same term order as the prefix
    // sums of the equivalent integer-table potential h(x) = p_{m - ceil(x)}
    let mut acc = CompensatedSum::new();
    for i in (start_level..partition.m).rev() {
        acc.add(1.0 / partition.p[i - 1]);
    }
    BoundResult::new(
        Theorem::FitnessLevelsUpper,
        acc.value(),
        vec![
            ("m", partition.m as f64),
            ("start_level", start_level as f64),
        ],
        PreconditionStatus::AssertedByUser,
    )
}

/// Viscosity-weighted fitness-level lower bound:
/// `E(T) >= sum_i P(start in A_i) (1/u_i + chi sum_{j=i+1}^{m-1} 1/u_j)`.
/// The result echoes the weaker closed form
/// `sum_i P(start in A_i) chi sum_{j=i}^{m-1} 1/u_j` as `weak_form_bound`.
pub fn fitness_levels_lower(partition: &FitnessPartition) -> Result<BoundResult> {
    let m = partition.m;
    if partition.u.len() != m - 1 || partition.start.len() != m - 1 {
        return Err(Error::parameter("partition carries no lower-bound data"));
    }
    if let Some((i, j)) = partition.chi_condition_witness() {
        return Err(Error::precondition(format!(
            "gamma_{{{i},{j}}} < chi * sum_{{k>={j}}} gamma_{{{i},k}}"
        )));
    }
    // suffix[i] = sum_{j=i+1}^{m-1} 1/u_j (0-based offset by one level)
    let mut strong = CompensatedSum::new();
    let mut weak = CompensatedSum::new();
    let mut suffix = vec![0.0; m];
    for i in (1..m).rev() {
        let mut acc = CompensatedSum::new();
        acc.add(suffix[i]);
        acc.add(1.0 / partition.u[i - 1]);
        suffix[i - 1] = acc.value();
    }
    for i in 1..m {
        let mass = partition.start[i - 1];
        if mass > 0.0 {
            strong.add(mass * (1.0 / partition.u[i - 1] + partition.chi * suffix[i]));
            weak.add(mass * partition.chi * suffix[i - 1]);
        }
    }
    BoundResult::new(
        Theorem::FitnessLevelsLower,
        strong.value(),
        vec![
            ("m", m as f64),
            ("chi", partition.chi),
            ("weak_form_bound", weak.value()),
        ],
        PreconditionStatus::AssertedByUser,
    )
}

fn h_values_on_labels(h: &HSpec, chain: &MarkovChain) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for i in 0..chain.n_states() {
        if !chain.is_target(i) && chain.label(i) >= h.x_min() {
            out.push((i, h.eval(chain.label(i))?));
        }
    }
    Ok(out)
}

/// Non-monotone variable drift upper bound:
/// `E(T) <= 2c (x_min/h(x_min) + integral of 1/h)`.
///
/// With a chain, the four conditions are verified exactly per state, taking
/// `d(x)` as the maximal support jump out of `x` (which discharges the jump
/// condition by construction); without one they are recorded as asserted.
pub fn nonmonotone_variable_upper(
    h: &HSpec,
    c: f64,
    x0: f64,
    chain: Option<&MarkovChain>,
) -> Result<BoundResult> {
    if !(c >= 1.0) {
        return Err(Error::parameter(format!("c must be at least 1, got {c}")));
    }
    if x0 < h.x_min() {
        return Err(Error::parameter(format!(
            "X0 = {x0} below x_min = {}",
            h.x_min()
        )));
    }
    let mut status = PreconditionStatus::AssertedByUser;
    if let Some(chain) = chain {
        let drift = chain.exact_drift();
        let jumps = chain.max_jump();
        let states = h_values_on_labels(h, chain)?;
        for &(i, h_i) in &states {
            let x = chain.label(i);
            if drift[i] + CHECK_EPS * (1.0 + h_i.abs()) < h_i {
                return Err(Error::precondition(format!(
                    "drift condition fails at state {x}: E = {} < h = {h_i}",
                    drift[i]
                )));
            }
            let mut up = CompensatedSum::new();
            let mut down = CompensatedSum::new();
            for &(j, pr) in chain.row(i) {
                let diff = chain.label(j) - x;
                if diff > 0.0 {
                    up.add(pr * diff);
                } else if diff < 0.0 {
                    down.add(pr * -diff);
                }
            }
            if down.value() == 0.0 {
                // no downward move: the ratio condition is degenerate and
                // treated as violated
                return Err(Error::precondition(format!(
                    "state {x} has no downward transition: up/down ratio undefined"
                )));
            }
            let ratio = up.value() / down.value();
            if ratio > 1.0 / (2.0 * c * c) + CHECK_EPS {
                return Err(Error::precondition(format!(
                    "up/down ratio {ratio} at state {x} exceeds 1/(2c^2)"
                )));
            }
        }
        // condition (4) over every label pair within jump range
        for &(i, h_i) in &states {
            let x = chain.label(i);
            for &(j2, h_j) in &states {
                let y = chain.label(j2);
                if (x - y).abs() <= jumps[i] {
                    let (h_min, h_max) = if x <= y { (h_i, h_j) } else { (h_j, h_i) };
                    if h_min > c * h_max + CHECK_EPS * (1.0 + h_max.abs()) {
                        return Err(Error::precondition(format!(
                            "h(min) > c h(max) for pair ({}, {})",
                            x.min(y),
                            x.max(y)
                        )));
                    }
                }
            }
        }
        status = PreconditionStatus::VerifiedByOracle;
    }
    let g = build_potential(h.clone())?;
    BoundResult::new(
        Theorem::NonMonotoneUpper,
        2.0 * c * g.eval(x0)?,
        vec![("c", c), ("x_min", h.x_min()), ("x0", x0)],
        status,
    )
}

/// Variable drift lower bound (monotone processes with progress capped by a
/// state map `c`): `E(T) >= x_min/h(x_min) + integral of 1/h`.
pub fn variable_lower(
    h: &HSpec,
    c_map: &dyn Fn(f64) -> f64,
    x0: f64,
    chain: Option<&MarkovChain>,
) -> Result<BoundResult> {
    if let Some((x1, x2)) = h.monotonicity_witness()? {
        return Err(Error::precondition(format!(
            "h is not monotone increasing: h({x1}) > h({x2})"
        )));
    }
    if x0 < h.x_min() {
        return Err(Error::parameter(format!(
            "X0 = {x0} below x_min = {}",
            h.x_min()
        )));
    }
    let mut status = PreconditionStatus::AssertedByUser;
    if let Some(chain) = chain {
        let drift = chain.exact_drift();
        let mut last_c: Option<(f64, f64)> = None;
        let mut order: Vec<usize> = (0..chain.n_states()).collect();
        order.sort_by(|&a, &b| chain.label(a).total_cmp(&chain.label(b)));
        for i in order {
            if chain.is_target(i) || chain.label(i) < h.x_min() {
                continue;
            }
            let x = chain.label(i);
            let cx = c_map(x);
            if !cx.is_finite() || cx > x {
                return Err(Error::precondition(format!(
                    "c({x}) = {cx} must be finite and at most x"
                )));
            }
            if let Some((px, pcx)) = last_c {
                if cx < pcx {
                    return Err(Error::precondition(format!(
                        "c is not monotone: c({px}) = {pcx} > c({x}) = {cx}"
                    )));
                }
            }
            last_c = Some((x, cx));
            for &(j, pr) in chain.row(i) {
                if pr == 0.0 {
                    continue;
                }
                let y = chain.label(j);
                if y > x + CHECK_EPS {
                    return Err(Error::precondition(format!(
                        "upward transition {x} -> {y} breaks monotone decrease"
                    )));
                }
                if y + CHECK_EPS < cx {
                    return Err(Error::precondition(format!(
                        "support {y} below c({x}) = {cx}"
                    )));
                }
            }
            // h is extended below x_min by its value at x_min (the constant
            // extension keeps it monotone and the bound sound); c itself may
            // reach 0 for states that can hit the target directly
            let h_cx = h.eval(cx.max(h.x_min()))?;
            if drift[i] > h_cx + CHECK_EPS * (1.0 + h_cx.abs()) {
                return Err(Error::precondition(format!(
                    "drift {} at state {x} exceeds h(c({x})) = {h_cx}",
                    drift[i]
                )));
            }
        }
        status = PreconditionStatus::VerifiedByOracle;
    }
    let g = build_potential(h.clone())?;
    BoundResult::new(
        Theorem::VariableLower,
        g.eval(x0)?,
        vec![("x_min", h.x_min()), ("x0", x0)],
        status,
    )
}

/// Multiplicative drift upper bound: `E(T) <= (ln(X0/x_min) + 1)/delta`.
pub fn multiplicative_upper(delta: f64, x_min: f64, x0: f64) -> Result<BoundResult> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::parameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if !(x_min > 0.0) {
        return Err(Error::parameter(format!(
            "x_min must be positive, got {x_min}"
        )));
    }
    if x0 < x_min {
        return Err(Error::parameter(format!("X0 = {x0} below x_min = {x_min}")));
    }
    BoundResult::new(
        Theorem::MultiplicativeUpper,
        ((x0 / x_min).ln() + 1.0) / delta,
        vec![("delta", delta), ("x_min", x_min), ("x0", x0)],
        PreconditionStatus::AssertedByUser,
    )
}

/// Multiplicative drift lower bound:
/// `E(T) >= (1 + ln(X0/x_min))/delta * (1-beta)/(1+beta)`.
///
/// With a chain, verifies per state that the process never moves up, that
/// the drift is at most `delta x`, and the jump condition
/// `P(X_t - X_{t+1} >= beta X_t) <= beta delta / (1 + ln(x/x_min))`.
pub fn multiplicative_lower(
    delta: f64,
    beta: f64,
    x_min: f64,
    x0: f64,
    chain: Option<&MarkovChain>,
) -> Result<BoundResult> {
    if !(delta > 0.0 && delta <= 1.0) || !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::parameter(format!(
            "delta and beta must lie in (0, 1], got delta={delta}, beta={beta}"
        )));
    }
    if !(x_min > 0.0) || x0 < x_min {
        return Err(Error::parameter(format!(
            "need X0 >= x_min > 0, got X0={x0}, x_min={x_min}"
        )));
    }
    let mut status = PreconditionStatus::AssertedByUser;
    if let Some(chain) = chain {
        let drift = chain.exact_drift();
        for i in 0..chain.n_states() {
            if chain.is_target(i) {
                continue;
            }
            let x = chain.label(i);
            if x < x_min {
                return Err(Error::precondition(format!(
                    "state label {x} in the gap (0, x_min = {x_min})"
                )));
            }
            if drift[i] > delta * x + CHECK_EPS * (1.0 + delta * x) {
                return Err(Error::precondition(format!(
                    "drift {} at state {x} exceeds delta x = {}",
                    drift[i],
                    delta * x
                )));
            }
            let mut big_jump = CompensatedSum::new();
            for &(j, pr) in chain.row(i) {
                if pr == 0.0 {
                    continue;
                }
                let y = chain.label(j);
                if y > x + CHECK_EPS {
                    return Err(Error::precondition(format!(
                        "upward transition {x} -> {y} breaks monotone decrease"
                    )));
                }
                if x - y >= beta * x - CHECK_EPS {
                    big_jump.add(pr);
                }
            }
            let cap = beta * delta / (1.0 + (x / x_min).ln());
            if big_jump.value() > cap + CHECK_EPS {
                return Err(Error::precondition(format!(
                    "jump condition fails at state {x}: P = {} > {cap}",
                    big_jump.value()
                )));
            }
        }
        status = PreconditionStatus::VerifiedByOracle;
    }
    BoundResult::new(
        Theorem::MultiplicativeLower,
        (1.0 + (x0 / x_min).ln()) / delta * (1.0 - beta) / (1.0 + beta),
        vec![
            ("delta", delta),
            ("beta", beta),
            ("x_min", x_min),
            ("x0", x0),
        ],
        status,
    )
}

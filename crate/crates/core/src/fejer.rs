//! The Fejér kernel and the one-sided inequalities it yields for real
//! exponential sums with positive coefficients.
//!
//! For a real sum `g` with `A = g(0)` and `B` the sum of squared coefficients,
//! the weights `w_ν = 1 − ν/(m+1)` give
//!
//! * `Σ w_ν |g(ν)|² ≥ ((m+1)B − A²)/2`,
//! * `Σ w_ν g(ν) ≥ −A/2`,
//! * `Σ w_ν g⁺(ν) ≥ (B(m+1) − AM − A²)/(4M)` whenever `|g| ≤ M` on `1..m`,
//!
//! and from these the two lower bounds on `max g⁺` below.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::bounds::{BoundInputs, BoundResult, FormulaId};
use crate::spectrum::{RealExponentialSum, SignSplit};
use crate::system::EvaluationRange;
use crate::turns::{self, unit_power};
use crate::{Error, Result};

const INEQUALITY_TOLERANCE: f64 = 1e-9;
const ZERO_SIGN_TOLERANCE: f64 = 1e-12;
const CLOSED_FORM_SWITCH: f64 = 1e-8;

/// Triangular weights `w_ν = 1 − ν/(m+1)`, `ν = 1..m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FejerWeights {
    m: u64,
}

impl FejerWeights {
    pub fn new(m: u64) -> Result<Self> {
        EvaluationRange::new(m)?;
        Ok(Self { m })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn weight(&self, nu: u64) -> f64 {
        (self.m + 1 - nu) as f64 / (self.m + 1) as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        (1..=self.m).map(|nu| (nu, self.weight(nu)))
    }

    /// Compensated sum of the weights; equals `m/2`.
    pub fn total(&self) -> f64 {
        neumaier_sum(self.iter().map(|(_, w)| w))
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// `F_{m+1}(x) = Σ_{|ν|≤m} (1 − |ν|/(m+1)) e(νx)`.
pub fn fejer_sum_form(m: u64, x: f64) -> f64 {
    let x = turns::reduce(x);
    let scale = (m + 1) as f64;
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 1..=m {
        let w = (m + 1 - k) as f64 / scale;
        acc += unit_power(x, k as i64) * w;
        acc += unit_power(x, -(k as i64)) * w;
    }
    debug_assert!(acc.im.abs() <= 1e-10 * scale, "imaginary part {}", acc.im);
    acc.re
}

/// `F_{m+1}(x) = (sin π(m+1)x / sin πx)² / (m+1)`, with `F_{m+1}(0) = m+1`.
pub fn fejer_closed_form(m: u64, x: f64) -> f64 {
    let x = turns::reduce(x);
    let centered = x - libm::round(x);
    let den = libm::sin(core::f64::consts::PI * centered);
    if den.abs() < CLOSED_FORM_SWITCH {
        return fejer_sum_form(m, x);
    }
    let lifted = turns::frac_mul(x, (m + 1) as i64);
    let num = libm::sin(core::f64::consts::PI * (lifted - libm::round(lifted)));
    let ratio = num / den;
    ratio * ratio / (m + 1) as f64
}

/// Weight masses of the positive and negative sets of `h` on `1..m`,
/// normalised by `2/m` so that `α + β ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct AlphaBeta {
    pub alpha: f64,
    pub beta: f64,
}

pub fn alpha_beta(h: &RealExponentialSum, m: u64) -> Result<AlphaBeta> {
    let values = h.values(EvaluationRange::new(m)?)?;
    Ok(alpha_beta_from_values(&values, h.abs_coefficient_sum()))
}

/// `values[ν-1] = h(ν)`; `|h(ν)| ≤ 1e-12·scale` counts as zero.
pub fn alpha_beta_from_values(values: &[f64], scale: f64) -> AlphaBeta {
    let m = values.len() as u64;
    let weights = FejerWeights { m };
    let zero = ZERO_SIGN_TOLERANCE * scale;
    let (mut pos, mut neg) = (0.0, 0.0);
    for (&v, (_, w)) in values.iter().zip(weights.iter()) {
        if v > zero {
            pos += w;
        } else if v < -zero {
            neg += w;
        }
    }
    let norm = 2.0 / m as f64;
    AlphaBeta {
        alpha: pos * norm,
        beta: neg * norm,
    }
}

/// Outcome of checking one inequality `lhs ≥ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    /// `holds` allows a relative slack of `1e-9·(|lhs| + |rhs|)`.
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = INEQUALITY_TOLERANCE * (lhs.abs() + rhs.abs());
        Self {
            lhs,
            rhs,
            holds: lhs >= rhs - slack,
        }
    }
}

/// `Σ_{ν=1}^m w_ν g(ν)²  ≥  ((m+1)B − A²)/2`.
pub fn lemma1_check(g: &RealExponentialSum, a: f64, b: f64, m: u64) -> Result<InequalityCheck> {
    let values = g.values(EvaluationRange::new(m)?)?;
    Ok(lemma1_from_values(&values, a, b))
}

pub fn lemma1_from_values(values: &[f64], a: f64, b: f64) -> InequalityCheck {
    let m = values.len() as u64;
    let w = FejerWeights { m };
    let lhs = values
        .iter()
        .zip(w.iter())
        .map(|(v, (_, w))| w * v * v)
        .sum();
    let rhs = ((m + 1) as f64 * b - a * a) / 2.0;
    InequalityCheck::new(lhs, rhs)
}

/// `Σ_{ν=1}^m w_ν g⁺(ν)  ≥  (B(m+1) − AM − A²)/(4M)`, given `|g(ν)| ≤ M`.
pub fn lemma2_check(
    g: &RealExponentialSum,
    a: f64,
    b: f64,
    ceiling: f64,
    m: u64,
) -> Result<InequalityCheck> {
    let values = g.values(EvaluationRange::new(m)?)?;
    lemma2_from_values(&values, a, b, ceiling)
}

pub fn lemma2_from_values(values: &[f64], a: f64, b: f64, ceiling: f64) -> Result<InequalityCheck> {
    if ceiling.is_nan() || ceiling <= 0.0 {
        return Err(Error::NonPositiveCeiling(ceiling));
    }
    check_ceiling(values, ceiling)?;
    let m = values.len() as u64;
    let w = FejerWeights { m };
    let lhs = values
        .iter()
        .zip(w.iter())
        .map(|(&v, (nu, w))| w * SignSplit::new(nu, v).positive)
        .sum();
    let rhs = (b * (m + 1) as f64 - a * ceiling - a * a) / (4.0 * ceiling);
    Ok(InequalityCheck::new(lhs, rhs))
}

fn check_ceiling(values: &[f64], ceiling: f64) -> Result<()> {
    match values
        .iter()
        .zip(1i64..)
        .find(|(v, _)| v.abs() > ceiling * (1.0 + 1e-12))
    {
        Some((&value, nu)) => Err(Error::CeilingTooSmall { nu, value, ceiling }),
        None => Ok(()),
    }
}

/// `Σ_{ν=1}^m w_ν g(ν) ≥ −A/2`.
pub fn partial_sum_check(g: &RealExponentialSum, a: f64, m: u64) -> Result<InequalityCheck> {
    let values = g.values(EvaluationRange::new(m)?)?;
    Ok(partial_sum_from_values(&values, a))
}

pub fn partial_sum_from_values(values: &[f64], a: f64) -> InequalityCheck {
    let w = FejerWeights {
        m: values.len() as u64,
    };
    let lhs = values.iter().zip(w.iter()).map(|(v, (_, w))| w * v).sum();
    InequalityCheck::new(lhs, -a / 2.0)
}

/// `max_{ν=1..m} g⁺(ν) ≥ (B(m+1) − AM − A²)/(2Mm)`; may be negative.
pub fn theorem1_bound(a: f64, b: f64, ceiling: f64, m: u64) -> Result<f64> {
    if ceiling.is_nan() || ceiling <= 0.0 {
        return Err(Error::NonPositiveCeiling(ceiling));
    }
    EvaluationRange::new(m)?;
    let mf = m as f64;
    Ok((b * (mf + 1.0) - a * ceiling - a * a) / (2.0 * ceiling * mf))
}

/// The two-case bound on `max g⁺`, selected by the sign of
/// `D = B(m+1) − A² − mM²`. `D = 0` takes the first case.
pub fn theorem2_bound(a: f64, b: f64, ceiling: f64, m: u64) -> BoundResult {
    let mf = m as f64;
    let inputs = BoundInputs {
        m: Some(m),
        ..BoundInputs::default()
    };
    let base = b * (mf + 1.0) - a * a;
    let d = base - mf * ceiling * ceiling;
    let positive_ceiling = ceiling > 0.0;
    if d >= 0.0 {
        BoundResult::lower(FormulaId::T2a, base / (mf * ceiling), false)
            .with_condition("M > 0", positive_ceiling)
            .with_condition("B(m+1) - A^2 - m M^2 >= 0", true)
            .with_range_top(m)
            .with_inputs(inputs)
    } else {
        let denominator = base - a * ceiling;
        BoundResult::lower(FormulaId::T2b, ceiling + 2.0 * d / denominator, false)
            .with_condition("M > 0", positive_ceiling)
            .with_condition("B(m+1) - A^2 - m M^2 < 0", true)
            .with_condition("B(m+1) - A^2 - A M > 0", denominator > 0.0)
            .with_range_top(m)
            .with_inputs(inputs)
    }
}

/// `M + 2M·D/(B(m+1) − A² − AM)` for `D = B(m+1) − A² − mM² ≤ 0`: the
/// refined bound evaluated at the smallest positive mass compatible with the
/// positive-part average, `α ≥ (B(m+1) − AM − A²)/(2mM²)`. It matches the
/// second case of [`theorem2_bound`] at `M = 1` and is weaker for `M > 1`,
/// where that case can exceed the true maximum. `None` unless `D ≤ 0` and the
/// denominator is positive.
pub fn theorem2_rescaled_bound(a: f64, b: f64, ceiling: f64, m: u64) -> Option<f64> {
    let mf = m as f64;
    let base = b * (mf + 1.0) - a * a;
    let d = base - mf * ceiling * ceiling;
    let denominator = base - a * ceiling;
    (ceiling > 0.0 && d <= 0.0 && denominator > 0.0)
        .then(|| ceiling + 2.0 * ceiling * d / denominator)
}

/// The intermediate bound `D/(αMm) + M` valid for the actual positive mass
/// `α > 0` of `g`.
pub fn alpha_refined_bound(a: f64, b: f64, ceiling: f64, m: u64, alpha: f64) -> f64 {
    let mf = m as f64;
    let d = b * (mf + 1.0) - a * a - mf * ceiling * ceiling;
    d / (alpha * ceiling * mf) + ceiling
}

/// `max_{ν} g⁺(ν)` over the given values.
pub fn max_positive_part(values: &[f64]) -> f64 {
    values
        .iter()
        .fold(0.0, |acc, &v| if v > acc { v } else { acc })
}

/// Values of `g` together with their ceiling `M = max |g|`.
pub fn values_and_ceiling(g: &RealExponentialSum, m: u64) -> Result<(Vec<f64>, f64)> {
    let values = g.values(EvaluationRange::new(m)?)?;
    let ceiling = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok((values, ceiling))
}

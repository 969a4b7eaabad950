//! Closed-form bounds on `max_{ν=1..m} |S(ν)|`, the classical comparison
//! bounds, and a selector for the strongest applicable lower bound.
//!
//! Every bound is returned as a [`BoundResult`]. Bounds on `|S|²` carry
//! `squared = true`; [`BoundResult::magnitude`] is the only conversion to a
//! bound on `|S|`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::primes::is_prime;
use crate::system::MomentSummary;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[allow(clippy::upper_case_acronyms)]
pub enum FormulaId {
    T1,
    T2a,
    T2b,
    T3i0,
    T3i1,
    C1i,
    C1ii,
    T4,
    C2,
    C3lower,
    C3upper,
    Phi,
    CeilEnvelope,
    Turan,
    Andersson,
    CNS,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::T1 => "T1",
            FormulaId::T2a => "T2a",
            FormulaId::T2b => "T2b",
            FormulaId::T3i0 => "T3i0",
            FormulaId::T3i1 => "T3i1",
            FormulaId::C1i => "C1i",
            FormulaId::C1ii => "C1ii",
            FormulaId::T4 => "T4",
            FormulaId::C2 => "C2",
            FormulaId::C3lower => "C3lower",
            FormulaId::C3upper => "C3upper",
            FormulaId::Phi => "Phi",
            FormulaId::CeilEnvelope => "CeilEnvelope",
            FormulaId::Turan => "Turan",
            FormulaId::Andersson => "Andersson",
            FormulaId::CNS => "CNS",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct Condition {
    pub name: String,
    pub satisfied: bool,
}

/// Parameters a bound was evaluated at; unused ones stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct BoundInputs {
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub j: Option<u64>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub q: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct BoundResult {
    pub formula: FormulaId,
    pub kind: BoundKind,
    pub value: f64,
    pub squared: bool,
    pub applicable: bool,
    /// Holds only asymptotically (unquantified `o(1)`), not for finite `n`.
    pub asymptotic: bool,
    /// The bound concerns `ν = 1..range_top`.
    pub range_top: Option<u64>,
    pub conditions: Vec<Condition>,
    pub inputs: BoundInputs,
}

impl BoundResult {
    pub fn new(formula: FormulaId, kind: BoundKind, value: f64, squared: bool) -> Self {
        let mut out = Self {
            formula,
            kind,
            value,
            squared,
            applicable: true,
            asymptotic: false,
            range_top: None,
            conditions: Vec::new(),
            inputs: BoundInputs::default(),
        };
        if !value.is_finite() {
            out.value = 0.0;
            out = out.with_condition("finite value", false);
        }
        out
    }

    pub fn lower(formula: FormulaId, value: f64, squared: bool) -> Self {
        Self::new(formula, BoundKind::Lower, value, squared)
    }

    pub fn upper(formula: FormulaId, value: f64, squared: bool) -> Self {
        Self::new(formula, BoundKind::Upper, value, squared)
    }

    pub fn with_condition(mut self, name: &str, satisfied: bool) -> Self {
        self.conditions.push(Condition {
            name: String::from(name),
            satisfied,
        });
        self.applicable &= satisfied;
        self
    }

    pub fn with_range_top(mut self, top: u64) -> Self {
        self.range_top = Some(top);
        self
    }

    pub fn with_inputs(mut self, inputs: BoundInputs) -> Self {
        self.inputs = inputs;
        self
    }

    pub fn asymptotic(mut self) -> Self {
        self.asymptotic = true;
        self
    }

    /// The bound on `|S|`: square root for squared bounds. `None` when a
    /// squared bound is negative, i.e. vacuous.
    pub fn magnitude(&self) -> Option<f64> {
        if !self.squared {
            Some(self.value)
        } else if self.value >= 0.0 {
            Some(libm::sqrt(self.value))
        } else {
            None
        }
    }

    pub fn unsatisfied(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.satisfied)
    }
}

fn inputs_nm(n: u64, m: u64) -> BoundInputs {
    BoundInputs {
        n: Some(n),
        m: Some(m),
        ..BoundInputs::default()
    }
}

/// Both weighted-case bounds on `max_{ν=1..m} |g(ν)|²`.
///
/// `i0` transfers a one-sided bound on the pair spectrum to `|g|²`, which
/// needs that bound to be nonnegative: `B(m+1) − A·B_2 − A² ≥ 0`.
pub fn theorem3_bounds(moments: &MomentSummary, m: u64) -> (BoundResult, BoundResult) {
    let a = moments.pair_sum;
    let b = moments.pair_square_sum;
    let b2 = moments.b2;
    let b4 = moments.b4;
    let mf = m as f64;

    let one_sided = b * (mf + 1.0) - a * b2 - a * a;
    let i0 = b2 + b * (1.0 + 1.0 / mf) / (2.0 * b2) - (a * b2 + a * a) / (2.0 * b2 * mf);
    let i0 = BoundResult::lower(FormulaId::T3i0, i0, true)
        .with_condition("B(m+1) - A*B2 - A^2 >= 0", one_sided >= 0.0)
        .with_range_top(m)
        .with_inputs(BoundInputs {
            m: Some(m),
            ..BoundInputs::default()
        });

    let numerator = a * a - b + mf * b4;
    let i1 = 2.0 * b2 - 2.0 * numerator / one_sided;
    let i1 = BoundResult::lower(FormulaId::T3i1, i1, true)
        .with_condition("m >= (B - A^2)/B4", mf >= (b - a * a) / b4)
        .with_condition("A^2 - B + m*B4 > 0", numerator > 0.0)
        .with_condition("B(m+1) - A*B2 - A^2 > 0", one_sided > 0.0)
        .with_range_top(m)
        .with_inputs(BoundInputs {
            m: Some(m),
            ..BoundInputs::default()
        });
    (i0, i1)
}

/// Pure-case bounds on `max_{ν=1..m} |S(ν)|²`.
pub fn corollary1(n: u64, m: u64) -> (BoundResult, BoundResult) {
    let nf = n as f64;
    let mf = m as f64;
    let shift = 1.0 + mf - nf * nf;
    let i = nf + (nf - 1.0) * shift / (2.0 * mf);
    let i = BoundResult::lower(FormulaId::C1i, i, true)
        .with_condition("m >= n^2 - 1", m + 1 >= n * n)
        .with_range_top(m)
        .with_inputs(inputs_nm(n, m));
    let ii = 2.0 * nf - 2.0 * (1.0 + mf - 2.0 * nf * nf + nf * nf * nf) / ((nf - 1.0) * shift);
    let ii = BoundResult::lower(FormulaId::C1ii, ii, true)
        .with_condition("m > n^2", m > n * n)
        .with_condition("n >= 2", n >= 2)
        .with_range_top(m)
        .with_inputs(inputs_nm(n, m));
    (i, ii)
}

/// `√(n + (1+j)(n−1)/(2(j+n²)))` over `ν = 1..n²+j`.
pub fn theorem4(n: u64, j: u64) -> BoundResult {
    let nf = n as f64;
    let jf = j as f64;
    let sq = nf + (1.0 + jf) * (nf - 1.0) / (2.0 * (jf + nf * nf));
    BoundResult::lower(FormulaId::T4, libm::sqrt(sq), false)
        .with_range_top(n * n + j)
        .with_inputs(BoundInputs {
            n: Some(n),
            j: Some(j),
            ..BoundInputs::default()
        })
}

/// `√(n + 1/(2n) − 1/(2n²))` over `ν = 1..n²`.
pub fn corollary2(n: u64) -> BoundResult {
    let nf = n as f64;
    let sq = nf + 1.0 / (2.0 * nf) - 1.0 / (2.0 * nf * nf);
    BoundResult::lower(FormulaId::C2, libm::sqrt(sq), false)
        .with_range_top(n * n)
        .with_inputs(BoundInputs {
            n: Some(n),
            ..BoundInputs::default()
        })
}

/// Lower and upper bound over `ν = 1..n²+n−1`; the upper bound needs `n+1`
/// prime.
pub fn corollary3(n: u64) -> (BoundResult, BoundResult) {
    let nf = n as f64;
    let top = n * n + n - 1;
    let inputs = BoundInputs {
        n: Some(n),
        ..BoundInputs::default()
    };
    let sq = nf + 0.5 - (2.0 * nf - 1.0) / (2.0 * (nf * nf + nf - 1.0));
    let lower = BoundResult::lower(FormulaId::C3lower, libm::sqrt(sq), false)
        .with_range_top(top)
        .with_inputs(inputs.clone());
    let upper = BoundResult::upper(FormulaId::C3upper, libm::sqrt(nf + 1.0), false)
        .with_condition("n+1 prime", is_prime(n + 1))
        .with_range_top(top)
        .with_inputs(inputs);
    (lower, upper)
}

/// `Φ(α) = 3/2 − 1/(2α)` for `1 ≤ α ≤ 3` and `2 − 2/α` for `α ≥ 3`.
pub fn phi(alpha: f64) -> Result<f64> {
    if !(1.0..f64::INFINITY).contains(&alpha) {
        return Err(Error::AlphaOutOfDomain(alpha));
    }
    Ok(if alpha <= 3.0 {
        1.5 - 0.5 / alpha
    } else {
        2.0 - 2.0 / alpha
    })
}

/// `√Φ(α)`, the limiting lower bound in units of `√n`.
pub fn phi_bound(alpha: f64) -> Result<BoundResult> {
    let value = libm::sqrt(phi(alpha)?);
    Ok(BoundResult::lower(FormulaId::Phi, value, false)
        .asymptotic()
        .with_inputs(BoundInputs {
            alpha: Some(alpha),
            ..BoundInputs::default()
        }))
}

/// `√⌈α⌉`, the limiting upper envelope in units of `√n`.
pub fn ceil_envelope(alpha: f64) -> f64 {
    libm::sqrt(libm::ceil(alpha))
}

pub fn ceil_envelope_bound(alpha: f64) -> BoundResult {
    BoundResult::upper(FormulaId::CeilEnvelope, ceil_envelope(alpha), false)
        .with_condition("alpha >= 1", alpha >= 1.0)
        .asymptotic()
        .with_inputs(BoundInputs {
            alpha: Some(alpha),
            ..BoundInputs::default()
        })
}

/// Top of the range for the `√q` bound of the one-parameter classical family.
pub fn andersson_range_top(n: u64, q: u64) -> u64 {
    2 * n * q + 1 - q * (q + 1)
}

/// Turán's bound (range `1..n`), the best `√q` bound whose range fits in
/// `1..m`, and the Cassels–Newman–Szalay bound at ratio `c` (range `1..⌊cn⌋`).
pub fn classical_bounds(n: u64, m: u64, c: f64) -> Vec<BoundResult> {
    let turan = BoundResult::lower(FormulaId::Turan, 1.0, false)
        .with_condition("n <= m", n <= m)
        .with_range_top(n)
        .with_inputs(inputs_nm(n, m));

    let best_q = (1..=n).rev().find(|&q| andersson_range_top(n, q) <= m);
    let andersson = match best_q {
        Some(q) => BoundResult::lower(FormulaId::Andersson, libm::sqrt(q as f64), false)
            .with_condition("range fits in 1..m", true)
            .with_range_top(andersson_range_top(n, q))
            .with_inputs(BoundInputs {
                q: Some(q),
                ..inputs_nm(n, m)
            }),
        None => BoundResult::lower(FormulaId::Andersson, 1.0, false)
            .with_condition("range fits in 1..m", false)
            .with_range_top(andersson_range_top(n, 1))
            .with_inputs(BoundInputs {
                q: Some(1),
                ..inputs_nm(n, m)
            }),
    };

    let nf = n as f64;
    let cns_top = libm::floor(c * nf);
    let cns = BoundResult::lower(FormulaId::CNS, libm::sqrt((c * nf - nf + 1.0) / c), false)
        .with_condition("c > 1", c > 1.0)
        .with_condition("floor(c n) <= m", cns_top <= m as f64)
        .with_range_top(if cns_top.is_finite() && cns_top > 0.0 {
            cns_top as u64
        } else {
            0
        })
        .with_inputs(BoundInputs {
            c: Some(c),
            ..inputs_nm(n, m)
        });

    alloc::vec![turan, andersson, cns]
}

/// The largest applicable lower bound on `max_{ν=1..m} |S(ν)|` (unsquared),
/// labelled with the winning formula. Ties go to the earlier candidate in
/// the order C1i, C1ii, Turán, Andersson, CNS.
pub fn best_lower_bound(n: u64, m: u64) -> BoundResult {
    let (i, ii) = corollary1(n, m);
    let c = if m > n { m as f64 / n as f64 } else { 2.0 };
    let mut candidates = alloc::vec![i, ii];
    candidates.extend(classical_bounds(n, m, c));

    let mut best: Option<(f64, BoundResult)> = None;
    for candidate in candidates.into_iter().filter(|b| b.applicable) {
        let Some(v) = candidate.magnitude() else {
            continue;
        };
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, candidate));
        }
    }
    match best {
        Some((value, mut winner)) => {
            winner.value = value;
            winner.squared = false;
            winner
        }
        // Nothing fits (m < n and C1i vacuous): the trivial bound.
        None => BoundResult::lower(FormulaId::Turan, 0.0, false)
            .with_range_top(m)
            .with_inputs(inputs_nm(n, m)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn theorem3_pure_examples() {
        let (i0, i1) = theorem3_bounds(&MomentSummary::pure(2), 5);
        assert_abs_diff_eq!(i0.value, 2.2, epsilon = 1e-14);
        assert!(i0.applicable && i0.squared);
        assert!(i1.applicable);

        for m in [1, 7, 100] {
            let (i0, _) = theorem3_bounds(&MomentSummary::pure(1), m);
            assert_abs_diff_eq!(i0.value, 1.0, epsilon = 1e-15);
            assert!(i0.applicable);
        }

        let (_, i1) = theorem3_bounds(&MomentSummary::pure(3), 27);
        assert_abs_diff_eq!(i1.value, 77.0 / 19.0, epsilon = 1e-13);
        assert!(i1.applicable);
    }

    #[test]
    fn theorem3_i0_needs_nonnegative_one_sided_bound() {
        // n = 2, m = 1: the formula would claim |S(1)|² ≥ 1, but z = (1, −1)
        // gives S(1) = 0.
        let (i0, _) = theorem3_bounds(&MomentSummary::pure(2), 1);
        assert!(!i0.applicable);
        let (i0, _) = theorem3_bounds(&MomentSummary::pure(2), 3);
        assert!(i0.applicable);
        assert_abs_diff_eq!(i0.value, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn corollary1_examples() {
        let (i, ii) = corollary1(2, 4);
        assert_abs_diff_eq!(i.value, 2.125, epsilon = 1e-15);
        assert!(!ii.applicable);
        let (_, ii) = corollary1(3, 27);
        assert_abs_diff_eq!(ii.value, 77.0 / 19.0, epsilon = 1e-13);
        assert!(ii.applicable);
        for m in [1, 2, 50] {
            let (i, ii) = corollary1(1, m);
            assert_abs_diff_eq!(i.value, 1.0, epsilon = 1e-15);
            assert!(!ii.applicable);
        }
    }

    #[test]
    fn theorem4_and_corollary2_examples() {
        assert_abs_diff_eq!(
            theorem4(2, 0).value,
            libm::sqrt(17.0 / 8.0),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(theorem4(2, 0).value, 1.457738, epsilon = 1e-6);
        assert_abs_diff_eq!(theorem4(5, 0).value, libm::sqrt(5.08), epsilon = 1e-15);
        assert_abs_diff_eq!(theorem4(5, 0).value, 2.253886, epsilon = 1e-6);
        for j in [0, 3, 1000] {
            assert_eq!(theorem4(1, j).value, 1.0);
        }
        assert_abs_diff_eq!(corollary2(2).value, libm::sqrt(17.0 / 8.0), epsilon = 1e-15);
        assert_eq!(corollary2(1).value, 1.0);
        assert_abs_diff_eq!(corollary2(5).value, libm::sqrt(5.08), epsilon = 1e-15);
    }

    #[test]
    fn corollary3_examples() {
        let (lo, up) = corollary3(4);
        assert_abs_diff_eq!(lo.value, libm::sqrt(4.5 - 7.0 / 38.0), epsilon = 1e-15);
        assert_abs_diff_eq!(lo.value, 2.077447, epsilon = 1e-6);
        assert_abs_diff_eq!(up.value, 2.236068, epsilon = 1e-6);
        assert!(up.applicable && lo.applicable);
        assert_eq!(lo.range_top, Some(19));

        let (lo, up) = corollary3(2);
        assert_abs_diff_eq!(lo.value, libm::sqrt(2.2), epsilon = 1e-15);
        assert_abs_diff_eq!(up.value, libm::sqrt(3.0), epsilon = 1e-15);

        let (lo, up) = corollary3(7);
        assert!(lo.applicable);
        assert!(!up.applicable);
        assert_eq!(up.unsatisfied().count(), 1);
    }

    #[test]
    fn corollary3_lower_is_theorem4_at_j_n_minus_1() {
        for n in 1..200 {
            let (lo, _) = corollary3(n);
            assert_abs_diff_eq!(lo.value, theorem4(n, n - 1).value, epsilon = 1e-13);
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(2.0).unwrap(), 1.25);
        assert_eq!(phi(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(phi(3.0).unwrap(), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(2.0 - 2.0 / 3.0, 1.5 - 0.5 / 3.0, epsilon = 1e-15);
        assert_eq!(phi(0.5), Err(Error::AlphaOutOfDomain(0.5)));
        assert!(phi(f64::NAN).is_err());
        let b = phi_bound(2.0).unwrap();
        assert!(b.asymptotic);
        assert_abs_diff_eq!(b.value, libm::sqrt(1.25), epsilon = 1e-15);
    }

    #[test]
    fn ceil_envelope_examples() {
        assert_abs_diff_eq!(
            ceil_envelope(2.0),
            core::f64::consts::SQRT_2,
            epsilon = 1e-15
        );
        assert_eq!(ceil_envelope(1.0), 1.0);
        assert_eq!(ceil_envelope(3.5), 2.0);
        assert!(ceil_envelope_bound(2.0).asymptotic);
        assert_eq!(ceil_envelope_bound(2.0).kind, BoundKind::Upper);
    }

    #[test]
    fn classical_examples() {
        assert_eq!(andersson_range_top(4, 4), 13);
        let b = classical_bounds(4, 13, 2.0);
        assert_eq!(b[1].inputs.q, Some(4));
        assert_eq!(b[1].value, 2.0);
        assert_eq!(b[1].range_top, Some(13));

        let b = classical_bounds(5, 10, 2.0);
        assert_abs_diff_eq!(b[2].value, libm::sqrt(3.0), epsilon = 1e-15);
        assert!(b[2].applicable);

        let b = classical_bounds(1, 1, 2.0);
        assert!(b[0].applicable);
        assert_eq!((b[0].value, b[0].range_top), (1.0, Some(1)));
    }

    #[test]
    fn best_lower_bound_examples() {
        let b = best_lower_bound(2, 4);
        assert_eq!(b.formula, FormulaId::C1i);
        assert_abs_diff_eq!(b.value, libm::sqrt(2.125), epsilon = 1e-15);

        let b = best_lower_bound(3, 27);
        assert_eq!(b.formula, FormulaId::C1ii);
        assert_abs_diff_eq!(b.value, libm::sqrt(77.0 / 19.0), epsilon = 1e-13);
        assert!(libm::sqrt(3.0 + 2.0 * 19.0 / 54.0) < b.value);

        for m in [1, 2, 40] {
            assert_eq!(best_lower_bound(1, m).value, 1.0);
        }
    }

    #[test]
    fn inapplicable_results_name_a_failed_condition() {
        let (_, ii) = corollary1(1, 4);
        assert!(!ii.applicable && ii.unsatisfied().count() >= 1);
        // zero denominator at n = 1
        assert!(ii.value.is_finite());
    }
}

//! Real-valued exponential sums and the pair-difference spectrum.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::system::{EvaluationRange, PowerSweep, WeightedSystem};
use crate::turns::{self, frac_mul};
use crate::{Error, Result};

const PAIRING_TOLERANCE: f64 = 1e-12;
const REALNESS_TOLERANCE: f64 = 1e-10;

/// `h(ν) = c_0 + Σ c_k e(λ_k ν)` whose terms are closed under `λ ↦ −λ`,
/// so that `h` is real on the integers and `h(ν) = h(−ν)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct RealExponentialSum {
    constant: f64,
    coefficients: Vec<f64>,
    frequencies: Vec<f64>,
}

fn is_self_paired(lambda: f64) -> bool {
    let twice = turns::reduce(2.0 * lambda);
    twice.min(1.0 - twice) <= PAIRING_TOLERANCE
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = turns::reduce(a - b);
    d.min(1.0 - d)
}

impl RealExponentialSum {
    /// Validates that every `(c, λ)` has a partner `(c, −λ)`; terms with
    /// `2λ ≡ 0` are their own partner.
    pub fn new(constant: f64, terms: Vec<(f64, f64)>) -> Result<Self> {
        let (coefficients, frequencies): (Vec<f64>, Vec<f64>) = terms
            .into_iter()
            .map(|(c, l)| (c, turns::reduce(l)))
            .unzip();
        if let Some(index) = frequencies.iter().position(|l| !l.is_finite()) {
            return Err(Error::NonFiniteAngle { index });
        }
        let mut used = alloc::vec![false; coefficients.len()];
        for i in 0..coefficients.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            if is_self_paired(frequencies[i]) {
                continue;
            }
            let scale = coefficients[i].abs().max(1.0);
            let partner = (0..coefficients.len()).find(|&j| {
                !used[j]
                    && circle_distance(frequencies[j], -frequencies[i]) <= PAIRING_TOLERANCE
                    && (coefficients[j] - coefficients[i]).abs() <= PAIRING_TOLERANCE * scale
            });
            match partner {
                Some(j) => used[j] = true,
                None => return Err(Error::UnpairedTerm { index: i }),
            }
        }
        Ok(Self {
            constant,
            coefficients,
            frequencies,
        })
    }

    /// Builds `c_0 + Σ c_k (e(λ_k ν) + e(−λ_k ν))` from one half of the terms.
    pub fn symmetric(constant: f64, half: &[(f64, f64)]) -> Self {
        let mut coefficients = Vec::with_capacity(2 * half.len());
        let mut frequencies = Vec::with_capacity(2 * half.len());
        for &(c, l) in half {
            coefficients.extend([c, c]);
            frequencies.extend([turns::reduce(l), turns::reduce(-l)]);
        }
        Self {
            constant,
            coefficients,
            frequencies,
        }
    }

    pub fn zero() -> Self {
        Self {
            constant: 0.0,
            coefficients: Vec::new(),
            frequencies: Vec::new(),
        }
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.coefficients
            .iter()
            .copied()
            .zip(self.frequencies.iter().copied())
    }

    pub fn term_count(&self) -> usize {
        self.coefficients.len()
    }

    /// `h(0)`: the constant plus every coefficient.
    pub fn coefficient_sum(&self) -> f64 {
        self.constant + self.coefficients.iter().sum::<f64>()
    }

    /// Sum of squared coefficients, the constant counted as one term.
    pub fn coefficient_square_sum(&self) -> f64 {
        self.constant * self.constant + self.coefficients.iter().map(|c| c * c).sum::<f64>()
    }

    pub fn abs_coefficient_sum(&self) -> f64 {
        self.constant.abs() + self.coefficients.iter().map(|c| c.abs()).sum::<f64>()
    }

    /// Largest imaginary part tolerated before the sum is declared non-real.
    pub fn realness_tolerance(&self) -> f64 {
        REALNESS_TOLERANCE * self.abs_coefficient_sum()
    }

    pub fn eval_complex(&self, nu: i64) -> Complex64 {
        let mut acc = Complex64::new(self.constant, 0.0);
        for (c, l) in self.terms() {
            acc += turns::unit(frac_mul(l, nu)) * c;
        }
        acc
    }

    /// Real value; the imaginary residue of [`Self::eval_complex`] is dropped.
    pub fn eval(&self, nu: i64) -> f64 {
        self.eval_complex(nu).re
    }

    pub fn sweep(&self, first: i64, last: i64) -> PowerSweep<'_> {
        PowerSweep::new(Some(&self.coefficients), &self.frequencies, first, last)
    }

    /// `h(1), …, h(m)`, failing if any value has an imaginary part above
    /// tolerance.
    pub fn values(&self, range: EvaluationRange) -> Result<Vec<f64>> {
        let tol = self.realness_tolerance();
        self.sweep(1, range.top() as i64)
            .map(|(nu, v)| {
                if v.im.abs() > tol {
                    Err(Error::NotReal { nu, residual: v.im })
                } else {
                    Ok(self.constant + v.re)
                }
            })
            .collect()
    }

    pub fn split_signs(&self, range: EvaluationRange) -> Result<Vec<SignSplit>> {
        Ok(self
            .values(range)?
            .into_iter()
            .zip(1..)
            .map(|(value, nu)| SignSplit::new(nu, value))
            .collect())
    }
}

/// `g(ν)` with its positive part `g⁺` and negative part `g⁻`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct SignSplit {
    pub nu: u64,
    pub value: f64,
    pub positive: f64,
    pub negative: f64,
}

impl SignSplit {
    pub fn new(nu: u64, value: f64) -> Self {
        let (positive, negative) = if value > 0.0 {
            (value, 0.0)
        } else if value < 0.0 {
            (0.0, value)
        } else {
            (0.0, 0.0)
        };
        Self {
            nu,
            value,
            positive,
            negative,
        }
    }
}

/// `h` with `|g(ν)|² = B_2 + h(ν)`: all `n² − n` terms `b_i b_j e((θ_i − θ_j) ν)`
/// for `i ≠ j`, coincident frequencies kept separate.
pub fn pair_spectrum(system: &WeightedSystem) -> RealExponentialSum {
    let n = system.len();
    let mut coefficients = Vec::with_capacity(n * n.saturating_sub(1));
    let mut frequencies = Vec::with_capacity(coefficients.capacity());
    for (i, (bi, ti)) in system.entries().enumerate() {
        for (j, (bj, tj)) in system.entries().enumerate() {
            if i != j {
                coefficients.push(bi * bj);
                frequencies.push(turns::reduce(ti - tj));
            }
        }
    }
    RealExponentialSum {
        constant: 0.0,
        coefficients,
        frequencies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn range(m: u64) -> EvaluationRange {
        EvaluationRange::new(m).unwrap()
    }

    #[test]
    fn pair_spectrum_antipodal() {
        let w = WeightedSystem::new(vec![1.0, 1.0], vec![0.0, 0.5]).unwrap();
        let h = pair_spectrum(&w);
        assert_eq!(h.term_count(), 2);
        for nu in -6..=6i64 {
            let expected = if nu % 2 == 0 { 2.0 } else { -2.0 };
            assert_abs_diff_eq!(h.eval(nu), expected, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(w.eval(1).norm_sqr(), 2.0 + h.eval(1), epsilon = 1e-14);
    }

    #[test]
    fn pair_spectrum_single_point_is_zero() {
        let w = WeightedSystem::new(vec![1.7], vec![0.3]).unwrap();
        let h = pair_spectrum(&w);
        assert_eq!(h.term_count(), 0);
        assert_eq!(h.eval(9), 0.0);
        assert_abs_diff_eq!(w.eval(9).norm_sqr(), 1.7 * 1.7, epsilon = 1e-14);
    }

    #[test]
    fn pair_spectrum_cube_roots() {
        let w = WeightedSystem::new(vec![1.0; 3], vec![0.0, 1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let h = pair_spectrum(&w);
        assert_abs_diff_eq!(h.eval(3), 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(3.0 + h.eval(3), 9.0, epsilon = 1e-12);
    }

    #[test]
    fn new_validates_pairing() {
        assert!(RealExponentialSum::new(1.0, vec![(1.0, 0.2), (1.0, 0.8)]).is_ok());
        assert!(RealExponentialSum::new(0.0, vec![(1.0, 0.0), (2.0, 0.5)]).is_ok());
        assert_eq!(
            RealExponentialSum::new(0.0, vec![(1.0, 0.2), (1.5, 0.8)]),
            Err(Error::UnpairedTerm { index: 0 })
        );
        assert_eq!(
            RealExponentialSum::new(0.0, vec![(1.0, 0.2), (1.0, 0.8), (1.0, 0.3)]),
            Err(Error::UnpairedTerm { index: 2 })
        );
    }

    #[test]
    fn split_signs_examples() {
        let w = WeightedSystem::new(vec![1.0, 1.0], vec![0.0, 0.5]).unwrap();
        let split = pair_spectrum(&w).split_signs(range(2)).unwrap();
        assert_eq!((split[0].nu, split[0].positive), (1, 0.0));
        assert_abs_diff_eq!(split[0].value, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(split[0].negative, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(split[1].positive, 2.0, epsilon = 1e-14);
        assert_eq!(split[1].negative, 0.0);

        let zero = RealExponentialSum::zero().split_signs(range(5)).unwrap();
        assert!(zero
            .iter()
            .all(|s| s.value == 0.0 && s.positive == 0.0 && s.negative == 0.0));
    }

    #[test]
    fn sign_split_reconstructs_exactly() {
        for v in [-3.25, -0.0, 0.0, 1e-300, 7.5] {
            let s = SignSplit::new(1, v);
            assert_eq!(s.positive + s.negative, v);
            assert_eq!(s.positive - s.negative, v.abs());
        }
    }

    #[test]
    fn values_reject_non_real_input() {
        let lopsided = RealExponentialSum {
            constant: 0.0,
            coefficients: vec![1.0],
            frequencies: vec![0.25],
        };
        assert!(matches!(
            lopsided.values(range(3)),
            Err(Error::NotReal { nu: 1, .. })
        ));
    }
}

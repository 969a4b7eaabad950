//! Unimodular and weighted power sums, their evaluation over index ranges,
//! and the weight moments `B_ν = Σ b_k^ν`.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::turns::{self, unit_power};
use crate::{Error, Result};

/// Number of rotation steps between exact resynchronisations of the
/// accumulated powers in [`PowerSweep`].
pub const RESYNC_INTERVAL: i64 = 1024;

/// `n` points `z_k = e(θ_k)` on the unit circle, stored as angles in turns.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct UnimodularSystem {
    angles: Vec<f64>,
}

impl UnimodularSystem {
    /// Builds a system from angles in turns; angles are reduced to `[0, 1)`.
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::EmptySystem);
        }
        let angles = angles
            .into_iter()
            .enumerate()
            .map(|(index, a)| {
                if a.is_finite() {
                    Ok(turns::reduce(a))
                } else {
                    Err(Error::NonFiniteAngle { index })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { angles })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.angles.iter().map(|&a| turns::unit(a))
    }

    /// `S(ν) = Σ_k e(θ_k ν)`.
    pub fn eval(&self, nu: i64) -> Complex64 {
        self.angles.iter().map(|&a| unit_power(a, nu)).sum()
    }

    pub fn sweep(&self, first: i64, last: i64) -> PowerSweep<'_> {
        PowerSweep::new(None, &self.angles, first, last)
    }
}

impl TryFrom<Vec<f64>> for UnimodularSystem {
    type Error = Error;

    fn try_from(angles: Vec<f64>) -> Result<Self> {
        Self::new(angles)
    }
}

impl From<UnimodularSystem> for Vec<f64> {
    fn from(system: UnimodularSystem) -> Self {
        system.angles
    }
}

/// `g(ν) = Σ b_k e(θ_k ν)` with strictly positive weights.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct WeightedSystem {
    weights: Vec<f64>,
    angles: Vec<f64>,
}

impl WeightedSystem {
    pub fn new(weights: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        if weights.len() != angles.len() {
            return Err(Error::LengthMismatch {
                weights: weights.len(),
                angles: angles.len(),
            });
        }
        for (index, &weight) in weights.iter().enumerate() {
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::NonPositiveWeight { index, weight });
            }
        }
        let angles = UnimodularSystem::new(angles)?.angles;
        Ok(Self { weights, angles })
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (weights, angles) = entries.into_iter().unzip();
        Self::new(weights, angles)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn entries(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights
            .iter()
            .copied()
            .zip(self.angles.iter().copied())
    }

    /// `A = g(0) = Σ b_k`.
    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `B = Σ b_k²`.
    pub fn weight_square_sum(&self) -> f64 {
        self.weights.iter().map(|b| b * b).sum()
    }

    pub fn eval(&self, nu: i64) -> Complex64 {
        if nu == 0 {
            return Complex64::new(self.weight_sum(), 0.0);
        }
        self.entries().map(|(b, a)| unit_power(a, nu) * b).sum()
    }

    pub fn sweep(&self, first: i64, last: i64) -> PowerSweep<'_> {
        PowerSweep::new(Some(&self.weights), &self.angles, first, last)
    }

    pub fn moments(&self) -> MomentSummary {
        MomentSummary::from_weights(&self.weights)
    }
}

impl From<&UnimodularSystem> for WeightedSystem {
    fn from(system: &UnimodularSystem) -> Self {
        Self {
            weights: alloc::vec![1.0; system.len()],
            angles: system.angles.clone(),
        }
    }
}

/// The index range `ν = 1, …, m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct EvaluationRange {
    m: u64,
}

impl EvaluationRange {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            Err(Error::EmptyRange)
        } else {
            Ok(Self { m })
        }
    }

    /// `m = n² + j`.
    pub fn shifted_square(n: u64, j: u64) -> Result<Self> {
        Self::new(n * n + j)
    }

    pub fn top(&self) -> u64 {
        self.m
    }

    pub fn indices(&self) -> core::ops::RangeInclusive<u64> {
        1..=self.m
    }
}

/// Incremental evaluation of `Σ c_k e(θ_k ν)` for consecutive `ν`.
///
/// Each step multiplies every accumulated power by its unit step `e(θ_k)`.
/// At every multiple of [`RESYNC_INTERVAL`] the powers are recomputed directly
/// from the reduced phase, which pins both modulus and argument drift. The
/// value at `ν` therefore depends only on `ν` and on `max(first, ⌊ν/R⌋·R)`,
/// so sweeps split at multiples of `R` reproduce an unsplit sweep exactly.
#[derive(Debug, Clone)]
pub struct PowerSweep<'a> {
    coefficients: Option<&'a [f64]>,
    angles: &'a [f64],
    steps: Vec<Complex64>,
    powers: Vec<Complex64>,
    nu: i64,
    last: i64,
}

impl<'a> PowerSweep<'a> {
    /// Sweeps `ν = first..=last`; `coefficients = None` means all ones.
    pub fn new(coefficients: Option<&'a [f64]>, angles: &'a [f64], first: i64, last: i64) -> Self {
        if let Some(c) = coefficients {
            assert_eq!(c.len(), angles.len());
        }
        Self {
            coefficients,
            angles,
            steps: angles.iter().map(|&a| turns::unit(a)).collect(),
            powers: angles.iter().map(|&a| unit_power(a, first)).collect(),
            nu: first,
            last,
        }
    }

    /// Current powers `e(θ_k ν)` for the next index to be yielded.
    pub fn powers(&self) -> &[Complex64] {
        &self.powers
    }

    fn current_value(&self) -> Complex64 {
        match self.coefficients {
            None => self.powers.iter().sum(),
            Some(c) => self.powers.iter().zip(c).map(|(p, &b)| p * b).sum(),
        }
    }

    fn advance(&mut self) {
        self.nu += 1;
        if self.nu.rem_euclid(RESYNC_INTERVAL) == 0 {
            for (p, &a) in self.powers.iter_mut().zip(self.angles) {
                *p = unit_power(a, self.nu);
            }
        } else {
            for (p, s) in self.powers.iter_mut().zip(&self.steps) {
                *p *= s;
            }
        }
    }
}

impl Iterator for PowerSweep<'_> {
    type Item = (i64, Complex64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.nu > self.last {
            return None;
        }
        let out = (self.nu, self.current_value());
        self.advance();
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.last - self.nu + 1).max(0) as usize;
        (left, Some(left))
    }
}

/// Anything that can be swept over consecutive indices.
pub trait Sweepable {
    fn sweep_range(&self, first: i64, last: i64) -> PowerSweep<'_>;
}

impl Sweepable for UnimodularSystem {
    fn sweep_range(&self, first: i64, last: i64) -> PowerSweep<'_> {
        self.sweep(first, last)
    }
}

impl Sweepable for WeightedSystem {
    fn sweep_range(&self, first: i64, last: i64) -> PowerSweep<'_> {
        self.sweep(first, last)
    }
}

/// `max_{ν=1..m} |g(ν)|` and the smallest `ν` attaining it.
pub fn max_abs_over_range<S: Sweepable + ?Sized>(system: &S, range: EvaluationRange) -> (f64, u64) {
    let mut best = (f64::NEG_INFINITY, 0u64);
    for (nu, value) in system.sweep_range(1, range.top() as i64) {
        let v = value.norm();
        if v > best.0 {
            best = (v, nu as u64);
        }
    }
    best
}

/// Weight moments `B_1..B_4` and the pair-spectrum totals
/// `Σ c_k = B_1² − B_2` and `Σ c_k² = B_2² − B_4`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct MomentSummary {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    /// `B_1² − B_2`: total coefficient of the pair spectrum.
    pub pair_sum: f64,
    /// `B_2² − B_4`: total squared coefficient of the pair spectrum.
    pub pair_square_sum: f64,
}

impl MomentSummary {
    pub fn from_weights(weights: &[f64]) -> Self {
        let (mut b1, mut b2, mut b3, mut b4) = (0.0, 0.0, 0.0, 0.0);
        for &b in weights {
            let sq = b * b;
            b1 += b;
            b2 += sq;
            b3 += sq * b;
            b4 += sq * sq;
        }
        Self {
            b1,
            b2,
            b3,
            b4,
            pair_sum: b1 * b1 - b2,
            pair_square_sum: b2 * b2 - b4,
        }
    }

    /// All weights equal to one.
    pub fn pure(n: u64) -> Self {
        let n = n as f64;
        Self {
            b1: n,
            b2: n,
            b3: n,
            b4: n,
            pair_sum: n * n - n,
            pair_square_sum: n * n - n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn sys(angles: &[f64]) -> UnimodularSystem {
        UnimodularSystem::new(angles.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(UnimodularSystem::new(vec![]), Err(Error::EmptySystem));
        assert_eq!(
            UnimodularSystem::new(vec![0.0, f64::NAN]),
            Err(Error::NonFiniteAngle { index: 1 })
        );
        assert!(matches!(
            WeightedSystem::new(vec![1.0, 0.0], vec![0.0, 0.5]),
            Err(Error::NonPositiveWeight { index: 1, .. })
        ));
        assert!(WeightedSystem::new(vec![1.0], vec![0.0, 0.5]).is_err());
        assert_eq!(EvaluationRange::new(0), Err(Error::EmptyRange));
    }

    #[test]
    fn angles_are_reduced() {
        let s = sys(&[-0.25, 1.5, 3.0]);
        assert_eq!(s.angles(), &[0.75, 0.5, 0.0]);
    }

    #[test]
    fn eval_pure_examples() {
        let one = sys(&[0.0]);
        for nu in [-5, 0, 1, 17, 1_000_003] {
            assert_abs_diff_eq!(one.eval(nu).re, 1.0, epsilon = 1e-15);
        }
        let pm = sys(&[0.0, 0.5]);
        assert_abs_diff_eq!(pm.eval(3).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pm.eval(4).re, 2.0, epsilon = 1e-15);
        let cube = sys(&[0.0, 1.0 / 3.0, 2.0 / 3.0]);
        assert_abs_diff_eq!(cube.eval(3).re, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cube.eval(4).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn eval_weighted_examples() {
        let w = WeightedSystem::new(vec![2.0], vec![0.0]).unwrap();
        assert_abs_diff_eq!(w.eval(7).re, 2.0, epsilon = 1e-15);
        let w = WeightedSystem::new(vec![1.0, 1.0], vec![0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(w.eval(1).norm(), 0.0, epsilon = 1e-15);
        let w = WeightedSystem::new(vec![1.0, 2.0], vec![0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(w.eval(2).re, 3.0, epsilon = 1e-15);
        let w = WeightedSystem::new(vec![0.3, 0.7, 1.9], vec![0.1, 0.2, 0.9]).unwrap();
        assert_eq!(w.eval(0).re, w.weight_sum());
    }

    #[test]
    fn max_abs_examples() {
        let pm = sys(&[0.0, 0.5]);
        let (v, nu) = max_abs_over_range(&pm, EvaluationRange::new(1).unwrap());
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
        assert_eq!(nu, 1);
        let (v, nu) = max_abs_over_range(&pm, EvaluationRange::new(2).unwrap());
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-15);
        assert_eq!(nu, 2);
        let cube = sys(&[0.0, 1.0 / 3.0, 2.0 / 3.0]);
        let (v, nu) = max_abs_over_range(&cube, EvaluationRange::new(9).unwrap());
        assert_abs_diff_eq!(v, 3.0, epsilon = 1e-12);
        assert_eq!(nu, 3);
    }

    #[test]
    fn sweep_starting_mid_range_matches_direct() {
        let s = sys(&[0.123, 0.77, 0.5]);
        for (nu, v) in s.sweep(-40, 3000) {
            assert!((v - s.eval(nu)).norm() < 1e-11, "nu = {nu}");
        }
    }

    #[test]
    fn moments_examples() {
        let m = MomentSummary::from_weights(&[1.0; 5]);
        assert_eq!(m, MomentSummary::pure(5));
        assert_eq!((m.pair_sum, m.pair_square_sum), (20.0, 20.0));
        let m = MomentSummary::from_weights(&[1.0]);
        assert_eq!((m.pair_sum, m.pair_square_sum), (0.0, 0.0));
        let m = MomentSummary::from_weights(&[1.0, 2.0]);
        assert_eq!((m.b1, m.b2, m.b3, m.b4), (3.0, 5.0, 9.0, 17.0));
        assert_eq!((m.pair_sum, m.pair_square_sum), (4.0, 8.0));
    }

    #[test]
    fn sweeps_split_on_the_resync_grid_match() {
        let s = UnimodularSystem::new(vec![0.123456789, 0.5, 0.987654321]).unwrap();
        let whole: Vec<_> = s.sweep(1, 5000).collect();
        let mut parts: Vec<_> = s.sweep(1, 1023).collect();
        for k in 1..5 {
            parts.extend(s.sweep(k * 1024, ((k + 1) * 1024 - 1).min(5000)));
        }
        assert_eq!(whole, parts);
    }
}

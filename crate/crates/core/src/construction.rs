//! The Gauss-sum system attaining `max |S(ν)| = √p` over `ν = 1..p²−p−1`.
//!
//! For a prime `p` with primitive root `g`, let `χ(g^a) = e(a/(p−1))` be a
//! character of full order and put `z_k = χ(k) e(k/p)` for `k = 1..p−1`. Then
//! `S(ν) = Σ_k χ^ν(k) e(kν/p)` and
//!
//! * `p ∤ ν`, `(p−1) ∤ ν`: a Gauss sum of a nonprincipal character, `|S| = √p`;
//! * `p ∤ ν`, `(p−1) | ν`: `S = −1`;
//! * `p | ν`, `(p−1) ∤ ν`: `S = 0`.
//!
//! `p(p−1)` lies past the range, so these classes are exhaustive.

use alloc::vec::Vec;

use crate::primes::{is_prime, primitive_root};
use crate::system::{UnimodularSystem, RESYNC_INTERVAL};
use crate::{Error, Result};

const CLASS_TOLERANCE: f64 = 1e-8;

/// Discrete-log table: `index[k] = a` with `g^a ≡ k (mod p)`, for `k = 1..p−1`.
fn index_table(p: u64, g: u64) -> Vec<u64> {
    let mut index = alloc::vec![0u64; p as usize];
    let mut x = 1u64;
    for a in 0..p - 1 {
        index[x as usize] = a;
        x = x * g % p;
    }
    index
}

/// Angle numerators over the common denominator `p(p−1)`, for `k = 1..p−1`.
pub fn montgomery_numerators(p: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let g = primitive_root(p)?;
    let index = index_table(p, g);
    let den = p * (p - 1);
    Ok((1..p)
        .map(|k| (index[k as usize] * p + k * (p - 1)) % den)
        .collect())
}

/// `z_k = χ(k)·e(k/p)`, angle `ind_g(k)/(p−1) + k/p (mod 1)`.
pub fn montgomery_system(p: u64) -> Result<UnimodularSystem> {
    let den = (p * (p - 1)) as f64;
    let angles = montgomery_numerators(p)?
        .into_iter()
        .map(|num| num as f64 / den)
        .collect();
    UnimodularSystem::new(angles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ValueClass {
    Gauss,
    PrincipalNonzero,
    Zero,
}

impl ValueClass {
    pub fn predicted(p: u64, nu: u64) -> Self {
        match (nu.is_multiple_of(p), nu.is_multiple_of(p - 1)) {
            (false, false) => ValueClass::Gauss,
            (false, true) => ValueClass::PrincipalNonzero,
            (true, false) => ValueClass::Zero,
            // p(p−1) | ν lies beyond the certified range
            (true, true) => ValueClass::PrincipalNonzero,
        }
    }

    pub fn target(self, p: u64) -> f64 {
        match self {
            ValueClass::Gauss => libm::sqrt(p as f64),
            ValueClass::PrincipalNonzero => 1.0,
            ValueClass::Zero => 0.0,
        }
    }

    /// The class whose target is nearest to `value`.
    pub fn nearest(p: u64, value: f64) -> Self {
        [
            ValueClass::Gauss,
            ValueClass::PrincipalNonzero,
            ValueClass::Zero,
        ]
        .into_iter()
        .min_by(|a, b| {
            (a.target(p) - value)
                .abs()
                .total_cmp(&(b.target(p) - value).abs())
        })
        .unwrap_or(ValueClass::Gauss)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct ClassHistogram {
    pub gauss: u64,
    pub principal_nonzero: u64,
    pub zero: u64,
}

impl ClassHistogram {
    fn bump(&mut self, class: ValueClass) {
        match class {
            ValueClass::Gauss => self.gauss += 1,
            ValueClass::PrincipalNonzero => self.principal_nonzero += 1,
            ValueClass::Zero => self.zero += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.gauss + self.principal_nonzero + self.zero
    }
}

/// Partial certificate over a sub-range of `ν`. Merging is associative and
/// commutative, so sub-ranges may be evaluated in any order.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateAccumulator {
    pub observed_max: f64,
    pub argmax: u64,
    pub histogram: ClassHistogram,
    pub max_deviation: f64,
    /// Smallest offending `ν` with its value and predicted target.
    pub first_violation: Option<(u64, f64, f64)>,
}

impl Default for CertificateAccumulator {
    fn default() -> Self {
        Self {
            observed_max: f64::NEG_INFINITY,
            argmax: 0,
            histogram: ClassHistogram::default(),
            max_deviation: 0.0,
            first_violation: None,
        }
    }
}

impl CertificateAccumulator {
    fn record(&mut self, p: u64, nu: u64, value: f64) {
        if value > self.observed_max || (value == self.observed_max && nu < self.argmax) {
            self.observed_max = value;
            self.argmax = nu;
        }
        let predicted = ValueClass::predicted(p, nu);
        let nearest = ValueClass::nearest(p, value);
        let deviation = (value - predicted.target(p)).abs();
        self.histogram.bump(nearest);
        self.max_deviation = self.max_deviation.max(deviation);
        if (nearest != predicted || deviation > CLASS_TOLERANCE) && self.first_violation.is_none() {
            self.first_violation = Some((nu, value, predicted.target(p)));
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        if other.observed_max > self.observed_max
            || (other.observed_max == self.observed_max && other.argmax < self.argmax)
        {
            self.observed_max = other.observed_max;
            self.argmax = other.argmax;
        }
        self.histogram.gauss += other.histogram.gauss;
        self.histogram.principal_nonzero += other.histogram.principal_nonzero;
        self.histogram.zero += other.histogram.zero;
        self.max_deviation = self.max_deviation.max(other.max_deviation);
        self.first_violation = match (self.first_violation, other.first_violation) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// `|S(ν)|` for `ν = first..=last` classified and accumulated.
pub fn certify_chunk(
    system: &UnimodularSystem,
    p: u64,
    first: u64,
    last: u64,
) -> CertificateAccumulator {
    let mut acc = CertificateAccumulator::default();
    if first > last {
        return acc;
    }
    for (nu, value) in system.sweep(first as i64, last as i64) {
        acc.record(p, nu as u64, value.norm());
    }
    acc
}

/// Machine-checked record that the Gauss-sum system for `p` attains exactly
/// `√p` as its maximum over `ν = 1..n²+n−1`, `n = p − 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct ConstructionCertificate {
    pub p: u64,
    pub n: u64,
    pub primitive_root: u64,
    pub range_top: u64,
    pub observed_max: f64,
    pub argmax: u64,
    pub theoretical_max: f64,
    pub per_nu_class: ClassHistogram,
    pub max_deviation: f64,
}

/// `n² + n − 1` for `n = p − 1`.
pub fn certificate_range_top(p: u64) -> u64 {
    let n = p - 1;
    n * n + n - 1
}

pub fn finish_certificate(p: u64, acc: CertificateAccumulator) -> Result<ConstructionCertificate> {
    if let Some((nu, value, expected)) = acc.first_violation {
        return Err(Error::CertificateViolation {
            nu,
            value,
            expected,
        });
    }
    let theoretical_max = libm::sqrt(p as f64);
    if (acc.observed_max - theoretical_max).abs() > CLASS_TOLERANCE {
        return Err(Error::CertificateViolation {
            nu: acc.argmax,
            value: acc.observed_max,
            expected: theoretical_max,
        });
    }
    Ok(ConstructionCertificate {
        p,
        n: p - 1,
        primitive_root: primitive_root(p)?,
        range_top: certificate_range_top(p),
        observed_max: acc.observed_max,
        argmax: acc.argmax,
        theoretical_max,
        per_nu_class: acc.histogram,
        max_deviation: acc.max_deviation,
    })
}

/// Splits `1..=top` at multiples of the sweep's resync interval, so chunks
/// swept independently give the same values as one sweep.
pub fn certificate_chunks(top: u64) -> Vec<(u64, u64)> {
    let r = RESYNC_INTERVAL as u64;
    let mut chunks = Vec::with_capacity((top / r + 1) as usize);
    let mut first = 1;
    while first <= top {
        let last = ((first / r + 1) * r - 1).min(top);
        chunks.push((first, last));
        first = last + 1;
    }
    chunks
}

/// Sweeps the full range and certifies the construction for prime `p ≥ 3`.
/// Cost is `O(p³)`; intended for `p` up to a few hundred.
pub fn certify(p: u64) -> Result<ConstructionCertificate> {
    let system = montgomery_system(p)?;
    let acc = certificate_chunks(certificate_range_top(p))
        .into_iter()
        .map(|(first, last)| certify_chunk(&system, p, first, last))
        .fold(
            CertificateAccumulator::default(),
            CertificateAccumulator::merge,
        );
    finish_certificate(p, acc)
}

//! Angles in turns and the unit exponential `e(x) = exp(2πix)`.

use core::f64::consts::TAU;
use num_complex::Complex64;

/// Reduces `x` to `[0, 1)`.
#[inline]
pub fn reduce(x: f64) -> f64 {
    let r = x - libm::floor(x);
    // x slightly below an integer can round up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Fractional part of `theta * nu`, using an error-free product so that the
/// phase stays accurate for large `|nu|`.
#[inline]
pub fn frac_mul(theta: f64, nu: i64) -> f64 {
    let v = nu as f64;
    let p = theta * v;
    let err = libm::fma(theta, v, -p);
    reduce((p - libm::floor(p)) + err)
}

/// `e(x) = exp(2πix)` for `x` in turns.
#[inline]
pub fn unit(x: f64) -> Complex64 {
    let r = x - libm::round(x);
    let (s, c) = libm::sincos(TAU * r);
    Complex64::new(c, s)
}

/// `e(theta * nu)` with the phase reduced before the trigonometric call.
#[inline]
pub fn unit_power(theta: f64, nu: i64) -> Complex64 {
    unit(frac_mul(theta, nu))
}

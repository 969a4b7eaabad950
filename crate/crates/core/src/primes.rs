//! Deterministic primality for `u64` and primitive roots.

use alloc::vec::Vec;

use crate::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
/// Deterministic for every `n < 3.3·10²⁴`.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn trial_division(q: u64) -> bool {
    let mut d = 5;
    while d * d <= q {
        if q.is_multiple_of(d) || q.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

fn miller_rabin(q: u64) -> bool {
    let d = (q - 1) >> (q - 1).trailing_zeros();
    let s = (q - 1).trailing_zeros();
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, q);
        if x == 1 || x == q - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, q);
            if x == q - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial division below `10⁶`, Miller–Rabin with a fixed witness set above.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if q == p {
            return true;
        }
        if q.is_multiple_of(p) {
            return false;
        }
    }
    if q < TRIAL_LIMIT {
        trial_division(q)
    } else {
        miller_rabin(q)
    }
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            out.push(d);
            while q.is_multiple_of(d) {
                q /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if q > 1 {
        out.push(q);
    }
    out
}

/// Smallest generator of `(Z/pZ)^*`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 3 {
        return Err(Error::PrimeTooSmall(p));
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .ok_or(Error::NotPrime(p))
}

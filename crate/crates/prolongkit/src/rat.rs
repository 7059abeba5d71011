//! Exact rational scalars.
//!
//! Every computation in this crate runs over arbitrary-precision rationals,
//! kept in lowest terms with positive denominator by `num_rational`. There
//! are no tolerances anywhere: a quantity is zero iff it is exactly zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Exact rational number, always reduced, denominator positive.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` with optional sign.
pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<Rat>()
        .map_err(|_| Error::ParseRational(s.to_string()))
}

/// Renders in the canonical `"p"` / `"p/q"` form used by all JSON output.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Reduces `x` modulo a prime `p`, mapping the denominator to its inverse.
///
/// Fails with `BadPrime` when the denominator vanishes mod `p`.
pub fn rat_mod_p(x: &Rat, p: u64) -> Result<u64> {
    let num = bigint_mod_p(x.numer(), p);
    let den = bigint_mod_p(x.denom(), p);
    if den == 0 {
        return Err(Error::BadPrime {
            p,
            reason: format!("denominator {} vanishes mod p", x.denom()),
        });
    }
    Ok(mulmod(num, inv_mod_p(den, p), p))
}

fn bigint_mod_p(n: &BigInt, p: u64) -> u64 {
    let p_big = BigInt::from(p);
    let mut r = n % &p_big;
    if r.is_negative() {
        r += &p_big;
    }
    let (_, digits) = r.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0],
        _ => unreachable!("residue below a 64-bit modulus"),
    }
}

/// `a * b mod p` for `p < 2^63`.
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Modular inverse by Fermat, `p` prime, `a != 0 mod p`.
pub fn inv_mod_p(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

pub fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// First prime `>= lo` (for drawing random 30-bit primes).
pub fn next_prime(mut lo: u64) -> u64 {
    if lo <= 2 {
        return 2;
    }
    if lo.is_multiple_of(2) {
        lo += 1;
    }
    while !is_prime_u64(lo) {
        lo += 2;
    }
    lo
}

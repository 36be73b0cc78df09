//! Elementary modular arithmetic: gcd, modular inverses, primality by trial
//! division, factorization, multiplicative functions, primitive roots, and
//! the complex exponential e(x) = exp(2πi·x).
//!
//! All modular products go through u128 intermediates so that moduli up to
//! 2^63 are safe without overflow.

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// e(x) = exp(2πi·x), the standard additive character on ℝ/ℤ.
pub fn e(x: f64) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * x;
    Complex64::new(t.cos(), t.sin())
}

/// Greatest common divisor (Euclid).
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// gcd for possibly negative first argument, reduced into [0, m).
pub fn gcd_signed(a: i64, m: u64) -> u64 {
    gcd(a.rem_euclid(m as i64) as u64, m)
}

/// a·b mod m with a u128 intermediate.
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by binary exponentiation.
pub fn powmod(a: u64, mut e: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    if m == 1 {
        return 0;
    }
    let mut base = a % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Inverse of a mod m via the extended Euclidean algorithm.
///
/// # Errors
/// [`Error::NotCoprime`] when gcd(a, m) > 1.
pub fn mod_inverse(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::DomainError("modulus must be positive".into()));
    }
    if m == 1 {
        return Ok(0);
    }
    let a_red = a.rem_euclid(m as i64) as u64;
    // Extended Euclid on (a_red, m), tracking only the coefficient of a_red.
    let (mut old_r, mut r) = (a_red as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotCoprime {
            a,
            m,
            g: old_r as u64,
        });
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic primality by trial division (intended for moduli ≤ ~10^12).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0u32;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of divisors τ(n).
pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| (e as u64) + 1).product()
}

/// Euler's totient φ(n).
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Möbius function μ(n) as an i64 in {−1, 0, 1}.
pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Smallest primitive root mod p (p an odd prime, or p = 2).
///
/// # Errors
/// [`Error::DomainError`] when p is not prime.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::DomainError(format!(
            "primitive_root requires a prime, got {p}"
        )));
    }
    if p == 2 {
        return Ok(1);
    }
    let phi = p - 1;
    let prime_divisors: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    for g in 2..p {
        if prime_divisors.iter().all(|&q| powmod(g, phi / q, p) != 1) {
            return Ok(g);
        }
    }
    unreachable!("every prime has a primitive root");
}

/// Solve x ≡ r1 (mod m1), x ≡ r2 (mod m2) for coprime m1, m2.
///
/// # Errors
/// [`Error::NotCoprime`] when gcd(m1, m2) > 1.
pub fn crt_combine(r1: u64, m1: u64, r2: u64, m2: u64) -> Result<u64> {
    let m1_inv = mod_inverse(m1 as i64, m2)?;
    // x = r1 + m1 * t with t ≡ (r2 − r1)·m1^{-1} (mod m2).
    let diff = (r2 as i64 - (r1 % m2) as i64).rem_euclid(m2 as i64) as u64;
    let t = mulmod(diff, m1_inv, m2);
    Ok(r1 + m1 * t)
}

/// Split e(a / (m1·m2)) over a coprime factorization of the modulus:
/// e(a/(m1·m2)) = e(a·m̄2/m1) · e(a·m̄1/m2), where m̄2·m2 ≡ 1 (mod m1)
/// and m̄1·m1 ≡ 1 (mod m2). Returns the two factors.
///
/// # Errors
/// [`Error::NotCoprime`] when gcd(m1, m2) > 1.
pub fn split_additive_character(a: u64, m1: u64, m2: u64) -> Result<(Complex64, Complex64)> {
    let m2_inv_mod_m1 = mod_inverse(m2 as i64, m1)?;
    let m1_inv_mod_m2 = mod_inverse(m1 as i64, m2)?;
    let f1 = e(mulmod(a % m1, m2_inv_mod_m1, m1) as f64 / m1 as f64);
    let f2 = e(mulmod(a % m2, m1_inv_mod_m2, m2) as f64 / m2 as f64);
    Ok((f1, f2))
}

/// Primes in [lo, hi] by trial division (small ranges only).
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

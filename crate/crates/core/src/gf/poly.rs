//! Polynomials over a prime field GF(p), coefficients little-endian.
//!
//! Only what modulus validation and root search need: remainder, evaluation
//! of the trial-division irreducibility test, and monic enumeration.

/// Remainder of `a` modulo the monic polynomial `b`.
pub(crate) fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = degree(b).expect("divisor must be nonzero");
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let lead_inv = inv_mod(b[db], p) as u64;
    while let Some(dr) = degree_u64(&r) {
        if dr < db {
            break;
        }
        let factor = r[dr] * lead_inv % p64;
        let shift = dr - db;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            let sub = factor * bj as u64 % p64;
            r[shift + j] = (r[shift + j] + p64 - sub) % p64;
        }
    }
    let mut out: Vec<u32> = r.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn degree_u64(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-p
/// digits of `low`.
pub(crate) fn monic_from_index(low: u64, d: usize, p: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut rest = low;
    for _ in 0..d {
        coeffs.push((rest % p as u64) as u32);
        rest /= p as u64;
    }
    coeffs.push(1);
    coeffs
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(m) = degree(f) else {
        return false;
    };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let g = monic_from_index(low, d, p);
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

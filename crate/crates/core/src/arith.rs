//! Exact integer arithmetic shared by the exponential-sum modules: modular
//! inverses, extended gcd, multiplicative functions, additive characters
//! `e(a/q)`, and helpers for rounding numerically-computed sums to integers.

use crate::{C, F};
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ArithError {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: i64, modulus: i64 },
    #[error("sum {re}+{im}i of {terms} terms is not within {tol} of an integer")]
    RoundingOverflow {
        re: F,
        im: F,
        terms: usize,
        tol: F,
    },
}

/// Extended gcd over `i128`: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b)`
/// and `g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, u, v) = ext_gcd(b, a.rem_euclid(b));
    // g = u*b + v*(a - floor(a/b)*b)
    (g, v, u - a.div_euclid(b) * v)
}

/// Least nonnegative residue of `a` modulo `m > 0`.
pub fn reduce(a: i64, m: i64) -> i64 {
    debug_assert!(m > 0);
    a.rem_euclid(m)
}

/// Inverse of `a` modulo `m > 0`, as a least nonnegative residue.
pub fn mod_inverse(a: i64, m: i64) -> Result<i64, ArithError> {
    assert!(m > 0, "modulus must be positive");
    if m == 1 {
        return Ok(0);
    }
    let (g, u, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return Err(ArithError::NotInvertible {
            value: a,
            modulus: m,
        });
    }
    Ok((u.rem_euclid(m as i128)) as i64)
}

/// gcd of two possibly-negative integers, with `gcd(0, x) = |x|`.
pub fn gcd64(a: i64, b: i64) -> i64 {
    a.unsigned_abs().gcd(&b.unsigned_abs()) as i64
}

/// `e(a/q) = exp(2 pi i a / q)`; the argument is reduced mod `q` first so the
/// phase never loses accuracy to a large numerator.
pub fn additive_char(a: i128, q: i64) -> C {
    debug_assert!(q > 0);
    let r = a.rem_euclid(q as i128) as F;
    let theta = 2.0 * std::f64::consts::PI * r / q as F;
    C::new(theta.cos(), theta.sin())
}

/// Precomputed table of `e(r/q)` for `r = 0..q`, for inner loops that hit the
/// same modulus many times.
pub struct CharTable {
    q: i64,
    table: Vec<C>,
}

impl CharTable {
    pub fn new(q: i64) -> Self {
        assert!(q > 0);
        let table = (0..q).map(|r| additive_char(r as i128, q)).collect();
        CharTable { q, table }
    }

    pub fn modulus(&self) -> i64 {
        self.q
    }

    #[inline]
    pub fn eval(&self, a: i128) -> C {
        self.table[a.rem_euclid(self.q as i128) as usize]
    }
}

/// Trial-division factorization as `(prime, exponent)` pairs in increasing
/// prime order.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    assert!(n > 0);
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n > 0);
    let mut out = n;
    for (p, _) in factorize(n) {
        out = out / p * (p - 1);
    }
    out
}

/// All positive divisors of `n`, sorted increasingly.
/// All primes up to and including `n`, by sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0);
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        let mut pk = 1u64;
        for _ in 0..=e {
            for d in &out {
                next.push(d * pk);
            }
            pk *= p;
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// Ramanujan sum `r_q(n) = sum over units a mod q of e(an/q)`, computed
/// exactly through the divisor form `sum_{d | (q, n)} d * mu(q/d)`.
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    assert!(q > 0);
    let g = if n == 0 {
        q
    } else {
        gcd64(q as i64, n) as u64
    };
    divisors(g)
        .into_iter()
        .map(|d| d as i64 * mobius(q / d))
        .sum()
}

/// Direct unit-sum evaluation of the Ramanujan sum; reference implementation
/// for [`ramanujan_sum`].
pub fn ramanujan_sum_enumerated(q: u64, n: i64) -> Result<i64, ArithError> {
    assert!(q > 0);
    let mut acc = C::new(0.0, 0.0);
    let mut terms = 0usize;
    for a in 0..q as i64 {
        if gcd64(a, q as i64) == 1 {
            acc += additive_char(a as i128 * n as i128, q as i64);
            terms += 1;
        }
    }
    round_complex_to_int(acc, terms.max(1))
}

/// Rounds a complex accumulation of `terms` unit-modulus summands to the
/// nearest integer, failing if the value sits farther than `1e-6 * terms`
/// from an integer point or has a comparable imaginary part.
pub fn round_complex_to_int(z: C, terms: usize) -> Result<i64, ArithError> {
    let tol = 1e-6 * terms.max(1) as F;
    let r = z.re.round();
    if (z.re - r).abs() > tol || z.im.abs() > tol {
        return Err(ArithError::RoundingOverflow {
            re: z.re,
            im: z.im,
            terms,
            tol,
        });
    }
    Ok(r as i64)
}

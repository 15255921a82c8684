//! Enumeration of the sparse Kloosterman families on the geometric side.
//!
//! Opening the arithmetic weight attached to an odd prime `p` in the
//! relative trace formula leaves four explicit contributions: a diagonal
//! term `P * delta * integral(h * spec)` with `P = p^2 + p + 1`, two
//! rank-lowering families supported on moduli pairs locked together by a
//! square relation, and a generic twisted family over all pairs divisible
//! by `p`.  This module solves the support conditions directly, attaches
//! the normalized Kloosterman value and the argument(s) of the integral
//! transform to every admissible pair, and re-derives the same pair sets
//! by brute-force filtering of the full `(D1, D2)` grid so the two
//! constructions can be compared.

use crate::archimedean::{spectral_integral, QuadratureSpec, TestFunctionSpec};
use crate::arith::{gcd64, is_prime};
use crate::kloosterman::{gl3_tilde_sum, gl3_twisted_sum, KloostermanError, KloostermanQuery};
use crate::{C, F};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible product `D1 * D2`; the enumerators are quadratic in
/// the moduli, so the ceiling keeps a full sweep under a minute.
pub const MAX_CUTOFF: i64 = 100_000;

/// Fallback oscillation exponent for the approximate-cutoff weights.
pub const DEFAULT_AFE_ALPHA: F = 0.04;

#[derive(Debug, Error, PartialEq)]
pub enum GeometricError {
    #[error("level {0} must be an odd prime")]
    BadLevel(i64),
    #[error("m1, m2, n1, n2 must be positive, got ({0}, {1}, {2}, {3})")]
    NonPositive(i64, i64, i64, i64),
    #[error("m1*m2 = {0} must be coprime to 2p = {1}")]
    RamifiedIndex(i64, i64),
    #[error("cutoff {0} outside 1..={MAX_CUTOFF}")]
    BadCutoff(i64),
    #[error("oscillation exponent {0} outside the open interval (0, 1/2)")]
    BadAlpha(F),
    #[error(transparent)]
    Sum(#[from] KloostermanError),
}

/// Inputs of a geometric-side evaluation: the prime level, the four Fourier
/// indices, the modulus-product cutoff, and the oscillation exponent used
/// by the approximate-cutoff weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricTermSpec {
    pub p: i64,
    pub m1: i64,
    pub m2: i64,
    pub n1: i64,
    pub n2: i64,
    pub cutoff: i64,
    pub afe_alpha: F,
}

impl GeometricTermSpec {
    pub fn new(p: i64, m1: i64, m2: i64, n1: i64, n2: i64, cutoff: i64) -> Self {
        GeometricTermSpec {
            p,
            m1,
            m2,
            n1,
            n2,
            cutoff,
            afe_alpha: DEFAULT_AFE_ALPHA,
        }
    }

    pub fn validate(&self) -> Result<(), GeometricError> {
        if self.p < 3 || self.p % 2 == 0 || !is_prime(self.p as u64) {
            return Err(GeometricError::BadLevel(self.p));
        }
        if self.m1 < 1 || self.m2 < 1 || self.n1 < 1 || self.n2 < 1 {
            return Err(GeometricError::NonPositive(
                self.m1, self.m2, self.n1, self.n2,
            ));
        }
        let m = self.m1 * self.m2;
        if gcd64(m, 2 * self.p) != 1 {
            return Err(GeometricError::RamifiedIndex(m, 2 * self.p));
        }
        if self.cutoff < 1 || self.cutoff > MAX_CUTOFF {
            return Err(GeometricError::BadCutoff(self.cutoff));
        }
        if !(self.afe_alpha > 0.0 && self.afe_alpha < 0.5) {
            return Err(GeometricError::BadAlpha(self.afe_alpha));
        }
        Ok(())
    }

    /// The diagonal mass `P = p^2 + p + 1` of the weight at the level prime.
    pub fn big_p(&self) -> i64 {
        self.p * (self.p + 1) + 1
    }
}

/// One term of a rank-lowering family: the sign, the moduli pair, the
/// Kloosterman value already divided by `D1 * D2`, and the argument at
/// which the one-variable integral transform is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricTerm {
    pub eps: i64,
    pub d1: i64,
    pub d2: i64,
    pub value: C,
    pub arg: F,
}

/// One term of the generic family: two signs, the moduli pair, the twisted
/// sum divided by `D1 * D2`, and the two transform arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistedTerm {
    pub eps1: i64,
    pub eps2: i64,
    pub d1: i64,
    pub d2: i64,
    pub value: C,
    pub arg1: F,
    pub arg2: F,
}

/// Moduli pairs of the first rank-lowering family, solved directly: the
/// relation `m2 * D1 = n1 * D2^2` pins `D1` to `D2`, so a single walk over
/// `D2` with the cubic product bound `n1 * D2^3 <= m2 * cutoff` finds every
/// admissible pair `(D1, D2)` with `p * D2 | D1` and `D1 * D2 <= cutoff`.
pub fn s4_pairs(spec: &GeometricTermSpec) -> Result<Vec<(i64, i64)>, GeometricError> {
    spec.validate()?;
    let mut out = Vec::new();
    let mut d2: i64 = 1;
    while (spec.n1 as i128) * (d2 as i128).pow(3) <= (spec.m2 as i128) * (spec.cutoff as i128) {
        let num = spec.n1 * d2 * d2;
        if num % spec.m2 == 0 {
            let d1 = num / spec.m2;
            if d1 % (spec.p * d2) == 0 && d1 * d2 <= spec.cutoff {
                out.push((d1, d2));
            }
        }
        d2 += 1;
    }
    Ok(out)
}

/// Moduli pairs of the mirror family: `m1 * D2 = n2 * D1^2` with the chain
/// `p | D1 | D2`, found by walking multiples of `p`.
pub fn s5_pairs(spec: &GeometricTermSpec) -> Result<Vec<(i64, i64)>, GeometricError> {
    spec.validate()?;
    let mut out = Vec::new();
    let mut d1 = spec.p;
    while (spec.n2 as i128) * (d1 as i128).pow(3) <= (spec.m1 as i128) * (spec.cutoff as i128) {
        let num = spec.n2 * d1 * d1;
        if num % spec.m1 == 0 {
            let d2 = num / spec.m1;
            if d2 % d1 == 0 && d1 * d2 <= spec.cutoff {
                out.push((d1, d2));
            }
        }
        d1 += spec.p;
    }
    Ok(out)
}

/// Moduli pairs of the generic family: everything with `p | D1`, `p | D2`
/// and `D1 * D2 <= cutoff`, ordered by `D1` then `D2`.
pub fn s6_pairs(spec: &GeometricTermSpec) -> Result<Vec<(i64, i64)>, GeometricError> {
    spec.validate()?;
    let mut out = Vec::new();
    let mut d1 = spec.p;
    while d1 * spec.p <= spec.cutoff {
        let mut d2 = spec.p;
        while d1 * d2 <= spec.cutoff {
            out.push((d1, d2));
            d2 += spec.p;
        }
        d1 += spec.p;
    }
    Ok(out)
}

/// Brute-force counterpart of [`s4_pairs`]: filters the full grid
/// `D1 * D2 <= cutoff` by the literal support conditions.
pub fn s4_pairs_enumerated(spec: &GeometricTermSpec) -> Result<Vec<(i64, i64)>, GeometricError> {
    grid_filter(spec, |s, d1, d2| {
        d1 % (s.p * d2) == 0 && s.m2 * d1 == s.n1 * d2 * d2
    })
}

/// Brute-force counterpart of [`s5_pairs`].
pub fn s5_pairs_enumerated(spec: &GeometricTermSpec) -> Result<Vec<(i64, i64)>, GeometricError> {
    grid_filter(spec, |s, d1, d2| {
        d1 % s.p == 0 && d2 % d1 == 0 && s.m1 * d2 == s.n2 * d1 * d1
    })
}

/// Brute-force counterpart of [`s6_pairs`].
pub fn s6_pairs_enumerated(spec: &GeometricTermSpec) -> Result<Vec<(i64, i64)>, GeometricError> {
    grid_filter(spec, |s, d1, d2| d1 % s.p == 0 && d2 % s.p == 0)
}

fn grid_filter(
    spec: &GeometricTermSpec,
    keep: impl Fn(&GeometricTermSpec, i64, i64) -> bool,
) -> Result<Vec<(i64, i64)>, GeometricError> {
    spec.validate()?;
    let mut out = Vec::new();
    for d1 in 1..=spec.cutoff {
        for d2 in 1..=spec.cutoff / d1 {
            if keep(spec, d1, d2) {
                out.push((d1, d2));
            }
        }
    }
    Ok(out)
}

/// Terms of the first rank-lowering family.  For each admissible pair the
/// two signs contribute `S~(-eps*n2, m2, m1; D2, D1) / (D1 * D2)` evaluated
/// at the argument `eps * m1 * m2 * n2 / (D1 * D2)`.
pub fn enumerate_s4_terms(spec: &GeometricTermSpec) -> Result<Vec<GeometricTerm>, GeometricError> {
    let mut out = Vec::new();
    for (d1, d2) in s4_pairs(spec)? {
        let dd = (d1 * d2) as F;
        for eps in [1i64, -1] {
            let q = KloostermanQuery::untwisted(-eps * spec.n2, spec.m2, spec.m1, 1, d2, d1);
            out.push(GeometricTerm {
                eps,
                d1,
                d2,
                value: gl3_tilde_sum(&q)? / dd,
                arg: (eps * spec.m1 * spec.m2 * spec.n2) as F / dd,
            });
        }
    }
    Ok(out)
}

/// Terms of the mirror family: `S~(eps*n1, m1, m2; D1, D2) / (D1 * D2)` at
/// the argument `eps * n1 * m1 * m2 / (D1 * D2)`.
pub fn enumerate_s5_terms(spec: &GeometricTermSpec) -> Result<Vec<GeometricTerm>, GeometricError> {
    let mut out = Vec::new();
    for (d1, d2) in s5_pairs(spec)? {
        let dd = (d1 * d2) as F;
        for eps in [1i64, -1] {
            let q = KloostermanQuery::untwisted(eps * spec.n1, spec.m1, spec.m2, 1, d1, d2);
            out.push(GeometricTerm {
                eps,
                d1,
                d2,
                value: gl3_tilde_sum(&q)? / dd,
                arg: (eps * spec.n1 * spec.m1 * spec.m2) as F / dd,
            });
        }
    }
    Ok(out)
}

/// Terms of the generic family: the level-twisted sum
/// `S^(p)(eps2*n2, eps1*n1, m1, m2; D1, D2) / (D1 * D2)` paired with the
/// two-variable transform arguments
/// `(-eps2 * m1 * n2 * D2 / D1^2, -eps1 * m2 * n1 * D1 / D2^2)`.
pub fn enumerate_s6_terms(spec: &GeometricTermSpec) -> Result<Vec<TwistedTerm>, GeometricError> {
    let mut out = Vec::new();
    for (d1, d2) in s6_pairs(spec)? {
        let dd = (d1 * d2) as F;
        for (eps1, eps2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
            let q = KloostermanQuery::new(
                eps2 * spec.n2,
                eps1 * spec.n1,
                spec.m1,
                spec.m2,
                d1,
                d2,
                spec.p,
            );
            out.push(TwistedTerm {
                eps1,
                eps2,
                d1,
                d2,
                value: gl3_twisted_sum(&q)? / dd,
                arg1: -(eps2 * spec.m1 * spec.n2 * d2) as F / (d1 as F * d1 as F),
                arg2: -(eps1 * spec.m2 * spec.n1 * d1) as F / (d2 as F * d2 as F),
            });
        }
    }
    Ok(out)
}

/// Diagonal contribution `P * delta * integral(h * spec)`: vanishes unless
/// both index pairs agree, and otherwise carries the full weight mass
/// `P = p^2 + p + 1` against the spectral integral of the test function.
pub fn delta_term(
    spec: &GeometricTermSpec,
    h: &TestFunctionSpec,
    quad: &QuadratureSpec,
) -> Result<C, GeometricError> {
    spec.validate()?;
    if spec.m1 != spec.n1 || spec.m2 != spec.n2 {
        return Ok(C::new(0.0, 0.0));
    }
    Ok(spectral_integral(h, quad) * spec.big_p() as F)
}

//! Satake parameters, Schur-polynomial Fourier coefficients `A(m, n)`, and
//! executable Hecke-relation checks.
//!
//! Local data at a prime is a triple `(α, β, γ)` of complex numbers.  The
//! prime-power coefficient is the Schur polynomial
//! `A(p^k, p^l) = s_{(k+l, k, 0)}(α, β, γ)`, extended to all arguments by
//! multiplicativity.  The default Schur evaluation is the combinatorial
//! monomial sum over Gelfand–Tsetlin patterns (exact for repeated or zero
//! parameters), with a Jacobi–Trudi recurrence taking over for exponents
//! beyond the tableau cutoff; the singular bialternant determinant ratio is
//! kept only as a cross-check oracle.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;
use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use serde_json::json;
use thiserror::Error;

use crate::arith::{divisors, factorize, mobius};
use crate::report::{elapsed_ms, VerificationReport};
use crate::{C, F};

/// Exponent ceiling below which the tableau monomial sum is used directly.
const MONOMIAL_CUTOFF: u32 = 60;

const UNITARITY_TOL: F = 1e-10;
const IMAGINARY_TOL: F = 1e-12;

#[derive(Debug, Error)]
pub enum HeckeError {
    /// A parameter that must be purely imaginary has a real part.
    #[error("parameter {name} = {re}+{im}i must be purely imaginary")]
    NotImaginary { name: &'static str, re: F, im: F },
    /// An unramified triple fails unitarity (αβγ = 1 and inverse/conjugate
    /// multiset symmetry).
    #[error("unramified triple violates unitarity: defect {defect:.3e}")]
    NotUnitary { defect: F },
    /// The determinant-ratio Schur path was requested with nearly coinciding
    /// parameters.
    #[error("bialternant Schur evaluation is singular: |Vandermonde| = {vandermonde:.3e}")]
    DegenerateParameters { vandermonde: F },
    /// A coefficient was requested at a prime with no local data.
    #[error("no local Satake data at prime {0}")]
    MissingPrime(u64),
}

/// Which point of the spectrum the local parameters come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalKind {
    /// Generic unramified local data subject to unitarity.
    Unramified,
    /// Steinberg-type local data at a ramified prime: `α = p^{-1/2-ρ}`,
    /// `β = p^{2ρ}`, `γ = 0` with `ρ` purely imaginary.
    RamifiedSteinberg { rho: C },
    /// Minimal-parabolic continuous data `(p^{s1}, p^{s2}, p^{-s1-s2})`.
    EisensteinMin { s1: C, s2: C },
    /// Maximal-parabolic data `(a_p·p^s, b_p·p^s, p^{-2s})` built from a
    /// degree-2 pair `(a_p, b_p)`.
    EisensteinMax { a_p: C, b_p: C, s: C },
}

/// Local parameter triple `(α, β, γ)` at one prime.
#[derive(Debug, Clone, Copy)]
pub struct SatakeTriple {
    pub alpha: C,
    pub beta: C,
    pub gamma: C,
    pub kind: LocalKind,
}

/// `p^z` on the principal branch, for a positive prime `p`.
pub(crate) fn p_pow(p: u64, z: C) -> C {
    Complex::new(p as F, 0.0).powc(z)
}

fn require_imaginary(name: &'static str, z: C) -> Result<(), HeckeError> {
    if z.re.abs() < IMAGINARY_TOL {
        Ok(())
    } else {
        Err(HeckeError::NotImaginary {
            name,
            re: z.re,
            im: z.im,
        })
    }
}

/// Smallest max-distance over all pairings of two 3-element multisets.
fn multiset_distance(a: [C; 3], b: [C; 3]) -> F {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS
        .iter()
        .map(|perm| {
            (0..3)
                .map(|i| (a[i] - b[perm[i]]).norm())
                .fold(0.0, F::max)
        })
        .fold(F::INFINITY, F::min)
}

impl SatakeTriple {
    /// Generic unramified data; enforces `αβγ = 1` and the inverse/conjugate
    /// multiset symmetry, both within 1e-10.
    pub fn unramified(alpha: C, beta: C, gamma: C) -> Result<Self, HeckeError> {
        let t = SatakeTriple {
            alpha,
            beta,
            gamma,
            kind: LocalKind::Unramified,
        };
        let defect = t.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(HeckeError::NotUnitary { defect });
        }
        Ok(t)
    }

    /// Steinberg-type data at a ramified prime `p` with purely imaginary `ρ`.
    pub fn ramified_steinberg(p: u64, rho: C) -> Result<Self, HeckeError> {
        require_imaginary("rho", rho)?;
        Ok(SatakeTriple {
            alpha: p_pow(p, -rho - 0.5),
            beta: p_pow(p, 2.0 * rho),
            gamma: C::new(0.0, 0.0),
            kind: LocalKind::RamifiedSteinberg { rho },
        })
    }

    /// Minimal-parabolic data `(p^{s1}, p^{s2}, p^{-s1-s2})`.
    pub fn eisenstein_min(p: u64, s1: C, s2: C) -> Result<Self, HeckeError> {
        require_imaginary("s1", s1)?;
        require_imaginary("s2", s2)?;
        Ok(SatakeTriple {
            alpha: p_pow(p, s1),
            beta: p_pow(p, s2),
            gamma: p_pow(p, -s1 - s2),
            kind: LocalKind::EisensteinMin { s1, s2 },
        })
    }

    /// Maximal-parabolic data `(a_p·p^s, b_p·p^s, p^{-2s})`.
    pub fn eisenstein_max(p: u64, a_p: C, b_p: C, s: C) -> Result<Self, HeckeError> {
        require_imaginary("s", s)?;
        let shift = p_pow(p, s);
        Ok(SatakeTriple {
            alpha: a_p * shift,
            beta: b_p * shift,
            gamma: p_pow(p, -2.0 * s),
            kind: LocalKind::EisensteinMax { a_p, b_p, s },
        })
    }

    /// Uniformly random tempered unramified data: `α, β` on the unit circle
    /// and `γ = 1/(αβ)`.
    pub fn random_tempered<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;
        let a = Complex::from_polar(1.0, rng.gen_range(0.0..two_pi));
        let b = Complex::from_polar(1.0, rng.gen_range(0.0..two_pi));
        SatakeTriple {
            alpha: a,
            beta: b,
            gamma: (a * b).conj(),
            kind: LocalKind::Unramified,
        }
    }

    pub fn params(&self) -> [C; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    /// Max of the `|αβγ - 1|` defect and the inverse/conjugate multiset
    /// mismatch; near zero exactly for unitary unramified data.
    pub fn unitarity_defect(&self) -> F {
        let prod = self.alpha * self.beta * self.gamma;
        let det = (prod - 1.0).norm();
        let min_mod = self.params().iter().map(|z| z.norm()).fold(F::INFINITY, F::min);
        if min_mod < 1e-13 {
            return F::INFINITY;
        }
        let inv = [1.0 / self.alpha, 1.0 / self.beta, 1.0 / self.gamma];
        let conj = [self.alpha.conj(), self.beta.conj(), self.gamma.conj()];
        det.max(multiset_distance(inv, conj))
    }

    /// Whether every parameter has unit modulus within `tol`.
    pub fn is_tempered(&self, tol: F) -> bool {
        self.params().iter().all(|z| (z.norm() - 1.0).abs() <= tol)
    }
}

/// Number of monomials of `s_{(k+l,k,0)}`, i.e. the value at `(1,1,1)`:
/// `(k+1)(l+1)(k+l+2)/2`.
pub fn schur_dimension(k: u32, l: u32) -> F {
    let (k, l) = (k as F, l as F);
    (k + 1.0) * (l + 1.0) * (k + l + 2.0) / 2.0
}

fn power_table(z: C, n: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = C::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(acc);
        acc *= z;
    }
    out
}

/// Monomial sum over Gelfand–Tsetlin patterns with top row `(k+l, k, 0)`.
fn schur_monomial(x: [C; 3], k: u32, l: u32) -> C {
    let (k, l) = (k as usize, l as usize);
    let top = 2 * k + l;
    let pa = power_table(x[0], top);
    let pb = power_table(x[1], top);
    let pc = power_table(x[2], top);
    let mut acc = C::new(0.0, 0.0);
    for b1 in k..=k + l {
        for b2 in 0..=k {
            let mid = pc[top - b1 - b2];
            let mut row = C::new(0.0, 0.0);
            for c1 in b2..=b1 {
                row += pa[c1] * pb[b1 + b2 - c1];
            }
            acc += mid * row;
        }
    }
    acc
}

/// `s_{(k+l,k,0)}` via the Jacobi–Trudi determinant in complete homogeneous
/// polynomials, which are filled in by the Newton-style recurrence
/// `h_n = e1·h_{n-1} - e2·h_{n-2} + e3·h_{n-3}`.
fn schur_jacobi_trudi(x: [C; 3], k: u32, l: u32) -> C {
    let (k, l) = (k as usize, l as usize);
    let e1 = x[0] + x[1] + x[2];
    let e2 = x[0] * x[1] + x[1] * x[2] + x[2] * x[0];
    let e3 = x[0] * x[1] * x[2];
    let n = k + l + 1;
    let mut h = vec![C::new(0.0, 0.0); n + 1];
    h[0] = C::new(1.0, 0.0);
    if n >= 1 {
        h[1] = e1;
    }
    if n >= 2 {
        h[2] = e1 * h[1] - e2;
    }
    for m in 3..=n {
        h[m] = e1 * h[m - 1] - e2 * h[m - 2] + e3 * h[m - 3];
    }
    let h_km1 = if k == 0 { C::new(0.0, 0.0) } else { h[k - 1] };
    h[k] * h[k + l] - h_km1 * h[k + l + 1]
}

/// Prime-power coefficient `A(p^k, p^l) = s_{(k+l, k, 0)}(α, β, γ)`.
///
/// The tableau monomial sum handles zero or coinciding parameters exactly; it
/// never falls back to the singular determinant ratio, so no degeneracy error
/// can arise here.
pub fn schur_coefficient(t: &SatakeTriple, k: u32, l: u32) -> C {
    if k + l <= MONOMIAL_CUTOFF {
        schur_monomial(t.params(), k, l)
    } else {
        schur_jacobi_trudi(t.params(), k, l)
    }
}

fn det3(m: [[C; 3]; 3]) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Bialternant (determinant-ratio) evaluation of `s_{(k+l,k,0)}`, used as a
/// cross-check oracle; fails on nearly coinciding parameters.
pub fn schur_determinant_ratio(t: &SatakeTriple, k: u32, l: u32) -> Result<C, HeckeError> {
    let [a, b, c] = t.params();
    let vandermonde = (a - b) * (a - c) * (b - c);
    if vandermonde.norm() < 1e-12 {
        return Err(HeckeError::DegenerateParameters {
            vandermonde: vandermonde.norm(),
        });
    }
    let col = |z: C| [z.powu(k + l + 2), z.powu(k + 1), C::new(1.0, 0.0)];
    let num = det3([col(a), col(b), col(c)]);
    Ok(num / vandermonde)
}

/// Prime-indexed local data together with a memo table for assembled
/// coefficients.  The memo admits concurrent readers; writes are idempotent
/// because every insertion for a key reproduces the same value.
#[derive(Debug)]
pub struct CoefficientSource {
    local: BTreeMap<u64, SatakeTriple>,
    memo: RwLock<HashMap<(u64, u64), C>>,
}

impl CoefficientSource {
    pub fn new(local: BTreeMap<u64, SatakeTriple>) -> Self {
        CoefficientSource {
            local,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, SatakeTriple)>) -> Self {
        Self::new(pairs.into_iter().collect())
    }

    /// Independent tempered data at each listed prime.
    pub fn random_tempered<R: Rng + ?Sized>(primes: &[u64], rng: &mut R) -> Self {
        Self::from_pairs(
            primes
                .iter()
                .map(|&p| (p, SatakeTriple::random_tempered(rng))),
        )
    }

    pub fn insert(&mut self, p: u64, t: SatakeTriple) {
        self.local.insert(p, t);
    }

    pub fn triple(&self, p: u64) -> Option<&SatakeTriple> {
        self.local.get(&p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.local.keys().copied()
    }

    /// Multiplicative coefficient `A(m, n)`, memoized.
    pub fn coefficient(&self, m: u64, n: u64) -> Result<C, HeckeError> {
        if let Some(v) = self.memo.read().unwrap().get(&(m, n)) {
            return Ok(*v);
        }
        let v = self.coefficient_direct(m, n)?;
        self.memo.write().unwrap().insert((m, n), v);
        Ok(v)
    }

    /// Non-memoized evaluation: the product of Schur values over the primes
    /// of `m·n`.
    pub fn coefficient_direct(&self, m: u64, n: u64) -> Result<C, HeckeError> {
        assert!(m >= 1 && n >= 1, "coefficient arguments must be positive");
        let mut expo: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
        for (p, e) in factorize(m) {
            expo.entry(p).or_insert((0, 0)).0 = e;
        }
        for (p, e) in factorize(n) {
            expo.entry(p).or_insert((0, 0)).1 = e;
        }
        let mut acc = C::new(1.0, 0.0);
        for (p, (k, l)) in expo {
            let t = self.local.get(&p).ok_or(HeckeError::MissingPrime(p))?;
            acc *= schur_coefficient(t, k, l);
        }
        Ok(acc)
    }
}

fn relative_tolerance(lhs: C, rhs: C, rel: F) -> F {
    rel * lhs.norm().max(rhs.norm()).max(1.0)
}

/// Checks the two-variable Hecke expansion
/// `A(m, n1·n2) = Σ_{abc=n1, b|mc, c|n2} μ(b)μ(c) A(mc/b, n2/c) A(1, a)`.
pub fn check_hecke_mn(
    src: &CoefficientSource,
    m: u64,
    n1: u64,
    n2: u64,
) -> Result<VerificationReport, HeckeError> {
    let start = Instant::now();
    let lhs = src.coefficient(m, n1 * n2)?;
    let mut rhs = C::new(0.0, 0.0);
    for a in divisors(n1) {
        let mu_a = src.coefficient(1, a)?;
        for b in divisors(n1 / a) {
            let c = n1 / a / b;
            let (mb, mc) = (mobius(b), mobius(c));
            if mb == 0 || mc == 0 || (m * c) % b != 0 || n2 % c != 0 {
                continue;
            }
            rhs += (mb * mc) as F * src.coefficient(m * c / b, n2 / c)? * mu_a;
        }
    }
    Ok(VerificationReport::compare(
        "hecke",
        "coefficient-convolution-expansion",
        json!({ "m": m, "n1": n1, "n2": n2 }),
        lhs,
        rhs,
        relative_tolerance(lhs, rhs, 1e-9),
        elapsed_ms(start),
    ))
}

/// Checks the product expansion
/// `A(n,1)·A(m1,m2) = Σ_{d0d1d2=n, d1|m1, d2|m2} A(m1·d0/d1, m2·d1/d2)`.
pub fn check_hecke_n1(
    src: &CoefficientSource,
    n: u64,
    m1: u64,
    m2: u64,
) -> Result<VerificationReport, HeckeError> {
    let start = Instant::now();
    let lhs = src.coefficient(n, 1)? * src.coefficient(m1, m2)?;
    let mut rhs = C::new(0.0, 0.0);
    for d0 in divisors(n) {
        for d1 in divisors(n / d0) {
            let d2 = n / d0 / d1;
            if m1 % d1 != 0 || m2 % d2 != 0 {
                continue;
            }
            rhs += src.coefficient(m1 / d1 * d0, m2 / d2 * d1)?;
        }
    }
    Ok(VerificationReport::compare(
        "hecke",
        "coefficient-left-shift-expansion",
        json!({ "n": n, "m1": m1, "m2": m2 }),
        lhs,
        rhs,
        relative_tolerance(lhs, rhs, 1e-9),
        elapsed_ms(start),
    ))
}

/// Checks the Steinberg-type local relations on the grid `i, j ≤ 6`:
/// factorization `A(p^j, p^i) = A(p^j, 1)·A(1, p^i)` and the pure-power shape
/// `A(p^j, 1) = (αβ)^j` of modulus `p^{-j/2}`.
pub fn check_ramified_relations(p: u64, rho: C) -> Result<VerificationReport, HeckeError> {
    let start = Instant::now();
    let t = SatakeTriple::ramified_steinberg(p, rho)?;
    let ab = t.alpha * t.beta;
    let mut worst = (0.0_f64, C::new(0.0, 0.0), C::new(0.0, 0.0), 0u32, 0u32);
    for j in 0..=6u32 {
        let left_col = schur_coefficient(&t, j, 0);
        let modulus_diff = (left_col.norm() - (p as F).powf(-(j as F) / 2.0)).abs();
        let power_diff = (left_col - ab.powu(j)).norm();
        for i in 0..=6u32 {
            let lhs = schur_coefficient(&t, j, i);
            let rhs = left_col * schur_coefficient(&t, 0, i);
            let d = (lhs - rhs).norm().max(modulus_diff).max(power_diff);
            if d >= worst.0 {
                worst = ((lhs - rhs).norm().max(modulus_diff).max(power_diff), lhs, rhs, j, i);
            }
        }
    }
    Ok(VerificationReport::compare(
        "hecke",
        "ramified-prime-power-factorization",
        json!({ "p": p, "rho": [rho.re, rho.im], "worst_j": worst.3, "worst_i": worst.4 }),
        worst.1,
        worst.2,
        1e-9,
        elapsed_ms(start),
    ))
}

/// Deterministic tempered local data for auxiliary primes appearing in the
/// chain check below, derived from the prime itself.
fn synthetic_tempered(q: u64) -> SatakeTriple {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15 ^ q);
    SatakeTriple::random_tempered(&mut rng)
}

/// Checks the mixed-level shift used to peel one ramified prime out of a
/// squarefull coefficient,
/// `A(2^i·p·b², 2^j·p·c²) = A(2^i b², 2^j c²)·A(p,p) - [p|c]·A(2^i b², 2^j (c/p)²)·A(p², p)`,
/// together with the degree-3 reduction
/// `A(p,p)·A(1,p²) = A(p,p³) + (A(1,p²) - conj A(p²,1))/p`.
///
/// Preconditions: `b, c` odd, `p ∤ 2b`, and `p² ∤ c`.  Odd primes other than
/// `p` dividing `b·c` receive deterministic tempered data.
pub fn check_ramified_chain(
    p: u64,
    rho: C,
    at_two: &SatakeTriple,
    i: u32,
    j: u32,
    b: u64,
    c: u64,
) -> Result<Vec<VerificationReport>, HeckeError> {
    let start = Instant::now();
    assert!(b % 2 == 1 && c % 2 == 1, "b and c must be odd");
    assert!(b % p != 0 && c % (p * p) != 0, "need p coprime to b and p^2 to c");
    let ramified = SatakeTriple::ramified_steinberg(p, rho)?;
    let mut local = BTreeMap::new();
    local.insert(2, *at_two);
    local.insert(p, ramified);
    for (q, _) in factorize(b * c) {
        if q != 2 && q != p {
            local.insert(q, synthetic_tempered(q));
        }
    }
    let src = CoefficientSource::new(local);

    let two_i = 1u64 << i;
    let two_j = 1u64 << j;
    let lhs = src.coefficient(two_i * p * b * b, two_j * p * c * c)?;
    let mut rhs =
        src.coefficient(two_i * b * b, two_j * c * c)? * src.coefficient(p, p)?;
    if c % p == 0 {
        let c1 = c / p;
        rhs -= src.coefficient(two_i * b * b, two_j * c1 * c1)? * src.coefficient(p * p, p)?;
    }
    let shift = VerificationReport::compare(
        "hecke",
        "ramified-shift-expansion",
        json!({ "p": p, "rho": [rho.re, rho.im], "i": i, "j": j, "b": b, "c": c }),
        lhs,
        rhs,
        relative_tolerance(lhs, rhs, 1e-9),
        elapsed_ms(start),
    );

    let start2 = Instant::now();
    let app = src.coefficient(p, p)?;
    let a1p2 = src.coefficient(1, p * p)?;
    let lhs2 = app * a1p2;
    let rhs2 = src.coefficient(p, p * p * p)?
        + (a1p2 - src.coefficient(p * p, 1)?.conj()) / p as F;
    let cube = VerificationReport::compare(
        "hecke",
        "ramified-cube-reduction",
        json!({ "p": p, "rho": [rho.re, rho.im] }),
        lhs2,
        rhs2,
        relative_tolerance(lhs2, rhs2, 1e-9),
        elapsed_ms(start2),
    );
    Ok(vec![shift, cube])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn raw(alpha: C, beta: C, gamma: C) -> SatakeTriple {
        SatakeTriple {
            alpha,
            beta,
            gamma,
            kind: LocalKind::Unramified,
        }
    }

    #[test]
    fn schur_at_origin_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = SatakeTriple::random_tempered(&mut rng);
        assert_eq!(schur_coefficient(&t, 0, 0), C::new(1.0, 0.0));
        let r = SatakeTriple::ramified_steinberg(5, C::new(0.0, 0.7)).unwrap();
        assert_eq!(schur_coefficient(&r, 0, 0), C::new(1.0, 0.0));
    }

    #[test]
    fn schur_low_weights_match_symmetric_functions() {
        let t = raw(
            C::new(0.3, 0.4),
            C::new(-1.1, 0.2),
            C::new(0.5, -0.9),
        );
        let [a, b, c] = t.params();
        let e1 = a + b + c;
        let e2 = a * b + b * c + c * a;
        assert!((schur_coefficient(&t, 0, 1) - e1).norm() < 1e-14);
        assert!((schur_coefficient(&t, 1, 0) - e2).norm() < 1e-14);
        let h2 = a * a + b * b + c * c + e2;
        assert!((schur_coefficient(&t, 0, 2) - h2).norm() < 1e-13);
    }

    #[test]
    fn ramified_cube_power_value() {
        // p = 3, rho = 0: A(p^3, 1) = (alpha*beta)^3 = 3^{-3/2}.
        let t = SatakeTriple::ramified_steinberg(3, C::new(0.0, 0.0)).unwrap();
        let v = schur_coefficient(&t, 3, 0);
        assert!((v.re - 0.19245008972987526).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn monomial_matches_determinant_ratio() {
        let t = raw(
            C::new(0.9, 0.1),
            C::new(-0.2, 0.8),
            C::new(0.4, -0.6),
        );
        for k in 0..=7u32 {
            for l in 0..=7u32 {
                let mono = schur_coefficient(&t, k, l);
                let det = schur_determinant_ratio(&t, k, l).unwrap();
                let scale = mono.norm().max(1.0);
                assert!(
                    (mono - det).norm() < 1e-10 * scale,
                    "mismatch at ({k},{l}): {mono} vs {det}"
                );
            }
        }
    }

    #[test]
    fn jacobi_trudi_matches_monomial_across_cutoff() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = SatakeTriple::random_tempered(&mut rng);
        for &(k, l) in &[(0, 0), (3, 5), (12, 9), (35, 40), (61, 0), (0, 61)] {
            let mono = schur_monomial(t.params(), k, l);
            let jt = schur_jacobi_trudi(t.params(), k, l);
            let scale = mono.norm().max(1.0);
            assert!(
                (mono - jt).norm() < 1e-8 * scale,
                "paths disagree at ({k},{l}): {mono} vs {jt}"
            );
        }
    }

    #[test]
    fn determinant_ratio_rejects_coinciding_parameters() {
        let t = raw(C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0));
        match schur_determinant_ratio(&t, 2, 1) {
            Err(HeckeError::DegenerateParameters { .. }) => {}
            other => panic!("expected degeneracy, got {other:?}"),
        }
        // The default path evaluates the same point exactly.
        let v = schur_coefficient(&t, 2, 1);
        assert!((v.re - schur_dimension(2, 1)).abs() < 1e-12);
    }

    #[test]
    fn unramified_constructor_enforces_unitarity() {
        // alpha*beta*gamma = 1 but the multiset symmetry fails.
        let err = SatakeTriple::unramified(
            C::new(2.0, 0.0),
            C::new(0.0, 1.0),
            C::new(0.0, -0.5),
        );
        assert!(matches!(err, Err(HeckeError::NotUnitary { .. })));
        let ok = SatakeTriple::unramified(
            Complex::from_polar(1.0, 0.3),
            Complex::from_polar(1.0, 1.1),
            Complex::from_polar(1.0, -1.4),
        );
        assert!(ok.is_ok());
        // Non-tempered but unitary: {a, 1/a, 1} with real a.
        let ok2 = SatakeTriple::unramified(
            C::new(1.3, 0.0),
            C::new(1.0 / 1.3, 0.0),
            C::new(1.0, 0.0),
        );
        assert!(ok2.is_ok());
    }

    #[test]
    fn ramified_constructor_requires_imaginary_rho() {
        let err = SatakeTriple::ramified_steinberg(3, C::new(0.2, 0.1));
        assert!(matches!(err, Err(HeckeError::NotImaginary { .. })));
    }

    #[test]
    fn maximal_eisenstein_from_ramified_pair_is_steinberg_shaped() {
        let p = 7u64;
        let s = C::new(0.0, 0.23);
        let t = SatakeTriple::eisenstein_max(
            p,
            C::new((p as F).powf(-0.5), 0.0),
            C::new(0.0, 0.0),
            s,
        )
        .unwrap();
        // Matches the Steinberg triple with rho = -s up to permutation.
        let r = SatakeTriple::ramified_steinberg(p, -s).unwrap();
        assert!(multiset_distance(t.params(), r.params()) < 1e-12);
    }

    #[test]
    fn minimal_eisenstein_is_unitary() {
        let t = SatakeTriple::eisenstein_min(5, C::new(0.0, 0.4), C::new(0.0, -1.2)).unwrap();
        assert!(t.unitarity_defect() < 1e-12);
        assert!(t.is_tempered(1e-12));
    }

    #[test]
    fn source_multiplies_across_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let src = CoefficientSource::random_tempered(&[2, 3], &mut rng);
        let lhs = src.coefficient(6, 1).unwrap();
        let rhs = src.coefficient(2, 1).unwrap() * src.coefficient(3, 1).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
        assert_eq!(src.coefficient(1, 1).unwrap(), C::new(1.0, 0.0));
    }

    #[test]
    fn memoized_and_direct_agree_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let src = CoefficientSource::random_tempered(&[2, 3, 5], &mut rng);
        for &(m, n) in &[(4, 9), (30, 8), (1, 125), (360, 1)] {
            let first = src.coefficient(m, n).unwrap();
            let again = src.coefficient(m, n).unwrap();
            let direct = src.coefficient_direct(m, n).unwrap();
            assert_eq!(first.re.to_bits(), again.re.to_bits());
            assert_eq!(first.im.to_bits(), again.im.to_bits());
            assert_eq!(first.re.to_bits(), direct.re.to_bits());
            assert_eq!(first.im.to_bits(), direct.im.to_bits());
        }
    }

    #[test]
    fn missing_prime_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let src = CoefficientSource::random_tempered(&[2], &mut rng);
        match src.coefficient(10, 1) {
            Err(HeckeError::MissingPrime(5)) => {}
            other => panic!("expected missing prime 5, got {other:?}"),
        }
    }

    #[test]
    fn hecke_expansions_pass_on_sample_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let src = CoefficientSource::random_tempered(&[2, 3, 5], &mut rng);
        for (m, n1, n2) in [(1, 1, 12), (2, 2, 4), (6, 15, 10), (8, 12, 18)] {
            let rep = check_hecke_mn(&src, m, n1, n2).unwrap();
            assert!(rep.pass, "mn relation failed: {rep:?}");
        }
        for (n, m1, m2) in [(1, 6, 10), (5, 5, 5), (4, 2, 8), (12, 30, 4)] {
            let rep = check_hecke_n1(&src, n, m1, m2).unwrap();
            assert!(rep.pass, "n1 relation failed: {rep:?}");
        }
    }

    #[test]
    fn ramified_relations_hold_on_grid() {
        for (p, im) in [(3u64, 0.0), (5, 0.3), (11, -1.7)] {
            let rep = check_ramified_relations(p, C::new(0.0, im)).unwrap();
            assert!(rep.pass, "ramified relations failed at p={p}: {rep:?}");
        }
    }

    #[test]
    fn ramified_chain_identities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let at_two = SatakeTriple::random_tempered(&mut rng);
        for (p, im, i, j, b, c) in [
            (3u64, 0.0, 0u32, 0u32, 1u64, 1u64),
            (3, 0.55, 1, 2, 5, 3),
            (5, -0.4, 2, 1, 3, 5),
            (7, 1.3, 0, 3, 15, 7 * 3),
        ] {
            let reps =
                check_ramified_chain(p, C::new(0.0, im), &at_two, i, j, b, c).unwrap();
            for rep in reps {
                assert!(rep.pass, "chain identity failed: {rep:?}");
            }
        }
    }

    #[test]
    fn cube_reduction_spot_value_at_rho_zero() {
        // p = 3, rho = 0: both sides of the degree-3 reduction in closed form.
        let t = SatakeTriple::ramified_steinberg(3, C::new(0.0, 0.0)).unwrap();
        let lhs = schur_coefficient(&t, 1, 1) * schur_coefficient(&t, 0, 2);
        let rhs = schur_coefficient(&t, 1, 3)
            + (schur_coefficient(&t, 0, 2) - schur_coefficient(&t, 2, 0).conj()) / 3.0;
        assert!((lhs - rhs).norm() < 1e-15);
        // And the identity fails with the opposite inner sign by 2/p^2.
        let wrong = schur_coefficient(&t, 1, 3)
            + (schur_coefficient(&t, 0, 2) + schur_coefficient(&t, 2, 0).conj()) / 3.0;
        assert!(((lhs - wrong).norm() - 2.0 / 9.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn tempered_values_respect_dimension_bound(seed in 0u64..1u64 << 48, k in 0u32..12, l in 0u32..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = SatakeTriple::random_tempered(&mut rng);
            let v = schur_coefficient(&t, k, l);
            prop_assert!(v.norm() <= schur_dimension(k, l) + 1e-9);
        }

        #[test]
        fn duality_swaps_arguments_with_conjugation(seed in 0u64..1u64 << 48, m in 1u64..400, n in 1u64..400) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let src = CoefficientSource::random_tempered(&[2, 3, 5, 7, 11, 13], &mut rng);
            let m = m * 7 % 399 + 1;
            let n = n * 11 % 399 + 1;
            if factorize(m).iter().chain(factorize(n).iter()).all(|&(p, _)| p <= 13) {
                let ab = src.coefficient(m, n).unwrap();
                let ba = src.coefficient(n, m).unwrap();
                prop_assert!((ab - ba.conj()).norm() < 1e-9 * ab.norm().max(1.0));
            }
        }

        #[test]
        fn coefficients_are_multiplicative(seed in 0u64..1u64 << 48, m1 in 1u64..50, n1 in 1u64..50, m2 in 1u64..50, n2 in 1u64..50) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let src = CoefficientSource::random_tempered(&[2, 3, 5, 7], &mut rng);
            // Push the two factor pairs onto coprime supports {2,3} and {5,7}.
            let rebase = |x: u64, p: u64, q: u64| {
                let mut out = 1u64;
                for (r, e) in factorize(x) {
                    out *= (if r % 2 == 0 { p } else { q }).pow(e.min(3));
                }
                out
            };
            let (m1, n1) = (rebase(m1, 2, 3), rebase(n1, 2, 3));
            let (m2, n2) = (rebase(m2, 5, 7), rebase(n2, 5, 7));
            let joint = src.coefficient(m1 * m2, n1 * n2).unwrap();
            let split = src.coefficient(m1, n1).unwrap() * src.coefficient(m2, n2).unwrap();
            prop_assert!((joint - split).norm() < 1e-9 * joint.norm().max(1.0));
        }

        #[test]
        fn random_tempered_is_unitary(seed in 0u64..1u64 << 48) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = SatakeTriple::random_tempered(&mut rng);
            prop_assert!(t.unitarity_defect() < 1e-12);
            prop_assert!(t.is_tempered(1e-12));
        }
    }
}

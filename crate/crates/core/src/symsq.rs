//! Symmetric-square Dirichlet series: coefficient assembly, local Euler
//! factors (finite and archimedean), the modified central object with its
//! degree-6 correction polynomial at 2, conductor, and root number.

use std::time::Instant;

use serde_json::json;
use thiserror::Error;

use crate::archimedean::gamma::{gamma_pole_distance, ln_gamma_r};
use crate::archimedean::spectral::SpectralParameter;
use crate::arith::{factorize, primes_up_to};
use num_integer::Integer;
use crate::hecke::{schur_coefficient, CoefficientSource, HeckeError, SatakeTriple};
use crate::report::{elapsed_ms, VerificationReport};
use crate::{C, F};

#[derive(Debug, Error)]
pub enum SymsqError {
    #[error(transparent)]
    Local(#[from] HeckeError),
    #[error("level {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("Gamma argument {re}+{im}i sits on a pole (distance {dist:.3e})")]
    PoleHit { re: F, im: F, dist: F },
    #[error("root-number expressions disagree at p={p} by {diff:.3e}")]
    ExpressionMismatch { p: u64, diff: F },
}

/// Which closed Euler-factor shape applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Unramified,
    Ramified,
    Archimedean,
}

/// One local factor of the symmetric-square series, normalized so that the
/// finite factors are `∏ (1 - x_i x_j p^{-s})^{-1}` over parameter pairs
/// `i ≤ j`; zero products drop the degree from 6 to 3 at ramified primes.
pub struct SymsqLocalFactor {
    pub prime: Option<u64>,
    pub kind: FactorKind,
    /// Degree of the inverse factor as a polynomial in `p^{-s}` (0 for the
    /// archimedean factor).
    pub degree: usize,
    eval: Box<dyn Fn(C) -> C + Send + Sync>,
}

impl SymsqLocalFactor {
    pub fn finite(p: u64, t: &SatakeTriple) -> Self {
        let pairs = parameter_pairs(t);
        let degree = pairs.iter().filter(|z| z.norm() > 1e-12).count();
        let kind = if (t.alpha * t.beta * t.gamma).norm() < 1e-12 {
            FactorKind::Ramified
        } else {
            FactorKind::Unramified
        };
        let pf = p as F;
        SymsqLocalFactor {
            prime: Some(p),
            kind,
            degree,
            eval: Box::new(move |s: C| {
                let q = C::new(pf, 0.0).powc(-s);
                let mut acc = C::new(1.0, 0.0);
                for z in pairs {
                    acc /= C::new(1.0, 0.0) - z * q;
                }
                acc
            }),
        }
    }

    /// `∏_{i≤j} Γ_R(1/2 + u - μ_i - μ_j)` as a function of `u`; evaluates to
    /// NaN on a Gamma pole.
    pub fn archimedean(mu: SpectralParameter) -> Self {
        SymsqLocalFactor {
            prime: None,
            kind: FactorKind::Archimedean,
            degree: 0,
            eval: Box::new(move |u: C| {
                archimedean_factor(&mu, u).unwrap_or(C::new(F::NAN, F::NAN))
            }),
        }
    }

    pub fn evaluate(&self, s: C) -> C {
        (self.eval)(s)
    }
}

/// The six products `x_i x_j`, `1 ≤ i ≤ j ≤ 3`, of the local parameters.
fn parameter_pairs(t: &SatakeTriple) -> [C; 6] {
    let [a, b, c] = t.params();
    [a * a, a * b, a * c, b * b, b * c, c * c]
}

/// Product of the primes at which the source's parameter product vanishes.
pub fn source_level(src: &CoefficientSource) -> u64 {
    src.primes()
        .filter(|&p| {
            let t = src.triple(p).unwrap();
            (t.alpha * t.beta * t.gamma).norm() < 1e-12
        })
        .product()
}

/// Dirichlet coefficients of `Σ_{a³b²c ≤ X, (a,N)=1} A(b²,c²) (a³b²c)^{-s}`,
/// indexed by `k = a³b²c` (entry 0 unused).  The level `N` is assumed
/// squarefree.
pub fn symsq_coefficients(
    src: &CoefficientSource,
    n_level: u64,
    x: u64,
) -> Result<Vec<C>, SymsqError> {
    assert!(x <= 1_000_000, "coefficient cutoff too large");
    let mut out = vec![C::new(0.0, 0.0); x as usize + 1];
    let mut a = 1u64;
    while a * a * a <= x {
        if a.gcd(&n_level) == 1 {
            let a3 = a * a * a;
            let mut b = 1u64;
            while a3 * b * b <= x {
                let base = a3 * b * b;
                let mut c = 1u64;
                while base * c <= x {
                    out[(base * c) as usize] += src.coefficient(b * b, c * c)?;
                    c += 1;
                }
                b += 1;
            }
        }
        a += 1;
    }
    Ok(out)
}

/// The same coefficients assembled prime by prime from local expansions:
/// the block at `p` has entries `Σ_{i+2j+3k=e} A(p^{2j}, p^{2i})` with the
/// `k` (cube) part dropped at primes dividing the level.
pub fn symsq_coefficients_euler(
    src: &CoefficientSource,
    n_level: u64,
    x: u64,
) -> Result<Vec<C>, SymsqError> {
    assert!(x <= 1_000_000, "coefficient cutoff too large");
    let mut out = vec![C::new(0.0, 0.0); x as usize + 1];
    out[1] = C::new(1.0, 0.0);
    for p in primes_up_to(x) {
        let t = *src.triple(p).ok_or(HeckeError::MissingPrime(p))?;
        let ramified = n_level % p == 0;
        let mut emax = 0u32;
        let mut power = 1u64;
        while power <= x / p {
            power *= p;
            emax += 1;
        }
        let mut local = vec![C::new(0.0, 0.0); emax as usize + 1];
        for (e, slot) in local.iter_mut().enumerate() {
            let e = e as u32;
            for j in 0..=e / 2 {
                let kmax = if ramified { 0 } else { (e - 2 * j) / 3 };
                for k in 0..=kmax {
                    if ramified && k > 0 {
                        continue;
                    }
                    let i = e - 2 * j - 3 * k;
                    *slot += schur_coefficient(&t, 2 * j, 2 * i);
                }
            }
        }
        for k in 1..=x as usize {
            if k % p as usize == 0 || out[k].norm() == 0.0 {
                continue;
            }
            let base = out[k];
            let mut pe = p as usize;
            let mut e = 1usize;
            while k * pe <= x as usize {
                out[k * pe] += base * local[e];
                pe *= p as usize;
                e += 1;
            }
        }
    }
    Ok(out)
}

/// Compares the truncated local double (or triple) series at `p` against the
/// closed product of geometric factors.  The cube-indexed part of the sum is
/// present exactly when the parameter product is nonzero; in the ramified
/// case the `(1 - p^{-3s})` factor stays aside.
pub fn check_local_factor(
    p: u64,
    t: &SatakeTriple,
    s: C,
    truncation: u32,
) -> VerificationReport {
    let start = Instant::now();
    let q = C::new(p as F, 0.0).powc(-s);
    let e3 = t.alpha * t.beta * t.gamma;
    let ramified = e3.norm() < 1e-12;
    let top = 3 * truncation as usize;
    let mut qpow = Vec::with_capacity(top + 1);
    let mut acc = C::new(1.0, 0.0);
    for _ in 0..=top {
        qpow.push(acc);
        acc *= q;
    }
    let mut series = C::new(0.0, 0.0);
    for j in 0..=truncation {
        for i in 0..=truncation {
            series += schur_coefficient(t, 2 * j, 2 * i) * qpow[(i + 2 * j) as usize];
        }
    }
    let lhs = if ramified {
        series
    } else {
        let cubes: C = (0..=truncation).map(|k| qpow[3 * k as usize]).sum();
        series * cubes
    };
    let mut rhs = C::new(1.0, 0.0) - e3 * e3 * qpow[3];
    for z in parameter_pairs(t) {
        rhs /= C::new(1.0, 0.0) - z * q;
    }
    if !ramified {
        rhs /= C::new(1.0, 0.0) - qpow[3];
    }
    VerificationReport::compare(
        "symsq",
        "local-euler-factor-expansion",
        json!({ "p": p, "s": [s.re, s.im], "truncation": truncation, "ramified": ramified }),
        lhs,
        rhs,
        1e-8,
        elapsed_ms(start),
    )
}

/// `∏_{1≤i≤j≤3} Γ_R(1/2 + u - μ_i - μ_j)`.
pub fn archimedean_factor(mu: &SpectralParameter, u: C) -> Result<C, SymsqError> {
    let mut acc = C::new(0.0, 0.0);
    for sigma in mu.pair_sums() {
        let arg = C::new(0.5, 0.0) + u - sigma;
        let dist = gamma_pole_distance(arg * 0.5);
        if dist < 1e-9 {
            return Err(SymsqError::PoleHit {
                re: arg.re,
                im: arg.im,
                dist,
            });
        }
        acc += ln_gamma_r(arg);
    }
    Ok(acc.exp())
}

/// The seven coefficients `λ(2^j)` of the degree-6 correction polynomial at
/// the prime 2.
#[derive(Debug, Clone, Copy)]
pub struct Lambda2Table {
    pub lambda: [C; 7],
}

impl Lambda2Table {
    /// `Σ_{j=0}^{6} (-1)^j conj(λ(2^j)) 2^{-jv}`, the inverse local factor of
    /// the dual data as a polynomial in `2^{-v}`.
    pub fn inverse_factor(&self, v: C) -> C {
        let w = C::new(2.0, 0.0).powc(-v);
        let mut acc = C::new(0.0, 0.0);
        let mut wj = C::new(1.0, 0.0);
        for (j, lam) in self.lambda.iter().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * lam.conj() * wj;
            wj *= w;
        }
        acc
    }
}

/// Builds the λ table from Schur values at 2:
/// `λ(1)=1, λ(2)=A(1,4), λ(4)=A(2,4), λ(8)=A(8,1)+A(1,8), λ(16)=A(4,2),
/// λ(32)=A(4,1), λ(64)=1`.
pub fn lambda2_table(t2: &SatakeTriple) -> Lambda2Table {
    let a = |k, l| schur_coefficient(t2, k, l);
    let table = Lambda2Table {
        lambda: [
            C::new(1.0, 0.0),
            a(0, 2),
            a(1, 2),
            a(3, 0) + a(0, 3),
            a(2, 1),
            a(2, 0),
            C::new(1.0, 0.0),
        ],
    };
    debug_assert!(
        {
            let v = C::new(1.0, 0.0);
            (table.inverse_factor(v) - lambda2_product(t2, v)).norm() < 1e-9
        },
        "λ table fails to reproduce the factored polynomial"
    );
    table
}

/// `∏_{i≤j} (1 - conj(x_i x_j) 2^{-v})`, the factored form of the inverse
/// polynomial.
fn lambda2_product(t2: &SatakeTriple, v: C) -> C {
    let w = C::new(2.0, 0.0).powc(-v);
    parameter_pairs(t2)
        .iter()
        .map(|z| C::new(1.0, 0.0) - z.conj() * w)
        .product()
}

/// Compares the λ-table polynomial against its factored form at `v`.
pub fn check_lambda2_identity(t2: &SatakeTriple, v: C) -> VerificationReport {
    let start = Instant::now();
    let lhs = lambda2_table(t2).inverse_factor(v);
    let rhs = lambda2_product(t2, v);
    VerificationReport::compare(
        "symsq",
        "prime-two-inverse-polynomial",
        json!({ "v": [v.re, v.im] }),
        lhs,
        rhs,
        1e-9 * lhs.norm().max(rhs.norm()).max(1.0),
        elapsed_ms(start),
    )
}

/// The modified central object: the 2-deprived Dirichlet series times the
/// dual inverse polynomial at 2.  The polynomial is evaluated first, so a
/// zero there short-circuits to an exact 0 regardless of the series.
pub fn lstar_modification(
    src: &CoefficientSource,
    s: C,
    truncation: u64,
) -> Result<C, SymsqError> {
    let t2 = src.triple(2).copied().ok_or(HeckeError::MissingPrime(2))?;
    let poly = lambda2_table(&t2).inverse_factor(s);
    if poly.norm() < 1e-12 {
        return Ok(C::new(0.0, 0.0));
    }
    let n_level = source_level(src);
    let mut series = C::new(0.0, 0.0);
    let mut a = 1u64;
    while a * a * a <= truncation {
        if a.gcd(&n_level) == 1 {
            let a3 = a * a * a;
            let mut b = 1u64;
            while a3 * b * b <= truncation {
                let base = a3 * b * b;
                let mut c = 1u64;
                while base * c <= truncation {
                    let k = base * c;
                    series +=
                        src.coefficient(b * b, c * c)? * C::new(k as F, 0.0).powc(-s);
                    c += 2;
                }
                b += 2;
            }
        }
        a += 2;
    }
    Ok(series * poly)
}

/// Cube of a squarefree level.
pub fn conductor(n: u64) -> Result<u64, SymsqError> {
    if factorize(n).iter().any(|&(_, e)| e > 1) {
        return Err(SymsqError::NotSquarefree(n));
    }
    Ok(n * n * n)
}

/// Sign of the functional equation from the ramified data, as
/// `∏_p (-p^{3/2} conj A(p³,1))`, cross-checked against
/// `∏_p (-p^{1/2} conj A(p,p) + p^{-1/2})`.
pub fn root_number(level_primes: &[(u64, C)]) -> Result<C, SymsqError> {
    let mut out = C::new(1.0, 0.0);
    for &(p, rho) in level_primes {
        let t = SatakeTriple::ramified_steinberg(p, rho)?;
        let pf = p as F;
        let first = -pf.powf(1.5) * schur_coefficient(&t, 3, 0).conj();
        let second = -pf.sqrt() * schur_coefficient(&t, 1, 1).conj() + pf.powf(-0.5);
        let diff = (first - second).norm();
        if diff > 1e-10 {
            return Err(SymsqError::ExpressionMismatch { p, diff });
        }
        out *= first;
    }
    Ok(out)
}

/// Scans the partial sums of the 2-deprived series on a grid of `s` values,
/// recording the largest prefix modulus against `bound`.  Rows with
/// `pass = false` flag growth (e.g. near a pole).
pub fn pole_scan(
    src: &CoefficientSource,
    grid: &[C],
    cutoff: u64,
    bound: F,
) -> Result<Vec<VerificationReport>, SymsqError> {
    let n_level = source_level(src);
    let coeffs = symsq_coefficients(src, n_level, cutoff)?;
    let mut out = Vec::with_capacity(grid.len());
    for &s in grid {
        let start = Instant::now();
        let mut acc = C::new(0.0, 0.0);
        let mut witness: F = 0.0;
        let mut k = 1u64;
        while k <= cutoff {
            let c = coeffs[k as usize];
            if c.norm() != 0.0 {
                acc += c * C::new(k as F, 0.0).powc(-s);
                witness = witness.max(acc.norm());
            }
            k += 2;
        }
        out.push(VerificationReport::assert_bound(
            "symsq",
            "odd-part-partial-sum-scan",
            json!({ "s": [s.re, s.im], "cutoff": cutoff }),
            witness,
            bound,
            elapsed_ms(start),
        ));
    }
    Ok(out)
}

//! Level-raising maps on coefficient systems and their Gram geometry.
//!
//! A level-one coefficient system `A(m, n)` spawns a three-dimensional space
//! of level-`p` systems via the maps `T0, T1, T2`.  This module computes the
//! three rescaled coefficient families, builds the explicit 3x3 Gram matrix
//! of their pairwise inner products, and orthonormalizes it by a triangular
//! change of basis whose entries are the constants `c_ij`.  The supporting
//! Rankin-Selberg identities used to derive the matrix entries are replayed
//! numerically as truncated-series checks.

use crate::hecke::{p_pow, schur_coefficient, CoefficientSource, HeckeError, SatakeTriple};
use crate::report::{elapsed_ms, VerificationReport};
use crate::{C, F};
use serde_json::json;
use std::time::Instant;
use thiserror::Error;

/// Exponent bound for the truncated double series in the local checks.
const SERIES_ORDER: u32 = 30;

/// Bound-constant used when asserting decay of the orthonormalization
/// constants in the unitary-series cases.
const DECAY_CONSTANT: F = 10.0;

#[derive(Debug, Error)]
pub enum OldformError {
    #[error(transparent)]
    Local(#[from] HeckeError),
    /// Orthonormalization requires a Hermitian matrix with positive pivots;
    /// `pivot` is the first offending diagonal value (or the hermiticity
    /// defect when the matrix is not even Hermitian).
    #[error("matrix is not positive definite: pivot {pivot:.6e} at step {index}")]
    NotPositiveDefinite { index: usize, pivot: F },
}

/// Coefficients of the three level-raised systems.
///
/// With the convention that a coefficient vanishes whenever an argument is
/// not a positive integer:
/// the zeroth map keeps `A(m, n)`, the first produces
/// `sqrt(p) * (A(m/p, p*n) + A(m, n/p))`, and the second `p * A(m/p, n)`.
pub fn oldform_coefficient(
    j: usize,
    src: &CoefficientSource,
    p: u64,
    m: u64,
    n: u64,
) -> Result<C, HeckeError> {
    assert!(j <= 2, "level-raising index must be 0, 1, or 2");
    assert!(m > 0 && n > 0);
    let sqrt_p = (p as F).sqrt();
    match j {
        0 => src.coefficient(m, n),
        1 => {
            let mut total = C::new(0.0, 0.0);
            if m % p == 0 {
                total += src.coefficient(m / p, p * n)?;
            }
            if n % p == 0 {
                total += src.coefficient(m, n / p)?;
            }
            Ok(total * sqrt_p)
        }
        _ => {
            if m % p == 0 {
                Ok(src.coefficient(m / p, n)? * (p as F))
            } else {
                Ok(C::new(0.0, 0.0))
            }
        }
    }
}

/// Gram matrix of the three level-raised systems, scaled by the squared norm
/// of the underlying vector.
#[derive(Debug, Clone)]
pub struct GramMatrix3 {
    /// Row-major entries, including the `norm^2` scaling.
    pub matrix: [[C; 3]; 3],
    /// Norm of the underlying vector (not its square).
    pub norm: F,
}

impl GramMatrix3 {
    pub fn entry(&self, i: usize, j: usize) -> C {
        self.matrix[i][j]
    }

    /// Entries divided by `norm^2`; the orthonormalization constants depend
    /// only on this matrix.
    pub fn normalized(&self) -> [[C; 3]; 3] {
        let scale = 1.0 / (self.norm * self.norm);
        let mut out = self.matrix;
        for row in out.iter_mut() {
            for z in row.iter_mut() {
                *z *= scale;
            }
        }
        out
    }

    /// Largest deviation from conjugate symmetry across all entry pairs.
    pub fn hermiticity_defect(&self) -> F {
        let mut worst: F = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.matrix[i][j] - self.matrix[j][i].conj()).norm());
            }
        }
        worst
    }
}

/// Builds the explicit Gram matrix from the two degree-one coefficients of
/// the underlying system.
///
/// The off-diagonal weights are `(p^{5/2} - p^{1/2}) / (p^3 - 1)` and
/// `(p^2 - p) / (p^3 - 1)`; the middle diagonal entry picks up
/// `|A(1, p)|^2` times the second weight.  Callers pass `A(p, 1)` equal to
/// the conjugate of `A(1, p)` for unitary data, which makes the matrix
/// Hermitian.
pub fn gram_matrix(p: u64, a1p: C, ap1: C, norm: F) -> GramMatrix3 {
    assert!(
        a1p.norm() <= 3.0 + 1e-9 && ap1.norm() <= 3.0 + 1e-9,
        "degree-one coefficients out of the admissible range"
    );
    assert!(norm > 0.0);
    let pf = p as F;
    let u = (pf.powf(2.5) - pf.sqrt()) / (pf * pf * pf - 1.0);
    let w = (pf * pf - pf) / (pf * pf * pf - 1.0);
    let one = C::new(1.0, 0.0);
    let n2 = norm * norm;
    let mut matrix = [
        [one, a1p * u, ap1 * w],
        [ap1 * u, one + w * a1p.norm_sqr(), a1p * u],
        [a1p * w, ap1 * u, one],
    ];
    for row in matrix.iter_mut() {
        for z in row.iter_mut() {
            *z *= n2;
        }
    }
    GramMatrix3 { matrix, norm }
}

/// Constants of the triangular orthonormalizing change of basis.
///
/// The orthonormal systems are `B0 = A0`, `B1 = (1 + c11) A1 + c10 A0`, and
/// `B2 = (1 + c22) A2 + c21 A1 + c20 A0`.
#[derive(Debug, Clone, Copy)]
pub struct OrthoConstants {
    pub c10: C,
    pub c11: C,
    pub c21: C,
    pub c22: C,
    pub c20: C,
}

impl OrthoConstants {
    pub fn max_modulus(&self) -> F {
        [self.c10, self.c11, self.c21, self.c22, self.c20]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, F::max)
    }

    /// The full lower-triangular transform, diagonal included.
    pub fn transform(&self) -> [[C; 3]; 3] {
        let zero = C::new(0.0, 0.0);
        let one = C::new(1.0, 0.0);
        [
            [one, zero, zero],
            [self.c10, one + self.c11, zero],
            [self.c20, self.c21, one + self.c22],
        ]
    }
}

/// Cholesky factorization of a 3x3 Hermitian positive-definite matrix:
/// returns lower-triangular `L` with positive real diagonal, `L L^H = G`.
fn cholesky3(g: &[[C; 3]; 3]) -> Result<[[C; 3]; 3], OldformError> {
    let zero = C::new(0.0, 0.0);
    let mut l = [[zero; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let mut sum = g[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k].conj();
            }
            if i == j {
                if sum.re <= 0.0 || sum.im.abs() > 1e-9 * (1.0 + sum.re.abs()) {
                    return Err(OldformError::NotPositiveDefinite {
                        index: i,
                        pivot: sum.re,
                    });
                }
                l[i][j] = C::new(sum.re.sqrt(), 0.0);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Inverse of a lower-triangular 3x3 matrix by forward substitution.
fn invert_lower3(l: &[[C; 3]; 3]) -> [[C; 3]; 3] {
    let zero = C::new(0.0, 0.0);
    let mut t = [[zero; 3]; 3];
    for i in 0..3 {
        t[i][i] = C::new(1.0, 0.0) / l[i][i];
        for j in 0..i {
            let mut sum = zero;
            for k in j..i {
                sum += l[i][k] * t[k][j];
            }
            t[i][j] = -sum / l[i][i];
        }
    }
    t
}

/// Orthonormalizes the Gram matrix in the fixed order `(T0, T1, T2)`: the
/// returned constants describe the unique lower-triangular transform `T`
/// with positive real diagonal and `T G T^H = I` applied to the normalized
/// matrix.  No pivoting is performed, so the first basis vector always keeps
/// coefficient one.
pub fn gram_schmidt(g: &GramMatrix3) -> Result<OrthoConstants, OldformError> {
    let defect = g.hermiticity_defect();
    if defect > 1e-8 {
        return Err(OldformError::NotPositiveDefinite {
            index: 0,
            pivot: defect,
        });
    }
    let normalized = g.normalized();
    let l = cholesky3(&normalized)?;
    let t = invert_lower3(&l);
    let one = C::new(1.0, 0.0);
    Ok(OrthoConstants {
        c10: t[1][0],
        c11: t[1][1] - one,
        c21: t[2][1],
        c22: t[2][2] - one,
        c20: t[2][0],
    })
}

/// Local Rankin-Selberg factor as a closed nine-fold product:
/// `prod_{i,j} (1 - x_i conj(x_j) p^{-s})^{-1}`.
fn rankin_local_factor(t: &SatakeTriple, q: C) -> C {
    let x = t.params();
    let mut value = C::new(1.0, 0.0);
    for xi in x.iter() {
        for xj in x.iter() {
            value /= C::new(1.0, 0.0) - xi * xj.conj() * q;
        }
    }
    value
}

fn q_powers(q: C, order: usize) -> Vec<C> {
    let mut pows = Vec::with_capacity(order + 1);
    let mut acc = C::new(1.0, 0.0);
    for _ in 0..=order {
        pows.push(acc);
        acc *= q;
    }
    pows
}

/// Verifies the series expression for the local Rankin-Selberg factor:
/// the truncated double sum `sum |A(p^i, p^j)|^2 p^{-(2i+j)s}` times the
/// local zeta value `(1 - p^{-3s})^{-1}` must match the closed product.
pub fn check_rankin_local(p: u64, t: &SatakeTriple, s: C) -> VerificationReport {
    assert!(s.re >= 0.7, "series truncation needs Re(s) >= 0.7");
    let start = Instant::now();
    let q = p_pow(p, -s);
    let order = SERIES_ORDER;
    let pows = q_powers(q, 3 * order as usize);
    let mut series = C::new(0.0, 0.0);
    for i in 0..=order {
        for j in 0..=order {
            let a = schur_coefficient(t, i, j);
            series += a.norm_sqr() * pows[(2 * i + j) as usize];
        }
    }
    let zeta_p = C::new(1.0, 0.0) / (C::new(1.0, 0.0) - pows[3]);
    let lhs = zeta_p * series;
    let rhs = rankin_local_factor(t, q);
    VerificationReport::compare(
        "oldform-gram",
        "norm-square-series-vs-product",
        json!({"p": p, "s": [s.re, s.im]}),
        lhs,
        rhs,
        1e-7,
        elapsed_ms(start),
    )
}

/// Verifies the shifted-convolution evaluation used for the inner product of
/// the zeroth and first level-raised systems:
/// `sum A(p^i, p^j) (conj A(p^{i-1}, p^{j+1}) + conj A(p^i, p^{j-1})) p^{-(2i+j)s}`
/// equals `(p^{-s} - p^{-3s}) A(1, p) L_p(s)`.
pub fn check_shift_identity(p: u64, t: &SatakeTriple, s: C) -> VerificationReport {
    assert!(s.re >= 0.7, "series truncation needs Re(s) >= 0.7");
    let start = Instant::now();
    let q = p_pow(p, -s);
    let order = SERIES_ORDER;
    let pows = q_powers(q, 3 * order as usize);
    let mut lhs = C::new(0.0, 0.0);
    for i in 0..=order {
        for j in 0..=order {
            let a = schur_coefficient(t, i, j);
            let mut shifted = C::new(0.0, 0.0);
            if i > 0 {
                shifted += schur_coefficient(t, i - 1, j + 1).conj();
            }
            if j > 0 {
                shifted += schur_coefficient(t, i, j - 1).conj();
            }
            lhs += a * shifted * pows[(2 * i + j) as usize];
        }
    }
    let a1p = schur_coefficient(t, 0, 1);
    let rhs = (pows[1] - pows[3]) * a1p * rankin_local_factor(t, q);
    VerificationReport::compare(
        "oldform-gram",
        "shifted-coefficient-convolution",
        json!({"p": p, "s": [s.re, s.im]}),
        lhs,
        rhs,
        1e-7,
        elapsed_ms(start),
    )
}

/// Verifies the closed form of the single-row coefficient series: the ratio
/// of `sum_j |A(1, p^j)|^2 p^{-js}` to the local Rankin-Selberg factor must
/// equal `(1 - p^{-3s})^2 - |A(1, p)|^2 p^{-2s} (1 - p^{-s})^2`.
pub fn check_single_row_series(p: u64, t: &SatakeTriple, s: C) -> VerificationReport {
    assert!(s.re >= 0.7, "series truncation needs Re(s) >= 0.7");
    let start = Instant::now();
    let q = p_pow(p, -s);
    // One-dimensional sum, so a deeper truncation is cheap and keeps the
    // tail negligible down to the Re(s) = 0.7 boundary.
    let order = 2 * SERIES_ORDER;
    let pows = q_powers(q, order as usize);
    let mut series = C::new(0.0, 0.0);
    for j in 0..=order {
        series += schur_coefficient(t, 0, j).norm_sqr() * pows[j as usize];
    }
    let lhs = series / rankin_local_factor(t, q);
    let a1p = schur_coefficient(t, 0, 1);
    let one = C::new(1.0, 0.0);
    let cube = one - q * q * q;
    let lin = one - q;
    let rhs = cube * cube - a1p.norm_sqr() * q * q * lin * lin;
    VerificationReport::compare(
        "oldform-gram",
        "row-series-to-product-ratio",
        json!({"p": p, "s": [s.re, s.im]}),
        lhs,
        rhs,
        1e-7,
        elapsed_ms(start),
    )
}

/// Parameters of the two unitary-series families whose level-raised spaces
/// carry the same Gram-matrix shape.
#[derive(Debug, Clone, Copy)]
pub enum EisensteinClass {
    /// Fully induced from three characters; both spectral parameters are
    /// purely imaginary.
    Minimal { s1: C, s2: C },
    /// Induced from a degree-two system (parameters `a_p, b_p` with
    /// `a_p b_p = 1`) twisted by `p^s`, `s` purely imaginary.
    MaximalOld { a_p: C, b_p: C, s: C },
}

/// Runs the Gram-matrix pipeline on unitary-series data and asserts the
/// decay of the resulting constants: `|c_ij| <= K p^{-1/2}` in the minimal
/// case and `|c_ij| <= K p^{7/64 - 1/2}` in the maximal case, with `K = 10`.
pub fn eisenstein_ortho(class: &EisensteinClass, p: u64) -> Result<OrthoConstants, OldformError> {
    let triple = match class {
        EisensteinClass::Minimal { s1, s2 } => SatakeTriple::eisenstein_min(p, *s1, *s2)?,
        EisensteinClass::MaximalOld { a_p, b_p, s } => {
            SatakeTriple::eisenstein_max(p, *a_p, *b_p, *s)?
        }
    };
    let a1p = schur_coefficient(&triple, 0, 1);
    let ap1 = schur_coefficient(&triple, 1, 0);
    let constants = gram_schmidt(&gram_matrix(p, a1p, ap1, 1.0))?;
    let exponent = match class {
        EisensteinClass::Minimal { .. } => -0.5,
        EisensteinClass::MaximalOld { .. } => 7.0 / 64.0 - 0.5,
    };
    let bound = DECAY_CONSTANT * (p as F).powf(exponent);
    assert!(
        constants.max_modulus() <= bound,
        "orthonormalization constants exceed the decay bound: {} > {}",
        constants.max_modulus(),
        bound
    );
    Ok(constants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::LocalKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mat_mul(a: &[[C; 3]; 3], b: &[[C; 3]; 3]) -> [[C; 3]; 3] {
        let zero = C::new(0.0, 0.0);
        let mut out = [[zero; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn conj_transpose(a: &[[C; 3]; 3]) -> [[C; 3]; 3] {
        let mut out = *a;
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = a[j][i].conj();
            }
        }
        out
    }

    fn identity_defect(a: &[[C; 3]; 3]) -> F {
        let mut worst: F = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a[i][j] - C::new(target, 0.0)).norm());
            }
        }
        worst
    }

    fn whitening_defect(g: &GramMatrix3, c: &OrthoConstants) -> F {
        let t = c.transform();
        let product = mat_mul(&mat_mul(&t, &g.normalized()), &conj_transpose(&t));
        identity_defect(&product)
    }

    fn sample_source(p: u64, seed: u64) -> (CoefficientSource, SatakeTriple) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut primes = crate::arith::primes_up_to(30);
        if !primes.contains(&p) {
            primes.push(p);
        }
        let src = CoefficientSource::random_tempered(&primes, &mut rng);
        let triple = src.triple(p).unwrap().clone();
        (src, triple)
    }

    #[test]
    fn level_raised_coefficients_follow_the_conventions() {
        let (src, triple) = sample_source(5, 11);
        let p = 5u64;
        // Index zero leaves the system untouched.
        assert_eq!(
            oldform_coefficient(0, &src, p, 10, 21).unwrap(),
            src.coefficient(10, 21).unwrap()
        );
        // Arguments not divisible by p vanish under the second map.
        assert_eq!(
            oldform_coefficient(2, &src, p, 6, 1).unwrap(),
            C::new(0.0, 0.0)
        );
        // At (p, 1) only the first branch of the middle map survives.
        let got = oldform_coefficient(1, &src, p, p, 1).unwrap();
        let expected = schur_coefficient(&triple, 0, 1) * (p as F).sqrt();
        assert!((got - expected).norm() < 1e-12);
        // Both branches contribute at (p, p).
        let both = oldform_coefficient(1, &src, p, p, p).unwrap();
        let expected_both = (src.coefficient(1, p * p).unwrap()
            + src.coefficient(p, 1).unwrap())
            * (p as F).sqrt();
        assert!((both - expected_both).norm() < 1e-12);
        // The last map rescales by p after dividing the first argument.
        let second = oldform_coefficient(2, &src, p, p * p, 3).unwrap();
        let expected_second = src.coefficient(p, 3).unwrap() * (p as F);
        assert!((second - expected_second).norm() < 1e-12);
    }

    #[test]
    fn gram_matrix_matches_frozen_entry() {
        let one = C::new(1.0, 0.0);
        let g = gram_matrix(3, one, one, 1.0);
        let expected = (3.0_f64.powf(2.5) - 3.0_f64.sqrt()) / 26.0;
        assert!((g.entry(0, 1).re - expected).abs() < 1e-15);
        assert!((g.entry(0, 1).re - 0.5329).abs() < 5e-5);
        assert!((g.entry(1, 1).re - (1.0 + 6.0 / 26.0)).abs() < 1e-15);
        assert!(g.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn vanishing_degree_one_data_gives_scaled_identity() {
        let zero = C::new(0.0, 0.0);
        let g = gram_matrix(7, zero, zero, 2.0);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 4.0 } else { 0.0 };
                assert!((g.entry(i, j) - C::new(expected, 0.0)).norm() < 1e-15);
            }
        }
        let c = gram_schmidt(&g).unwrap();
        assert!(c.max_modulus() < 1e-12);
    }

    #[test]
    fn off_diagonal_weight_stays_under_the_square_root_envelope() {
        for p in [3u64, 5, 7, 11, 97, 1009] {
            let pf = p as F;
            let weight = (pf.powf(2.5) - pf.sqrt()) / (pf * pf * pf - 1.0);
            assert!(weight <= pf.powf(-0.5) * 1.01, "p = {p}");
        }
    }

    #[test]
    fn whitening_transform_inverts_the_gram_matrix() {
        for (p, seed) in [(11u64, 1u64), (11, 2), (13, 3), (29, 4)] {
            let (_, triple) = sample_source(p, seed);
            let a1p = schur_coefficient(&triple, 0, 1);
            let ap1 = schur_coefficient(&triple, 1, 0);
            let g = gram_matrix(p, a1p, ap1, 1.0);
            assert!(g.hermiticity_defect() < 1e-12);
            let c = gram_schmidt(&g).unwrap();
            assert!(whitening_defect(&g, &c) < 1e-9, "p = {p}, seed = {seed}");
        }
    }

    #[test]
    fn constants_do_not_depend_on_the_norm() {
        let (_, triple) = sample_source(13, 40);
        let a1p = schur_coefficient(&triple, 0, 1);
        let ap1 = schur_coefficient(&triple, 1, 0);
        let c1 = gram_schmidt(&gram_matrix(13, a1p, ap1, 1.0)).unwrap();
        let c2 = gram_schmidt(&gram_matrix(13, a1p, ap1, 7.5)).unwrap();
        for (a, b) in [
            (c1.c10, c2.c10),
            (c1.c11, c2.c11),
            (c1.c21, c2.c21),
            (c1.c22, c2.c22),
            (c1.c20, c2.c20),
        ] {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn constants_decay_like_the_off_diagonal_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut worst: F = 0.0;
        for p in crate::arith::primes_up_to(97) {
            if p < 3 {
                continue;
            }
            let triple = SatakeTriple::random_tempered(&mut rng);
            let a1p = schur_coefficient(&triple, 0, 1);
            let ap1 = schur_coefficient(&triple, 1, 0);
            let c = gram_schmidt(&gram_matrix(p, a1p, ap1, 1.0)).unwrap();
            worst = worst.max(c.max_modulus() * (p as F).powf(0.5 - 5.0 / 14.0));
        }
        assert!(worst <= 10.0, "rescaled constant reached {worst}");
    }

    #[test]
    fn non_positive_definite_matrices_are_rejected() {
        // Equal rows make the matrix singular.
        let one = C::new(1.0, 0.0);
        let g = GramMatrix3 {
            matrix: [[one; 3], [one; 3], [one; 3]],
            norm: 1.0,
        };
        match gram_schmidt(&g) {
            Err(OldformError::NotPositiveDefinite { .. }) => {}
            other => panic!("expected positive-definiteness failure, got {other:?}"),
        }
        // A large off-diagonal entry breaks Hermiticity.
        let mut skew = gram_matrix(5, C::new(0.4, 0.1), C::new(0.4, -0.1), 1.0);
        skew.matrix[0][1] += C::new(0.5, 0.0);
        assert!(gram_schmidt(&skew).is_err());
    }

    #[test]
    fn series_identities_hold_for_tempered_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for p in [2u64, 3, 7] {
            let triple = SatakeTriple::random_tempered(&mut rng);
            for s in [C::new(1.0, 0.0), C::new(2.0, 1.0), C::new(1.5, 0.0)] {
                let r1 = check_rankin_local(p, &triple, s);
                assert!(r1.pass, "product check failed: {r1:?}");
                let r2 = check_shift_identity(p, &triple, s);
                assert!(r2.pass, "shift check failed: {r2:?}");
                let r3 = check_single_row_series(p, &triple, s);
                assert!(r3.pass, "ratio check failed: {r3:?}");
            }
        }
    }

    #[test]
    fn row_series_ratio_degenerates_when_the_first_coefficient_vanishes() {
        // Cube roots of unity sum to zero, killing the second ratio term.
        let omega = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let triple = SatakeTriple::unramified(C::new(1.0, 0.0), omega, omega * omega).unwrap();
        assert!(schur_coefficient(&triple, 0, 1).norm() < 1e-14);
        let report = check_single_row_series(3, &triple, C::new(1.25, 0.0));
        assert!(report.pass);
        let q: C = p_pow(3, -C::new(1.25, 0.0));
        let cube = C::new(1.0, 0.0) - q * q * q;
        assert!((C::new(report.rhs[0], report.rhs[1]) - cube * cube).norm() < 1e-12);
    }

    #[test]
    fn shift_identity_is_real_for_self_dual_data() {
        // A real-parameter triple (1, 1, 1) is self-dual: both sides real.
        let one = C::new(1.0, 0.0);
        let triple = SatakeTriple::unramified(one, one, one).unwrap();
        let report = check_shift_identity(5, &triple, C::new(1.5, 0.0));
        assert!(report.pass);
        assert!(report.lhs[1].abs() < 1e-10);
        assert!(report.rhs[1].abs() < 1e-10);
    }

    #[test]
    fn dominant_behavior_at_large_real_part() {
        let (_, triple) = sample_source(3, 5);
        let report = check_rankin_local(3, &triple, C::new(4.0, 0.0));
        assert!(report.pass);
        // Both sides are 1 + O(p^{-s}).
        assert!((report.lhs[0] - 1.0).abs() < 0.1);
    }

    #[test]
    fn unitary_series_constants_respect_the_decay_bounds() {
        let minimal = EisensteinClass::Minimal {
            s1: C::new(0.0, 0.4),
            s2: C::new(0.0, -1.1),
        };
        let c_min = eisenstein_ortho(&minimal, 7).unwrap();
        assert!(c_min.max_modulus() <= 10.0 * 7.0_f64.powf(-0.5));

        let degenerate = EisensteinClass::Minimal {
            s1: C::new(0.0, 0.0),
            s2: C::new(0.0, 0.0),
        };
        let c_deg = eisenstein_ortho(&degenerate, 7).unwrap();
        assert!(c_deg.max_modulus() <= 10.0 * 7.0_f64.powf(-0.5));

        let phase = C::from_polar(1.0, 0.8);
        let maximal = EisensteinClass::MaximalOld {
            a_p: phase,
            b_p: phase.conj(),
            s: C::new(0.0, 0.3),
        };
        let c_max = eisenstein_ortho(&maximal, 11).unwrap();
        assert!(c_max.max_modulus() <= 10.0 * 11.0_f64.powf(7.0 / 64.0 - 0.5));
    }

    #[test]
    fn eisenstein_pipeline_matches_direct_gram_schmidt() {
        let s1 = C::new(0.0, 0.9);
        let s2 = C::new(0.0, -0.2);
        let triple = SatakeTriple::eisenstein_min(7, s1, s2).unwrap();
        assert!(matches!(triple.kind, LocalKind::EisensteinMin { .. }));
        let a1p = schur_coefficient(&triple, 0, 1);
        let ap1 = schur_coefficient(&triple, 1, 0);
        let direct = gram_schmidt(&gram_matrix(7, a1p, ap1, 1.0)).unwrap();
        let via = eisenstein_ortho(&EisensteinClass::Minimal { s1, s2 }, 7).unwrap();
        assert!((direct.c10 - via.c10).norm() < 1e-14);
        assert!((direct.c22 - via.c22).norm() < 1e-14);
    }
}

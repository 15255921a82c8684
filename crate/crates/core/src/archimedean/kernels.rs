//! Gamma-ratio kernels of the integral transforms and the polynomial
//! factor of the smooth-cutoff weights.


use super::gamma::{gamma_pole_distance, ln_gamma};
use super::spectral::SpectralParameter;
use super::ArchimedeanError;
use crate::{C, F};

const PI: F = std::f64::consts::PI;

/// `1 / (12288 π^{7/2})`, the prefactor of the one-variable kernel.
pub(crate) fn w4_prefactor() -> F {
    1.0 / (12288.0 * PI.powf(3.5))
}

/// `1 / (1024 π^{5/2})`, the prefactor of the two-variable kernel.
pub(crate) fn w6_prefactor() -> F {
    1.0 / (1024.0 * PI.powf(2.5))
}

/// The parity triples `(d1, d2, d3)` with `d3 ≡ d1 + d2 (mod 2)`; exactly
/// four of the eight sign patterns survive.
pub const SYM_PARITY_COMBOS: [(u8, u8, u8); 4] = [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)];

fn check_pole(arg: C) -> Result<(), ArchimedeanError> {
    let distance = gamma_pole_distance(arg);
    if distance < 1e-9 {
        return Err(ArchimedeanError::PoleHit { distance });
    }
    Ok(())
}

/// The two Gamma-ratio products entering the one-variable kernel,
/// `Π_j Γ((s-μ_j)/2) / Γ((1-s+μ_j)/2)` and
/// `Π_j Γ((1+s-μ_j)/2) / Γ((2-s+μ_j)/2)`.
fn tilde_products(s: C, mu: &SpectralParameter) -> Result<(C, C), ArchimedeanError> {
    let mut sum1 = C::new(0.0, 0.0);
    let mut sum2 = C::new(0.0, 0.0);
    for m in &mu.mu {
        let n1 = (s - m) / 2.0;
        let n2 = (C::new(1.0, 0.0) + s - m) / 2.0;
        check_pole(n1)?;
        check_pole(n2)?;
        sum1 += ln_gamma(n1) - ln_gamma((C::new(1.0, 0.0) - s + m) / 2.0);
        sum2 += ln_gamma(n2) - ln_gamma((C::new(2.0, 0.0) - s + m) / 2.0);
    }
    Ok((sum1.exp(), sum2.exp()))
}

/// One-variable kernel on the vertical line, for argument sign `+1`/`-1`:
/// `π^{-3s}/(12288 π^{7/2}) · (P1 ± i P2)` with the products of
/// [`tilde_products`].  Fails when a numerator Gamma factor is evaluated
/// within 1e-9 of a pole.
pub fn kernel_g_tilde(s: C, mu: &SpectralParameter, sign: i8) -> Result<C, ArchimedeanError> {
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let (p1, p2) = tilde_products(s, mu)?;
    let c = (-s * 3.0 * PI.ln()).exp() * w4_prefactor();
    Ok(c * (p1 + C::new(0.0, sign as F) * p2))
}

/// Two-variable kernel: the four-term sum over parity triples
/// `(d1, d2, d3)` of signed Gamma-ratio products, with sign
/// `ε1^{d1} ε2^{d2} (-1)^{d1 d2}`, all divided by `1024 π^{5/2}`.
pub fn kernel_g_sym(
    s1: C,
    s2: C,
    mu: &SpectralParameter,
    eps1: i8,
    eps2: i8,
) -> Result<C, ArchimedeanError> {
    assert!(eps1 == 1 || eps1 == -1, "eps1 must be ±1");
    assert!(eps2 == 1 || eps2 == -1, "eps2 must be ±1");
    let mut total = C::new(0.0, 0.0);
    for &(d1, d2, d3) in &SYM_PARITY_COMBOS {
        let d1f = d1 as F;
        let d2f = d2 as F;
        let d3f = d3 as F;
        let head_num = (C::new(1.0 + d3f, 0.0) - s1 - s2) / 2.0;
        check_pole(head_num)?;
        let mut sum = ln_gamma(head_num) - ln_gamma((C::new(d3f, 0.0) + s1 + s2) / 2.0);
        for m in &mu.mu {
            let n1 = (C::new(d1f, 0.0) + s1 - m) / 2.0;
            let n2 = (C::new(d2f, 0.0) + s2 + m) / 2.0;
            check_pole(n1)?;
            check_pole(n2)?;
            sum += ln_gamma(n1) + ln_gamma(n2)
                - ln_gamma((C::new(1.0 + d1f, 0.0) - s1 + m) / 2.0)
                - ln_gamma((C::new(1.0 + d2f, 0.0) - s2 - m) / 2.0);
        }
        let mut coef = 1.0;
        if eps1 < 0 && d1 == 1 {
            coef = -coef;
        }
        if eps2 < 0 && d2 == 1 {
            coef = -coef;
        }
        if d1 == 1 && d2 == 1 {
            coef = -coef;
        }
        total += sum.exp() * coef;
    }
    Ok(total * w6_prefactor())
}

/// Complex logarithm of the weight polynomial, or `None` when a factor
/// vanishes exactly.
pub(crate) fn ln_polynomial_g(u: C, mu: &SpectralParameter, a0: u32) -> Option<C> {
    let head = C::new(1.0, 0.0) - u * u * 4.0;
    if head.norm_sqr() == 0.0 {
        return None;
    }
    let mut acc = head.ln();
    let bound = a0 as i64;
    for n in -bound..=bound {
        if n.rem_euclid(2) == 1 {
            continue;
        }
        let base = C::new(0.5 + n as F, 0.0) - u;
        for s in mu.pair_sums() {
            for f in [base + s, base - s] {
                if f.norm_sqr() == 0.0 {
                    return None;
                }
                acc += f.ln();
            }
        }
    }
    Some(acc)
}

/// The polynomial factor of the smooth-cutoff weights:
/// `(1 - 4u²) · Π_{n even, |n| ≤ a0} Π_{i ≤ j} (1/2 - u ± (μ_i + μ_j) + n)`.
///
/// Evaluated in linear range; for cutoffs beyond roughly 16 the value can
/// exceed f64 range at generic arguments (the weight integrals themselves
/// evaluate it in log space and are not affected).
pub fn polynomial_g(u: C, mu: &SpectralParameter, a0: u32) -> C {
    match ln_polynomial_g(u, mu, a0) {
        None => C::new(0.0, 0.0),
        Some(e) => e.exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archimedean::gamma::ln_gamma_spouge;

    #[test]
    fn sign_flip_isolates_the_second_product() {
        let mu = SpectralParameter::tempered(0.3, -0.9);
        let s = C::new(0.25, 0.6);
        let plus = kernel_g_tilde(s, &mu, 1).unwrap();
        let minus = kernel_g_tilde(s, &mu, -1).unwrap();
        let (_, p2) = tilde_products(s, &mu).unwrap();
        let c = (-s * 3.0 * PI.ln()).exp() * w4_prefactor();
        let expected = c * p2 * C::new(0.0, 2.0);
        let diff = plus - minus;
        assert!((diff - expected).norm() <= 1e-12 * expected.norm());
    }

    #[test]
    fn matches_an_independent_gamma_backend() {
        let mu = SpectralParameter::tempered(1.1, -0.35);
        let s = C::new(0.25, 2.0);
        let via_spouge = |sign: F| {
            let mut sum1 = C::new(0.0, 0.0);
            let mut sum2 = C::new(0.0, 0.0);
            for m in &mu.mu {
                sum1 += ln_gamma_spouge((s - m) / 2.0)
                    - ln_gamma_spouge((C::new(1.0, 0.0) - s + m) / 2.0);
                sum2 += ln_gamma_spouge((C::new(1.0, 0.0) + s - m) / 2.0)
                    - ln_gamma_spouge((C::new(2.0, 0.0) - s + m) / 2.0);
            }
            (-s * 3.0 * PI.ln()).exp()
                * w4_prefactor()
                * (sum1.exp() + C::new(0.0, sign) * sum2.exp())
        };
        for sign in [1i8, -1] {
            let lhs = kernel_g_tilde(s, &mu, sign).unwrap();
            let rhs = via_spouge(sign as F);
            assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm());
        }
    }

    #[test]
    fn near_pole_arguments_are_rejected() {
        // s = μ1 makes the first numerator argument exactly zero.
        let mu = SpectralParameter::tempered(1.0, 0.0);
        let res = kernel_g_tilde(C::new(0.0, 1.0), &mu, 1);
        assert!(matches!(res, Err(ArchimedeanError::PoleHit { .. })));
        // s1 + s2 = 1 puts the head factor of the even-parity term at zero.
        let res = kernel_g_sym(
            C::new(0.5, 0.0),
            C::new(0.5, 0.0),
            &SpectralParameter::tempered(0.4, 0.1),
            1,
            1,
        );
        assert!(matches!(res, Err(ArchimedeanError::PoleHit { .. })));
    }

    #[test]
    fn decay_along_the_line_matches_the_first_order_exponent() {
        // The surviving side of the kernel behaves like t^{-3/4} for large
        // t, up to corrections that vanish as t grows.
        let mu = SpectralParameter::tempered(0.4, -0.1);
        let at = |t: F| kernel_g_tilde(C::new(0.25, t), &mu, 1).unwrap().norm();
        let slope = (at(80.0) / at(40.0)).ln() / (80.0f64 / 40.0).ln();
        assert!(
            (slope + 0.75).abs() < 0.1,
            "log-slope {slope} should be near -3/4"
        );
    }

    #[test]
    fn exactly_half_of_the_parity_patterns_survive() {
        let mut admissible = 0;
        for d1 in 0..2u8 {
            for d2 in 0..2u8 {
                for d3 in 0..2u8 {
                    if (d1 + d2) % 2 == d3 % 2 {
                        admissible += 1;
                        assert!(SYM_PARITY_COMBOS.contains(&(d1, d2, d3)));
                    }
                }
            }
        }
        assert_eq!(admissible, SYM_PARITY_COMBOS.len());
    }

    #[test]
    fn two_variable_kernel_has_the_swap_symmetry() {
        let mu = SpectralParameter::tempered(0.7, -1.3);
        let s1 = C::new(0.25, 0.8);
        let s2 = C::new(0.25, -1.7);
        for (e1, e2) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
            let lhs = kernel_g_sym(s1, s2, &mu, e1, e2).unwrap();
            let rhs = kernel_g_sym(s2, s1, &mu.negated(), e2, e1).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1e-300));
        }
    }

    #[test]
    fn two_variable_kernel_matches_a_direct_recomputation() {
        let mu = SpectralParameter::tempered(0.25, 0.65);
        let s1 = C::new(0.25, 1.1);
        let s2 = C::new(0.25, 0.4);
        let lhs = kernel_g_sym(s1, s2, &mu, -1, 1).unwrap();
        let mut rhs = C::new(0.0, 0.0);
        for &(d1, d2, d3) in &SYM_PARITY_COMBOS {
            let sign = (-1.0f64).powi(d1 as i32) * (-1.0f64).powi((d1 * d2) as i32);
            let head = ln_gamma_spouge((C::new(1.0 + d3 as F, 0.0) - s1 - s2) / 2.0)
                - ln_gamma_spouge((C::new(d3 as F, 0.0) + s1 + s2) / 2.0);
            let mut sum = head;
            for m in &mu.mu {
                sum += ln_gamma_spouge((C::new(d1 as F, 0.0) + s1 - m) / 2.0)
                    + ln_gamma_spouge((C::new(d2 as F, 0.0) + s2 + m) / 2.0)
                    - ln_gamma_spouge((C::new(1.0 + d1 as F, 0.0) - s1 + m) / 2.0)
                    - ln_gamma_spouge((C::new(1.0 + d2 as F, 0.0) - s2 - m) / 2.0);
            }
            rhs += sum.exp() * sign;
        }
        rhs *= w6_prefactor();
        assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm());
    }

    #[test]
    fn weight_polynomial_vanishes_at_its_designed_zeros() {
        let mu = SpectralParameter::tempered(0.8, -0.3);
        let scale = polynomial_g(C::new(0.0, 0.0), &mu, 10).norm();
        assert!(scale > 0.0);
        let at_half = polynomial_g(C::new(0.5, 0.0), &mu, 10);
        assert!(at_half.norm() <= 1e-12 * scale);
        // u = 1/2 + μ_i + μ_j kills the n = 0 factor.
        let u = C::new(0.5, 0.0) + mu.mu[0] + mu.mu[1];
        let at_shift = polynomial_g(u, &mu, 10);
        assert!(at_shift.norm() <= 1e-9 * scale);
    }

    #[test]
    fn weight_polynomial_is_even_in_the_pair_sums() {
        // Negating μ permutes the factors, leaving the product unchanged.
        let mu = SpectralParameter::tempered(1.9, 0.3);
        let u = C::new(2.0, 1.0);
        let a = polynomial_g(u, &mu, 10);
        let b = polynomial_g(u, &mu.negated(), 10);
        assert!((a - b).norm() <= 1e-10 * a.norm());
    }
}

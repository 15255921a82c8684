//! Spectral parameters of the degree-3 principal series.

use thiserror::Error;

use super::ArchimedeanError;
use crate::{C, F};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("spectral parameter must sum to zero: |μ1+μ2+μ3| = {defect:.3e}")]
    NotTraceless { defect: F },
}

/// Bound on the real parts of spectral parameters of cusp forms.
pub const SPECTRAL_REAL_BOUND: F = 5.0 / 14.0;

/// A triple `μ = (μ1, μ2, μ3)` with `μ1 + μ2 + μ3 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    pub mu: [C; 3],
}

impl SpectralParameter {
    pub fn new(mu: [C; 3]) -> Result<Self, SpectralError> {
        let defect = (mu[0] + mu[1] + mu[2]).norm();
        if defect > 1e-10 {
            return Err(SpectralError::NotTraceless { defect });
        }
        Ok(SpectralParameter { mu })
    }

    /// Tempered point `μ = (i·t1, i·t2, -i·(t1+t2))`.
    pub fn tempered(t1: F, t2: F) -> Self {
        SpectralParameter {
            mu: [
                C::new(0.0, t1),
                C::new(0.0, t2),
                C::new(0.0, -(t1 + t2)),
            ],
        }
    }

    pub fn zero() -> Self {
        SpectralParameter {
            mu: [C::new(0.0, 0.0); 3],
        }
    }

    /// Whether all components are purely imaginary within `tol`.
    pub fn is_tempered(&self, tol: F) -> bool {
        self.mu.iter().all(|m| m.re.abs() <= tol)
    }

    /// The dual parameter `-μ`.
    pub fn negated(&self) -> Self {
        SpectralParameter {
            mu: [-self.mu[0], -self.mu[1], -self.mu[2]],
        }
    }

    /// Pair sums `μ_i + μ_j` for `1 ≤ i ≤ j ≤ 3` in lexicographic order.
    pub fn pair_sums(&self) -> [C; 6] {
        let m = &self.mu;
        [
            m[0] + m[0],
            m[0] + m[1],
            m[0] + m[2],
            m[1] + m[1],
            m[1] + m[2],
            m[2] + m[2],
        ]
    }

    /// Pairwise differences `μ_i - μ_j` for `i < j`.
    pub fn pair_diffs(&self) -> [C; 3] {
        let m = &self.mu;
        [m[0] - m[1], m[0] - m[2], m[1] - m[2]]
    }

    /// The parameter with components permuted by `perm` (an index triple).
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        SpectralParameter {
            mu: [self.mu[perm[0]], self.mu[perm[1]], self.mu[perm[2]]],
        }
    }

    /// Whether the parameter can belong to a cusp form: real parts within
    /// the unitarity bound 5/14 and the multiset `{μ}` closed under
    /// `μ ↦ -conj(μ)`.
    pub fn is_automorphic(&self, tol: F) -> bool {
        if self.mu.iter().any(|m| m.re.abs() > SPECTRAL_REAL_BOUND + tol) {
            return false;
        }
        // Greedy multiset matching is fine for three elements.
        let mut used = [false; 3];
        'outer: for m in &self.mu {
            let target = -m.conj();
            for (k, cand) in self.mu.iter().enumerate() {
                if !used[k] && (cand - target).norm() <= tol {
                    used[k] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

/// The Plancherel-type density attached to `μ`: the product over pairs
/// `i < j` of `(μ_i - μ_j) · tan(π (μ_i - μ_j) / 2)`.
///
/// Each factor is even in the difference, so the value does not depend on
/// the ordering convention, and the whole product is invariant under
/// permutations of `μ`.  On the tempered contour every factor equals
/// `-d·tanh(π d / 2) ≤ 0` with `d = Im(μ_i - μ_j)`, so the density is real
/// and nonpositive there.  Fails when a tangent argument comes within 1e-9
/// of one of its poles (odd integers).
pub fn spec_measure(mu: &SpectralParameter) -> Result<C, ArchimedeanError> {
    let mut out = C::new(1.0, 0.0);
    for d in mu.pair_diffs() {
        let nearest_odd = 2.0 * ((d.re - 1.0) / 2.0).round() + 1.0;
        let distance = (d - C::new(nearest_odd, 0.0)).norm();
        if distance < 1e-9 {
            return Err(ArchimedeanError::TanPole { distance });
        }
        let half_pi_d = d * (std::f64::consts::PI / 2.0);
        out *= d * half_pi_d.tan();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_enforces_trace_zero() {
        let bad = SpectralParameter::new([
            C::new(0.1, 0.0),
            C::new(0.1, 0.0),
            C::new(0.1, 0.0),
        ]);
        assert!(matches!(bad, Err(SpectralError::NotTraceless { .. })));
        let ok = SpectralParameter::new([
            C::new(0.2, 1.0),
            C::new(-0.2, 2.0),
            C::new(0.0, -3.0),
        ]);
        assert!(ok.is_ok());
    }

    #[test]
    fn tempered_points_are_tempered() {
        let mu = SpectralParameter::tempered(1.7, -0.4);
        assert!(mu.is_tempered(0.0));
        assert_eq!((mu.mu[0] + mu.mu[1] + mu.mu[2]).norm(), 0.0);
        assert_eq!(mu.mu[2], C::new(0.0, -(1.7 + (-0.4_f64))));
    }

    #[test]
    fn pair_sums_cover_upper_triangle() {
        let mu = SpectralParameter::tempered(1.0, 2.0);
        let sums = mu.pair_sums();
        assert_eq!(sums[0], C::new(0.0, 2.0));
        assert_eq!(sums[1], C::new(0.0, 3.0));
        assert_eq!(sums[5], C::new(0.0, -6.0));
    }

    #[test]
    fn automorphic_flag_accepts_dual_closed_triples() {
        assert!(SpectralParameter::tempered(0.9, -2.4).is_automorphic(1e-12));
        // A complementary-series style triple (x, -x, 0) with small real x.
        let comp = SpectralParameter::new([
            C::new(0.3, 0.0),
            C::new(-0.3, 0.0),
            C::new(0.0, 0.0),
        ])
        .unwrap();
        assert!(comp.is_automorphic(1e-12));
        // Real parts beyond 5/14 are rejected.
        let wide = SpectralParameter::new([
            C::new(0.4, 0.0),
            C::new(-0.4, 0.0),
            C::new(0.0, 0.0),
        ])
        .unwrap();
        assert!(!wide.is_automorphic(1e-12));
        // Closure failure: real parts fine but the multiset is not dual.
        let skew = SpectralParameter::new([
            C::new(0.2, 1.0),
            C::new(-0.1, -0.4),
            C::new(-0.1, -0.6),
        ])
        .unwrap();
        assert!(!skew.is_automorphic(1e-9));
    }

    #[test]
    fn density_vanishes_at_the_origin_and_matches_a_direct_formula() {
        let zero = spec_measure(&SpectralParameter::zero()).unwrap();
        assert_eq!(zero, C::new(0.0, 0.0));

        // On the tempered contour each factor is -d·tanh(π d/2) with real d.
        let mu = SpectralParameter::tempered(1.0, -1.0);
        let value = spec_measure(&mu).unwrap();
        let factor = |d: F| -d * (std::f64::consts::PI * d / 2.0).tanh();
        let expected = factor(2.0) * factor(1.0) * factor(-1.0);
        assert!((value.re - expected).abs() < 1e-12);
        assert!(value.im.abs() < 1e-14);
        assert!(value.re < 0.0);
    }

    #[test]
    fn density_is_weyl_invariant() {
        let mu = SpectralParameter::tempered(0.83, -2.41);
        let base = spec_measure(&mu).unwrap();
        for perm in [
            [0usize, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            let v = spec_measure(&mu.permuted(perm)).unwrap();
            assert!((v - base).norm() <= 1e-10 * base.norm().max(1.0));
        }
    }

    #[test]
    fn density_reports_tangent_poles() {
        let mu = SpectralParameter::new([
            C::new(0.5, 0.0),
            C::new(-0.5, 0.0),
            C::new(0.0, 0.0),
        ])
        .unwrap();
        match spec_measure(&mu) {
            Err(ArchimedeanError::TanPole { distance }) => assert!(distance < 1e-9),
            other => panic!("expected a tangent-pole error, got {other:?}"),
        }
    }
}

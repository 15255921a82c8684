//! Spectral-side integral transforms and smooth-cutoff weights.
//!
//! The two kernel transforms integrate a test function against Gamma-ratio
//! kernels over the tempered spectral plane and one or two vertical lines.
//! Both are evaluated through argument-independent intermediates:
//!
//! * one-variable case: the spectral integration is performed once per line
//!   node, leaving a pair of line profiles; each transform value is then a
//!   single weighted sum of `|y|^{-s}` over the line;
//! * two-variable case: the spectral integration is accumulated into four
//!   node-by-node matrices (one per surviving parity pair), and each value
//!   is a bilinear form of two power vectors.
//!
//! Because every line and the spectral grid share one uniform lattice, each
//! Gamma ratio appearing in the kernels is a table lookup: the ratio
//! arguments `(t - τ)/2` all land on a fixed half-step lattice.
//!
//! Convergence is certified per evaluation by recomputing on a line grid
//! with doubled node density and demanding relative agreement; the spectral
//! grid spacing is fixed well inside its own (geometric) convergence regime
//! and validated separately by the test suite.


use super::gamma::{ln_gamma, ln_gamma_r};
use super::kernels::{ln_polynomial_g, polynomial_g, w4_prefactor, w6_prefactor};
use super::quad::QuadratureSpec;
use super::spectral::{spec_measure, SpectralParameter};
use super::testfn::TestFunctionSpec;
use super::ArchimedeanError;
use crate::{C, F};

const PI: F = std::f64::consts::PI;

/// Normalization of the spectral-plane measure, fixed so that the diagonal
/// main term built from a positive test function comes out positive: the
/// density is nonpositive on the tempered contour, so the measure carries
/// the compensating sign together with the `(2π)^{-2}` of the two
/// integration variables.
const SPECTRAL_ORIENTATION: F = -1.0 / (4.0 * PI * PI);

/// Relative node-doubling agreement demanded of every reported value.
const REFINEMENT_LIMIT: F = 1e-4;

/// Admissible range for transform arguments.
const Y_DOMAIN: std::ops::RangeInclusive<F> = 1e-6..=1e6;

fn refinement_gate(coarse: C, fine: C) -> Result<(), ArchimedeanError> {
    let scale = coarse.norm().max(fine.norm());
    if scale < 1e-280 {
        return Ok(());
    }
    let rel_change = (coarse - fine).norm() / scale;
    if rel_change > REFINEMENT_LIMIT {
        return Err(ArchimedeanError::QuadratureNotConverged {
            rel_change,
            limit: REFINEMENT_LIMIT,
        });
    }
    Ok(())
}

/// Tempered spectral nodes with all μ-independent factors folded in:
/// test function, density, cell area, and measure orientation.  Nodes whose
/// weight is negligible relative to the largest one are dropped.
struct SpectralGrid {
    taus: Vec<(F, F)>,
    weights: Vec<C>,
}

fn spectral_grid(h: &TestFunctionSpec, quad: &QuadratureSpec) -> SpectralGrid {
    let axis = quad.mu_axis();
    let cell = quad.mu_step * quad.mu_step * SPECTRAL_ORIENTATION;
    let mut taus = Vec::new();
    let mut weights = Vec::new();
    for &t1 in &axis {
        for &t2 in &axis {
            let mu = SpectralParameter::tempered(t1, t2);
            let density =
                spec_measure(&mu).expect("the density has no poles on the tempered contour");
            let w = h.eval(&mu) * density * cell;
            if w.norm_sqr() > 0.0 {
                taus.push((t1, t2));
                weights.push(w);
            }
        }
    }
    let top = weights.iter().map(|w| w.norm()).fold(0.0, F::max);
    let floor = top * 1e-18;
    let mut kept_taus = Vec::with_capacity(taus.len());
    let mut kept_weights = Vec::with_capacity(weights.len());
    for (tau, w) in taus.into_iter().zip(weights) {
        if w.norm() >= floor {
            kept_taus.push(tau);
            kept_weights.push(w);
        }
    }
    SpectralGrid {
        taus: kept_taus,
        weights: kept_weights,
    }
}

/// The plain spectral integral of the test function against the density —
/// the diagonal contribution of the spectral average.
pub fn spectral_integral(h: &TestFunctionSpec, quad: &QuadratureSpec) -> C {
    let grid = spectral_grid(h, quad);
    grid.weights.iter().sum()
}

/// Lookup table of a Gamma-ratio factor over the shared half-step lattice.
struct RatioTable {
    vmin: F,
    inv_step: F,
    values: Vec<C>,
}

impl RatioTable {
    fn build(vmax: F, step: F, f: impl Fn(F) -> C) -> RatioTable {
        let n = (2.0 * vmax / step).round() as usize + 1;
        let vmin = -vmax;
        let values = (0..n).map(|k| f(vmin + k as F * step)).collect();
        RatioTable {
            vmin,
            inv_step: 1.0 / step,
            values,
        }
    }

    #[inline]
    fn get(&self, v: F) -> C {
        let x = (v - self.vmin) * self.inv_step;
        let k = x.round();
        debug_assert!(
            (x - k).abs() < 1e-6,
            "ratio argument {v} off the table lattice"
        );
        self.values[k as usize]
    }
}

fn assert_commensurate(quad: &QuadratureSpec) {
    let ratio = quad.mu_step / quad.line_step();
    assert!(
        (ratio - ratio.round()).abs() < 1e-9 && ratio.round() >= 1.0,
        "spectral spacing must be an integer multiple of the line spacing"
    );
}

/// One-variable kernel integrated against the test function: a pair of
/// functions of the line node only (one per argument sign).
pub struct LineProfile {
    sigma: F,
    ts: Vec<F>,
    plus: Vec<C>,
    minus: Vec<C>,
}

fn line_profile(h: &TestFunctionSpec, quad: &QuadratureSpec, negate_mu: bool) -> LineProfile {
    assert_commensurate(quad);
    let grid = spectral_grid(h, quad);
    let sigma = quad.offset();
    let ts = quad.line_nodes();
    let step = quad.line_step() / 2.0;
    let vmax = (quad.height + 4.0 * quad.mu_radius) / 2.0 + step;
    let g1 = RatioTable::build(vmax, step, |v| {
        (ln_gamma(C::new(sigma / 2.0, v)) - ln_gamma(C::new((1.0 - sigma) / 2.0, -v))).exp()
    });
    let g2 = RatioTable::build(vmax, step, |v| {
        (ln_gamma(C::new((1.0 + sigma) / 2.0, v)) - ln_gamma(C::new(1.0 - sigma / 2.0, -v))).exp()
    });
    let n = ts.len();
    let mut first = vec![C::new(0.0, 0.0); n];
    let mut second = vec![C::new(0.0, 0.0); n];
    let flip = if negate_mu { -1.0 } else { 1.0 };
    for (&(t1, t2), &w) in grid.taus.iter().zip(&grid.weights) {
        let tau = [flip * t1, flip * t2, -flip * (t1 + t2)];
        for (k, &t) in ts.iter().enumerate() {
            let v0 = (t - tau[0]) / 2.0;
            let v1 = (t - tau[1]) / 2.0;
            let v2 = (t - tau[2]) / 2.0;
            first[k] += w * (g1.get(v0) * g1.get(v1) * g1.get(v2));
            second[k] += w * (g2.get(v0) * g2.get(v1) * g2.get(v2));
        }
    }
    let mut plus = vec![C::new(0.0, 0.0); n];
    let mut minus = vec![C::new(0.0, 0.0); n];
    for k in 0..n {
        let s = C::new(sigma, ts[k]);
        let c = (-s * 3.0 * PI.ln()).exp() * w4_prefactor() * (quad.line_weight(k) / (2.0 * PI));
        let rot = C::new(0.0, 1.0) * second[k];
        plus[k] = c * (first[k] + rot);
        minus[k] = c * (first[k] - rot);
    }
    LineProfile {
        sigma,
        ts,
        plus,
        minus,
    }
}

impl LineProfile {
    fn eval(&self, y: F) -> C {
        let l = y.abs().ln();
        let side = if y > 0.0 { &self.plus } else { &self.minus };
        let mut acc = C::new(0.0, 0.0);
        for (k, &t) in self.ts.iter().enumerate() {
            acc += (-C::new(self.sigma, t) * l).exp() * side[k];
        }
        acc
    }
}

/// One-variable transform with its refinement companion.
pub struct W4Transform {
    coarse: LineProfile,
    fine: LineProfile,
    reflect: bool,
}

/// Builds the transform of the first kind (argument used as given).
pub fn w4_transform(h: &TestFunctionSpec, quad: &QuadratureSpec) -> W4Transform {
    W4Transform {
        coarse: line_profile(h, quad, false),
        fine: line_profile(h, &quad.doubled(), false),
        reflect: false,
    }
}

/// Builds the transform of the second kind, defined as the first kind
/// evaluated at `(-y, -μ)`.
pub fn w5_transform(h: &TestFunctionSpec, quad: &QuadratureSpec) -> W4Transform {
    W4Transform {
        coarse: line_profile(h, quad, true),
        fine: line_profile(h, &quad.doubled(), true),
        reflect: true,
    }
}

impl W4Transform {
    pub fn eval(&self, y: F) -> Result<C, ArchimedeanError> {
        assert!(
            Y_DOMAIN.contains(&y.abs()),
            "transform argument magnitude must lie in [1e-6, 1e6]"
        );
        let y = if self.reflect { -y } else { y };
        let coarse = self.coarse.eval(y);
        let fine = self.fine.eval(y);
        refinement_gate(coarse, fine)?;
        Ok(fine)
    }
}

/// One-shot evaluation of the first-kind transform.
pub fn phi_w4(y: F, h: &TestFunctionSpec, quad: &QuadratureSpec) -> Result<C, ArchimedeanError> {
    w4_transform(h, quad).eval(y)
}

/// One-shot evaluation of the second-kind transform.
pub fn phi_w5(y: F, h: &TestFunctionSpec, quad: &QuadratureSpec) -> Result<C, ArchimedeanError> {
    w5_transform(h, quad).eval(y)
}

/// Two-variable kernel integrated against the test function: four matrices
/// over line-node pairs, one per surviving parity pair `(d1, d2)`.
pub struct W6Grid {
    sigma: F,
    ts: Vec<F>,
    mats: [Vec<C>; 4],
}

fn w6_grid(h: &TestFunctionSpec, quad: &QuadratureSpec) -> W6Grid {
    assert_commensurate(quad);
    let grid = spectral_grid(h, quad);
    let sigma = quad.offset();
    assert!(
        quad.offsets.len() >= 2 && (quad.offsets[0] - quad.offsets[1]).abs() < 1e-12,
        "the two lines are expected on a common offset"
    );
    let ts = quad.line_nodes();
    let n = ts.len();
    let step = quad.line_step() / 2.0;
    let vmax = (quad.height + 4.0 * quad.mu_radius) / 2.0 + step;
    // Gamma-ratio tables for the per-variable factors, one per parity.
    let u_tab: [RatioTable; 2] = std::array::from_fn(|d| {
        let df = d as F;
        RatioTable::build(vmax, step, |v| {
            (ln_gamma(C::new((df + sigma) / 2.0, v))
                - ln_gamma(C::new((1.0 + df - sigma) / 2.0, -v)))
            .exp()
        })
    });
    // Head-factor tables in (t1 + t2)/2, one per d3 parity.
    let r_tab: [RatioTable; 2] = std::array::from_fn(|d| {
        let df = d as F;
        RatioTable::build(quad.height + step, step, |a| {
            (ln_gamma(C::new((1.0 + df - 2.0 * sigma) / 2.0, -a))
                - ln_gamma(C::new((df + 2.0 * sigma) / 2.0, a)))
            .exp()
        })
    });
    let mut mats: [Vec<C>; 4] = std::array::from_fn(|_| vec![C::new(0.0, 0.0); n * n]);
    let mut u_rows = [vec![C::new(0.0, 0.0); n], vec![C::new(0.0, 0.0); n]];
    let mut ut_rows = [vec![C::new(0.0, 0.0); n], vec![C::new(0.0, 0.0); n]];
    for (&(t1, t2), &w) in grid.taus.iter().zip(&grid.weights) {
        let tau = [t1, t2, -(t1 + t2)];
        for d in 0..2 {
            for (k, &t) in ts.iter().enumerate() {
                u_rows[d][k] = u_tab[d].get((t - tau[0]) / 2.0)
                    * u_tab[d].get((t - tau[1]) / 2.0)
                    * u_tab[d].get((t - tau[2]) / 2.0);
                ut_rows[d][k] = u_tab[d].get((t + tau[0]) / 2.0)
                    * u_tab[d].get((t + tau[1]) / 2.0)
                    * u_tab[d].get((t + tau[2]) / 2.0);
            }
        }
        for d1 in 0..2 {
            for d2 in 0..2 {
                let mat = &mut mats[2 * d1 + d2];
                let ut = &ut_rows[d2];
                for k1 in 0..n {
                    let c = w * u_rows[d1][k1];
                    let row = &mut mat[k1 * n..(k1 + 1) * n];
                    for (slot, &u) in row.iter_mut().zip(ut) {
                        *slot += c * u;
                    }
                }
            }
        }
    }
    // Fold the head factor, prefactor, and trapezoid weights.
    let lw: Vec<F> = (0..n).map(|k| quad.line_weight(k) / (2.0 * PI)).collect();
    for d1 in 0..2 {
        for d2 in 0..2 {
            let mat = &mut mats[2 * d1 + d2];
            let r = &r_tab[(d1 + d2) % 2];
            for k1 in 0..n {
                for k2 in 0..n {
                    let head = r.get((ts[k1] + ts[k2]) / 2.0);
                    mat[k1 * n + k2] *= head * w6_prefactor() * lw[k1] * lw[k2];
                }
            }
        }
    }
    W6Grid { sigma, ts, mats }
}

impl W6Grid {
    fn eval(&self, y1: F, y2: F) -> C {
        let n = self.ts.len();
        let power_vector = |y: F| -> Vec<C> {
            let l = (PI * PI * y.abs()).ln();
            self.ts
                .iter()
                .map(|&t| (-C::new(self.sigma, t) * l).exp())
                .collect()
        };
        let x1 = power_vector(y1);
        let x2 = power_vector(y2);
        let mut total = C::new(0.0, 0.0);
        for d1 in 0..2 {
            for d2 in 0..2 {
                let mat = &self.mats[2 * d1 + d2];
                let mut z = C::new(0.0, 0.0);
                for k1 in 0..n {
                    let row = &mat[k1 * n..(k1 + 1) * n];
                    let mut acc = C::new(0.0, 0.0);
                    for (m, x) in row.iter().zip(&x2) {
                        acc += m * x;
                    }
                    z += x1[k1] * acc;
                }
                let mut sign = 1.0;
                if d1 == 1 && y1 < 0.0 {
                    sign = -sign;
                }
                if d2 == 1 && y2 < 0.0 {
                    sign = -sign;
                }
                if d1 == 1 && d2 == 1 {
                    sign = -sign;
                }
                total += z * sign;
            }
        }
        total
    }
}

/// Two-variable transform with its refinement companion.
pub struct W6Transform {
    coarse: W6Grid,
    fine: W6Grid,
}

pub fn w6_transform(h: &TestFunctionSpec, quad: &QuadratureSpec) -> W6Transform {
    W6Transform {
        coarse: w6_grid(h, quad),
        fine: w6_grid(h, &quad.doubled()),
    }
}

impl W6Transform {
    pub fn eval(&self, y1: F, y2: F) -> Result<C, ArchimedeanError> {
        for y in [y1, y2] {
            assert!(
                Y_DOMAIN.contains(&y.abs()),
                "transform argument magnitudes must lie in [1e-6, 1e6]"
            );
        }
        let coarse = self.coarse.eval(y1, y2);
        let fine = self.fine.eval(y1, y2);
        refinement_gate(coarse, fine)?;
        Ok(fine)
    }
}

/// One-shot evaluation of the two-variable transform.
pub fn phi_w6(
    y1: F,
    y2: F,
    h: &TestFunctionSpec,
    quad: &QuadratureSpec,
) -> Result<C, ArchimedeanError> {
    w6_transform(h, quad).eval(y1, y2)
}

/// Log of the archimedean dual-to-plain factor ratio carried by the second
/// smooth-cutoff weight.
fn dual_weight_ratio_ln(u: C, mu: &SpectralParameter) -> C {
    let mut acc = C::new(0.0, 0.0);
    for s in mu.pair_sums() {
        acc += ln_gamma_r(C::new(0.5, 0.0) + u - s) - ln_gamma_r(C::new(0.5, 0.0) - u + s);
    }
    acc
}

fn cutoff_line_integral(
    x: F,
    mu: &SpectralParameter,
    a0: u32,
    quad: &QuadratureSpec,
    dual: bool,
) -> C {
    let sigma = quad.offset();
    assert!(
        sigma.abs() > 0.05,
        "the contour must stay away from the pole at the origin"
    );
    if dual {
        assert!(sigma > 0.0, "the dual-weight contour stays right of zero");
    }
    let lnx = x.ln();
    let ts = quad.line_nodes();
    let mut acc = C::new(0.0, 0.0);
    for (k, &t) in ts.iter().enumerate() {
        let u = C::new(sigma, t);
        let g_arg = if dual { -u } else { u };
        let Some(lg) = ln_polynomial_g(g_arg, mu, a0) else {
            continue;
        };
        let mut e = -u * lnx + u * u + lg - u.ln();
        if dual {
            e += dual_weight_ratio_ln(u, mu);
        }
        acc += e.exp() * (quad.line_weight(k) / (2.0 * PI));
    }
    acc
}

fn cutoff_line(x: F, mu: &SpectralParameter, a0: u32, quad: &QuadratureSpec, dual: bool) -> C {
    let mut acc = cutoff_line_integral(x, mu, a0, quad, dual);
    if quad.offset() < 0.0 {
        // The contour sits left of the simple pole at the origin; the
        // residue there is the polynomial factor at zero.
        acc += polynomial_g(C::new(0.0, 0.0), mu, a0);
    }
    acc
}

/// Contour offset suited to evaluating the cutoff weights at argument `x`:
/// near the stationary abscissa `ln(x)/2` for extreme arguments (where a
/// fixed line would hide the value under ten or more orders of
/// cancellation), a fixed right contour otherwise.
pub fn weights_offset(x: F) -> F {
    let half_ln = 0.5 * x.ln();
    if half_ln.abs() < 2.0 {
        2.0
    } else {
        half_ln.clamp(-9.5, 9.5)
    }
}

/// First smooth-cutoff weight: the contour integral of
/// `x^{-u} e^{u²} G(u,μ) / u`.  Contours left of the origin include the
/// residue term, so the value stays the same analytic object.
pub fn weight_v(
    x: F,
    mu: &SpectralParameter,
    a0: u32,
    quad: &QuadratureSpec,
) -> Result<C, ArchimedeanError> {
    assert!(
        x.is_finite() && (1e-8..=1e8).contains(&x),
        "cutoff argument must lie in [1e-8, 1e8]"
    );
    let coarse = cutoff_line(x, mu, a0, quad, false);
    let fine = cutoff_line(x, mu, a0, &quad.doubled(), false);
    refinement_gate(coarse, fine)?;
    Ok(fine)
}

/// Deviation of the first cutoff weight from its small-argument limit,
/// computed as the bare line integral on a left contour (the residue term
/// is the limit itself).  Summing and subtracting instead would lose the
/// deviation entirely once it drops below the rounding floor of the limit.
pub fn weight_v_deviation(
    x: F,
    mu: &SpectralParameter,
    a0: u32,
    quad: &QuadratureSpec,
) -> Result<C, ArchimedeanError> {
    assert!(
        x.is_finite() && (1e-8..=1e8).contains(&x),
        "cutoff argument must lie in [1e-8, 1e8]"
    );
    assert!(
        quad.offset() < -0.05,
        "the deviation is the integral left of the origin"
    );
    let coarse = cutoff_line_integral(x, mu, a0, quad, false);
    let fine = cutoff_line_integral(x, mu, a0, &quad.doubled(), false);
    refinement_gate(coarse, fine)?;
    Ok(fine)
}

/// Second smooth-cutoff weight: as [`weight_v`] with `G(-u,μ)` and the
/// archimedean dual ratio in the integrand.
pub fn weight_w(
    x: F,
    mu: &SpectralParameter,
    a0: u32,
    quad: &QuadratureSpec,
) -> Result<C, ArchimedeanError> {
    assert!(
        x.is_finite() && (1e-8..=1e8).contains(&x),
        "cutoff argument must lie in [1e-8, 1e8]"
    );
    let coarse = cutoff_line(x, mu, a0, quad, true);
    let fine = cutoff_line(x, mu, a0, &quad.doubled(), true);
    refinement_gate(coarse, fine)?;
    Ok(fine)
}

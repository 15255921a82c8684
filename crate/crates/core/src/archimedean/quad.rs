//! Contour discretization for the vertical-line and spectral-plane
//! integrals.
//!
//! All lines are sampled on uniform grids (trapezoid weights), which keeps
//! every difference `(t - tau)/2` of a line node and a spectral node on one
//! shared lattice; the Gamma-ratio factors of the kernels can then be read
//! from precomputed tables instead of being recomputed per node pair.  For
//! analytic integrands that decay along the line, the uniform rule converges
//! geometrically in the node density, so refinement checks double the line
//! node count and compare.

use crate::F;

/// Lattice description of the integration contours.
///
/// `offsets` lists the real parts of the vertical lines in the order a
/// transform consumes them (single-line transforms read the first entry).
/// Each line spans `[-height, height]` in the imaginary direction with
/// `nodes_per_line` equally spaced nodes including both endpoints.  The
/// spectral plane `(tau_1, tau_2)` is sampled on the square grid of spacing
/// `mu_step` covering `[-mu_radius, mu_radius]^2`.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub offsets: Vec<F>,
    pub height: F,
    pub nodes_per_line: usize,
    /// Half-width of the spectral-parameter grid.
    pub mu_radius: F,
    /// Spacing of the spectral-parameter grid.
    pub mu_step: F,
    pub rule: QuadRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRule {
    /// Uniform nodes, trapezoid end-point halving.
    UniformLine,
}

impl QuadratureSpec {
    pub fn new(offset: F, height: F, nodes_per_line: usize) -> Self {
        let spec = QuadratureSpec {
            offsets: vec![offset],
            height,
            nodes_per_line,
            mu_radius: 10.0,
            mu_step: 0.25,
            rule: QuadRule::UniformLine,
        };
        spec.validate();
        spec
    }

    fn validate(&self) {
        assert!(self.height >= 20.0, "line truncation height must be >= 20");
        assert!(
            self.nodes_per_line >= 200,
            "need at least 200 nodes per line"
        );
        assert!(self.mu_step > 0.0 && self.mu_radius > 0.0);
    }

    /// Preset for the one-variable kernel transform: line at `Re s = 1/4`
    /// (inside the pole-free strip), height 60, sixteen nodes per unit.
    pub fn kernel_w4() -> Self {
        let mut spec = Self::new(0.25, 60.0, 1921);
        spec.mu_radius = 11.0;
        spec.mu_step = 0.25;
        spec
    }

    /// Preset for the two-variable kernel transform: both lines at 1/4,
    /// height 20, eight nodes per unit, coarser spectral grid.
    pub fn kernel_w6() -> Self {
        let mut spec = Self::new(0.25, 20.0, 321);
        spec.offsets = vec![0.25, 0.25];
        spec.mu_radius = 10.0;
        spec.mu_step = 0.25;
        spec
    }

    /// Preset for the smooth-cutoff weight integrals: line at `Re u = 2`,
    /// height 30, thirty-two nodes per unit.  The integrand carries the
    /// phase of a large product of linear factors, so it needs a denser
    /// line than the kernel transforms.
    pub fn weights() -> Self {
        Self::new(2.0, 30.0, 1921)
    }

    pub fn offset(&self) -> F {
        self.offsets[0]
    }

    /// Spacing of the line nodes.
    pub fn line_step(&self) -> F {
        2.0 * self.height / (self.nodes_per_line - 1) as F
    }

    /// Imaginary parts of the line nodes.
    pub fn line_nodes(&self) -> Vec<F> {
        let step = self.line_step();
        (0..self.nodes_per_line)
            .map(|k| -self.height + step * k as F)
            .collect()
    }

    /// Smooth roll-off applied over the outer quarter of the line.  The
    /// integrands decay slowly (like a small negative power of `t`) while
    /// oscillating, so a hard cutoff leaves an endpoint error that node
    /// doubling cannot shrink; a fixed cosine window removes it.  The window
    /// depends only on the truncation height, hence `doubled` keeps the
    /// integrand identical and measures pure grid refinement.
    fn taper(&self, t: F) -> F {
        let width = 0.25 * self.height;
        let a = t.abs();
        if a <= self.height - width {
            1.0
        } else {
            let x = (a - (self.height - width)) / width;
            let c = (0.5 * std::f64::consts::PI * x).cos();
            c * c
        }
    }

    /// Trapezoid weight of node `k` (end points count half), including the
    /// roll-off window.
    pub fn line_weight(&self, k: usize) -> F {
        let t = -self.height + self.line_step() * k as F;
        let base = if k == 0 || k + 1 == self.nodes_per_line {
            0.5 * self.line_step()
        } else {
            self.line_step()
        };
        base * self.taper(t)
    }

    /// The refinement used by convergence checks: twice as many line
    /// intervals at the same truncation height.  The spectral grid is kept
    /// fixed; its spacing is chosen well inside its own convergence regime
    /// and is refined separately in the test suite.
    pub fn doubled(&self) -> Self {
        let mut out = self.clone();
        out.nodes_per_line = 2 * self.nodes_per_line - 1;
        out
    }

    /// Returns the same contours with the first offset replaced.
    pub fn with_offset(&self, offset: F) -> Self {
        let mut out = self.clone();
        if out.offsets.is_empty() {
            out.offsets.push(offset);
        } else {
            out.offsets[0] = offset;
        }
        out
    }

    /// Grid coordinates along one spectral axis.
    pub fn mu_axis(&self) -> Vec<F> {
        let n = (self.mu_radius / self.mu_step).round() as i64;
        (-n..=n).map(|k| k as F * self.mu_step).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_satisfy_the_node_floor() {
        for spec in [
            QuadratureSpec::kernel_w4(),
            QuadratureSpec::kernel_w6(),
            QuadratureSpec::weights(),
        ] {
            assert!(spec.height >= 20.0);
            assert!(spec.nodes_per_line >= 200);
            let nodes = spec.line_nodes();
            assert_eq!(nodes.len(), spec.nodes_per_line);
            assert!((nodes[0] + spec.height).abs() < 1e-12);
            assert!((nodes[nodes.len() - 1] - spec.height).abs() < 1e-12);
        }
    }

    #[test]
    fn doubling_preserves_the_node_lattice() {
        let spec = QuadratureSpec::kernel_w6();
        let fine = spec.doubled();
        assert_eq!(fine.nodes_per_line, 2 * spec.nodes_per_line - 1);
        let coarse_nodes = spec.line_nodes();
        let fine_nodes = fine.line_nodes();
        for (k, t) in coarse_nodes.iter().enumerate() {
            assert!((fine_nodes[2 * k] - t).abs() < 1e-12);
        }
    }

    #[test]
    fn line_weights_sum_to_the_windowed_length() {
        let spec = QuadratureSpec::weights();
        let total: F = (0..spec.nodes_per_line).map(|k| spec.line_weight(k)).sum();
        // Full weight over the inner three quarters, half weight (the mean
        // of a squared cosine) over the two roll-off ends.
        let expected = 2.0 * spec.height * 0.875;
        assert!((total - expected).abs() < 1e-6 * expected);
    }

    #[test]
    fn spectral_axis_is_symmetric() {
        let spec = QuadratureSpec::kernel_w6();
        let axis = spec.mu_axis();
        assert_eq!(axis.len() % 2, 1);
        let mid = axis.len() / 2;
        assert_eq!(axis[mid], 0.0);
        for k in 0..axis.len() {
            assert!((axis[k] + axis[axis.len() - 1 - k]).abs() < 1e-12);
        }
    }
}

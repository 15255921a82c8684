//! Archimedean ingredients: Gamma-type special functions and spectral
//! parameters, plus the quadrature, kernel, and integral-transform machinery
//! built on top of them.

pub mod gamma;
pub mod kernels;
pub mod quad;
pub mod spectral;
pub mod testfn;
pub mod transforms;

use thiserror::Error;

use crate::F;

pub use gamma::{gamma, gamma_r, ln_gamma, ln_gamma_r};
pub use kernels::{kernel_g_sym, kernel_g_tilde, polynomial_g};
pub use quad::QuadratureSpec;
pub use spectral::{spec_measure, SpectralParameter};
pub use testfn::{standard_test_function, TestFunctionSpec};
pub use transforms::{
    phi_w4, phi_w5, phi_w6, spectral_integral, w4_transform, w5_transform, w6_transform,
    weight_v, weight_v_deviation, weight_w, weights_offset, W4Transform, W6Transform,
};

/// Failure modes of the Gamma-kernel and transform evaluations.
#[derive(Debug, Error)]
pub enum ArchimedeanError {
    #[error("gamma factor evaluated within {distance:.3e} of a pole")]
    PoleHit { distance: F },
    #[error("tangent factor evaluated within {distance:.3e} of a pole")]
    TanPole { distance: F },
    #[error(
        "contour refinement still moving: relative change {rel_change:.3e} exceeds {limit:.3e}"
    )]
    QuadratureNotConverged { rel_change: F, limit: F },
}

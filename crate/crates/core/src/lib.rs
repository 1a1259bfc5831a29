//! Numerical core for genus-zero quasiconformal Teichmüller computations:
//! function spaces on the circle, circle homeomorphisms and their composition
//! operators, conformal welding, Cauchy jump decompositions on quasicircles,
//! Grunsky operators and the Segal–Wilson picture, and sewing of rigged
//! spheres.
//!
//! Every object carries its truncation order; operator identities that hold
//! exactly in infinite dimensions are checked here at finite truncation.

// `!(x < tol)` also rejects NaN; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cauchy;
pub mod circle;
pub mod error;
pub mod faber;
pub mod fixtures;
pub mod fourier;
pub mod geometry;
pub mod grunsky;
pub mod linalg;
pub mod operator;
pub mod quadrature;
pub mod series;
pub mod sewing;
pub mod spectral;
pub mod suite;
pub mod welding;

pub use num_complex::Complex64;

pub use cauchy::{BoundaryFunction, CurveSamples, JumpDecomposition};
pub use circle::{BlockDecomposition, CircleHomeo};
pub use error::{Error, Result};
pub use fourier::{DiskSeries, FourierFunction, Side};
pub use grunsky::DetLineReport;
pub use operator::{BasisFamily, ModeBasis, OperatorMatrix};
pub use sewing::{ModuliInvariants, Puncture, RiggedSphere, SurfaceModel};
pub use welding::{MapKind, PowerSeriesMap, WeldingResult};

/// Imaginary unit.
pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[allow(dead_code)]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

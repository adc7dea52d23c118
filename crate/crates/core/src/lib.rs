//! Front transport reduction: low-rank level-set decompositions and reduced-order
//! models for transport-dominated fields with sharp moving fronts.
//!
//! Linear model reduction (POD) needs many modes to track a traveling front
//! because the singular values of a front snapshot matrix decay slowly. This
//! crate instead approximates the field as `q ~ f(phi)`, where `f` is a
//! monotone front profile and `phi` is a level-set field of low rank. The
//! level-set field is recovered from snapshot data by iterative thresholding
//! or by an augmented-Lagrangian scheme, and time integration is done either
//! intrusively (manifold Galerkin with reduced-integration-domain
//! hyper-reduction) or non-intrusively (Fourier-Koopman amplitude forecasting).
//!
//! Module map:
//! - [`linalg`]: dense SVD kernels, singular value thresholding, least squares.
//! - [`fom`]: periodic finite-difference full-order models and an adaptive
//!   Dormand-Prince 5(4) integrator with dense output.
//! - [`decomp`]: offline decompositions (thresholding, ALM, POD) and error
//!   metrics.
//! - [`rom`]: manifold Galerkin reduced models, hyper-reduction, and
//!   initial-condition fitting.
//! - [`koopman`]: Fourier-Koopman forecasting of reduced amplitudes.
//! - [`bench`]: scenario registry, snapshot persistence, reporting, and
//!   speedup measurement.
//!
//! All numerical code is generic over the scalar type through [`Scalar`]
//! (implemented for `f32` and `f64`); the [`Matrix`] and [`Vector`] aliases
//! fix `f64` for everyday use.

pub mod error;
pub mod fom;
pub mod linalg;
mod scalar;

pub use error::{BenchError, DecompError, FomError, KoopmanError, LinalgError, RomError};
pub use scalar::Scalar;

/// Dense `f64` matrix used throughout the default pipelines.
pub type Matrix = ndarray::Array2<f64>;
/// Dense `f64` vector.
pub type Vector = ndarray::Array1<f64>;

//! Pulse-level simulation and tomographic reconstruction for arrays of
//! Josephson charge qubits coupled through a common inductor.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`). The aliases at
//! the crate root fix the scalar to `f64`, which is what the CLI uses.

pub mod cli;
pub mod control;
pub mod device;
pub mod error;
pub mod measurement;
pub mod process;
pub mod qmath;
pub mod scalar;
pub mod tomography;

pub use error::{Error, Result};
pub use scalar::{cos_pi, Real, C};

/// Double-precision complex matrix.
pub type ComplexMatrix = qmath::CMatrix<f64>;
/// Single-precision complex matrix.
pub type ComplexMatrix32 = qmath::CMatrix<f32>;
/// Density matrices share the dense matrix representation.
pub type DensityMatrix<T = f64> = qmath::CMatrix<T>;
pub type Device = device::DeviceParams<f64>;

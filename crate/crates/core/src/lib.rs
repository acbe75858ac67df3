//! Information-theoretic toolkit for finite-dimensional quantum systems.
//!
//! The crate measures how much is known about a system through complete sets
//! of mutually complementary measurements, and checks each such measure
//! against the ordinary density-matrix description.
//!
//! - [`infomeasure`]: entropy, uncertainty and the normalized information measure
//!   of a single measurement.
//! - [`qstate`]: information vectors, density matrices and their conversion,
//!   total information over a complete set of complementary measurements,
//!   projective updates.
//! - [`mub`]: complete sets of mutually unbiased bases in prime-power dimensions
//!   together with the finite-field arithmetic behind them.
//! - [`malus`]: rotations of the information vector induced by a change of an
//!   experimental parameter and the resulting cosine-squared probability law.
//! - [`entangle`]: correlation information of two qubits and its relation to
//!   CHSH violation.
//! - [`dynamics`]: information-vector precession and the unitary oracle.
//! - [`stochastics`]: seeded Stern–Gerlach trials and Chebyshev checks.
//!
//! Units are chosen with ħ = 1 throughout.

#![forbid(unsafe_code)]

pub mod dynamics;
pub mod entangle;
mod error;
pub mod infomeasure;
pub mod io;
pub mod malus;
pub mod matkernel;
pub mod mub;
pub mod qstate;
pub mod sampling;
pub mod stochastics;
pub mod tolerance;

pub use error::{Error, Result};
pub use num_complex::Complex64;

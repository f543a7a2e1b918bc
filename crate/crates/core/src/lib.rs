//! Unitary monodromy of second-order ODEs.
//!
//! The crate has five numerical layers:
//!
//! - [`linalg`]: 2×2 complex matrices, Hermitian forms and eigen-decomposition.
//! - [`unitarity`]: decides whether a finitely generated subgroup of GL(2,ℂ)
//!   preserves a nondegenerate Hermitian form, and constructs that form.
//! - [`monodromy`]: integrates Heun-type equations around complex contours to
//!   obtain monodromy matrices.
//! - [`elliptic`]: Weierstrass ℘/ζ, half-periods from the singular point `a`,
//!   and the asymptotic accessory-parameter lattice.
//! - [`spectrum`]: the two-trace Newton iteration for accessory parameters with
//!   unitary monodromy, seed sweeps and convergence maps.
//!
//! [`cli`] exposes all of it as the `unimon` binary.

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod figures;
pub mod linalg;
pub mod monodromy;
pub mod spectrum;
pub mod unitarity;

pub use error::{Error, Result};
pub use linalg::{EigenPair, HermitianForm, Mat2};
pub use num_complex::Complex64;

/// Shorthand used throughout the crate.
pub type C64 = Complex64;

/// `re + i·im`.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

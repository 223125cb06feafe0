//! Curvature machinery for Damek-Ricci spaces and the Cayley plane.
//!
//! The crate is `no_std` with `alloc`. Every identity that involves only
//! brackets, Clifford generators or octonion products can be evaluated in
//! exact rational arithmetic through the [`Scalar`] abstraction; spectral
//! questions go through `f64` and a cyclic Jacobi eigensolver.
//!
//! Module map:
//!
//! * [`clifford`]: real Clifford modules `J_Z` with `J_Z^2 = -|Z|^2 id`, `m <= 8`.
//! * [`damek_ricci`]: the metric algebra `s = a + v + z`, its bracket, Jacobi
//!   operator, covariant derivative and sectional curvature at the identity.
//! * [`geodesy`]: invariance residuals, the homogeneity criterion,
//!   `(-1)`-subspaces, the weak `J^2` condition and the eigenvector machinery
//!   for the generic Jacobi eigenvalues.
//! * [`octonion`]: octonions and the curvature tensor of `OP^2` / `OH^2`.
//! * [`einstein`]: principal-curvature algebra of Einstein hypersurfaces in
//!   the Cayley plane.
//! * [`two_stein`]: the `t`-expansion of ambient Jacobi traces along a
//!   hypersurface.
#![no_std]

extern crate alloc;

pub mod clifford;
pub mod curvature;
pub mod damek_ricci;
pub mod einstein;
mod error;
pub mod geodesy;
pub mod linalg;
pub mod octonion;
pub mod sampling;
mod scalar;
pub mod surd;
pub mod two_stein;

pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use scalar::{rat, Scalar};

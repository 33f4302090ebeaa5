//! Discretized canonical commutation relations.
//!
//! - [`algebra`]: the twisted convolution algebra ℓ¹(Z⊕Z, ω), its symmetric part, and the
//!   SL(2,Z) action.
//! - [`generating`]: the generating function of the `d_x` and the linear recovery of each `d_x`
//!   from its Taylor coefficients.
//! - [`rep`]: clock/shift matrices at θ = 2πp/q and the representation `f ↦ Σ f(x)W_x`.
//! - [`grid`]: a periodic grid model of L²(R) with exact Weyl relations, the discretized
//!   Hamiltonian, and its reduction to an almost Mathieu operator.
//! - [`spectra`]: band spectra and Hofstadter-butterfly data.
//! - [`witness`]: Chebyshev witnesses for the failure of positive extensions.
//! - [`verify`]: seeded identity suites with per-identity deviations and tolerances.

// `!(x < bound)` is used on purpose so NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod generating;
pub mod grid;
pub mod linalg;
pub mod rep;
pub mod sample;
pub mod spectra;
pub mod theta;
pub mod verify;
pub mod witness;

pub use algebra::{omega, AlgebraElement, GroupPoint, Sl2zMatrix};
pub use error::{Error, Result};
pub use grid::{GridModel, PotentialSpec, TruncatedLattice};
pub use linalg::{eig_hermitian, CMatrix, HermitianMatrix};
pub use rep::MatrixRep;
pub use spectra::BandSpectrum;
pub use theta::Theta;
pub use witness::WitnessReport;

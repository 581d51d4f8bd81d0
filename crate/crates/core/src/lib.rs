//! Paley–Wiener transforms, reproducing kernels and norm identities for
//! holomorphic function spaces on the Siegel upper half-space.
//!
//! Conventions used throughout:
//! - the Hermitian product is `w·z̄ = Σ w_j conj(z_j)`;
//! - the adjoint of a Bargmann operator is `σ_λ[z,t]* = σ_λ[−z,−t]`;
//! - horocyclic coordinates are `(z, t, h)` with `h` the defining function.
// `!(x > a)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::redundant_guards)]

pub mod bargmann;
pub mod cvec;
pub mod drury_arveson;
pub mod error;
pub mod fock;
pub mod heisenberg;
pub mod kernels;
pub mod quadrature;
pub mod siegel;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

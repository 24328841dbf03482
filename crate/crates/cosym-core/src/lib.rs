//! Exact-rational computations with finite-dimensional Lie algebras.
//!
//! The crate works with Lie algebras given by structure constants over the
//! rationals and provides:
//!
//! - brackets, Jacobi verification, adjoint maps and derivation spaces
//!   ([`lie`]);
//! - the exterior algebra of left-invariant forms and the Chevalley-Eilenberg
//!   differential ([`forms`]);
//! - recognition of cosymplectic, alpha-cosymplectic, almost contact metric,
//!   (almost) alpha-coKaehler and K-cosymplectic structures ([`geom`]);
//! - the extension/reduction dictionary between even-dimensional symplectic
//!   data with a derivation and odd-dimensional cosymplectic data, plus
//!   isomorphism verification and lifting ([`correspond`]);
//! - a catalog of named algebras, forms and derivation families, with golden
//!   verification against their known descriptions ([`catalog`]);
//! - JSON (de)serialization of all of the above ([`io`]).
//!
//! Everything except [`geom::polarize`] is computed in exact arbitrary
//! precision rational arithmetic.

pub mod catalog;
pub mod correspond;
pub mod error;
pub mod forms;
pub mod geom;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod rat;

pub use error::Error;
pub use rat::Q;

/// Convenient result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

//! A library for computing with q-matroids over finite fields.
//!
//! A q-matroid is a pair `(E, rho)` where `E = GF(q)^n` and `rho` assigns a
//! rank to every subspace of `E`, subject to boundedness, monotonicity and
//! submodularity. This crate provides:
//!
//! * finite-field arithmetic ([`field`]) and subspace linear algebra
//!   ([`subspace`]), with a bit-packed fast path over GF(2);
//! * rank oracles for representable, uniform, spread and cyclic-flat-defined
//!   q-matroids, plus duals, restrictions, contractions ([`matroid`]);
//! * the lattice of cyclic flats and rank reconstruction from it ([`zflats`]);
//! * direct sums and the matroid union they are built from ([`dsum`]);
//! * irreducibility tests and decomposition into irreducible components
//!   ([`decompose`]);
//! * whole-lattice census runs and representation verification ([`census`]);
//! * a JSON interchange format for oracles and reports ([`spec`]).

pub mod budget;
pub mod census;
pub mod decompose;
pub mod dsum;
mod error;
pub mod field;
pub mod matroid;
pub mod spec;
pub mod subspace;
pub mod zflats;

pub use budget::Budget;
pub use error::Error;
pub use field::FieldSpec;
pub use matroid::QMatroid;
pub use subspace::Subspace;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

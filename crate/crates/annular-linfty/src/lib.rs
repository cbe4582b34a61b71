//! Annular Khovanov complexes over GF(2) and the L-infinity module structure
//! carried by annular Khovanov homology.
//!
//! The crate is organized bottom-up:
//!
//! * [`homology`] — GF(2) linear algebra, ranks/kernels, chain contractions;
//! * [`diagram`] — annular planar diagrams, resolutions, winding numbers;
//! * [`complex`] — the cube of resolutions, its differentials and the
//!   operators acting on it;
//! * [`lie`] — the finite-dimensional Lie superalgebras in play and the
//!   explicit contraction of the dg one onto its homology;
//! * [`linfty`] — generic L-infinity machinery: unshuffles, relation
//!   checkers, homotopy transfer for algebras and modules, restriction of
//!   scalars along a morphism;
//! * [`akh`] — the pipeline gluing everything together, from a diagram file
//!   to the transferred operations on annular Khovanov homology.

pub mod error;
pub mod homology;

pub mod diagram;

pub mod complex;

pub mod lie;

pub mod linfty;

pub mod akh;

pub mod testing;

pub use error::{Error, Result};

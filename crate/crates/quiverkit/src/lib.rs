//! quiverkit: a workbench for bound quiver algebras.
//!
//! The crate works with finite quivers (directed multigraphs with loops and
//! parallel arrows) and finite-dimensional quotients of their path algebras.
//! It computes path-class bases, Cartan matrices and syzygies of simple
//! modules over an exact field (rationals by default, prime fields
//! optionally), detects block structure around 1-regular vertices, and scans
//! for a registry of wild subquiver configurations.
//!
//! The main entry points are:
//!
//! * [`quiver::Quiver`] and its degree/path/block analysis,
//! * [`algebra::compute_basis`] turning a [`algebra::Presentation`] into an
//!   [`algebra::AlgebraBasis`],
//! * [`homology`] for projective covers, syzygy chains and periods,
//! * [`pattern`] and [`registry`] for subquiver pattern matching,
//! * [`verify`] for the structural check battery and the block
//!   classification report,
//! * [`corpus`] for block glueings, named examples and seeded random
//!   biregular quivers,
//! * [`format`] for the text file format and dot export used by the CLI.

pub mod algebra;
pub mod blocks;
pub mod corpus;
pub mod format;
pub mod homology;
pub mod linalg;
pub mod pattern;
pub mod quiver;
pub mod registry;
pub mod rng;
pub mod scalar;
pub mod verify;

pub use algebra::{compute_basis, AlgebraBasis, Presentation, Relation};
pub use quiver::{Quiver, QuiverError};
pub use scalar::FieldSpec;

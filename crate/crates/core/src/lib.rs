//! Exact Kirchhoff polynomials and graph Hessians.
//!
//! The crate builds the spanning-tree generating polynomial of a graph,
//! assembles its Hessian, and checks the spectra, determinants and strong
//! Lefschetz behaviour of the associated Gorenstein algebras with exact
//! rational arithmetic.
//!
//! - [`graphs`]: multigraphs, contraction, Laplacians, tree counting.
//! - [`linalg`]: exact determinants, ranks, characteristic polynomials.
//! - [`kirchhoff`]: multilinear polynomials and Hessian assembly.
//! - [`block_spectra`]: circulant block reductions and closed-form spectra.
//! - [`lefschetz`]: Hilbert functions, higher Hessians, Lefschetz checks.
//! - [`verify`]: parameter sweeps that compare closed forms with exact
//!   computation.

pub mod block_spectra;
pub mod error;
pub mod graphs;
pub mod kirchhoff;
pub mod lefschetz;
pub mod linalg;
pub mod verify;

pub use error::{Error, Result};

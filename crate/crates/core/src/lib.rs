//! Numerical toolkit for unistochastic matrices, entangling power of bipartite
//! gates, multiunitary (2-unitary) matrices and quantum Sudoku designs.
//!
//! Matrices are dense [`nalgebra::DMatrix`] values over [`num_complex::Complex64`].
//! Indices are 0-based everywhere in the API; bipartite matrices of side `n·n`
//! use the row index `n·i + k` for the basis state `|i⟩⊗|k⟩`.

pub mod ame;
pub mod averages;
pub mod birkhoff;
pub mod error;
pub mod gates;
pub mod io;
pub mod linalg;
pub mod parallel;
pub mod sudoq;

pub use error::{Error, Result};
pub use linalg::{BipartiteDims, ComplexMatrix, Subsystem};
pub use num_complex::Complex64;

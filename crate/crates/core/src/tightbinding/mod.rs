//! The tight-binding zigzag edge operator on the half line of cells.
//!
//! Cell n carries the pair (ψ_n^A, ψ_n^B). The bulk fiber acts as
//!
//! ```text
//! (Hψ)_n^A = ψ_{n-1}^B + conj(ζ) ψ_n^B
//! (Hψ)_n^B = ψ_{n+1}^A + ζ ψ_n^A
//! ```
//!
//! and the edge operator is its restriction to n ≥ 0.

mod fiber;
mod resolve;
mod sweep;
mod transfer;

pub use fiber::*;
pub use resolve::*;
pub use sweep::*;
pub use transfer::*;

use num_complex::Complex64;
use thiserror::Error;

pub type Cell = [Complex64; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TbError {
    #[error("truncation needs at least 2 cells, got {0}")]
    TooFewCells(usize),
    #[error("no edge state: |zeta| = {0} is not below 1")]
    NoEdgeState(f64),
    #[error("zeta vanishes at kpar = pi; use the block formula")]
    DegenerateFiber,
    #[error("z = {0} lies on the essential spectrum")]
    OnEssentialSpectrum(Complex64),
    #[error("z = 0 is a pole of the resolvent (flat band)")]
    PoleAtZero,
    #[error("z = {0} is an eigenvalue of the kpar = pi operator")]
    EigenvaluePole(Complex64),
    #[error("right-hand side has {got} cells, more than ncells = {ncells}")]
    SourceTooLong { got: usize, ncells: usize },
    #[error("eigensolver residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    EigenResidual { residual: f64, tol: f64 },
    #[error(transparent)]
    Eigen(#[from] crate::dense::EigenFailure),
    #[error("empty kpar grid")]
    EmptyGrid,
}

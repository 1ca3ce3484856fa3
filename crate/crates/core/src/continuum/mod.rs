//! The continuum edge operator -(∇ + i a)² + λ²V_♯ on a truncated cylinder,
//! its orbital basis and the strong-binding comparison with the tight-binding
//! chain.
//!
//! Energies are measured against the ground energy and hopping coefficient of
//! the same well on the same mesh, so that Ω̃ = (E - E0)/ρ compares like with
//! like at every resolution.

pub mod atom;
pub mod banded;
mod compare;
mod eigen;
mod grid;
mod orbital;
mod problem;
mod study;

pub use compare::*;
pub use eigen::*;
pub use grid::*;
pub use orbital::*;
pub use problem::*;
pub use study::*;

use crate::atomic::AtomicError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuumError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resolution {0} is below the minimum of 8 points per cell edge")]
    GridTooSmall(usize),
    #[error("grid of {points} points exceeds the limit of {limit}")]
    GridTooLarge { points: usize, limit: usize },
    #[error("resolution {0} is not a multiple of 3, so B sites are not mesh nodes")]
    SiteOffGrid(usize),
    #[error("shifted operator is not positive definite (pivot row {0})")]
    Factorization(usize),
    #[error("mesh atom has no bound state at lambda = {lambda} (E0 = {e0:.4e})")]
    NoMeshBoundState { lambda: f64, e0: f64 },
    #[error("nev = {nev} is below the number of sites {min} or above the grid size")]
    InvalidNev { nev: usize, min: usize },
    #[error("eigensolver stalled after {restarts} restarts: residual {residual:.3e} > {tol:.3e}")]
    NotConverged { residual: f64, tol: f64, restarts: usize },
    #[error(transparent)]
    Eigen(#[from] crate::dense::EigenFailure),
    #[error(transparent)]
    Atomic(#[from] AtomicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledEnergy {
    pub e: f64,
    pub e0: f64,
    pub rho: f64,
    pub omega_tilde: f64,
}

impl ScaledEnergy {
    pub fn new(e: f64, e0: f64, rho: f64) -> Self {
        ScaledEnergy {
            e,
            e0,
            rho,
            omega_tilde: (e - e0) / rho,
        }
    }
}

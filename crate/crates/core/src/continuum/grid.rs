//! Triangular mesh on the truncated cylinder.
//!
//! Node (i1, i2) sits at s1 v1 + s2 v2 with s1 = i1/p1 - pad_left, s2 = i2/p2.
//! The index i2 is periodic (the seam s2 = 1 is identified with s2 = 0); the
//! rows i1 = -1 and i1 = n1 are Dirichlet.

use super::ContinuumError;
use crate::lattice::{make_frame, Vec2};
use serde::Serialize;

/// Refuse grids with more unknowns than this.
pub const MAX_POINTS: usize = 4_000_000;
pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CylinderGrid {
    pub ncells: usize,
    pub points_per_cell: (usize, usize),
    /// Vacuum cells kept to the left of cell 0.
    pub pad_left: usize,
    /// Vacuum cells kept to the right of cell N-1.
    pub pad_right: usize,
}

pub fn build_grid(
    ncells: usize,
    points_per_cell: (usize, usize),
    pad_left: usize,
) -> Result<CylinderGrid, ContinuumError> {
    build_grid_padded(ncells, points_per_cell, pad_left, 0)
}

pub fn build_grid_padded(
    ncells: usize,
    points_per_cell: (usize, usize),
    pad_left: usize,
    pad_right: usize,
) -> Result<CylinderGrid, ContinuumError> {
    let (p1, p2) = points_per_cell;
    if ncells == 0 {
        return Err(ContinuumError::InvalidParameter("ncells must be positive".into()));
    }
    if p1.min(p2) < MIN_RESOLUTION {
        return Err(ContinuumError::GridTooSmall(p1.min(p2)));
    }
    if p1 != p2 {
        return Err(ContinuumError::InvalidParameter(format!(
            "the isotropic stencil needs p1 == p2, got ({p1}, {p2})"
        )));
    }
    let total = (ncells + pad_left + pad_right)
        .checked_mul(p1)
        .and_then(|x| x.checked_mul(p2))
        .unwrap_or(usize::MAX);
    if total > MAX_POINTS {
        return Err(ContinuumError::GridTooLarge {
            points: total,
            limit: MAX_POINTS,
        });
    }
    Ok(CylinderGrid {
        ncells,
        points_per_cell,
        pad_left,
        pad_right,
    })
}

impl CylinderGrid {
    pub fn n1(&self) -> usize {
        (self.ncells + self.pad_left + self.pad_right) * self.points_per_cell.0
    }

    pub fn n2(&self) -> usize {
        self.points_per_cell.1
    }

    pub fn len(&self) -> usize {
        self.n1() * self.n2()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Mesh width |h v1| = |h v2|.
    pub fn h(&self) -> f64 {
        1.0 / self.points_per_cell.0 as f64
    }

    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n2() + i2
    }

    pub fn node(&self, idx: usize) -> (usize, usize) {
        (idx / self.n2(), idx % self.n2())
    }

    /// Cylinder coordinates (s1, s2) of a node.
    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let (i1, i2) = self.node(idx);
        (
            i1 as f64 / self.points_per_cell.0 as f64 - self.pad_left as f64,
            i2 as f64 / self.points_per_cell.1 as f64,
        )
    }

    pub fn position(&self, idx: usize) -> Vec2 {
        let f = make_frame();
        let (s1, s2) = self.coords(idx);
        f.v1() * s1 + f.v2() * s2
    }

    /// Node nearest to s1 v1 + s2 v2 (s2 taken mod 1).
    pub fn nearest(&self, s1: f64, s2: f64) -> Option<usize> {
        let (p1, p2) = (self.points_per_cell.0 as f64, self.points_per_cell.1 as f64);
        let i1 = ((s1 + self.pad_left as f64) * p1).round();
        let i2 = (s2.rem_euclid(1.0) * p2).round() as usize % self.n2();
        if i1 < 0.0 || i1 >= self.n1() as f64 {
            return None;
        }
        Some(self.index(i1 as usize, i2))
    }

    /// Cell of a node: cell n covers s1 in [n - 1/3, n + 2/3); the pads are
    /// folded into the first and last cell.
    pub fn cell_of(&self, idx: usize) -> usize {
        let (s1, _) = self.coords(idx);
        let c = (s1 + 1.0 / 3.0).floor();
        c.clamp(0.0, (self.ncells - 1) as f64) as usize
    }

    /// Twice the resolution, same geometry.
    pub fn refined(&self) -> Result<CylinderGrid, ContinuumError> {
        let (p1, p2) = self.points_per_cell;
        build_grid_padded(self.ncells, (2 * p1, 2 * p2), self.pad_left, self.pad_right)
    }
}

//! The fiber operator -(∇ + i a)² + λ²V_♯ - E0 on the truncated cylinder,
//! a = (kpar/2π) K2, so that a·v1 = 0 and a·v2 = kpar.

use super::atom::{mesh_atom, stencil_weight, MeshAtom, STENCIL};
use super::banded::SparseHermitian;
use super::grid::CylinderGrid;
use super::ContinuumError;
use crate::atomic::{AtomicWell, GroundState};
use crate::lattice::Sublattice;
use crate::tightbinding::Truncation;
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

/// Which wells are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SiteSet {
    /// The sites of the truncated tight-binding section.
    Sharp(Truncation),
    /// No potential at all.
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSite {
    pub sublattice: Sublattice,
    pub n: usize,
    pub i1: usize,
    pub i2: usize,
}

#[derive(Debug, Clone)]
pub struct CylinderProblem {
    pub grid: CylinderGrid,
    pub well: AtomicWell,
    pub gs: Arc<GroundState>,
    pub atom: Arc<MeshAtom>,
    pub lambda: f64,
    pub kpar: f64,
    pub site_set: SiteSet,
    pub sites: Vec<GridSite>,
    /// λ²V_♯ at each node.
    pub potential: Vec<f64>,
    /// Energy subtracted from the diagonal (the mesh ground energy).
    pub e0: f64,
    pub operator: SparseHermitian<Complex64>,
}

/// Sites of the section ordered A_0, B_0, A_1, ... as in the tight-binding model.
pub fn grid_sites(grid: &CylinderGrid, set: SiteSet) -> Result<Vec<GridSite>, ContinuumError> {
    let p = grid.points_per_cell.0;
    if p % 3 != 0 {
        return Err(ContinuumError::SiteOffGrid(p));
    }
    let count = match set {
        SiteSet::Empty => 0,
        SiteSet::Sharp(Truncation::EndOnA) => 2 * grid.ncells - 1,
        SiteSet::Sharp(Truncation::EndOnB) => 2 * grid.ncells,
    };
    Ok((0..count)
        .map(|j| {
            let n = j / 2;
            let base = (n + grid.pad_left) * p;
            if j % 2 == 0 {
                GridSite {
                    sublattice: Sublattice::A,
                    n,
                    i1: base,
                    i2: 0,
                }
            } else {
                GridSite {
                    sublattice: Sublattice::B,
                    n,
                    i1: base + p / 3,
                    i2: p / 3,
                }
            }
        })
        .collect())
}

/// Assembles the operator with the default (A-terminated) site set, solving the
/// mesh atom on the grid's resolution.
pub fn assemble_fiber(
    grid: &CylinderGrid,
    well: &AtomicWell,
    gs: &GroundState,
    lambda: f64,
    kpar: f64,
) -> Result<CylinderProblem, ContinuumError> {
    if (lambda - gs.lambda).abs() > 1e-12 * lambda.abs() {
        return Err(ContinuumError::InvalidParameter(format!(
            "ground state computed at lambda = {}, requested {lambda}",
            gs.lambda
        )));
    }
    let atom = Arc::new(mesh_atom(gs, well, grid.points_per_cell.0)?);
    assemble_with_atom(
        grid,
        Arc::new(gs.clone()),
        atom,
        kpar,
        SiteSet::Sharp(Truncation::EndOnA),
    )
}

pub fn assemble_with_atom(
    grid: &CylinderGrid,
    gs: Arc<GroundState>,
    atom: Arc<MeshAtom>,
    kpar: f64,
    set: SiteSet,
) -> Result<CylinderProblem, ContinuumError> {
    let p = grid.points_per_cell.0;
    if atom.resolution != p {
        return Err(ContinuumError::InvalidParameter(format!(
            "mesh atom resolution {} does not match grid resolution {p}",
            atom.resolution
        )));
    }
    let sites = grid_sites(grid, set)?;
    let (n1, n2) = (grid.n1() as i64, grid.n2() as i64);
    let mut potential = vec![0.0; grid.len()];
    for s in &sites {
        for &(d1, d2, v) in &atom.footprint {
            let i1 = s.i1 as i64 + d1;
            if i1 < 0 || i1 >= n1 {
                continue;
            }
            let i2 = (s.i2 as i64 + d2).rem_euclid(n2);
            potential[grid.index(i1 as usize, i2 as usize)] += v;
        }
    }
    let h = grid.h();
    let c = stencil_weight(h);
    let phase: Vec<Complex64> = STENCIL
        .iter()
        .map(|&(_, b)| Complex64::from_polar(-c, kpar * h * b as f64))
        .collect();
    let rows = (0..grid.len())
        .map(|idx| {
            let (i1, i2) = grid.node(idx);
            let mut r = Vec::with_capacity(7);
            r.push((idx, Complex64::new(6.0 * c + potential[idx] - atom.e0, 0.0)));
            for (k, &(a, b)) in STENCIL.iter().enumerate() {
                let j1 = i1 as i64 + a;
                if j1 < 0 || j1 >= n1 {
                    continue;
                }
                let j2 = (i2 as i64 + b).rem_euclid(n2);
                r.push((grid.index(j1 as usize, j2 as usize), phase[k]));
            }
            r
        })
        .collect();
    Ok(CylinderProblem {
        grid: *grid,
        well: atom.well,
        lambda: atom.lambda,
        e0: atom.e0,
        gs,
        atom,
        kpar,
        site_set: set,
        sites,
        potential,
        operator: SparseHermitian::from_rows(rows),
    })
}

impl CylinderProblem {
    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    /// (H - E0) applied to a grid function.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.operator.apply(v)
    }

    /// Grid inner product without the (constant) cell area.
    pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    pub fn norm(a: &[Complex64]) -> f64 {
        a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }
}

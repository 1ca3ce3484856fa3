use super::{build_fiber_with, spectrum, TbError, Truncation};
use crate::lattice::SpectralWindow;
use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Fraction of l² mass that must sit in a boundary quarter to flag a state.
pub const EDGE_MASS: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeFlag {
    /// Concentrated at the physical edge (first quarter of cells).
    Left,
    Bulk,
    /// Concentrated at the artificial far end of the section.
    Right,
}

impl EdgeFlag {
    pub fn code(self) -> i32 {
        match self {
            EdgeFlag::Left => 1,
            EdgeFlag::Bulk => 0,
            EdgeFlag::Right => -1,
        }
    }
}

/// Mass fractions in the first and last ⌈N/4⌉ cells given per-cell weights.
pub fn quarter_masses(cell_mass: &[f64]) -> (f64, f64) {
    let n = cell_mass.len();
    let q = n.div_ceil(4);
    let total: f64 = cell_mass.iter().sum();
    if total == 0.0 {
        return (0.0, 0.0);
    }
    let left: f64 = cell_mass[..q].iter().sum();
    let right: f64 = cell_mass[n - q..].iter().sum();
    (left / total, right / total)
}

pub fn flag_from_masses(left: f64, right: f64) -> EdgeFlag {
    if left >= EDGE_MASS {
        EdgeFlag::Left
    } else if right >= EDGE_MASS {
        EdgeFlag::Right
    } else {
        EdgeFlag::Bulk
    }
}

/// Per-cell l² mass of a site vector in the (A_0, B_0, A_1, ...) order.
pub fn cell_masses(v: &DVector<Complex64>, ncells: usize) -> Vec<f64> {
    let mut m = vec![0.0; ncells];
    for (i, x) in v.iter().enumerate() {
        m[i / 2] += x.norm_sqr();
    }
    m
}

pub fn classify_vector(v: &DVector<Complex64>, ncells: usize) -> (EdgeFlag, f64) {
    let (l, r) = quarter_masses(&cell_masses(v, ncells));
    (flag_from_masses(l, r), l)
}

#[derive(Debug, Clone, Serialize)]
pub struct BandRow {
    pub kpar: f64,
    pub eigenvalues: Vec<f64>,
    pub flags: Vec<EdgeFlag>,
    pub left_mass: Vec<f64>,
}

impl BandRow {
    pub fn left_edge_values(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.flags)
            .filter(|(_, f)| **f == EdgeFlag::Left)
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn bulk_values(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.flags)
            .filter(|(_, f)| **f == EdgeFlag::Bulk)
            .map(|(e, _)| *e)
            .collect()
    }
}

pub fn band_row(kpar: f64, ncells: usize, truncation: Truncation) -> Result<BandRow, TbError> {
    let w = SpectralWindow::new(kpar);
    let op = build_fiber_with(&w, ncells, truncation)?;
    let s = spectrum(&op)?;
    let mut flags = Vec::with_capacity(op.dim());
    let mut left_mass = Vec::with_capacity(op.dim());
    for j in 0..op.dim() {
        let (f, l) = classify_vector(&s.vector(j), ncells);
        flags.push(f);
        left_mass.push(l);
    }
    Ok(BandRow {
        kpar,
        eigenvalues: s.values,
        flags,
        left_mass,
    })
}

pub fn band_sweep(grid: &[f64], ncells: usize) -> Result<Vec<BandRow>, TbError> {
    band_sweep_with(grid, ncells, Truncation::default())
}

pub fn band_sweep_with(
    grid: &[f64],
    ncells: usize,
    truncation: Truncation,
) -> Result<Vec<BandRow>, TbError> {
    if grid.is_empty() {
        return Err(TbError::EmptyGrid);
    }
    grid.par_iter()
        .map(|&k| band_row(k, ncells, truncation))
        .collect()
}

/// `n` evenly spaced points from `a` to `b` inclusive (a single point is `a`).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn write_band_csv<W: std::io::Write>(out: &mut W, rows: &[BandRow]) -> std::io::Result<()> {
    writeln!(out, "kpar,index,eigenvalue,edge_flag,left_mass_fraction")?;
    for r in rows {
        for (i, e) in r.eigenvalues.iter().enumerate() {
            writeln!(
                out,
                "{:.12},{},{:.15e},{},{:.6}",
                r.kpar,
                i,
                e,
                r.flags[i].code(),
                r.left_mass[i]
            )?;
        }
    }
    Ok(())
}

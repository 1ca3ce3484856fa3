//! Periodized, phase-twisted translates of the mesh ground state.

use super::atom::node_area;
use super::problem::{CylinderProblem, GridSite};
use crate::lattice::{spectral_window, Sublattice};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Periodization range |m2| ≤ this.
pub const PERIOD_IMAGES: i64 = 3;

#[derive(Debug, Clone)]
pub struct OrbitalBasis {
    pub kpar: f64,
    pub sites: Vec<GridSite>,
    /// Grid functions, one per site, in the problem's site order.
    pub vectors: Vec<Vec<Complex64>>,
    /// Inner products with the cell-area weight.
    pub gram: DMatrix<Complex64>,
    /// ‖(H - E0) p‖ / ‖p‖ per orbital.
    pub residuals: Vec<f64>,
}

/// p(x) = e^{-i kpar s2} Σ_{|m|≤3} e^{i kpar m} p0(x - v_site - m v2) on the mesh.
pub fn orbital_vector(problem: &CylinderProblem, site: &GridSite) -> Vec<Complex64> {
    let g = &problem.grid;
    let (n1, p) = (g.n1() as i64, g.n2() as i64);
    let k = problem.kpar;
    let mut v = vec![Complex64::new(0.0, 0.0); g.len()];
    for (d1, d2, a) in problem.atom.support() {
        let i1 = site.i1 as i64 + d1;
        if i1 < 0 || i1 >= n1 {
            continue;
        }
        let t = site.i2 as i64 + d2;
        let m = -t.div_euclid(p);
        if m.abs() > PERIOD_IMAGES {
            continue;
        }
        let i2 = t + m * p;
        let s2 = i2 as f64 / p as f64;
        v[g.index(i1 as usize, i2 as usize)] += Complex64::from_polar(a, k * (m as f64 - s2));
    }
    v
}

pub fn orbital_basis(problem: &CylinderProblem) -> OrbitalBasis {
    use rayon::prelude::*;
    let vectors: Vec<Vec<Complex64>> = problem
        .sites
        .par_iter()
        .map(|s| orbital_vector(problem, s))
        .collect();
    let area = node_area(problem.grid.h());
    let n = vectors.len();
    let mut gram = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in i..n {
            let x = CylinderProblem::inner(&vectors[i], &vectors[j]) * area;
            gram[(i, j)] = x;
            gram[(j, i)] = x.conj();
        }
    }
    let residuals = vectors
        .par_iter()
        .map(|v| CylinderProblem::norm(&problem.apply(v)) / CylinderProblem::norm(v))
        .collect();
    OrbitalBasis {
        kpar: problem.kpar,
        sites: problem.sites.clone(),
        vectors,
        gram,
        residuals,
    }
}

impl OrbitalBasis {
    /// max |gram - I| over off-diagonal entries.
    pub fn offdiag_max(&self) -> f64 {
        let n = self.gram.nrows();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.gram[(i, j)].norm());
                }
            }
        }
        m
    }

    /// max |gram_ii - 1|.
    pub fn diag_defect(&self) -> f64 {
        (0..self.gram.nrows())
            .map(|i| (self.gram[(i, i)] - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |gram[i, j]| over pairs with |i - j| = d, for d = 1, 2, ...
    pub fn offdiag_profile(&self) -> Vec<f64> {
        let n = self.gram.nrows();
        (1..n)
            .map(|d| {
                (0..n - d)
                    .map(|i| self.gram[(i, i + d)].norm())
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// ⟨p_i, (H - E0) p_j⟩ with the area weight.
    pub fn matrix_element(&self, problem: &CylinderProblem, i: usize, j: usize) -> Complex64 {
        let hv = problem.apply(&self.vectors[j]);
        CylinderProblem::inner(&self.vectors[i], &hv) * node_area(problem.grid.h())
    }

    /// Σ_n (-ζ)^n p_A[n], unit in the area-weighted norm.
    pub fn edge_ansatz(&self, area: f64) -> Vec<Complex64> {
        let zeta = spectral_window(self.kpar).zeta;
        let mut out = vec![Complex64::new(0.0, 0.0); self.vectors[0].len()];
        for (s, v) in self.sites.iter().zip(&self.vectors) {
            if s.sublattice != Sublattice::A {
                continue;
            }
            let c = (-zeta).powu(s.n as u32);
            out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
        }
        let norm = CylinderProblem::norm(&out) * area.sqrt();
        out.iter_mut().for_each(|x| *x /= norm);
        out
    }
}

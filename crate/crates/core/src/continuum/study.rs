//! λ-sweeps of the cylinder problem against the tight-binding chain.

use super::atom::{mesh_atom, node_area, MeshAtom};
use super::compare::scaled_spectrum_compare;
use super::eigen::{edge_eigensolve_with, overlap, rayleigh_quotient, SolveOptions};
use super::grid::build_grid_padded;
use super::orbital::orbital_basis;
use super::problem::{assemble_with_atom, SiteSet};
use super::ContinuumError;
use crate::atomic::{ground_state, hopping_rho, AtomicWell, WellShape};
use crate::lattice::spectral_window;
use crate::tightbinding::{fiber_dim, EdgeFlag, Truncation};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize)]
pub struct StudyConfig {
    pub well: AtomicWell,
    pub lambdas: Vec<f64>,
    pub kpars: Vec<f64>,
    pub ncells: usize,
    pub resolution: usize,
    pub pad_left: usize,
    pub pad_right: usize,
    /// Eigenpairs per solve; 0 means the number of sites.
    pub nev: usize,
    pub tol: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            well: AtomicWell {
                shape: WellShape::DiscWell,
                r0: 0.15,
            },
            lambdas: vec![8.0, 12.0, 16.0],
            kpars: vec![5.0 * PI / 6.0, PI, 0.3],
            ncells: 10,
            resolution: 36,
            pad_left: 2,
            pad_right: 2,
            nev: 0,
            tol: 1e-8,
        }
    }
}

impl StudyConfig {
    pub fn effective_nev(&self) -> usize {
        if self.nev == 0 {
            fiber_dim(self.ncells, Truncation::EndOnA)
        } else {
            self.nev
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeInfo {
    pub index: usize,
    pub omega_tilde: f64,
    pub energy: f64,
    /// |⟨ψ, Σ (-ζ)^n p_A[n]⟩| / (‖ψ‖ ‖·‖).
    pub ansatz_overlap: f64,
    pub left_mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KparRecord {
    pub kpar: f64,
    pub dgap: f64,
    pub eigenvalues: Vec<f64>,
    pub omega_tilde: Vec<f64>,
    pub flags: Vec<i32>,
    pub left_mass: Vec<f64>,
    pub residuals: Vec<f64>,
    pub restarts: usize,
    /// Left-flagged states among the lowest (number of sites) eigenvalues,
    /// the cluster that splits off the atomic level E0.
    pub edge_count: usize,
    /// Left-flagged states with |Ω̃| < dgap/2.
    pub edge_near_zero: usize,
    pub edge: Option<EdgeInfo>,
    /// Smallest |Ω̃| over states that are not left-flagged.
    pub min_bulk_abs_omega: f64,
    /// |⟨φ, (H - E0) φ⟩| / ρ for the normalized ansatz φ.
    pub ansatz_rayleigh: f64,
    pub distance: f64,
    pub tb_values: Vec<f64>,
    pub gram_offdiag: f64,
    pub orbital_residual: f64,
    /// ⟨p_B[0], (H - E0) p_A[0]⟩ / (-ρ ζ).
    pub hopping_ratio: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaRecord {
    pub lambda: f64,
    pub e0_radial: f64,
    pub rho_radial: f64,
    pub e0: f64,
    pub rho: f64,
    pub mesh_atom_radius: i64,
    pub points: Vec<KparRecord>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub grid_points: usize,
    pub records: Vec<LambdaRecord>,
}

fn strictly_decreasing(x: &[f64]) -> bool {
    x.len() >= 2 && x.windows(2).all(|w| w[1] < w[0])
}

impl StudyReport {
    pub fn failed(&self) -> bool {
        self.records.iter().any(|r| !r.failures.is_empty())
    }

    pub fn point(&self, lambda_index: usize, kpar: f64) -> Option<&KparRecord> {
        self.records
            .get(lambda_index)?
            .points
            .iter()
            .find(|p| (p.kpar - kpar).abs() < 1e-12)
    }

    fn series(&self, kpar: f64, f: impl Fn(&KparRecord) -> Option<f64>) -> Option<Vec<f64>> {
        (0..self.records.len())
            .map(|i| self.point(i, kpar).and_then(&f))
            .collect()
    }

    /// Gram off-diagonal maxima along the λ sweep at `kpar`.
    pub fn gram_series(&self, kpar: f64) -> Option<Vec<f64>> {
        self.series(kpar, |p| Some(p.gram_offdiag))
    }

    pub fn residual_series(&self, kpar: f64) -> Option<Vec<f64>> {
        self.series(kpar, |p| Some(p.orbital_residual))
    }

    pub fn edge_omega_series(&self, kpar: f64) -> Option<Vec<f64>> {
        self.series(kpar, |p| p.edge.as_ref().map(|e| e.omega_tilde.abs()))
    }

    pub fn overlap_series(&self, kpar: f64) -> Option<Vec<f64>> {
        self.series(kpar, |p| p.edge.as_ref().map(|e| e.ansatz_overlap))
    }

    pub fn distance_series(&self, kpar: f64) -> Option<Vec<f64>> {
        self.series(kpar, |p| Some(p.distance))
    }

    pub fn orbital_lemmas_hold(&self, kpar: f64) -> bool {
        self.gram_series(kpar).is_some_and(|s| strictly_decreasing(&s))
            && self.residual_series(kpar).is_some_and(|s| strictly_decreasing(&s))
    }

    pub fn single_edge_each(&self, kpar: f64) -> bool {
        self.series(kpar, |p| Some(p.edge_count as f64))
            .is_some_and(|s| s.iter().all(|c| *c == 1.0))
    }

    pub fn edge_omega_decreasing(&self, kpar: f64) -> bool {
        self.edge_omega_series(kpar).is_some_and(|s| strictly_decreasing(&s))
    }

    pub fn distance_decreasing(&self, kpar: f64) -> bool {
        self.distance_series(kpar).is_some_and(|s| strictly_decreasing(&s))
    }

    pub fn no_edge_near_zero(&self, kpar: f64) -> bool {
        self.series(kpar, |p| Some(p.edge_near_zero as f64))
            .is_some_and(|s| s.iter().all(|c| *c == 0.0))
    }

    pub fn final_overlap(&self, kpar: f64) -> Option<f64> {
        self.overlap_series(kpar).and_then(|s| s.last().copied())
    }
}

fn solve_point(
    cfg: &StudyConfig,
    gs: &Arc<crate::atomic::GroundState>,
    atom: &Arc<MeshAtom>,
    kpar: f64,
) -> Result<KparRecord, ContinuumError> {
    let grid = build_grid_padded(cfg.ncells, (cfg.resolution, cfg.resolution), cfg.pad_left, cfg.pad_right)?;
    let pr = assemble_with_atom(&grid, gs.clone(), atom.clone(), kpar, SiteSet::Sharp(Truncation::EndOnA))?;
    let rho = atom.rho;
    let basis = orbital_basis(&pr);
    let window = spectral_window(kpar);
    let hop = basis.matrix_element(&pr, 1, 0) / (-rho * window.zeta);
    let area = node_area(grid.h());
    let ansatz = basis.edge_ansatz(area);
    let ansatz_rayleigh = rayleigh_quotient(&pr, &ansatz).abs() / rho;
    let opts = SolveOptions {
        tol: cfg.tol,
        ..SolveOptions::default()
    };
    let spec = edge_eigensolve_with(&pr, rho, cfg.effective_nev(), &opts, &basis.vectors)?;
    let omegas = spec.omegas();
    let cmp = scaled_spectrum_compare(&omegas, kpar, cfg.ncells, Truncation::EndOnA)
        .map_err(|e| ContinuumError::InvalidParameter(e.to_string()))?;
    let cluster = pr.sites.len();
    let edges: Vec<usize> = spec
        .pairs
        .iter()
        .take(cluster)
        .enumerate()
        .filter(|(_, p)| p.flag == EdgeFlag::Left)
        .map(|(i, _)| i)
        .collect();
    let edge_near_zero = spec
        .pairs
        .iter()
        .filter(|p| p.flag == EdgeFlag::Left && p.energy.omega_tilde.abs() < 0.5 * window.dgap)
        .count();
    let edge = edges
        .iter()
        .copied()
        .min_by(|&a, &b| {
            omegas[a].abs().total_cmp(&omegas[b].abs())
        })
        .map(|i| {
            let p = &spec.pairs[i];
            EdgeInfo {
                index: i,
                omega_tilde: p.energy.omega_tilde,
                energy: p.energy.e,
                ansatz_overlap: overlap(&p.vector, &ansatz),
                left_mass: p.left_mass,
            }
        });
    let min_bulk_abs_omega = spec
        .pairs
        .iter()
        .filter(|p| p.flag != EdgeFlag::Left)
        .map(|p| p.energy.omega_tilde.abs())
        .fold(f64::INFINITY, f64::min);
    Ok(KparRecord {
        kpar,
        dgap: window.dgap,
        eigenvalues: spec.pairs.iter().map(|p| p.energy.e).collect(),
        flags: spec.pairs.iter().map(|p| p.flag.code()).collect(),
        left_mass: spec.pairs.iter().map(|p| p.left_mass).collect(),
        residuals: spec.pairs.iter().map(|p| p.residual).collect(),
        restarts: spec.restarts,
        edge_count: edges.len(),
        edge_near_zero,
        edge,
        min_bulk_abs_omega,
        ansatz_rayleigh,
        distance: cmp.distance,
        tb_values: cmp.tb_values,
        omega_tilde: omegas,
        gram_offdiag: basis.offdiag_max(),
        orbital_residual: basis.max_residual(),
        hopping_ratio: [hop.re, hop.im],
    })
}

/// Runs every (λ, kpar) job; failures are recorded and the sweep continues.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyReport, ContinuumError> {
    let grid = build_grid_padded(cfg.ncells, (cfg.resolution, cfg.resolution), cfg.pad_left, cfg.pad_right)?;
    if cfg.pad_left < 2 || cfg.pad_right < 1 {
        return Err(ContinuumError::InvalidParameter(
            "need at least two vacuum cells on the left and one on the right".into(),
        ));
    }
    let mut records = Vec::new();
    for &lambda in &cfg.lambdas {
        let gs = Arc::new(ground_state(&cfg.well, lambda)?);
        let rho_radial = hopping_rho(&gs, &cfg.well).rho;
        let atom = Arc::new(mesh_atom(&gs, &cfg.well, cfg.resolution)?);
        let mut points = Vec::new();
        let mut failures = Vec::new();
        for &kpar in &cfg.kpars {
            match solve_point(cfg, &gs, &atom, kpar) {
                Ok(r) => points.push(r),
                Err(e) => failures.push(format!("kpar = {kpar}: {e}")),
            }
        }
        records.push(LambdaRecord {
            lambda,
            e0_radial: gs.e0,
            rho_radial,
            e0: atom.e0,
            rho: atom.rho,
            mesh_atom_radius: atom.radius,
            points,
            failures,
        });
    }
    Ok(StudyReport {
        config: cfg.clone(),
        grid_points: grid.len(),
        records,
    })
}

//! Lowest eigenpairs of the cylinder operator: restarted block Krylov
//! iteration on (H - E0 - σ)^{-1} with σ below the spectrum, Rayleigh-Ritz
//! with H itself.

use super::atom::node_area;
use super::banded::BandedCholesky;
use super::problem::CylinderProblem;
use super::{ContinuumError, ScaledEnergy};
use crate::tightbinding::{flag_from_masses, quarter_masses, EdgeFlag};
use crate::dense::hermitian_eigen;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

type CVec = Vec<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Below this many unknowns the operator is diagonalized densely.
pub const DENSE_LIMIT: usize = 1500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Block size beyond nev.
    pub extra: usize,
    /// Krylov blocks per restart.
    pub krylov_steps: usize,
    pub max_restarts: usize,
    /// Residual target relative to |E0|.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            extra: 6,
            krylov_steps: 4,
            max_restarts: 60,
            tol: 1e-8,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeEigenpair {
    pub energy: ScaledEnergy,
    #[serde(skip)]
    pub vector: CVec,
    pub flag: EdgeFlag,
    pub left_mass: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeSpectrum {
    pub pairs: Vec<EdgeEigenpair>,
    pub shift: f64,
    pub restarts: usize,
    pub max_residual: f64,
}

impl EdgeSpectrum {
    pub fn omegas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.energy.omega_tilde).collect()
    }
}

pub fn edge_eigensolve(
    problem: &CylinderProblem,
    rho: f64,
    nev: usize,
) -> Result<EdgeSpectrum, ContinuumError> {
    edge_eigensolve_with(problem, rho, nev, &SolveOptions::default(), &[])
}

/// `start` vectors (e.g. orbitals) seed the first block; random vectors fill it up.
pub fn edge_eigensolve_with(
    problem: &CylinderProblem,
    rho: f64,
    nev: usize,
    opts: &SolveOptions,
    start: &[CVec],
) -> Result<EdgeSpectrum, ContinuumError> {
    let min = problem.sites.len().max(1);
    if nev < min || nev > problem.dim() {
        return Err(ContinuumError::InvalidNev { nev, min });
    }
    if !(rho > 0.0) {
        return Err(ContinuumError::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let scale = problem.e0.abs().max(1.0);
    let (values, vectors, shift, restarts) = if problem.dim() <= DENSE_LIMIT {
        let (v, x) = dense_lowest(problem, nev)?;
        (v, x, f64::NAN, 0)
    } else {
        krylov_lowest(problem, rho, nev, opts, start, scale)?
    };
    let cells: Vec<usize> = (0..problem.dim()).map(|i| problem.grid.cell_of(i)).collect();
    let pairs: Vec<EdgeEigenpair> = values
        .iter()
        .zip(vectors)
        .map(|(&t, x)| {
            let r: f64 = problem
                .apply(&x)
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b * t).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let mut mass = vec![0.0; problem.grid.ncells];
            for (c, v) in cells.iter().zip(&x) {
                mass[*c] += v.norm_sqr();
            }
            let (l, rt) = quarter_masses(&mass);
            EdgeEigenpair {
                energy: ScaledEnergy::new(t + problem.e0, problem.e0, rho),
                vector: x,
                flag: flag_from_masses(l, rt),
                left_mass: l,
                residual: r,
            }
        })
        .collect();
    let max_residual = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
    if !(max_residual <= opts.tol * scale) {
        return Err(ContinuumError::NotConverged {
            residual: max_residual,
            tol: opts.tol * scale,
            restarts,
        });
    }
    Ok(EdgeSpectrum {
        pairs,
        shift,
        restarts,
        max_residual,
    })
}

fn dense_lowest(problem: &CylinderProblem, nev: usize) -> Result<(Vec<f64>, Vec<CVec>), ContinuumError> {
    let n = problem.dim();
    let op = &problem.operator;
    let m = DMatrix::from_fn(n, n, |i, j| op.get(i, j));
    let (vals, vecs) = hermitian_eigen(&m)?;
    let values = vals[..nev].to_vec();
    let vectors = (0..nev).map(|c| vecs.column(c).iter().copied().collect()).collect();
    Ok((values, vectors))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.par_chunks(4096)
        .zip(b.par_chunks(4096))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<Complex64>())
        .sum()
}

/// Orthogonalizes `w` against `basis` (two passes) and appends it if it survives.
fn push_orthogonal(basis: &mut Vec<CVec>, mut w: CVec) -> bool {
    let n0 = norm(&w);
    if n0 == 0.0 {
        return false;
    }
    for _ in 0..2 {
        let c: Vec<Complex64> = basis.par_iter().map(|q| dot(q, &w)).collect();
        w.par_chunks_mut(4096).enumerate().for_each(|(k, chunk)| {
            let off = k * 4096;
            for (q, cj) in basis.iter().zip(&c) {
                for (i, x) in chunk.iter_mut().enumerate() {
                    *x -= cj * q[off + i];
                }
            }
        });
    }
    let n1 = norm(&w);
    if n1 < 1e-10 * n0 {
        return false;
    }
    w.iter_mut().for_each(|x| *x /= n1);
    basis.push(w);
    true
}

fn combine(basis: &[CVec], coef: impl Fn(usize) -> Complex64 + Sync, n: usize) -> CVec {
    let c: Vec<Complex64> = (0..basis.len()).map(coef).collect();
    let mut out = vec![ZERO; n];
    out.par_chunks_mut(4096).enumerate().for_each(|(k, chunk)| {
        let off = k * 4096;
        for (q, cj) in basis.iter().zip(&c) {
            for (i, x) in chunk.iter_mut().enumerate() {
                *x += cj * q[off + i];
            }
        }
    });
    out
}

fn factor_below(
    problem: &CylinderProblem,
    rho: f64,
) -> Result<(BandedCholesky<Complex64>, f64), ContinuumError> {
    let mut shift = -(4.5 * rho + 0.05 * problem.e0.abs());
    let mut last = 0;
    for _ in 0..12 {
        match BandedCholesky::factor(&problem.operator, shift) {
            Ok(f) => return Ok((f, shift)),
            Err(e) => {
                last = e.row;
                shift *= 2.0;
            }
        }
    }
    Err(ContinuumError::Factorization(last))
}

type Ritz = (Vec<f64>, Vec<CVec>, f64, usize);

fn krylov_lowest(
    problem: &CylinderProblem,
    rho: f64,
    nev: usize,
    opts: &SolveOptions,
    start: &[CVec],
    scale: f64,
) -> Result<Ritz, ContinuumError> {
    let n = problem.dim();
    let bsize = (nev + opts.extra).min(n);
    let (chol, shift) = factor_below(problem, rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut block: Vec<CVec> = start.iter().take(bsize).cloned().collect();
    while block.len() < bsize {
        block.push((0..n).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect());
    }
    let mut worst = f64::INFINITY;
    for restart in 0..opts.max_restarts {
        let mut basis: Vec<CVec> = Vec::new();
        let mut current = Vec::new();
        for v in block.drain(..) {
            if push_orthogonal(&mut basis, v) {
                current.push(basis.len() - 1);
            }
        }
        for _ in 0..opts.krylov_steps {
            let next: Vec<CVec> = current.par_iter().map(|&i| chol.solve(&basis[i])).collect();
            current.clear();
            for v in next {
                if push_orthogonal(&mut basis, v) {
                    current.push(basis.len() - 1);
                }
            }
        }
        let hq: Vec<CVec> = basis.par_iter().map(|q| problem.apply(q)).collect();
        let m = basis.len();
        let mut g = DMatrix::from_element(m, m, ZERO);
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
        let vals: Vec<Complex64> = pairs.par_iter().map(|&(i, j)| dot(&basis[i], &hq[j])).collect();
        for (&(i, j), v) in pairs.iter().zip(vals) {
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
        for i in 0..m {
            g[(i, i)] = Complex64::new(g[(i, i)].re, 0.0);
        }
        let (ritz, y_all) = hermitian_eigen(&g)?;
        let keep = bsize.min(m);
        let mut values = Vec::with_capacity(keep);
        let mut vectors = Vec::with_capacity(keep);
        worst = 0.0;
        for rank in 0..keep {
            let y = y_all.column(rank);
            let x = combine(&basis, |j| y[j], n);
            let theta = ritz[rank];
            if rank < nev {
                let hx = combine(&hq, |j| y[j], n);
                let r = hx
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b * theta).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(r);
            }
            values.push(theta);
            vectors.push(x);
        }
        if worst <= 0.1 * opts.tol * scale {
            values.truncate(nev);
            vectors.truncate(nev);
            return Ok((values, vectors, shift, restart + 1));
        }
        if restart + 1 == opts.max_restarts && worst <= opts.tol * scale {
            values.truncate(nev);
            vectors.truncate(nev);
            return Ok((values, vectors, shift, restart + 1));
        }
        block = vectors;
    }
    Err(ContinuumError::NotConverged {
        residual: worst,
        tol: opts.tol * scale,
        restarts: opts.max_restarts,
    })
}

/// Rayleigh quotient ⟨v, (H - E0) v⟩ / ⟨v, v⟩.
pub fn rayleigh_quotient(problem: &CylinderProblem, v: &[Complex64]) -> f64 {
    let hv = problem.apply(v);
    (CylinderProblem::inner(v, &hv) / CylinderProblem::inner(v, v)).re
}

/// |⟨ψ, φ⟩| / (‖ψ‖ ‖φ‖).
pub fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    CylinderProblem::inner(a, b).norm() / (norm(a) * norm(b))
}

/// Mesh-area-weighted norm.
pub fn l2_norm(problem: &CylinderProblem, v: &[Complex64]) -> f64 {
    norm(v) * node_area(problem.grid.h()).sqrt()
}

//! The single well on the mesh: sampled potential footprint and the discrete
//! ground state that the cylinder operator sees at every site.

use super::banded::{BandedCholesky, SparseHermitian};
use super::ContinuumError;
use crate::atomic::{AtomicWell, GroundState};
use crate::lattice::{make_frame, Vec2};
use serde::Serialize;

/// Neighbour offsets of the triangular stencil in (v1, v2) steps.
pub const STENCIL: [(i64, i64); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)];

/// Coupling 2/(3h²) of the six-point Laplacian on a mesh of width h.
pub fn stencil_weight(h: f64) -> f64 {
    2.0 / (3.0 * h * h)
}

/// Area of one mesh cell.
pub fn node_area(h: f64) -> f64 {
    0.5 * 3f64.sqrt() * h * h
}

const SUBSAMPLE: usize = 8;

/// λ²V0 averaged over the mesh cell of each node near the well centre, on a
/// mesh with `p` nodes per lattice vector. Only nonzero entries are listed.
pub fn potential_footprint(well: &AtomicWell, lambda: f64, p: usize) -> Vec<(i64, i64, f64)> {
    let f = make_frame();
    let h = 1.0 / p as f64;
    let reach = (well.r0 / (h * 0.5 * 3f64.sqrt())).ceil() as i64 + 1;
    let lam2 = lambda * lambda;
    let mut out = Vec::new();
    for d1 in -reach..=reach {
        for d2 in -reach..=reach {
            let mut acc = 0.0;
            for a in 0..SUBSAMPLE {
                for b in 0..SUBSAMPLE {
                    let u = d1 as f64 + (a as f64 + 0.5) / SUBSAMPLE as f64 - 0.5;
                    let w = d2 as f64 + (b as f64 + 0.5) / SUBSAMPLE as f64 - 0.5;
                    let x: Vec2 = (f.v1() * u + f.v2() * w) * h;
                    acc += well.potential(x.norm());
                }
            }
            let v = lam2 * acc / (SUBSAMPLE * SUBSAMPLE) as f64;
            if v != 0.0 {
                out.push((d1, d2, v));
            }
        }
    }
    out
}

/// Ground state of the six-point operator plus the sampled well on a hexagon
/// max(|d1|, |d2|, |d1 + d2|) ≤ M with Dirichlet outside.
#[derive(Debug, Clone, Serialize)]
pub struct MeshAtom {
    pub lambda: f64,
    pub well: AtomicWell,
    pub resolution: usize,
    pub radius: i64,
    pub e0: f64,
    /// Mesh hopping coefficient Σ area p0 λ²|V| p0(· - e).
    pub rho: f64,
    pub residual: f64,
    #[serde(skip)]
    pub footprint: Vec<(i64, i64, f64)>,
    #[serde(skip)]
    values: Vec<f64>,
    #[serde(skip)]
    row_start: Vec<usize>,
}

fn row_range(m: i64, d1: i64) -> (i64, i64) {
    ((-m).max(-m - d1), m.min(m - d1))
}

impl MeshAtom {
    fn index(&self, d1: i64, d2: i64) -> Option<usize> {
        hex_index(&self.row_start, self.radius, d1, d2)
    }

    /// Normalized mesh ground state at offset (d1, d2); zero outside the hexagon.
    pub fn value(&self, d1: i64, d2: i64) -> f64 {
        self.index(d1, d2).map_or(0.0, |i| self.values[i])
    }

    /// All (d1, d2, value) with the value stored.
    pub fn support(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let m = self.radius;
        (-m..=m).flat_map(move |d1| {
            let (lo, hi) = row_range(m, d1);
            (lo..=hi).map(move |d2| (d1, d2, self.value(d1, d2)))
        })
    }

    pub fn h(&self) -> f64 {
        1.0 / self.resolution as f64
    }

    pub fn decay_length(&self) -> f64 {
        1.0 / (-self.e0).sqrt()
    }
}

fn hex_index(row_start: &[usize], m: i64, d1: i64, d2: i64) -> Option<usize> {
    if d1 < -m || d1 > m {
        return None;
    }
    let (lo, hi) = row_range(m, d1);
    if d2 < lo || d2 > hi {
        return None;
    }
    Some(row_start[(d1 + m) as usize] + (d2 - lo) as usize)
}

/// Domain half-width in units of the decay length, clamped to [1.2, 3.0].
fn domain_extent(e0: f64) -> f64 {
    (12.0 / (-e0).sqrt()).clamp(1.2, 3.0)
}

pub fn mesh_atom(gs: &GroundState, well: &AtomicWell, p: usize) -> Result<MeshAtom, ContinuumError> {
    if p % 3 != 0 {
        return Err(ContinuumError::SiteOffGrid(p));
    }
    let h = 1.0 / p as f64;
    let m = (domain_extent(gs.e0) / (h * 0.5 * 3f64.sqrt())).ceil() as i64;
    let mut row_start = Vec::with_capacity(2 * m as usize + 2);
    let mut count = 0usize;
    for d1 in -m..=m {
        row_start.push(count);
        let (lo, hi) = row_range(m, d1);
        count += (hi - lo + 1) as usize;
    }
    let footprint = potential_footprint(well, gs.lambda, p);
    let mut pot = vec![0.0; count];
    for &(d1, d2, v) in &footprint {
        if let Some(i) = hex_index(&row_start, m, d1, d2) {
            pot[i] += v;
        }
    }
    let c = stencil_weight(h);
    let f = make_frame();
    let mut rows = Vec::with_capacity(count);
    let mut start = Vec::with_capacity(count);
    for d1 in -m..=m {
        let (lo, hi) = row_range(m, d1);
        for d2 in lo..=hi {
            let i = hex_index(&row_start, m, d1, d2).unwrap();
            let mut r = vec![(i, 6.0 * c + pot[i])];
            for (a, b) in STENCIL {
                if let Some(j) = hex_index(&row_start, m, d1 + a, d2 + b) {
                    r.push((j, -c));
                }
            }
            rows.push(r);
            let x = (f.v1() * d1 as f64 + f.v2() * d2 as f64) * h;
            start.push(gs.p0(x.norm()).max(1e-300));
        }
    }
    let op = SparseHermitian::from_rows(rows);
    let mut sigma = gs.e0 - 0.1 * gs.e0.abs() - 1.0;
    let chol = loop {
        match BandedCholesky::factor(&op, sigma) {
            Ok(ch) => break ch,
            Err(_) if sigma > 4.0 * gs.e0 - 10.0 => sigma -= 0.1 * gs.e0.abs() + 1.0,
            Err(e) => return Err(ContinuumError::Factorization(e.row)),
        }
    };
    let mut v = normalize(start);
    for _ in 0..300 {
        let w = normalize(chol.solve(&v));
        let diff = w.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        v = w;
        if diff < 1e-13 {
            break;
        }
    }
    let hv = op.apply(&v);
    let e0: f64 = hv.iter().zip(&v).map(|(a, b)| a * b).sum();
    let residual = hv
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - e0 * b).powi(2))
        .sum::<f64>()
        .sqrt();
    if e0 >= 0.0 {
        return Err(ContinuumError::NoMeshBoundState { lambda: gs.lambda, e0 });
    }
    let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let scale = sign / node_area(h).sqrt();
    let values: Vec<f64> = v.iter().map(|x| x * scale).collect();
    let mut atom = MeshAtom {
        lambda: gs.lambda,
        well: *well,
        resolution: p,
        radius: m,
        e0,
        rho: 0.0,
        residual,
        footprint,
        values,
        row_start,
    };
    let shift = (p / 3) as i64;
    atom.rho = node_area(h)
        * atom
            .footprint
            .iter()
            .map(|&(d1, d2, v)| atom.value(d1, d2) * v.abs() * atom.value(d1 + shift, d2 + shift))
            .sum::<f64>();
    Ok(atom)
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
    v
}

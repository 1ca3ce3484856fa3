//! The atomic well V0, its ground state p0 and the hopping coefficient ρ.

pub mod bessel;
pub mod radial;

use crate::lattice::{make_frame, Vec2};
use crate::quadrature::{gauss_legendre_on, linear_fit};
use radial::{assemble, outer_radius, radial_grid, RadialOptions};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtomicError {
    #[error("no resolved bound state at lambda = {lambda} (E0 = {e0:.4e})")]
    NoBoundState { lambda: f64, e0: f64 },
    #[error("well radius {r0} must lie in (0, {limit:.6})")]
    RadiusOutOfRange { r0: f64, limit: f64 },
    #[error("lambda must be positive and finite, got {0}")]
    InvalidLambda(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WellShape {
    /// V0 = -1 on the open disc of radius r0.
    DiscWell,
    /// V0 = -exp(1 - r0²/(r0² - r²)) inside the disc.
    SmoothBump,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomicWell {
    pub shape: WellShape,
    pub r0: f64,
}

/// Largest admissible well radius, a third of the bond length less a margin.
pub fn max_well_radius() -> f64 {
    0.33 * make_frame().e().norm()
}

impl AtomicWell {
    pub fn new(shape: WellShape, r0: f64) -> Result<Self, AtomicError> {
        let limit = max_well_radius();
        if !(r0 > 0.0 && r0 < limit) {
            return Err(AtomicError::RadiusOutOfRange { r0, limit });
        }
        Ok(AtomicWell { shape, r0 })
    }

    pub fn potential(&self, r: f64) -> f64 {
        if r >= self.r0 {
            return 0.0;
        }
        match self.shape {
            WellShape::DiscWell => -1.0,
            WellShape::SmoothBump => {
                let a = self.r0 * self.r0;
                -(1.0 - a / (a - r * r)).exp()
            }
        }
    }
}

impl Default for AtomicWell {
    fn default() -> Self {
        AtomicWell {
            shape: WellShape::DiscWell,
            r0: 0.18,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundState {
    pub lambda: f64,
    pub well: AtomicWell,
    /// Richardson-extrapolated ground energy.
    pub e0: f64,
    /// Ground energies on the two finest grids used for the extrapolation.
    pub e0_levels: [f64; 2],
    /// Radial nodes (last node is the Dirichlet radius, excluded).
    pub radius: Vec<f64>,
    /// p0 at `radius`, with 2π Σ p² r dr = 1.
    pub profile: Vec<f64>,
    /// Fitted exponential rate of p0 outside 2 r0.
    pub decay_rate: f64,
    pub residual: f64,
}

impl GroundState {
    /// p0(r) by four-point Lagrange interpolation of ln p0; zero beyond the grid.
    pub fn p0(&self, r: f64) -> f64 {
        let n = self.radius.len();
        if r > self.radius[n - 1] {
            return 0.0;
        }
        let i = self.radius.partition_point(|&x| x <= r).saturating_sub(1);
        let s = i.saturating_sub(1).min(n - 4);
        let xs = &self.radius[s..s + 4];
        let ys = &self.profile[s..s + 4];
        let mut acc = 0.0;
        for j in 0..4 {
            let mut b = 1.0;
            for k in 0..4 {
                if k != j {
                    b *= (r - xs[k]) / (xs[j] - xs[k]);
                }
            }
            acc += b * ys[j].ln();
        }
        acc.exp()
    }

    pub fn decay_length(&self) -> f64 {
        1.0 / self.decay_rate
    }
}

pub fn ground_state(well: &AtomicWell, lambda: f64) -> Result<GroundState, AtomicError> {
    ground_state_with(well, lambda, &RadialOptions::default(), 1)
}

/// Ground state on grid levels `level` and `level + 1`, extrapolated in h².
pub fn ground_state_with(
    well: &AtomicWell,
    lambda: f64,
    opts: &RadialOptions,
    level: u32,
) -> Result<GroundState, AtomicError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(AtomicError::InvalidLambda(lambda));
    }
    let rmax = outer_radius(lambda);
    let coarse = radial_eigenvalue(well, lambda, 0, 0, opts, level);
    let grid = radial_grid(well.r0, rmax, opts, level + 1);
    let m = assemble(&grid, well, lambda, 0);
    let (fine, v, residual) = m.ground();
    let e0 = (4.0 * fine - coarse) / 3.0;
    if !(fine < 0.0) || (-fine).sqrt() * rmax < 4.0 {
        return Err(AtomicError::NoBoundState { lambda, e0: fine });
    }
    let mut profile: Vec<f64> = v
        .iter()
        .zip(&m.weights)
        .map(|(x, w)| (x / w.sqrt()).abs())
        .collect();
    let norm: f64 = profile
        .iter()
        .zip(&m.weights)
        .map(|(p, w)| p * p * w)
        .sum::<f64>()
        * 2.0
        * PI;
    profile.iter_mut().for_each(|p| *p /= norm.sqrt());
    let radius = m.nodes.clone();
    let kappa = (-fine).sqrt();
    let (a, b) = (2.0 * well.r0, (2.0 * well.r0 + 8.0 / kappa).min(0.5 * rmax));
    let (xs, ys): (Vec<f64>, Vec<f64>) = radius
        .iter()
        .zip(&profile)
        .filter(|(r, _)| **r >= a && **r <= b)
        .map(|(r, p)| (*r, p.ln()))
        .unzip();
    let (_, slope, _) = linear_fit(&xs, &ys);
    Ok(GroundState {
        lambda,
        well: *well,
        e0,
        e0_levels: [coarse, fine],
        radius,
        profile,
        decay_rate: -slope,
        residual,
    })
}

/// k-th eigenvalue (0-based) of angular channel l on grid `level`.
pub fn radial_eigenvalue(
    well: &AtomicWell,
    lambda: f64,
    l: u32,
    k: usize,
    opts: &RadialOptions,
    level: u32,
) -> f64 {
    let grid = radial_grid(well.r0, outer_radius(lambda), opts, level);
    assemble(&grid, well, lambda, l).eigenvalue(k)
}

/// E1 - E0 with E1 the lowest of: the second s-wave level, the first p-wave
/// level, and the continuum threshold 0.
pub fn spectral_gap(well: &AtomicWell, lambda: f64) -> Result<f64, AtomicError> {
    let gs = ground_state(well, lambda)?;
    let opts = RadialOptions::default();
    let s1 = radial_eigenvalue(well, lambda, 0, 1, &opts, 2);
    let p0 = radial_eigenvalue(well, lambda, 1, 0, &opts, 2);
    let e1 = s1.min(p0).min(0.0);
    Ok(e1 - gs.e0_levels[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoppingCoefficient {
    pub lambda: f64,
    pub rho: f64,
    pub quadrature_error_estimate: f64,
}

/// ∫_{|y|<r0} p0(|y - c1|) λ²|V0(y)| p0(|y - c2|) dy in polar coordinates
/// (Gauss-Legendre in the radius, trapezoid in the angle).
fn disc_integral(gs: &GroundState, well: &AtomicWell, c1: Vec2, c2: Vec2, ns: usize, nt: usize) -> f64 {
    let (s, ws) = gauss_legendre_on(ns, 0.0, well.r0);
    let lam2 = gs.lambda * gs.lambda;
    let dt = 2.0 * PI / nt as f64;
    let mut acc = 0.0;
    for (r, w) in s.iter().zip(&ws) {
        let v = lam2 * well.potential(*r).abs();
        let mut ring = 0.0;
        for j in 0..nt {
            let t = j as f64 * dt;
            let y = Vec2::new(r * t.cos(), r * t.sin());
            ring += gs.p0((y - c1).norm()) * gs.p0((y - c2).norm());
        }
        acc += w * r * v * ring * dt;
    }
    acc
}

const QUAD_FINE: (usize, usize) = (48, 192);
const QUAD_COARSE: (usize, usize) = (24, 96);

fn disc_integral_with_error(gs: &GroundState, well: &AtomicWell, c1: Vec2, c2: Vec2) -> (f64, f64) {
    let fine = disc_integral(gs, well, c1, c2, QUAD_FINE.0, QUAD_FINE.1);
    let coarse = disc_integral(gs, well, c1, c2, QUAD_COARSE.0, QUAD_COARSE.1);
    (fine, (fine - coarse).abs())
}

pub fn hopping_rho(gs: &GroundState, well: &AtomicWell) -> HoppingCoefficient {
    let e = make_frame().e();
    let (rho, err) = disc_integral_with_error(gs, well, Vec2::zeros(), e);
    HoppingCoefficient {
        lambda: gs.lambda,
        rho,
        quadrature_error_estimate: err,
    }
}

/// Center σe + r1 v1 + r2 v2.
pub fn overlap_center(sigma: i32, r: [i64; 2]) -> Vec2 {
    let f = make_frame();
    f.e() * sigma as f64 + f.v1() * r[0] as f64 + f.v2() * r[1] as f64
}

pub fn overlap_integral(
    gs: &GroundState,
    well: &AtomicWell,
    sigma: i32,
    r: [i64; 2],
    sigma2: i32,
    r2: [i64; 2],
) -> f64 {
    overlap_integral_with_error(gs, well, sigma, r, sigma2, r2).0
}

pub fn overlap_integral_with_error(
    gs: &GroundState,
    well: &AtomicWell,
    sigma: i32,
    r: [i64; 2],
    sigma2: i32,
    r2: [i64; 2],
) -> (f64, f64) {
    disc_integral_with_error(gs, well, overlap_center(sigma, r), overlap_center(sigma2, r2))
}

//! Honeycomb geometry for the zigzag edge and the per-k∥ scalars used everywhere else.

use nalgebra::Vector2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::ops::Range;

pub type Vec2 = Vector2<f64>;

/// Below this modulus zeta is treated as exactly zero (kpar = π).
pub const ZETA_ZERO: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeFrame {
    pub v1: [f64; 2],
    pub v2: [f64; 2],
    pub k1: [f64; 2],
    pub k2: [f64; 2],
    pub va: [f64; 2],
    pub vb: [f64; 2],
    pub e: [f64; 2],
}

impl LatticeFrame {
    pub fn v1(&self) -> Vec2 {
        Vec2::from(self.v1)
    }
    pub fn v2(&self) -> Vec2 {
        Vec2::from(self.v2)
    }
    pub fn k1(&self) -> Vec2 {
        Vec2::from(self.k1)
    }
    pub fn k2(&self) -> Vec2 {
        Vec2::from(self.k2)
    }
    pub fn va(&self) -> Vec2 {
        Vec2::from(self.va)
    }
    pub fn vb(&self) -> Vec2 {
        Vec2::from(self.vb)
    }
    pub fn e(&self) -> Vec2 {
        Vec2::from(self.e)
    }

    /// Offset of sublattice `s` from the cell origin.
    pub fn offset(&self, s: Sublattice) -> Vec2 {
        match s {
            Sublattice::A => self.va(),
            Sublattice::B => self.vb(),
        }
    }
}

/// The zigzag frame: v1 = (√3/2, 1/2), v2 = (0, 1), vA = 0 and vB = (v1 + v2)/3.
///
/// vB is the centroid of the triangle (0, v1, v2), i.e. (1/(2√3), 1/2). This is
/// the only choice for which the three A neighbours of B_0 are A at 0, v1 and v2.
pub fn make_frame() -> LatticeFrame {
    let s3 = 3f64.sqrt();
    let v1 = [s3 / 2.0, 0.5];
    let v2 = [0.0, 1.0];
    let k1 = [2.0 * PI * 2.0 / s3, 0.0];
    let k2 = [-2.0 * PI / s3, 2.0 * PI];
    let vb = [(v1[0] + v2[0]) / 3.0, (v1[1] + v2[1]) / 3.0];
    LatticeFrame {
        v1,
        v2,
        k1,
        k2,
        va: [0.0, 0.0],
        vb,
        e: vb,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralWindow {
    pub kpar: f64,
    #[serde(serialize_with = "crate::ser_complex")]
    pub zeta: Complex64,
    pub dgap: f64,
    pub dmax: f64,
}

impl SpectralWindow {
    pub fn new(kpar: f64) -> Self {
        // 1 + e^{ik} = 2 cos(k/2) e^{ik/2}; written this way |zeta| is accurate near k = π.
        let c = 2.0 * (0.5 * kpar).cos();
        let mut zeta = Complex64::from_polar(c, 0.5 * kpar);
        if zeta.norm() < ZETA_ZERO {
            zeta = Complex64::new(0.0, 0.0);
        }
        let m = zeta.norm();
        SpectralWindow {
            kpar,
            zeta,
            dgap: (1.0 - m).abs(),
            dmax: 1.0 + m,
        }
    }

    pub fn abs_zeta(&self) -> f64 {
        self.zeta.norm()
    }

    /// kpar in (2π/3, 4π/3): the flat-band interval.
    pub fn has_flat_band(&self) -> bool {
        self.zeta.norm() < 1.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.zeta == Complex64::new(0.0, 0.0)
    }

    /// True when |x| lies in the closed band [dgap, dmax] inflated by `tol`.
    pub fn in_band(&self, x: f64, tol: f64) -> bool {
        let a = x.abs();
        a >= self.dgap - tol && a <= self.dmax + tol
    }
}

pub fn spectral_window(kpar: f64) -> SpectralWindow {
    SpectralWindow::new(kpar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SiteIndex {
    pub sublattice: Sublattice,
    pub n1: i64,
    pub n2: i64,
}

impl SiteIndex {
    pub fn new(sublattice: Sublattice, n1: i64, n2: i64) -> Self {
        SiteIndex { sublattice, n1, n2 }
    }

    pub fn in_sharp(&self) -> bool {
        self.n1 >= 0
    }
}

pub fn site_position(frame: &LatticeFrame, s: SiteIndex) -> Vec2 {
    frame.offset(s.sublattice) + frame.v1() * s.n1 as f64 + frame.v2() * s.n2 as f64
}

/// Sites of the half structure with 0 ≤ n1 ≤ n1_max and n2 in the window,
/// ordered by n1, then n2, then sublattice.
pub fn enumerate_sharp_sites(
    _frame: &LatticeFrame,
    n1_max: i64,
    n2_window: Range<i64>,
) -> Vec<SiteIndex> {
    if n1_max < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for n1 in 0..=n1_max {
        for n2 in n2_window.clone() {
            out.push(SiteIndex::new(Sublattice::A, n1, n2));
            out.push(SiteIndex::new(Sublattice::B, n1, n2));
        }
    }
    out
}

/// Lattice vectors r with |σe + r1 v1 + r2 v2| = |e|, i.e. the cells whose
/// σ-shifted sites sit at nearest-neighbour distance from the origin.
pub fn nearest_neighbor_cells(frame: &LatticeFrame, sigma: i32) -> Vec<[i64; 2]> {
    let e = frame.e();
    let target = e.norm();
    let mut out = Vec::new();
    for r1 in -2..=2i64 {
        for r2 in -2..=2i64 {
            let x = e * sigma as f64 + frame.v1() * r1 as f64 + frame.v2() * r2 as f64;
            if (x.norm() - target).abs() < 1e-12 {
                out.push([r1, r2]);
            }
        }
    }
    out
}

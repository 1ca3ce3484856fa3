//! Bulk Bloch modes of the fiber chain and their Zak phase.

use crate::lattice::SpectralWindow;
use nalgebra::Vector2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

pub const DEFAULT_NPOINTS: usize = 512;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZakError {
    #[error("zeta + exp(i kperp) vanishes: Dirac point")]
    DiracDegeneracy,
    #[error("dgap = {0:.3e} is too small to resolve the winding")]
    NearDiracPoint(f64),
    #[error("need at least 64 sample points, got {0}")]
    InvalidSampling(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// The 2×2 symbol [[0, conj(ζ)+e^{-ik}], [ζ+e^{ik}, 0]] of the bulk chain.
pub fn bloch_symbol(kperp: f64, window: &SpectralWindow) -> [[Complex64; 2]; 2] {
    let g = window.zeta + Complex64::from_polar(1.0, kperp);
    let zero = Complex64::new(0.0, 0.0);
    [[zero, g.conj()], [g, zero]]
}

/// Energy ±|ζ + e^{ik⊥}| and spinor (1, ±j)/√2 with j = g/|g|.
pub fn bloch_eigenpair(
    kperp: f64,
    window: &SpectralWindow,
    branch: Branch,
) -> Result<(f64, Vector2<Complex64>), ZakError> {
    let g = window.zeta + Complex64::from_polar(1.0, kperp);
    let m = g.norm();
    if m < 1e-12 {
        return Err(ZakError::DiracDegeneracy);
    }
    let j = g / m;
    let s = branch.sign();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Ok((s * m, Vector2::new(Complex64::from(r), j * (s * r))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZakResult {
    pub kpar: f64,
    pub phase: f64,
    pub winding: i64,
    /// Trapezoid quadrature of -i conj(j) ∂j with centred differences of the samples.
    pub raw_quadrature: f64,
}

fn samples(window: &SpectralWindow, npoints: usize) -> Vec<Complex64> {
    (0..npoints)
        .map(|i| window.zeta + Complex64::from_polar(1.0, 2.0 * PI * i as f64 / npoints as f64))
        .collect()
}

/// Winding number of a closed sampled loop of nonzero complex numbers.
pub fn loop_winding(points: &[Complex64]) -> i64 {
    let n = points.len();
    let total: f64 = (0..n).map(|i| (points[(i + 1) % n] / points[i]).arg()).sum();
    (total / (2.0 * PI)).round() as i64
}

/// Winding of the relative phase between spinor components. Invariant under
/// multiplying each sample by an arbitrary unit-modulus factor.
pub fn spinor_winding(spinors: &[Vector2<Complex64>]) -> i64 {
    let ratios: Vec<Complex64> = spinors.iter().map(|s| s[1] * s[0].conj()).collect();
    loop_winding(&ratios)
}

pub fn zak_phase(window: &SpectralWindow, npoints: usize) -> Result<ZakResult, ZakError> {
    if npoints < 64 {
        return Err(ZakError::InvalidSampling(npoints));
    }
    if window.dgap <= 1e-6 {
        return Err(ZakError::NearDiracPoint(window.dgap));
    }
    let g = samples(window, npoints);
    let winding = loop_winding(&g);
    let j: Vec<Complex64> = g.iter().map(|x| x / x.norm()).collect();
    let h = 2.0 * PI / npoints as f64;
    let raw: f64 = (0..npoints)
        .map(|i| {
            let dj = (j[(i + 1) % npoints] - j[(i + npoints - 1) % npoints]) / (2.0 * h);
            (-Complex64::i() * j[i].conj() * dj).re * h
        })
        .sum();
    Ok(ZakResult {
        kpar: window.kpar,
        phase: 2.0 * PI * winding as f64,
        winding,
        raw_quadrature: raw,
    })
}

pub fn write_zak_csv<W: std::io::Write>(out: &mut W, rows: &[ZakResult]) -> std::io::Result<()> {
    writeln!(out, "kpar,phase,winding")?;
    for r in rows {
        writeln!(out, "{:.12},{:.15e},{}", r.kpar, r.phase, r.winding)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::spectral_window;

    #[test]
    fn eigenpairs() {
        let (mu, _) = bloch_eigenpair(0.0, &spectral_window(0.0), Branch::Plus).unwrap();
        assert!((mu - 3.0).abs() < 1e-12);
        for k in [0.0, 1.0, 4.0] {
            let (mu, v) = bloch_eigenpair(k, &spectral_window(PI), Branch::Plus).unwrap();
            assert!((mu - 1.0).abs() < 1e-12);
            let h = bloch_symbol(k, &spectral_window(PI));
            let hv = Vector2::new(h[0][1] * v[1], h[1][0] * v[0]);
            assert!((hv - v * Complex64::from(mu)).norm() < 1e-12);
        }
        // ζ(2π/3) = e^{iπ/3}, cancelled by e^{ik⊥} at k⊥ = 4π/3
        let w = spectral_window(2.0 * PI / 3.0);
        assert_eq!(
            bloch_eigenpair(4.0 * PI / 3.0, &w, Branch::Minus),
            Err(ZakError::DiracDegeneracy)
        );
    }

    #[test]
    fn quantized() {
        let r = zak_phase(&spectral_window(PI), 512).unwrap();
        assert_eq!(r.winding, 1);
        assert!((r.phase - 2.0 * PI).abs() < 1e-12);
        assert!((r.raw_quadrature - 2.0 * PI).abs() < 1e-3);
        let r = zak_phase(&spectral_window(0.0), 512).unwrap();
        assert_eq!(r.winding, 0);
        assert!(r.raw_quadrature.abs() < 1e-3);
        let a = zak_phase(&spectral_window(5.0 * PI / 6.0), 128).unwrap();
        let b = zak_phase(&spectral_window(5.0 * PI / 6.0), 512).unwrap();
        assert_eq!(a.winding, b.winding);
    }

    #[test]
    fn rejects() {
        assert_eq!(
            zak_phase(&spectral_window(2.0 * PI / 3.0), 512),
            Err(ZakError::NearDiracPoint(spectral_window(2.0 * PI / 3.0).dgap))
        );
        assert_eq!(
            zak_phase(&spectral_window(PI), 10),
            Err(ZakError::InvalidSampling(10))
        );
    }
}

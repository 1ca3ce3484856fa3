use super::TbError;
use crate::lattice::SpectralWindow;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::Serialize;

/// Tolerance by which the closed band [dgap, dmax] is inflated in membership tests.
pub const BAND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    InsideGap,
    AboveBands,
    OnBands,
}

pub fn classify(z: Complex64, window: &SpectralWindow) -> Regime {
    let x = z.re.abs();
    if x < window.dgap {
        Regime::InsideGap
    } else if x > window.dmax {
        Regime::AboveBands
    } else {
        Regime::OnBands
    }
}

#[derive(Debug, Clone)]
pub struct TransferSystem {
    pub z: Complex64,
    pub window: SpectralWindow,
    pub m: Matrix2<Complex64>,
    pub lam1: Complex64,
    pub lam2: Complex64,
    pub xi1: Vector2<Complex64>,
    pub xi2: Vector2<Complex64>,
    pub regime: Regime,
}

impl TransferSystem {
    /// (λ, ξ) of the root with the smaller modulus, then the other one.
    pub fn split(&self) -> ((Complex64, Vector2<Complex64>), (Complex64, Vector2<Complex64>)) {
        let a = (self.lam1, self.xi1);
        let b = (self.lam2, self.xi2);
        if self.lam1.norm() <= self.lam2.norm() {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Residual of conj(ζ)λ² + (1+|ζ|²-z²)λ + ζ at both roots.
    pub fn quadratic_residual(&self) -> f64 {
        let zeta = self.window.zeta;
        let b = 1.0 + zeta.norm_sqr() - self.z * self.z;
        [self.lam1, self.lam2]
            .iter()
            .map(|&l| (zeta.conj() * l * l + b * l + zeta).norm())
            .fold(0.0, f64::max)
    }
}

pub fn transfer_matrix(z: Complex64, zeta: Complex64) -> Matrix2<Complex64> {
    let zc = zeta.conj();
    Matrix2::new(-zeta, z, -(zeta / zc) * z, (z * z - 1.0) / zc)
}

/// Roots of conj(ζ)λ² + (1+|ζ|²-z²)λ + ζ = 0 labelled as
/// λ1 = (-b + √D)/(2 conj ζ), λ2 = (-b - √D)/(2 conj ζ) with the principal root.
/// The root that suffers cancellation is recovered from λ1 λ2 = ζ/conj(ζ).
pub fn transfer_roots(z: Complex64, zeta: Complex64) -> (Complex64, Complex64) {
    let zc = zeta.conj();
    let b = 1.0 + zeta.norm_sqr() - z * z;
    let s = (b * b - 4.0 * zeta.norm_sqr()).sqrt();
    let p = zeta / zc;
    let plus = -b + s;
    let minus = -b - s;
    if plus.norm() >= minus.norm() {
        let l1 = plus / (2.0 * zc);
        (l1, p / l1)
    } else {
        let l2 = minus / (2.0 * zc);
        (p / l2, l2)
    }
}

/// Eigenvector of M for eigenvalue λ, normalized.
///
/// (z, ζ+λ) and (z² - 1 - conj(ζ)λ, ζz) both span the kernel of M - λ; whichever is
/// larger is used, so the z → 0 limit stays well defined. ζ+λ is evaluated
/// through z²λ/(1+conj(ζ)λ) when the direct sum cancels.
pub fn transfer_eigenvector(z: Complex64, zeta: Complex64, lam: Complex64) -> Vector2<Complex64> {
    let direct = zeta + lam;
    let sum = if direct.norm() < 0.5 * zeta.norm() {
        let den = 1.0 + zeta.conj() * lam;
        if den.norm() > direct.norm() {
            z * z * lam / den
        } else {
            direct
        }
    } else {
        direct
    };
    let u = Vector2::new(z, sum);
    let w = Vector2::new(z * z - 1.0 - zeta.conj() * lam, zeta * z);
    let v = if u.norm() >= w.norm() { u } else { w };
    v / Complex64::from(v.norm())
}

pub fn transfer_system(z: Complex64, window: &SpectralWindow) -> Result<TransferSystem, TbError> {
    if window.is_degenerate() {
        return Err(TbError::DegenerateFiber);
    }
    let zeta = window.zeta;
    let (lam1, lam2) = transfer_roots(z, zeta);
    Ok(TransferSystem {
        z,
        window: *window,
        m: transfer_matrix(z, zeta),
        lam1,
        lam2,
        xi1: transfer_eigenvector(z, zeta, lam1),
        xi2: transfer_eigenvector(z, zeta, lam2),
        regime: classify(z, window),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::spectral_window;
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn roots_at_zero() {
        let w = spectral_window(5.0 * PI / 6.0);
        let t = transfer_system(c(0.0), &w).unwrap();
        assert!((t.lam1 + w.zeta).norm() < 1e-14);
        assert!((t.lam2 + 1.0 / w.zeta.conj()).norm() < 1e-14);
    }

    #[test]
    fn inside_gap_point() {
        let w = spectral_window(5.0 * PI / 6.0);
        let t = transfer_system(c(0.3), &w).unwrap();
        assert_eq!(t.regime, Regime::InsideGap);
        assert!(((t.lam1 * t.lam2).norm() - 1.0).abs() < 1e-12);
        assert!(t.lam1.norm() < 1.0 && t.lam2.norm() > 1.0);
    }

    #[test]
    fn on_band_unit_circle() {
        let w = spectral_window(0.4);
        for i in 1..20 {
            let x = w.dgap + (w.dmax - w.dgap) * i as f64 / 20.0;
            let t = transfer_system(c(x), &w).unwrap();
            assert_eq!(t.regime, Regime::OnBands);
            assert!((t.lam1.norm() - 1.0).abs() < 1e-10);
            assert!((t.lam2.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenvectors_are_eigenvectors() {
        let w = spectral_window(2.0);
        for z in [c(0.1), c(3.9), Complex64::new(0.2, 0.05), c(0.0)] {
            let t = transfer_system(z, &w).unwrap();
            for (l, x) in [(t.lam1, t.xi1), (t.lam2, t.xi2)] {
                assert!((t.m * x - x * l).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_at_pi() {
        assert!(matches!(
            transfer_system(c(0.2), &spectral_window(PI)),
            Err(TbError::DegenerateFiber)
        ));
    }
}

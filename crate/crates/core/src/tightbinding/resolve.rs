use super::{flat_band_state, transfer_system, Cell, TbError, BAND_TOL};
use crate::lattice::SpectralWindow;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Solves (H_edge - z)ψ = f on the half line n ≥ 0 with ψ decaying, and returns
/// ψ on cells 0..ncells-1.
///
/// `f` is padded with zeros up to `ncells`. The recursion ψ_{n+1} = Mψ_n + F_n
/// is diagonalized in the eigenbasis of M: the decaying component is summed
/// forward from the boundary, the growing one backward from the end of the
/// support of f, and the free multiple of the decaying mode is fixed by the
/// boundary row -zψ_0^A + conj(ζ)ψ_0^B = f_0^A.
pub fn resolve(
    f: &[Cell],
    z: Complex64,
    window: &SpectralWindow,
    ncells: usize,
) -> Result<Vec<Cell>, TbError> {
    if f.len() > ncells {
        return Err(TbError::SourceTooLong {
            got: f.len(),
            ncells,
        });
    }
    if z.im.abs() < BAND_TOL && window.in_band(z.re, BAND_TOL) {
        return Err(TbError::OnEssentialSpectrum(z));
    }
    if window.is_degenerate() {
        return resolve_pi(f, z, ncells);
    }
    if z.norm() < 1e-14 && window.has_flat_band() {
        return Err(TbError::PoleAtZero);
    }
    let zeta = window.zeta;
    let zc = zeta.conj();
    let ts = transfer_system(z, window)?;
    let ((ls, us), (lg, ug)) = ts.split();
    let basis = Matrix2::from_columns(&[us, ug]);
    let inv = basis.try_inverse().ok_or(TbError::OnEssentialSpectrum(z))?;

    let fa = |n: usize| f.get(n).map_or(ZERO, |c| c[0]);
    let fb = |n: usize| f.get(n).map_or(ZERO, |c| c[1]);
    let len = f.len();
    // coefficients of F_n in the eigenbasis; F_n vanishes for n ≥ len
    let coef: Vec<Vector2<Complex64>> = (0..len)
        .map(|n| {
            let big_f = Vector2::new(fb(n), (z * fb(n) + fa(n + 1)) / zc);
            inv * big_f
        })
        .collect();

    let mut grow = vec![ZERO; ncells.max(len) + 1];
    for n in (0..len).rev() {
        grow[n] = (grow[n + 1] - coef[n][1]) / lg;
    }
    let row = |u: &Vector2<Complex64>| -z * u[0] + zc * u[1];
    let cs = row(&us);
    if cs.norm() < 1e-300 {
        return Err(TbError::PoleAtZero);
    }
    let mu = (fa(0) - grow[0] * row(&ug)) / cs;

    let mut out = Vec::with_capacity(ncells);
    let mut dec = mu;
    for n in 0..ncells {
        let g = if n < grow.len() { grow[n] } else { ZERO };
        let psi = us * dec + ug * g;
        out.push([psi[0], psi[1]]);
        let src = if n < len { coef[n][0] } else { ZERO };
        dec = ls * dec + src;
    }
    Ok(out)
}

/// kpar = π: ζ = 0 decouples A_0 from the pairs (B_n, A_{n+1}).
fn resolve_pi(f: &[Cell], z: Complex64, ncells: usize) -> Result<Vec<Cell>, TbError> {
    if z.norm() < 1e-14 {
        return Err(TbError::PoleAtZero);
    }
    let det = 1.0 - z * z;
    if det.norm() < 1e-14 {
        return Err(TbError::EigenvaluePole(z));
    }
    let fa = |n: usize| f.get(n).map_or(ZERO, |c| c[0]);
    let fb = |n: usize| f.get(n).map_or(ZERO, |c| c[1]);
    let mut out = vec![[ZERO; 2]; ncells];
    out[0][0] = -fa(0) / z;
    for n in 0..ncells {
        // -z x + y = fB_n ; x - z y = fA_{n+1}
        let (a, b) = (fb(n), fa(n + 1));
        let x = (b + z * a) / det;
        let y = a + z * x;
        out[n][1] = x;
        if n + 1 < ncells {
            out[n + 1][0] = y;
        }
    }
    Ok(out)
}

/// ⟨ψ^bd, f⟩ against the exact half-line flat-band state.
pub fn solvability_defect(f: &[Cell], window: &SpectralWindow) -> Result<Complex64, TbError> {
    let st = flat_band_state(window, f.len())?;
    Ok(st
        .amplitudes
        .iter()
        .zip(f)
        .map(|(p, q)| p[0].conj() * q[0] + p[1].conj() * q[1])
        .sum())
}

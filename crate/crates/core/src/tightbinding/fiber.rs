use super::{Cell, TbError};
use crate::lattice::SpectralWindow;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Where the finite section of the half line stops.
///
/// `EndOnA` keeps cells 0..N-1 but drops the last B site, giving 2N-1 sites.
/// The resulting chain has odd length, so for |ζ| < 1 its zero mode is exactly
/// the half-line flat-band state cut off at cell N-1, with no partner mode at
/// the far end to hybridize with. `EndOnB` keeps all 2N sites; there the left
/// edge state and a spurious right-end state split by roughly |ζ|^N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Truncation {
    #[default]
    EndOnA,
    EndOnB,
}

pub fn fiber_dim(ncells: usize, truncation: Truncation) -> usize {
    match truncation {
        Truncation::EndOnA => 2 * ncells - 1,
        Truncation::EndOnB => 2 * ncells,
    }
}

#[derive(Debug, Clone)]
pub struct FiberOperator {
    pub window: SpectralWindow,
    pub ncells: usize,
    pub truncation: Truncation,
    /// Basis order (ψ_0^A, ψ_0^B, ψ_1^A, ψ_1^B, ...).
    pub matrix: DMatrix<Complex64>,
}

impl FiberOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Superdiagonal entries H[j, j+1]; the matrix is tridiagonal in this basis.
    pub fn hoppings(&self) -> Vec<Complex64> {
        (0..self.dim() - 1).map(|j| self.matrix[(j, j + 1)]).collect()
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        tridiag_apply(&self.hoppings(), v)
    }
}

pub(crate) fn tridiag_apply(h: &[Complex64], v: &DVector<Complex64>) -> DVector<Complex64> {
    let n = v.len();
    let mut out = DVector::from_element(n, ZERO);
    for j in 0..n.saturating_sub(1) {
        out[j] += h[j] * v[j + 1];
        out[j + 1] += h[j].conj() * v[j];
    }
    out
}

/// A finitely supported sequence of cells starting at cell index `first`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSeq {
    pub first: i64,
    pub cells: Vec<Cell>,
}

impl CellSeq {
    pub fn get(&self, n: i64) -> Cell {
        let i = n - self.first;
        if i < 0 || i as usize >= self.cells.len() {
            [ZERO; 2]
        } else {
            self.cells[i as usize]
        }
    }
}

/// Applies the bulk fiber operator; the support grows by one cell on each side.
pub fn apply_bulk_fiber(psi: &CellSeq, window: &SpectralWindow) -> CellSeq {
    let z = window.zeta;
    let first = psi.first - 1;
    let len = psi.cells.len() + 2;
    let cells = (0..len as i64)
        .map(|i| {
            let n = first + i;
            let a = psi.get(n - 1)[1] + z.conj() * psi.get(n)[1];
            let b = psi.get(n + 1)[0] + z * psi.get(n)[0];
            [a, b]
        })
        .collect();
    CellSeq { first, cells }
}

pub fn build_fiber(window: &SpectralWindow, ncells: usize) -> Result<FiberOperator, TbError> {
    build_fiber_with(window, ncells, Truncation::default())
}

pub fn build_fiber_with(
    window: &SpectralWindow,
    ncells: usize,
    truncation: Truncation,
) -> Result<FiberOperator, TbError> {
    if ncells < 2 {
        return Err(TbError::TooFewCells(ncells));
    }
    let dim = fiber_dim(ncells, truncation);
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for j in 0..dim - 1 {
        // even j: A_n -> B_n carries conj(ζ); odd j: B_n -> A_{n+1} carries 1
        let h = if j % 2 == 0 { window.zeta.conj() } else { ONE };
        m[(j, j + 1)] = h;
        m[(j + 1, j)] = h.conj();
    }
    Ok(FiberOperator {
        window: *window,
        ncells,
        truncation,
        matrix: m,
    })
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Column j is the unit eigenvector for `values[j]`.
    pub vectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn vector(&self, j: usize) -> DVector<Complex64> {
        self.vectors.column(j).into_owned()
    }
}

/// Full eigendecomposition of the truncated operator, eigenvalues ascending.
///
/// The chain is tridiagonal with a zero diagonal. A diagonal unitary gauge
/// makes every hopping real and nonnegative, the real symmetric problem is
/// solved, and the vectors are rotated back.
pub fn spectrum(op: &FiberOperator) -> Result<Spectrum, TbError> {
    let h = op.hoppings();
    let dim = op.dim();
    let mut gauge = vec![ONE; dim];
    for j in 0..dim - 1 {
        let a = h[j].norm();
        gauge[j + 1] = if a > 0.0 { gauge[j] * a / h[j] } else { gauge[j] };
    }
    let mut t = DMatrix::<f64>::zeros(dim, dim);
    for j in 0..dim - 1 {
        t[(j, j + 1)] = h[j].norm();
        t[(j + 1, j)] = h[j].norm();
    }
    let (values, u) = crate::dense::symmetric_eigen(&t)?;
    let vectors = DMatrix::from_fn(dim, dim, |r, c| gauge[r] * u[(r, c)]);
    let norm = h.iter().map(|x| x.norm()).fold(0.0, f64::max) * 2.0;
    let tol = 1e-10 * norm.max(1.0);
    let mut worst: f64 = 0.0;
    for (c, &e) in values.iter().enumerate() {
        let v = vectors.column(c).into_owned();
        let r = tridiag_apply(&h, &v) - v * Complex64::from(e);
        worst = worst.max(r.norm());
    }
    if !(worst <= tol) {
        return Err(TbError::EigenResidual {
            residual: worst,
            tol,
        });
    }
    Ok(Spectrum { values, vectors })
}

/// The closed-form zero-energy state ψ_n = (sqrt(1-|ζ|²)(-ζ)^n, 0).
#[derive(Debug, Clone)]
pub struct EdgeState {
    pub window: SpectralWindow,
    pub amplitudes: Vec<Cell>,
    /// l² norm of the listed amplitudes; below 1 by the tail |ζ|^{2N}.
    pub norm: f64,
}

impl EdgeState {
    /// Amplitudes flattened to a site vector of length `dim` (extra sites are dropped).
    pub fn to_vector(&self, dim: usize) -> DVector<Complex64> {
        DVector::from_fn(dim, |i, _| {
            let c = i / 2;
            if c < self.amplitudes.len() {
                self.amplitudes[c][i % 2]
            } else {
                ZERO
            }
        })
    }

    pub fn residual(&self, op: &FiberOperator) -> f64 {
        op.apply(&self.to_vector(op.dim())).norm()
    }
}

pub fn flat_band_state(window: &SpectralWindow, ncells: usize) -> Result<EdgeState, TbError> {
    let m = window.abs_zeta();
    if m >= 1.0 {
        return Err(TbError::NoEdgeState(m));
    }
    let c0 = Complex64::from((1.0 - m * m).sqrt());
    let mut amp = c0;
    let mut amplitudes = Vec::with_capacity(ncells);
    for _ in 0..ncells {
        amplitudes.push([amp, ZERO]);
        amp *= -window.zeta;
    }
    let norm = amplitudes.iter().map(|c| c[0].norm_sqr()).sum::<f64>().sqrt();
    Ok(EdgeState {
        window: *window,
        amplitudes,
        norm,
    })
}

use crate::lattice::spectral_window;
use crate::tightbinding::{build_fiber_with, fiber_dim, spectrum, TbError, Truncation};
use serde::Serialize;

/// Symmetric Hausdorff distance between two finite sets of reals.
pub fn hausdorff(a: &[f64], b: &[f64]) -> f64 {
    let one_way = |x: &[f64], y: &[f64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumComparison {
    pub kpar: f64,
    pub omegas: Vec<f64>,
    pub tb_values: Vec<f64>,
    pub distance: f64,
}

/// Distance between the lowest scaled energies (as many as the section has
/// sites) and the spectrum of the truncated tight-binding chain.
pub fn scaled_spectrum_compare(
    omegas: &[f64],
    kpar: f64,
    ncells: usize,
    truncation: Truncation,
) -> Result<SpectrumComparison, TbError> {
    let dim = fiber_dim(ncells, truncation);
    let op = build_fiber_with(&spectral_window(kpar), ncells, truncation)?;
    let tb = spectrum(&op)?.values;
    let mut low = omegas.to_vec();
    low.sort_by(f64::total_cmp);
    low.truncate(dim);
    Ok(SpectrumComparison {
        kpar,
        distance: hausdorff(&low, &tb),
        omegas: low,
        tb_values: tb,
    })
}

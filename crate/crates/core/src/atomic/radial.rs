//! Finite-volume discretization of the radial operator
//! -u'' - u'/r + l²u/r² + λ²V(r)u on [0, R] with u(R) = 0.

use super::AtomicWell;
use crate::quadrature::gauss_legendre_on;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    /// Uniform cells on [0, r0] in the base grid.
    pub n_inner: usize,
    /// Ratio between consecutive outer cells.
    pub growth: f64,
    /// Cap on the outer cell width.
    pub h_max: f64,
}

impl Default for RadialOptions {
    fn default() -> Self {
        RadialOptions {
            n_inner: 400,
            growth: 1.02,
            h_max: 0.01,
        }
    }
}

/// Outer radius of the computational disc.
pub fn outer_radius(lambda: f64) -> f64 {
    8.0 * (10.0 / lambda).max(1.0)
}

/// Graded grid: uniform with r0 as a node, then geometric growth up to `h_max`,
/// ending exactly at `rmax`. Each refinement level bisects every cell.
pub fn radial_grid(r0: f64, rmax: f64, opts: &RadialOptions, level: u32) -> Vec<f64> {
    let h = r0 / opts.n_inner as f64;
    let mut r: Vec<f64> = (0..=opts.n_inner).map(|i| i as f64 * h).collect();
    r[opts.n_inner] = r0;
    let mut step = h;
    let mut x = r0;
    loop {
        step = (step * opts.growth).min(opts.h_max);
        if x + 1.5 * step >= rmax {
            r.push(rmax);
            break;
        }
        x += step;
        r.push(x);
    }
    for _ in 0..level {
        let mut fine = Vec::with_capacity(2 * r.len());
        for w in r.windows(2) {
            fine.push(w[0]);
            fine.push(0.5 * (w[0] + w[1]));
        }
        fine.push(*r.last().unwrap());
        r = fine;
    }
    r
}

/// Symmetric tridiagonal matrix W^{-1/2} A W^{-1/2} for one angular channel.
#[derive(Debug, Clone)]
pub struct RadialMatrix {
    /// Nodes carrying unknowns (node 0 is dropped for l > 0, node R always).
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

fn potential_moment(well: &AtomicWell, a: f64, b: f64) -> f64 {
    // ∫_a^b V(r) r dr
    let hi = b.min(well.r0);
    if a >= hi {
        return 0.0;
    }
    match well.shape {
        super::WellShape::DiscWell => -0.5 * (hi * hi - a * a),
        super::WellShape::SmoothBump => {
            let (x, w) = gauss_legendre_on(12, a, hi);
            x.iter().zip(&w).map(|(r, w)| w * well.potential(*r) * r).sum()
        }
    }
}

pub fn assemble(r: &[f64], well: &AtomicWell, lambda: f64, l: u32) -> RadialMatrix {
    let m = r.len() - 1; // node m is the Dirichlet node
    let first = if l == 0 { 0 } else { 1 };
    let l2 = (l * l) as f64;
    let lam2 = lambda * lambda;
    let face_hi = |i: usize| 0.5 * (r[i] + r[i + 1]);
    let face_lo = |i: usize| if i == 0 { 0.0 } else { 0.5 * (r[i - 1] + r[i]) };
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut a_diag = Vec::new();
    let mut a_off = Vec::new();
    for i in first..m {
        let (lo, hi) = (face_lo(i), face_hi(i));
        let w = 0.5 * (hi * hi - lo * lo);
        let mut d = hi / (r[i + 1] - r[i]);
        if i > 0 {
            d += lo / (r[i] - r[i - 1]);
        }
        if l > 0 {
            d += l2 * (hi / lo).ln();
        }
        d += lam2 * potential_moment(well, lo, hi);
        nodes.push(r[i]);
        weights.push(w);
        a_diag.push(d);
        if i + 1 < m {
            a_off.push(-hi / (r[i + 1] - r[i]));
        }
    }
    let diag = a_diag.iter().zip(&weights).map(|(d, w)| d / w).collect();
    let off = a_off
        .iter()
        .enumerate()
        .map(|(i, o)| o / (weights[i] * weights[i + 1]).sqrt())
        .collect();
    RadialMatrix {
        nodes,
        weights,
        diag,
        off,
    }
}

impl RadialMatrix {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below x (Sturm count of the LDLᵀ pivots).
    pub fn count_below(&self, x: f64) -> usize {
        let mut q = self.diag[0] - x;
        let mut c = usize::from(q < 0.0);
        for i in 1..self.len() {
            let qp = if q == 0.0 { f64::MIN_POSITIVE } else { q };
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / qp;
            if q < 0.0 {
                c += 1;
            }
        }
        c
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut s = 0.0;
            if i > 0 {
                s += self.off[i - 1].abs();
            }
            if i + 1 < n {
                s += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - s);
            hi = hi.max(self.diag[i] + s);
        }
        (lo, hi)
    }

    /// The k-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves (T - σ)x = b for σ below the spectrum, where T - σ is an M-matrix
    /// and elimination without pivoting is stable.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut piv = self.diag[0] - sigma;
        y[0] = b[0] / piv;
        for i in 1..n {
            c[i - 1] = self.off[i - 1] / piv;
            piv = self.diag[i] - sigma - self.off[i - 1] * c[i - 1];
            y[i] = (b[i] - self.off[i - 1] * y[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            y[i] -= c[i] * y[i + 1];
        }
        y
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Lowest eigenpair; the vector is unit in the symmetric (W^{1/2}u) variables.
    pub fn ground(&self) -> (f64, Vec<f64>, f64) {
        let e = self.eigenvalue(0);
        let sigma = e - 1e-8 * e.abs().max(1.0);
        let mut v = vec![1.0; self.len()];
        for _ in 0..4 {
            v = self.solve_shifted(sigma, &v);
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= n);
        }
        let hv = self.apply(&v);
        let res = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - e * b).powi(2))
            .sum::<f64>()
            .sqrt();
        (e, v, res)
    }
}

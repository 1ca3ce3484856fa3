//! Oracles shared by the integration tests.
#![allow(dead_code)]

// Power series, adequate for the arguments below (x < 3).
pub fn bessel_j(nu: u32, x: f64) -> f64 {
    let mut term = (x / 2.0).powi(nu as i32) / (1..=nu).map(f64::from).product::<f64>();
    let mut sum = term;
    for m in 1..60 {
        term *= -(x * x / 4.0) / (m as f64 * (m as f64 + nu as f64));
        sum += term;
    }
    sum
}

// K_ν(x) = ∫_0^∞ exp(-x cosh t) cosh(ν t) dt, trapezoid rule (spectrally accurate here).
pub fn bessel_k(nu: u32, x: f64) -> f64 {
    let h = 1e-3;
    let mut sum = 0.5 * (-x).exp();
    let mut t: f64 = h;
    loop {
        let f = (-x * t.cosh()).exp() * (nu as f64 * t).cosh();
        sum += f;
        if f < 1e-300 || t > 40.0 {
            break;
        }
        t += h;
    }
    sum * h
}

pub fn matching(r0: f64, lambda: f64, e: f64) -> f64 {
    let k = (lambda * lambda + e).sqrt();
    let kap = (-e).sqrt();
    // k J0'/J0 - κ K0'/K0 with J0' = -J1, K0' = -K1
    -k * bessel_j(1, k * r0) / bessel_j(0, k * r0) + kap * bessel_k(1, kap * r0) / bessel_k(0, kap * r0)
}

pub fn bessel_root(r0: f64, lambda: f64) -> f64 {
    let j01 = 2.404_825_557_695_773;
    let mut lo = -lambda * lambda + 1e-12;
    let mut hi = ((j01 / r0).powi(2) - lambda * lambda).min(-1e-12) - 1e-9;
    let flo = matching(r0, lambda, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (matching(r0, lambda, mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares line y = a + b x; returns (a, b, R²).
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    (a, b, 1.0 - ss_res / ss_tot)
}

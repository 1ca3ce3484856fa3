//! The acceptance checks behind `zigzag verify`.

use crate::atomic::bessel::disc_well_energy;
use crate::atomic::{
    ground_state, hopping_rho, overlap_integral_with_error, spectral_gap, AtomicWell,
};
use crate::continuum::{run_study, StudyConfig, StudyReport};
use crate::lattice::{make_frame, nearest_neighbor_cells, spectral_window};
use crate::quadrature::linear_fit;
use crate::tightbinding::{
    build_fiber_with, classify, classify_vector, flat_band_state, linspace, resolve, spectrum,
    transfer_system, Cell, EdgeFlag, Regime, Truncation,
};
use crate::zak::{zak_phase, DEFAULT_NPOINTS};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

const SEED: u64 = 20_240_611;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Tb,
    Zak,
    Atomic,
    Continuum,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tb" => Ok(Suite::Tb),
            "zak" => Ok(Suite::Zak),
            "atomic" => Ok(Suite::Atomic),
            "continuum" => Ok(Suite::Continuum),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite '{s}' (tb, zak, atomic, continuum, all)")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

fn timed(
    id: u32,
    name: &'static str,
    budget: f64,
    f: impl FnOnce() -> Result<(bool, String), String>,
) -> CheckResult {
    let t = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    let seconds = t.elapsed().as_secs_f64();
    CheckResult {
        id,
        name,
        passed: passed && seconds <= budget,
        detail,
        seconds,
        budget_seconds: budget,
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// l² distance between the normalized vectors after removing the global phase.
pub fn phase_aligned_error(v: &DVector<Complex64>, reference: &DVector<Complex64>) -> f64 {
    let (v, r) = (v.normalize(), reference.normalize());
    let ip = r.dotc(&v);
    let phase = if ip.norm() > 0.0 { ip / ip.norm() } else { Complex64::new(1.0, 0.0) };
    (v - r * phase).norm()
}

pub fn flat_band_check() -> CheckResult {
    timed(1, "flat-band existence", 30.0, || {
        let n = 200;
        let mut worst: f64 = 0.0;
        for k in linspace(2.0 * PI / 3.0 + 0.05, 4.0 * PI / 3.0 - 0.05, 20) {
            let w = spectral_window(k);
            let op = build_fiber_with(&w, n, Truncation::EndOnA).map_err(err)?;
            let s = spectrum(&op).map_err(err)?;
            let zeros: Vec<usize> = (0..op.dim())
                .filter(|&j| s.values[j].abs() <= 1e-10)
                .filter(|&j| classify_vector(&s.vector(j), n).0 == EdgeFlag::Left)
                .collect();
            if zeros.len() != 1 {
                return Ok((false, format!("kpar = {k}: {} left-edge zero modes", zeros.len())));
            }
            let exact = flat_band_state(&w, n).map_err(err)?.to_vector(op.dim());
            worst = worst.max(phase_aligned_error(&s.vector(zeros[0]), &exact));
        }
        Ok((worst <= 1e-8, format!("max eigenvector error {worst:.2e}")))
    })
}

pub fn pi_spectrum_check() -> CheckResult {
    timed(2, "kpar = pi exact spectrum", 1.0, || {
        let op = build_fiber_with(&spectral_window(PI), 200, Truncation::EndOnA).map_err(err)?;
        let s = spectrum(&op).map_err(err)?;
        let dev = s
            .values
            .iter()
            .map(|e| [-1.0, 0.0, 1.0].iter().map(|t| (e - t).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        let zeros = s.values.iter().filter(|e| e.abs() <= 1e-12).count();
        Ok((dev <= 1e-12 && zeros == 1, format!("max deviation {dev:.2e}, {zeros} zero(s)")))
    })
}

pub fn band_edges_check() -> CheckResult {
    timed(3, "essential-band edges", 60.0, || {
        let n = 400;
        let tol = 5.0 / n as f64;
        let mut detail = Vec::new();
        let mut ok = true;
        for k in [0.3, 1.0, 5.0 * PI / 6.0, 2.6] {
            let w = spectral_window(k);
            let op = build_fiber_with(&w, n, Truncation::EndOnA).map_err(err)?;
            let s = spectrum(&op).map_err(err)?;
            let bulk: Vec<f64> = (0..op.dim())
                .filter(|&j| classify_vector(&s.vector(j), n).0 == EdgeFlag::Bulk)
                .map(|j| s.values[j].abs())
                .collect();
            let lo = bulk.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = bulk.iter().copied().fold(0.0, f64::max);
            let (a, b) = ((lo - w.dgap).abs(), (hi - w.dmax).abs());
            ok &= a <= tol && b <= tol;
            detail.push(format!("kpar {k:.3}: |min-dgap| {a:.1e}, |max-dmax| {b:.1e}"));
        }
        Ok((ok, detail.join("; ")))
    })
}

fn random_kpar(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let k = rng.gen_range(0.0..2.0 * PI);
        if (k - PI).abs() > 1e-3 {
            return k;
        }
    }
}

pub fn transfer_check() -> CheckResult {
    timed(4, "transfer-matrix laws", 1.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let (mut prod, mut quad, mut mismatches) = (0.0f64, 0.0f64, 0);
        let mut count = 0;
        while count < 200 {
            let k = random_kpar(&mut rng);
            let w = spectral_window(k);
            let x = rng.gen_range(-(w.dmax + 1.0)..(w.dmax + 1.0));
            if (x.abs() - w.dgap).abs() < 1e-6 || (x.abs() - w.dmax).abs() < 1e-6 {
                continue;
            }
            count += 1;
            let z = Complex64::new(x, 0.0);
            let ts = transfer_system(z, &w).map_err(err)?;
            prod = prod.max(((ts.lam1 * ts.lam2).norm() - 1.0).abs());
            quad = quad.max(ts.quadratic_residual());
            let (a, b) = (ts.lam1.norm(), ts.lam2.norm());
            let on_circle = (a - 1.0).abs() < 1e-8 && (b - 1.0).abs() < 1e-8;
            let split = a.min(b) < 1.0 - 1e-8 && a.max(b) > 1.0 + 1e-8;
            let expect = classify(z, &w);
            let consistent = match expect {
                Regime::OnBands => on_circle,
                Regime::InsideGap | Regime::AboveBands => split,
            };
            if !consistent || ts.regime != expect {
                mismatches += 1;
            }
        }
        Ok((
            prod <= 1e-12 && quad <= 1e-10 && mismatches == 0,
            format!("max ||l1 l2|-1| {prod:.1e}, max residual {quad:.1e}, {mismatches} regime mismatches"),
        ))
    })
}

/// Dense truncated section of `len` cells (both sublattices).
pub fn dense_section(kpar: f64, len: usize) -> DMatrix<Complex64> {
    build_fiber_with(&spectral_window(kpar), len, Truncation::EndOnB)
        .expect("len >= 2")
        .matrix
}

fn flatten(cells: &[Cell]) -> DVector<Complex64> {
    DVector::from_iterator(cells.len() * 2, cells.iter().flat_map(|c| c.iter().copied()))
}

pub fn resolvent_check() -> CheckResult {
    timed(5, "resolvent oracle", 10.0, || {
        let n = 100;
        let len = 200;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
        let mut worst: f64 = 0.0;
        let mut done = 0;
        while done < 20 {
            let k = random_kpar(&mut rng);
            let w = spectral_window(k);
            let inside = rng.gen_bool(0.5);
            let x = if inside {
                if w.dgap < 0.1 {
                    continue;
                }
                rng.gen_range(-(w.dgap - 0.05)..(w.dgap - 0.05))
            } else {
                rng.gen_range(w.dmax + 0.05..w.dmax + 2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
            };
            let z = Complex64::new(x, rng.gen_range(-0.2..0.2));
            if z.norm() < 0.05 {
                continue;
            }
            let ts = transfer_system(z, &w).map_err(err)?;
            if ts.split().0 .0.norm() > 0.9 {
                continue;
            }
            let f: Vec<Cell> = (0..5)
                .map(|_| {
                    [
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    ]
                })
                .collect();
            let psi = flatten(&resolve(&f, z, &w, n).map_err(err)?);
            let h = dense_section(k, len) - DMatrix::identity(2 * len, 2 * len) * z;
            let mut rhs = DVector::zeros(2 * len);
            rhs.rows_mut(0, 10).copy_from(&flatten(&f));
            let dense = h.lu().solve(&rhs).ok_or("singular section")?;
            let d = dense.rows(0, 2 * n).into_owned();
            worst = worst.max((psi - &d).norm() / d.norm());
            done += 1;
        }
        // z R(z) e1 -> -ψ0 ψ0* e1, first order in z
        let w = spectral_window(5.0 * PI / 6.0);
        let psi0 = flatten(&flat_band_state(&w, n).map_err(err)?.amplitudes);
        let e1 = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]];
        let pole = -&psi0 * psi0[0].conj();
        let errs: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&t| {
                let z = Complex64::new(t, 0.0);
                resolve(&e1, z, &w, n).map(|r| (flatten(&r) * z - &pole).norm())
            })
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let rates: Vec<f64> = errs.windows(2).map(|p| p[0] / p[1]).collect();
        let first_order = rates.iter().all(|r| (5.0..20.0).contains(r));
        Ok((
            worst <= 1e-8 && first_order,
            format!("max relative error {worst:.1e}; pole errors {errs:?}, ratios {rates:.2?}"),
        ))
    })
}

pub fn zak_check() -> CheckResult {
    timed(6, "Zak quantization", 5.0, || {
        let mut agree = 0;
        let mut total = 0;
        let (lo, hi) = (2.0 * PI / 3.0, 4.0 * PI / 3.0);
        for k in linspace(0.0, 2.0 * PI, 400) {
            if (k - lo).abs() < 0.05 || (k - hi).abs() < 0.05 {
                continue;
            }
            let w = spectral_window(k);
            let z = zak_phase(&w, DEFAULT_NPOINTS).map_err(err)?;
            let inside = k > lo && k < hi;
            let has_state = flat_band_state(&w, 50).is_ok();
            total += 1;
            if z.winding == i64::from(inside) && has_state == inside {
                agree += 1;
            }
        }
        Ok((agree == total, format!("{agree}/{total} samples agree")))
    })
}

pub fn atomic_oracle_check() -> CheckResult {
    timed(7, "atomic oracle", 30.0, || {
        let well = AtomicWell::default();
        let mut ok = true;
        let mut detail = Vec::new();
        for lambda in [10.0, 20.0] {
            let gs = ground_state(&well, lambda).map_err(err)?;
            let exact = disc_well_energy(well.r0, lambda).ok_or("no Bessel root")?;
            let rel = ((gs.e0 - exact) / exact).abs();
            let ratio = gs.e0 / (lambda * lambda);
            let gap = spectral_gap(&well, lambda).map_err(err)?;
            ok &= rel <= 1e-6 && ratio <= -0.1 && gap > 0.0;
            detail.push(format!("lambda {lambda}: rel {rel:.1e}, E0/l^2 {ratio:.3}, gap {gap:.2}"));
        }
        Ok((ok, detail.join("; ")))
    })
}

pub fn hopping_check() -> CheckResult {
    timed(8, "hopping decay", 120.0, || {
        let well = AtomicWell::default();
        let frame = make_frame();
        let lambdas = [10.0, 15.0, 20.0, 25.0];
        let mut logs = Vec::new();
        let mut exceptional_ok = true;
        let mut worst_exc: f64 = 0.0;
        let mut ratios = Vec::new();
        for &lambda in &lambdas {
            let gs = ground_state(&well, lambda).map_err(err)?;
            let rho = hopping_rho(&gs, &well);
            logs.push(rho.rho.ln());
            for sigma in [1, -1] {
                for r in nearest_neighbor_cells(&frame, sigma) {
                    for (a, b) in [((sigma, r), (0, [0, 0])), ((0, [0, 0]), (sigma, r))] {
                        let (v, e) = overlap_integral_with_error(&gs, &well, a.0, a.1, b.0, b.1);
                        let dev = (v - rho.rho).abs();
                        worst_exc = worst_exc.max(dev / rho.rho);
                        exceptional_ok &= dev <= e + rho.quadrature_error_estimate + 1e-12 * rho.rho;
                    }
                }
            }
            let (v, _) = overlap_integral_with_error(&gs, &well, 1, [1, 0], 0, [0, 0]);
            ratios.push(v / rho.rho);
        }
        let (_, slope, r2) = linear_fit(&lambdas, &logs);
        let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
        Ok((
            r2 >= 0.999 && slope < 0.0 && exceptional_ok && decreasing,
            format!(
                "R^2 {r2:.5}, slope {slope:.4}, exceptional max rel dev {worst_exc:.1e}, non-exceptional ratios {ratios:.4?}"
            ),
        ))
    })
}

pub fn orbital_check(report: &StudyReport, seconds: f64) -> CheckResult {
    let k = report.config.kpars[0];
    let mut c = timed(9, "orbital lemmas", 600.0, || {
        let g = report.gram_series(k).ok_or("missing sweep point")?;
        let r = report.residual_series(k).ok_or("missing sweep point")?;
        Ok((
            report.orbital_lemmas_hold(k),
            format!("gram off-diagonal {g:.4?}, residual {r:.3?}"),
        ))
    });
    c.seconds = seconds;
    c.passed &= seconds <= c.budget_seconds;
    c
}

pub fn edge_state_check(report: &StudyReport, seconds: f64) -> CheckResult {
    let k = 5.0 * PI / 6.0;
    let mut c = timed(10, "continuum edge state", 1800.0, || {
        let om = report.edge_omega_series(k);
        let ov = report.final_overlap(k);
        let ok = report.single_edge_each(k)
            && report.edge_omega_decreasing(k)
            && ov.is_some_and(|o| o > 0.9)
            && report.no_edge_near_zero(0.3);
        Ok((
            ok,
            format!(
                "|omega| {om:.4?}, overlap at largest lambda {ov:.5?}, no edge at 0.3: {}",
                report.no_edge_near_zero(0.3)
            ),
        ))
    });
    c.seconds = seconds;
    c.passed &= seconds <= c.budget_seconds;
    c
}

pub fn scaled_spectrum_check(report: &StudyReport, seconds: f64) -> CheckResult {
    let mut c = timed(11, "scaled-spectrum convergence", 1800.0, || {
        let a = report.distance_series(5.0 * PI / 6.0);
        let b = report.distance_series(PI);
        let ok = report.distance_decreasing(5.0 * PI / 6.0) && report.distance_decreasing(PI);
        Ok((ok, format!("5pi/6: {a:.4?}; pi: {b:.4?}")))
    });
    c.seconds = seconds;
    c.passed &= seconds <= c.budget_seconds;
    c
}

pub fn continuum_checks(cfg: &StudyConfig) -> Vec<CheckResult> {
    let t = Instant::now();
    match run_study(cfg) {
        Ok(report) => {
            let s = t.elapsed().as_secs_f64();
            vec![
                orbital_check(&report, s),
                edge_state_check(&report, s),
                scaled_spectrum_check(&report, s),
            ]
        }
        Err(e) => [(9, "orbital lemmas"), (10, "continuum edge state"), (11, "scaled-spectrum convergence")]
            .into_iter()
            .map(|(id, name)| CheckResult {
                id,
                name,
                passed: false,
                detail: format!("error: {e}"),
                seconds: t.elapsed().as_secs_f64(),
                budget_seconds: 1800.0,
            })
            .collect(),
    }
}

pub fn run_suite(suite: Suite) -> Vec<CheckResult> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Tb | Suite::All) {
        out.extend([
            flat_band_check(),
            pi_spectrum_check(),
            band_edges_check(),
            transfer_check(),
            resolvent_check(),
        ]);
    }
    if matches!(suite, Suite::Zak | Suite::All) {
        out.push(zak_check());
    }
    if matches!(suite, Suite::Atomic | Suite::All) {
        out.extend([atomic_oracle_check(), hopping_check()]);
    }
    if matches!(suite, Suite::Continuum | Suite::All) {
        out.extend(continuum_checks(&StudyConfig::default()));
    }
    out
}

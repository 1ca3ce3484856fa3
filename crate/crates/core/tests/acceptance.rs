//! The acceptance criteria, run in order with one PASS/FAIL line each.
//!
//! Timing budgets are wall-clock, so everything runs on one test thread.

mod common;

use common::{bessel_root, fit_line};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;
use zigzag_edge::atomic::{ground_state, hopping_rho, overlap_integral_with_error, spectral_gap, AtomicWell};
use zigzag_edge::continuum::{run_study, StudyConfig, StudyReport};
use zigzag_edge::lattice::{make_frame, nearest_neighbor_cells, spectral_window};
use zigzag_edge::tightbinding::{
    build_fiber_with, classify_vector, flat_band_state, resolve, spectrum, transfer_system, Cell, EdgeFlag,
    Regime, Truncation,
};
use zigzag_edge::zak::zak_phase;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

struct Outcome {
    passed: bool,
    detail: String,
}

fn zeta(k: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, k)
}

// gap edges from |ζ| directly
fn window_edges(k: f64) -> (f64, f64) {
    let a = zeta(k).norm();
    ((1.0 - a).abs(), 1.0 + a)
}

// Chain A_0 B_0 A_1 B_1 ... with <A_n|H|B_n> = conj(ζ), <B_n|H|A_{n+1}> = 1.
fn dense_chain(k: f64, sites: usize) -> DMatrix<Complex64> {
    let z = zeta(k);
    let mut m = DMatrix::from_element(sites, sites, ZERO);
    for j in 0..sites - 1 {
        let t = if j % 2 == 0 { z.conj() } else { Complex64::new(1.0, 0.0) };
        m[(j, j + 1)] = t;
        m[(j + 1, j)] = t.conj();
    }
    m
}

// ψ_n = sqrt(1 - |ζ|²) (-ζ)^n on A, zero on B, over `sites` chain sites.
fn closed_form_edge(k: f64, sites: usize) -> DVector<Complex64> {
    let z = zeta(k);
    let c = (1.0 - z.norm_sqr()).sqrt();
    DVector::from_fn(sites, |i, _| if i % 2 == 0 { (-z).powu((i / 2) as u32) * c } else { ZERO })
}

fn aligned_error(v: &DVector<Complex64>, u: &DVector<Complex64>) -> f64 {
    let (v, u) = (v.normalize(), u.normalize());
    let ip = u.dotc(&v);
    (v - u * (ip / ip.norm())).norm()
}

fn flat_band() -> Outcome {
    let n = 200;
    let (a, b) = (2.0 * PI / 3.0 + 0.05, 4.0 * PI / 3.0 - 0.05);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let k = a + (b - a) * i as f64 / 19.0;
        let op = build_fiber_with(&spectral_window(k), n, Truncation::EndOnA).unwrap();
        let s = spectrum(&op).unwrap();
        let hits: Vec<usize> = (0..op.dim())
            .filter(|&j| s.values[j].abs() <= 1e-10 && classify_vector(&s.vector(j), n).0 == EdgeFlag::Left)
            .collect();
        if hits.len() != 1 {
            return Outcome { passed: false, detail: format!("kpar {k:.4}: {} left-edge zero modes", hits.len()) };
        }
        worst = worst.max(aligned_error(&s.vector(hits[0]), &closed_form_edge(k, op.dim())));
    }
    Outcome { passed: worst <= 1e-8, detail: format!("max relative l2 error {worst:.2e}") }
}

fn pi_spectrum() -> Outcome {
    let op = build_fiber_with(&spectral_window(PI), 200, Truncation::EndOnA).unwrap();
    let s = spectrum(&op).unwrap();
    let dev = s
        .values
        .iter()
        .map(|e| [-1.0, 0.0, 1.0].iter().map(|t| (e - t).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let zeros = s.values.iter().filter(|e| e.abs() <= 1e-12).count();
    Outcome { passed: dev <= 1e-12 && zeros == 1, detail: format!("max deviation {dev:.1e}, {zeros} zero eigenvalue(s)") }
}

fn band_edges() -> Outcome {
    let n = 400;
    let tol = 5.0 / n as f64;
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for k in [0.3, 1.0, 5.0 * PI / 6.0, 2.6] {
        let op = build_fiber_with(&spectral_window(k), n, Truncation::EndOnA).unwrap();
        let s = spectrum(&op).unwrap();
        let mags: Vec<f64> = (0..op.dim())
            .filter(|&j| classify_vector(&s.vector(j), n).0 == EdgeFlag::Bulk)
            .map(|j| s.values[j].abs())
            .collect();
        let (dgap, dmax) = window_edges(k);
        let lo = mags.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = mags.iter().copied().fold(0.0, f64::max);
        worst = worst.max((lo - dgap).abs()).max((hi - dmax).abs());
        ok &= (lo - dgap).abs() <= tol && (hi - dmax).abs() <= tol;
    }
    Outcome { passed: ok, detail: format!("max edge mismatch {worst:.1e} (tolerance {tol:.1e})") }
}

fn transfer_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut prod, mut quad, mut bad) = (0.0f64, 0.0f64, 0);
    let mut done = 0;
    while done < 200 {
        let k = rng.gen_range(0.0..2.0 * PI);
        let (dgap, dmax) = window_edges(k);
        let x = rng.gen_range(-(dmax + 1.0)..dmax + 1.0);
        if (k - PI).abs() < 1e-3 || (x.abs() - dgap).abs() < 1e-6 || (x.abs() - dmax).abs() < 1e-6 {
            continue;
        }
        done += 1;
        let z = Complex64::new(x, 0.0);
        let zt = zeta(k);
        let ts = transfer_system(z, &spectral_window(k)).unwrap();
        prod = prod.max(((ts.lam1 * ts.lam2).norm() - 1.0).abs());
        for l in [ts.lam1, ts.lam2] {
            quad = quad.max((zt.conj() * l * l + (1.0 + zt.norm_sqr() - z * z) * l + zt).norm());
        }
        let want = if x.abs() < dgap {
            Regime::InsideGap
        } else if x.abs() > dmax {
            Regime::AboveBands
        } else {
            Regime::OnBands
        };
        let (a, b) = (ts.lam1.norm(), ts.lam2.norm());
        let roots_ok = match want {
            Regime::OnBands => (a - 1.0).abs() < 1e-8 && (b - 1.0).abs() < 1e-8,
            _ => a.min(b) < 1.0 && a.max(b) > 1.0,
        };
        if ts.regime != want || !roots_ok {
            bad += 1;
        }
    }
    Outcome {
        passed: prod <= 1e-12 && quad <= 1e-10 && bad == 0,
        detail: format!("||l1 l2| - 1| {prod:.1e}, residual {quad:.1e}, {bad} regime mismatches"),
    }
}

fn flat(cells: &[Cell]) -> DVector<Complex64> {
    DVector::from_iterator(2 * cells.len(), cells.iter().flat_map(|c| c.iter().copied()))
}

fn resolvent_oracle() -> Outcome {
    let (n, len) = (100, 200);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 20 {
        let k = rng.gen_range(0.0..2.0 * PI);
        let (dgap, dmax) = window_edges(k);
        if (k - PI).abs() < 1e-3 {
            continue;
        }
        let x = if rng.gen_bool(0.5) {
            if dgap < 0.1 {
                continue;
            }
            rng.gen_range(-(dgap - 0.05)..dgap - 0.05)
        } else {
            rng.gen_range(dmax + 0.05..dmax + 2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
        };
        let z = Complex64::new(x, rng.gen_range(-0.2..0.2));
        let w = spectral_window(k);
        // the dense section must be long enough for the decaying root to die out
        if z.norm() < 0.05 || transfer_system(z, &w).unwrap().split().0 .0.norm() > 0.9 {
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
        let got = flat(&resolve(&f, z, &w, n).unwrap());
        let mut rhs = DVector::zeros(2 * len);
        rhs.rows_mut(0, 10).copy_from(&flat(&f));
        let m = dense_chain(k, 2 * len) - DMatrix::identity(2 * len, 2 * len) * z;
        let want = m.lu().solve(&rhs).unwrap().rows(0, 2 * n).into_owned();
        worst = worst.max((got - &want).norm() / want.norm());
        done += 1;
    }
    // z R(z) e1 → -ψ0 ψ0* e1 at first order in z
    let k = 5.0 * PI / 6.0;
    let psi0 = closed_form_edge(k, 2 * n);
    let pole = -&psi0 * psi0[0].conj();
    let e1 = [[Complex64::new(1.0, 0.0), ZERO]];
    let errs: Vec<f64> = [0.1, 0.01, 0.001]
        .iter()
        .map(|&t| {
            let z = Complex64::new(t, 0.0);
            (flat(&resolve(&e1, z, &spectral_window(k), n).unwrap()) * z - &pole).norm()
        })
        .collect();
    let rates: Vec<f64> = errs.windows(2).map(|p| p[0] / p[1]).collect();
    let first_order = rates.iter().all(|r| (5.0..20.0).contains(r));
    Outcome {
        passed: worst <= 1e-8 && first_order,
        detail: format!("max relative error {worst:.1e}; pole error ratios {:.2}, {:.2}", rates[0], rates[1]),
    }
}

fn zak() -> Outcome {
    let (lo, hi) = (2.0 * PI / 3.0, 4.0 * PI / 3.0);
    let (mut agree, mut total) = (0, 0);
    for i in 0..400 {
        let k = 2.0 * PI * i as f64 / 399.0;
        if (k - lo).abs() < 0.05 || (k - hi).abs() < 0.05 {
            continue;
        }
        let w = spectral_window(k);
        let inside = k > lo && k < hi;
        let z = zak_phase(&w, 512).unwrap();
        total += 1;
        if z.winding == i64::from(inside) && flat_band_state(&w, 50).is_ok() == inside {
            agree += 1;
        }
    }
    Outcome { passed: agree == total, detail: format!("{agree}/{total} samples agree") }
}

fn atomic_oracle() -> Outcome {
    let well = AtomicWell::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for lambda in [10.0, 20.0] {
        let gs = ground_state(&well, lambda).unwrap();
        let exact = bessel_root(well.r0, lambda);
        let rel = ((gs.e0 - exact) / exact).abs();
        let gap = spectral_gap(&well, lambda).unwrap();
        ok &= rel <= 1e-6 && gs.e0 / (lambda * lambda) <= -0.1 && gap > 0.0;
        parts.push(format!("lambda {lambda}: rel {rel:.1e}, E0/l^2 {:.3}, gap {gap:.1}", gs.e0 / (lambda * lambda)));
    }
    Outcome { passed: ok, detail: parts.join("; ") }
}

fn hopping_decay() -> Outcome {
    let well = AtomicWell::default();
    let frame = make_frame();
    let lambdas = [10.0, 15.0, 20.0, 25.0];
    let (mut logs, mut ratios) = (Vec::new(), Vec::new());
    let mut exceptional = true;
    for &lambda in &lambdas {
        let gs = ground_state(&well, lambda).unwrap();
        let rho = hopping_rho(&gs, &well);
        logs.push(rho.rho.ln());
        for sigma in [1, -1] {
            for r in nearest_neighbor_cells(&frame, sigma) {
                for (a, b) in [((sigma, r), (0, [0, 0])), ((0, [0, 0]), (sigma, r))] {
                    let (v, err) = overlap_integral_with_error(&gs, &well, a.0, a.1, b.0, b.1);
                    exceptional &= (v - rho.rho).abs() <= err + rho.quadrature_error_estimate + 1e-12 * rho.rho;
                }
            }
        }
        let (v, _) = overlap_integral_with_error(&gs, &well, 1, [1, 0], 0, [0, 0]);
        ratios.push(v / rho.rho);
    }
    let (_, slope, r2) = fit_line(&lambdas, &logs);
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    Outcome {
        passed: r2 >= 0.999 && slope < 0.0 && exceptional && decreasing,
        detail: format!(
            "R^2 {r2:.5} (need 0.999), slope {slope:.4}, exceptional overlaps {}, non-exceptional ratio decreasing {decreasing}",
            if exceptional { "match" } else { "differ" }
        ),
    }
}

fn orbital_lemmas(r: &StudyReport) -> Outcome {
    let k = 5.0 * PI / 6.0;
    Outcome {
        passed: r.orbital_lemmas_hold(k),
        detail: format!("gram off-diagonal {:.4?}, residual {:.3?}", r.gram_series(k).unwrap_or_default(), r.residual_series(k).unwrap_or_default()),
    }
}

fn edge_state(r: &StudyReport) -> Outcome {
    let k = 5.0 * PI / 6.0;
    let overlap = r.final_overlap(k);
    Outcome {
        passed: r.single_edge_each(k)
            && r.edge_omega_decreasing(k)
            && overlap.is_some_and(|o| o > 0.9)
            && r.no_edge_near_zero(0.3),
        detail: format!(
            "single edge each {}, |omega| {:.4?}, overlap {:.5}, none at kpar 0.3 {}",
            r.single_edge_each(k),
            r.edge_omega_series(k).unwrap_or_default(),
            overlap.unwrap_or(f64::NAN),
            r.no_edge_near_zero(0.3)
        ),
    }
}

fn scaled_spectrum(r: &StudyReport) -> Outcome {
    let (a, b) = (5.0 * PI / 6.0, PI);
    Outcome {
        passed: r.distance_decreasing(a) && r.distance_decreasing(b),
        detail: format!("5pi/6 {:.4?}; pi {:.4?}", r.distance_series(a).unwrap_or_default(), r.distance_series(b).unwrap_or_default()),
    }
}

fn report(id: u32, name: &str, budget: f64, seconds: f64, o: &Outcome) -> bool {
    let passed = o.passed && seconds <= budget;
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "{} criterion {id:2}: {name} ({seconds:.1} s of {budget:.0} s) {}",
        if passed { "PASS" } else { "FAIL" },
        o.detail
    );
    passed
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, f64) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed().as_secs_f64())
}

#[test]
fn acceptance_criteria() {
    let fast: [(u32, &str, f64, fn() -> Outcome); 8] = [
        (1, "flat-band existence", 30.0, flat_band),
        (2, "kpar = pi exact spectrum", 1.0, pi_spectrum),
        (3, "essential-band edges", 60.0, band_edges),
        (4, "transfer-matrix laws", 1.0, transfer_laws),
        (5, "resolvent oracle", 10.0, resolvent_oracle),
        (6, "Zak quantization and bulk-edge correspondence", 5.0, zak),
        (7, "atomic oracle", 30.0, atomic_oracle),
        (8, "hopping decay", 120.0, hopping_decay),
    ];
    let mut failed = Vec::new();
    for (id, name, budget, f) in fast {
        let (o, s) = timed(f);
        if !report(id, name, budget, s, &o) {
            failed.push(id);
        }
    }
    let t = Instant::now();
    let study = run_study(&StudyConfig::default()).expect("continuum study");
    let s = t.elapsed().as_secs_f64();
    // 9 is budgeted alone; 10 and 11 share one budget
    for (id, name, budget, o) in [
        (9, "orbital lemmas", 600.0, orbital_lemmas(&study)),
        (10, "continuum edge state", 1800.0, edge_state(&study)),
        (11, "scaled-spectrum convergence", 1800.0, scaled_spectrum(&study)),
    ] {
        if !report(id, name, budget, s, &o) {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

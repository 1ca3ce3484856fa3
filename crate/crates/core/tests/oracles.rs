mod common;

use common::{bessel_j, bessel_k, bessel_root};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::process::Command;
use zigzag_edge::atomic::radial::RadialOptions;
use zigzag_edge::atomic::{
    ground_state, hopping_rho, overlap_integral_with_error, radial_eigenvalue, AtomicWell, WellShape,
};
use zigzag_edge::lattice::{make_frame, nearest_neighbor_cells, spectral_window};
use zigzag_edge::tightbinding::{
    band_row, build_fiber_with, flat_band_state, resolve, spectrum, EdgeFlag, Truncation,
};

#[test]
fn ground_energy_matches_bessel_root() {
    let well = AtomicWell::default();
    for lambda in [10.0, 20.0] {
        let exact = bessel_root(well.r0, lambda);
        let gs = ground_state(&well, lambda).unwrap();
        assert!(((gs.e0 - exact) / exact).abs() < 1e-6, "lambda {lambda}: {} vs {exact}", gs.e0);
        assert!(gs.residual <= 1e-8 * gs.e0.abs());
    }
}

// ρ for the disc well from the closed-form ground state, with a composite
// Simpson rule in polar coordinates over the disc.
fn rho_oracle(r0: f64, lambda: f64) -> f64 {
    let e = bessel_root(r0, lambda);
    let (k, kap) = ((lambda * lambda + e).sqrt(), (-e).sqrt());
    let b = bessel_j(0, k * r0) / bessel_k(0, kap * r0);
    let p = |r: f64| if r < r0 { bessel_j(0, k * r) } else { b * bessel_k(0, kap * r) };
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, c: f64, n: usize| {
        let h = (c - a) / n as f64;
        (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * f(a + i as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0
    };
    let inner = simpson(&|r| 2.0 * PI * r * p(r) * p(r), 0.0, r0, 400);
    let outer = simpson(&|r| 2.0 * PI * r * p(r) * p(r), r0, r0 + 40.0 / kap, 4000);
    let c2 = 1.0 / (inner + outer);
    let d = make_frame().e().norm();
    let ring = |r: f64| {
        simpson(&|t: f64| p((r * r + d * d - 2.0 * r * d * t.cos()).sqrt()), 0.0, 2.0 * PI, 256)
    };
    lambda * lambda * c2 * simpson(&|r| r * p(r) * ring(r), 0.0, r0, 200)
}

#[test]
fn hopping_matches_closed_form_integral() {
    let well = AtomicWell::default();
    for lambda in [10.0, 20.0] {
        let gs = ground_state(&well, lambda).unwrap();
        let h = hopping_rho(&gs, &well);
        let want = rho_oracle(well.r0, lambda);
        assert!(((h.rho - want) / want).abs() < 1e-5, "lambda {lambda}: {} vs {want}", h.rho);
        assert!(h.quadrature_error_estimate < 1e-3 * h.rho);
    }
}

#[test]
fn exceptional_overlaps_equal_rho() {
    let well = AtomicWell::default();
    let frame = make_frame();
    let mut ratios = Vec::new();
    for lambda in [10.0, 15.0, 20.0, 25.0] {
        let gs = ground_state(&well, lambda).unwrap();
        let rho = hopping_rho(&gs, &well);
        let mut count = 0;
        for sigma in [1, -1] {
            for r in nearest_neighbor_cells(&frame, sigma) {
                for (a, b) in [((sigma, r), (0, [0, 0])), ((0, [0, 0]), (sigma, r))] {
                    let (v, err) = overlap_integral_with_error(&gs, &well, a.0, a.1, b.0, b.1);
                    assert!((v - rho.rho).abs() <= err + rho.quadrature_error_estimate + 1e-12 * rho.rho);
                    count += 1;
                }
            }
        }
        assert_eq!(count, 12);
        let (v, _) = overlap_integral_with_error(&gs, &well, 1, [1, 0], 0, [0, 0]);
        ratios.push(v / rho.rho);
    }
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
}

#[test]
fn radial_refinement_is_second_order() {
    let opts = RadialOptions::default();
    for (shape, lambda) in [(WellShape::DiscWell, 10.0), (WellShape::DiscWell, 20.0), (WellShape::SmoothBump, 15.0)] {
        let well = AtomicWell::new(shape, 0.18).unwrap();
        let e: Vec<f64> = (0..3).map(|l| radial_eigenvalue(&well, lambda, 0, 0, &opts, l)).collect();
        let ratio = (e[0] - e[1]).abs() / (e[1] - e[2]).abs();
        assert!((3.0..=4.2).contains(&ratio), "{shape:?} lambda {lambda}: ratio {ratio}");
    }
}

#[test]
fn profile_decays_at_bound_state_rate() {
    let well = AtomicWell::default();
    for lambda in [10.0, 20.0] {
        let gs = ground_state(&well, lambda).unwrap();
        let kappa = (-gs.e0).sqrt();
        // K0 asymptotics add a -1/(2r) correction to the log-slope
        assert!(gs.decay_rate > 0.9 * kappa && gs.decay_rate < 1.2 * kappa, "lambda {lambda}");
        assert!(gs.decay_rate / lambda > 0.4);
    }
}

#[test]
fn edge_amplitude_at_five_sixths_pi() {
    let s = flat_band_state(&spectral_window(5.0 * PI / 6.0), 10).unwrap();
    assert!((s.amplitudes[0][0].norm() - (3f64.sqrt() - 1.0).sqrt()).abs() < 1e-14);
    assert!((s.amplitudes[0][0].norm() - 0.8556).abs() < 1e-4);
}

#[test]
fn split_pair_decays_like_zeta_power() {
    let w = spectral_window(5.0 * PI / 6.0);
    let ns = [10usize, 15, 20, 25];
    let logs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let s = spectrum(&build_fiber_with(&w, n, Truncation::EndOnB).unwrap()).unwrap();
            s.values.iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min).ln()
        })
        .collect();
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, logs.iter().sum::<f64>() / 4.0);
    let slope = xs.iter().zip(&logs).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let want = w.abs_zeta().ln();
    assert!((slope - want).abs() <= 0.1 * want.abs(), "slope {slope} vs {want}");
}

#[test]
fn bulk_band_fills_window() {
    let n = 200;
    let w = spectral_window(0.3);
    let row = band_row(0.3, n, Truncation::EndOnA).unwrap();
    let mut mags: Vec<f64> = row
        .eigenvalues
        .iter()
        .zip(&row.flags)
        .filter(|(_, f)| **f == EdgeFlag::Bulk)
        .map(|(e, _)| e.abs())
        .collect();
    mags.sort_by(f64::total_cmp);
    assert!(mags[0] - w.dgap < 10.0 / n as f64);
    assert!(w.dmax - mags[mags.len() - 1] < 10.0 / n as f64);
    let gap = mags.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max);
    assert!(gap < 10.0 / n as f64);
}

#[test]
fn resolve_matches_dense_section() {
    let (n, len) = (100, 300);
    let k = 5.0 * PI / 6.0;
    let w = spectral_window(k);
    let z = Complex64::new(0.2, 0.0);
    let f: Vec<[Complex64; 2]> = (0..4)
        .map(|i| {
            let t = i as f64;
            [Complex64::new(t.sin(), 0.3 * t), Complex64::new(0.5 - t.cos(), -0.2)]
        })
        .collect();
    let psi = resolve(&f, z, &w, n).unwrap();
    let h = build_fiber_with(&w, len, Truncation::EndOnB).unwrap().matrix - DMatrix::identity(2 * len, 2 * len) * z;
    let mut rhs = DVector::zeros(2 * len);
    for (i, c) in f.iter().enumerate() {
        rhs[2 * i] = c[0];
        rhs[2 * i + 1] = c[1];
    }
    let dense = h.lu().solve(&rhs).unwrap();
    let got = DVector::from_iterator(2 * n, psi.iter().flat_map(|c| c.iter().copied()));
    let want = dense.rows(0, 2 * n).into_owned();
    assert!((got - &want).norm() <= 1e-8 * want.norm());
}

fn zigzag(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_zigzag")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn bands_output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("zz-bands-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for p in [&a, &b] {
        let (code, _) = zigzag(&["bands", "--kpar-steps", "13", "--ncells", "30", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("# zigzag bands"));
    assert!(text.contains("# ncells = 30"));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 13 * 59);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bands_at_pi_to_stdout() {
    let (code, text) = zigzag(&["bands", "--kpar-min", "pi", "--kpar-max", "pi", "--kpar-steps", "1", "--ncells", "50"]);
    assert_eq!(code, 0);
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let e: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!([-1.0, 0.0, 1.0].iter().any(|t| (e - t).abs() < 1e-10));
    }
}

#[test]
fn zak_command_windings() {
    let (code, text) = zigzag(&["zak", "--kpar-steps", "60"]);
    assert_eq!(code, 0);
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let k: f64 = cols[0].parse().unwrap();
        let wind: i64 = cols[2].parse().unwrap();
        let inside = k > 2.0 * PI / 3.0 && k < 4.0 * PI / 3.0;
        assert_eq!(wind, i64::from(inside), "kpar {k}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(zigzag(&["bands", "--kpar-steps", "1"]).0, 1);
    assert_eq!(zigzag(&["bands", "--ncells", "x"]).0, 1);
    assert_eq!(zigzag(&["edge-state", "--kpar", "0.3"]).0, 2);
    assert_eq!(zigzag(&["bands", "--manifest", "/nonexistent/run.txt"]).0, 3);
    assert_eq!(zigzag(&["bands", "--kpar-steps", "2", "--ncells", "3", "--out", "/nonexistent/dir/x.csv"]).0, 3);
}

#[test]
fn manifest_drives_atomic_command() {
    let path = std::env::temp_dir().join(format!("zz-atomic-{}.txt", std::process::id()));
    std::fs::write(&path, "# atomic run\nlambda = 10, 20\nshape = disc\nr0 = 0.18\n").unwrap();
    let (code, text) = zigzag(&["atomic", "--lambda", "5", "--manifest", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[1]["lambda"], 20.0);
    assert!(recs[1]["e0_over_lambda2"].as_f64().unwrap() <= -0.1);
}

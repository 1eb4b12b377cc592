mod common;

use common::cat_circuit;
use kerrline::dynamics::experiments::{
    cat_state, kerr_schedule, simulate_blockade, simulate_cat, BlockadeFrame, BlockadeParams, CatParams,
};
use kerrline::dynamics::fock::coherent_amplitudes;
use kerrline::dynamics::{coherent_state, symmetric_axis, wigner, DensityMatrix, FockSpace};
use kerrline::nonlinear::{flux_sweep, SweepSettings};
use kerrline::Error;
use num_complex::Complex64;
use std::f64::consts::PI;

const MHZ: f64 = 2.0 * PI * 1e6;

#[test]
fn coherent_state_moments() {
    let vac = coherent_state(Complex64::new(0.0, 0.0), 10).unwrap();
    assert_eq!(vac.mean_photon_number(), 0.0);

    let rho = coherent_state(Complex64::new(2.0, 0.0), 40).unwrap();
    assert!((rho.mean_photon_number() - 4.0).abs() < 1e-9);

    let alpha = Complex64::new(1.0, 1.0);
    let space = FockSpace::new(40).unwrap();
    let rho = coherent_state(alpha, 40).unwrap();
    // ⟨a⟩ from the Poisson amplitudes c_n = e^{-|α|²/2} αⁿ/√n!
    let mut c = vec![Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0)];
    for n in 1..40 {
        let prev = c[n - 1];
        c.push(prev * alpha / (n as f64).sqrt());
    }
    let direct: Complex64 = (1..40).map(|n| c[n - 1].conj() * c[n] * (n as f64).sqrt()).sum();
    let mean = rho.expectation(space.annihilation());
    assert!((mean - alpha).norm() < 1e-8);
    assert!((mean - direct).norm() < 1e-8);
    rho.check().unwrap();

    assert!(matches!(
        coherent_state(Complex64::new(3.0, 0.0), 20),
        Err(Error::TruncationTooSmall { .. })
    ));
}

fn strong(t_end: f64, dt: Option<f64>) -> BlockadeParams {
    BlockadeParams {
        frequency: 2.0 * PI * 4.6e9,
        kerr: 20.0 * MHZ,
        decay: 0.1 * MHZ,
        drive: 2.0 * MHZ,
        t_end,
        samples: 200,
        fock: 15,
        frame: BlockadeFrame::Rotating,
        dt,
    }
}

#[test]
fn blockade_step_halving() {
    let a = simulate_blockade(&strong(200e-9, None)).unwrap();
    let b = simulate_blockade(&strong(200e-9, Some(a.dt / 2.0))).unwrap();
    let (na, nb) = (a.trajectory.mean_photon.last().unwrap(), b.trajectory.mean_photon.last().unwrap());
    assert!((na - nb).abs() / nb < 1e-7, "{na} vs {nb}");
    assert!(a.trajectory.max_trace_drift < 1e-6);
    assert!(a.trajectory.max_hermiticity_error < 1e-10);
}

#[test]
fn blockade_is_bounded() {
    // K/κ = 150, ε = K/20
    let mut p = strong(600e-9, None);
    p.decay = p.kerr / 150.0;
    p.drive = p.kerr / 20.0;
    let r = simulate_blockade(&p).unwrap();
    assert!(r.max_photon_number() < 1.2);
    let p1_max = r.trajectory.p1.iter().copied().fold(0.0, f64::max);
    assert!(p1_max > 0.8);
}

#[test]
fn lab_and_rotating_frames_agree() {
    let mut p = BlockadeParams {
        frequency: 2.0 * PI * 50e6,
        kerr: 5.0 * MHZ,
        decay: 0.5 * MHZ,
        drive: 1.0 * MHZ,
        t_end: 300e-9,
        samples: 30,
        fock: 8,
        frame: BlockadeFrame::Rotating,
        dt: None,
    };
    let rot = simulate_blockade(&p).unwrap();
    p.frame = BlockadeFrame::Lab;
    let lab = simulate_blockade(&p).unwrap();
    for (a, b) in rot.trajectory.mean_photon.iter().zip(&lab.trajectory.mean_photon) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

fn cat_params(alpha: f64, fock: usize) -> CatParams {
    CatParams {
        alpha,
        fock,
        flux_start: 0.3,
        flux_peak: 0.5,
        ramp: 5e-9,
        phase_target: PI,
        constant_decay: false,
        decay_scale: 1.0,
        samples: 20,
        dt: None,
    }
}

#[test]
fn cat_is_robust_to_truncation() {
    let fluxes: Vec<f64> = (0..=20).map(|i| 0.3 + 0.01 * i as f64).collect();
    let settings = SweepSettings {
        modes: 4,
        flux_rf: 0.0,
        drive_frequency: 0.0,
    };
    let schedule = kerr_schedule(&flux_sweep(&cat_circuit(), &fluxes, &settings).unwrap(), 1).unwrap();
    let a = simulate_cat(&schedule, &cat_params(2.0, 40)).unwrap();
    let b = simulate_cat(&schedule, &cat_params(2.0, 50)).unwrap();
    assert!((a.fidelity - b.fidelity).abs() < 1e-3);
    assert!((a.accumulated_phase - PI).abs() < 1e-4);
    assert!(a.trajectory.max_trace_drift < 1e-6);
    assert!(a.trajectory.max_hermiticity_error < 1e-10);

    let mut lossless = cat_params(2.0, 40);
    lossless.decay_scale = 0.0;
    let c = simulate_cat(&schedule, &lossless).unwrap();
    assert!(c.fidelity > 1.0 - 1e-4);
    assert!(c.trajectory.purity.iter().all(|p| (p - 1.0).abs() < 1e-8));
}

#[test]
fn cat_wigner_has_fringes() {
    let rho = DensityMatrix::pure(&cat_state(Complex64::new(2.0, 0.0), 40));
    let xs = symmetric_axis(5.0, 101);
    let ps = symmetric_axis(5.0, 101);
    let w = wigner(&rho, &xs, &ps);
    assert!(w.min() < 0.0);
    assert!((w.integral() - 1.0).abs() < 0.01);
    // lobes sit on the p axis at ±√2·2; fringes run along x at p = 0
    let ip = 50;
    let signs: Vec<bool> = (0..xs.len())
        .filter(|&ix| xs[ix].abs() < 2.0)
        .map(|ix| w.at(ix, ip) > 0.0)
        .collect();
    let flips = signs.windows(2).filter(|s| s[0] != s[1]).count();
    assert!(flips >= 2, "sign changes along x: {flips}");

    let coherent = DensityMatrix::pure(&coherent_amplitudes(Complex64::new(1.0, -0.5), 30));
    let w = wigner(&coherent, &xs, &ps);
    let (ix, ip) = (0..xs.len())
        .flat_map(|i| (0..ps.len()).map(move |j| (i, j)))
        .max_by(|a, b| w.at(a.0, a.1).total_cmp(&w.at(b.0, b.1)))
        .unwrap();
    assert!((xs[ix] - 2f64.sqrt()).abs() < 0.06);
    assert!((ps[ip] + 0.5 * 2f64.sqrt()).abs() < 0.06);
}

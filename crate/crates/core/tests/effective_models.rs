mod common;

use common::{circuit, line, ports, rel, HALF_LENGTH};
use kerrline::circuit::{effective_josephson_energy, CircuitSpec, JunctionSpec};
use kerrline::effective::{
    avoided_crossing, current_biased_coupling, current_biased_ratio, end_coupled_model, end_coupled_ratio,
    inline_transmon_spectrum, length_sweep, InlineTransmonModel,
};
use kerrline::modes::{find_bare_modes, find_modes, mode_properties};
use kerrline::nonlinear::nonlinear_couplings;
use std::f64::consts::PI;

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix
/// (diag, off), by the Sturm sequence.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let q_prev = if q == 0.0 { f64::EPSILON } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / q_prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// k-th eigenvalue of 4E_C(n − n_g)² − (E_J/2)(|n⟩⟨n+1| + h.c.) on 41 charge states.
fn charge_oracle(ec: f64, ej: f64, k: usize) -> f64 {
    let diag: Vec<f64> = (-20..=20).map(|n| 4.0 * ec * (n * n) as f64).collect();
    let off = vec![-0.5 * ej; 40];
    let (mut lo, mut hi) = (-ej - 1.0, diag[0] + ej + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(&diag, &off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn transmon_matches_charge_oracle() {
    let ec = 250e6;
    let model = InlineTransmonModel::new(ec, 0.0, 50.0 * ec).unwrap();
    let s = inline_transmon_spectrum(&model, 41).unwrap();
    assert_eq!(s.basis, "charge");
    for k in 0..4 {
        let want = charge_oracle(ec, 50.0 * ec, k);
        assert!((s.levels[k] - want).abs() < 1e-6 * want.abs().max(ec));
    }
}

#[test]
fn harmonic_limit_and_anharmonicity() {
    let ladder = inline_transmon_spectrum(&InlineTransmonModel::new(200e6, 5e9, 0.0).unwrap(), 101).unwrap();
    assert!(rel(ladder.transition, 2.0 * PI * (8.0f64 * 200e6 * 5e9).sqrt()) < 1e-9);
    assert!(ladder.anharmonicity.abs() < 1e-9 * ladder.transition);

    let ec = 200e6;
    let ej = 100.0 * ec;
    let el = ej / 10.0;
    let s = inline_transmon_spectrum(&InlineTransmonModel::new(ec, el, ej).unwrap(), 101).unwrap();
    let approx = ec * ej / (ej + el);
    assert!(rel(s.anharmonicity.abs() / (2.0 * PI), approx) < 0.15);
    assert!(s.anharmonicity < 0.0);
}

#[test]
fn phase_grid_is_converged() {
    let m = InlineTransmonModel::new(200e6, 2e9, 20e9).unwrap();
    let a = inline_transmon_spectrum(&m, 101).unwrap();
    let b = inline_transmon_spectrum(&m, 201).unwrap();
    assert!(rel(a.transition, b.transition) < 1e-8);
}

#[test]
fn current_biased_worked_point() {
    let ec = 5e6;
    let omega = 2.0 * PI * 5e9;
    let ratio = current_biased_ratio(omega, omega, 15.0, ec, 1.25e5 * ec);
    // constants typed out independently of the library table
    let z_vac = 376.730_313_412;
    let alpha = 7.297_352_564_3e-3;
    let by_hand = 0.5 * (z_vac / (8.0 * PI * alpha * 15.0)).sqrt() * (1.0f64 / 1e6).powf(0.25);
    assert!(rel(ratio, by_hand) < 1e-3);
    assert_eq!((ratio * 10.0).round() / 10.0, 0.2);
}

#[test]
fn end_coupled_worked_point() {
    let ratio = end_coupled_ratio(30.0, 1.0, 100.0);
    let z_vac = 376.730_313_412;
    let alpha = 7.297_352_564_3e-3;
    let by_hand = (2.0 * PI * 30.0 * alpha / z_vac).sqrt() * 50f64.powf(0.25);
    assert!(rel(ratio, by_hand) < 1e-3);
    assert!(rel(ratio, 0.15) < 0.1);
}

#[test]
fn coupling_power_laws_by_finite_difference() {
    let h = 1e-4;
    let slope = |f: &dyn Fn(f64) -> f64, x: f64| (f(x * (1.0 + h)).ln() - f(x * (1.0 - h)).ln()) / ((1.0 + h).ln() - (1.0 - h).ln());
    let end = |ej: f64| end_coupled_ratio(30.0, 1e9, ej);
    assert!((slope(&end, 50e9) - 0.25).abs() < 1e-3);

    let (l, c, cj) = (1e-9, 1e-12, 4e-12);
    let report = current_biased_coupling(l, c, cj, 600e9).unwrap();
    let el = report.provenance.iter().find(|p| p.0 == "el_hz").unwrap().1;
    let cb = |ej: f64| current_biased_coupling(l, c, cj, ej).unwrap().ratio;
    let want = -0.75 * 600e9 / (600e9 + el);
    assert!((slope(&cb, 600e9) - want).abs() < 1e-3);

    let w = 2.0 * PI * 5e9;
    let base = current_biased_ratio(w, w, 15.0, 5e6, 6e11);
    assert!(rel(current_biased_ratio(w, w, 60.0, 5e6, 6e11), 0.5 * base) < 1e-12);
}

#[test]
fn current_biased_model_tracks_exact_crossing() {
    let cj = 4e-12;
    let spec = circuit(0.0, ports(0.0), JunctionSpec::squid(1000e9, 0.05, cj));
    let omega_r = find_bare_modes(&spec, 1).unwrap().modes[0].frequency;
    let c = spec.line_capacitance() / 2.0;
    let l = 1.0 / (omega_r * omega_r * c);
    let exact = avoided_crossing(&spec, (0.05, 0.49), 45).unwrap();
    let ej = effective_josephson_energy(&spec.junction, exact.crossing_flux);
    let model = current_biased_coupling(l, c, cj, ej).unwrap();
    assert!(rel(model.ratio, exact.report.ratio) < 0.25, "{} vs {}", model.ratio, exact.report.ratio);
}

fn ultrastrong() -> CircuitSpec {
    circuit(
        HALF_LENGTH - 260e-6,
        ports(10e-15),
        JunctionSpec::squid(19e9, 0.05, 5e-15),
    )
}

#[test]
fn ultrastrong_crossing() {
    let spec = ultrastrong();
    assert!(rel(find_bare_modes(&spec, 1).unwrap().modes[0].frequency_hz(), 4.95e9) < 1e-3);
    let x = avoided_crossing(&spec, (0.2, 0.48), 57).unwrap();
    assert!(rel(x.report.ratio, 0.12) < 0.15, "g/wp = {}", x.report.ratio);

    let eff = end_coupled_model(&spec, x.crossing_flux).unwrap();
    assert!(rel(eff.ratio, x.report.ratio) < 0.25);
    let flag = eff.provenance.iter().find(|p| p.0 == "charge_negligible").unwrap().1;
    assert_eq!(flag, 1.0);

    // participations exchange across the resonance
    let first = x.sweep.first().unwrap();
    let last = x.sweep.last().unwrap();
    assert!(first.participation[0] < first.participation[1]);
    assert!(last.participation[0] > last.participation[1]);
    let cross = x
        .sweep
        .windows(2)
        .find(|w| (w[0].participation[0] - w[0].participation[1]) * (w[1].participation[0] - w[1].participation[1]) <= 0.0)
        .unwrap();
    assert!((cross[0].flux - x.crossing_flux).abs() < 0.03);
}

#[test]
fn ultrastrong_half_flux_is_transmon_like() {
    let spec = ultrastrong();
    let props = mode_properties(&find_modes(&spec, 0.5, 3).unwrap()).unwrap();
    let k11 = nonlinear_couplings(&props).unwrap().self_kerr(1);
    let eff = end_coupled_model(&spec, 0.5).unwrap();
    let ec = eff.provenance.iter().find(|p| p.0 == "ec_hz").unwrap().1;
    assert!(props[0].inductive_participation().unwrap() > 0.95);
    assert!(rel(k11 / (2.0 * PI), ec) < 0.25);
}

#[test]
fn short_line_becomes_a_transmon() {
    let spec = CircuitSpec {
        half_length: HALF_LENGTH,
        junction_position: 0.0,
        left: line(),
        right: line(),
        ports: ports(0.0),
        junction: JunctionSpec::single(20e9, 20e-15),
    };
    let lengths: Vec<f64> = (0..=8).map(|i| 1.2e-2 * (2e-4f64 / 1.2e-2).powf(i as f64 / 8.0)).collect();
    let pts = length_sweep(&spec, 0.0, &lengths).unwrap();
    for w in pts.windows(2) {
        assert!(w[1].frequency_ratio() > w[0].frequency_ratio());
        assert!(w[1].kerr_ratio() > w[0].kerr_ratio());
    }
    let last = pts.last().unwrap();
    assert!((last.frequency_ratio() - 1.0).abs() < 0.02);
    assert!((last.kerr_ratio() - 1.0).abs() < 0.02);
}

//! Reduced models: the in-line transmon, the two lumped qubit-oscillator
//! couplings, and couplings read off exact mode sweeps.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{effective_josephson_energy, CircuitSpec};
use crate::constants::{
    charging_energy_hz, ELEMENTARY_CHARGE, FINE_STRUCTURE, PLANCK, REDUCED_FLUX_QUANTUM,
    VACUUM_IMPEDANCE,
};
use crate::error::{Error, Result};
use crate::modes::{find_bare_modes, find_modes, mode_properties, ModeBasis, ModeProperties};
use crate::nonlinear::nonlinear_couplings;
use crate::table::Table;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// H = 4E_C n² + (E_L/2)φ² − E_J cos φ, all energies in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InlineTransmonModel {
    pub charging_energy: f64,
    pub inductive_energy: f64,
    pub josephson_energy: f64,
}

impl InlineTransmonModel {
    pub fn new(charging_energy: f64, inductive_energy: f64, josephson_energy: f64) -> Result<Self> {
        if !(charging_energy > 0.0) {
            return Err(Error::invalid("E_C", "charging energy must be positive"));
        }
        if inductive_energy < 0.0 || josephson_energy < 0.0 {
            return Err(Error::invalid("E_L/E_J", "energies must be nonnegative"));
        }
        Ok(InlineTransmonModel {
            charging_energy,
            inductive_energy,
            josephson_energy,
        })
    }

    /// E_C = (eΔu_1)²/(2C_Σ), E_L = (Φ0/2π)²/(L̃_1 Δu_1²) from the first mode.
    pub fn from_basis(basis: &ModeBasis, props: &[ModeProperties]) -> Result<Self> {
        let first = props.first().ok_or(Error::NoCoupledMode)?;
        let ej = basis.josephson_energy().ok_or(Error::NoCoupledMode)?;
        if !first.is_coupled() {
            return Err(Error::NoCoupledMode);
        }
        let dk2 = first.kink * first.kink;
        let ec = (ELEMENTARY_CHARGE * first.kink).powi(2) / (2.0 * basis.total_capacitance) / PLANCK;
        let el = REDUCED_FLUX_QUANTUM.powi(2) / (first.resonator_inductance * dk2) / PLANCK;
        Self::new(ec, el, ej)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmonSpectrum {
    /// Lowest levels (Hz), ground state first.
    pub levels: Vec<f64>,
    /// ω_01 (rad/s)
    pub transition: f64,
    /// ω_21 − ω_10 (rad/s), signed.
    pub anharmonicity: f64,
    /// 2π√(8E_C(E_L+E_J))
    pub approx_transition: f64,
    /// −2π E_C E_J/(E_J+E_L)
    pub approx_anharmonicity: f64,
    /// "phase_grid" or "charge"
    pub basis: &'static str,
    /// Grid half-width actually used (rad); zero in the charge basis.
    pub phase_extent: f64,
}

const REPORTED_LEVELS: usize = 6;
const BOUNDARY_TOLERANCE: f64 = 1e-10;
const MAX_GRID_POINTS: usize = 1601;

/// Diagonalizes the in-line transmon Hamiltonian.
///
/// With E_L > 0 the phase is noncompact and the Hamiltonian is sampled on a
/// sinc-DVR grid of `basis_size` points; the box grows until the lowest three
/// eigenvectors vanish at the edges. With E_L = 0 it is diagonalized in the
/// charge basis with `basis_size` charge states.
pub fn inline_transmon_spectrum(model: &InlineTransmonModel, basis_size: usize) -> Result<TransmonSpectrum> {
    if basis_size < 31 || basis_size.is_multiple_of(2) {
        return Err(Error::invalid("basis_size", "must be odd and at least 31"));
    }
    let ec = model.charging_energy;
    let el = model.inductive_energy;
    let ej = model.josephson_energy;
    let (levels, basis, extent) = if el == 0.0 {
        (charge_basis_levels(ec, ej, basis_size), "charge", 0.0)
    } else {
        let (levels, extent) = phase_grid_levels(ec, el, ej, basis_size)?;
        (levels, "phase_grid", extent)
    };
    let transition = TWO_PI * (levels[1] - levels[0]);
    let anharmonicity = TWO_PI * ((levels[2] - levels[1]) - (levels[1] - levels[0]));
    Ok(TransmonSpectrum {
        levels,
        transition,
        anharmonicity,
        approx_transition: TWO_PI * (8.0 * ec * (el + ej)).sqrt(),
        approx_anharmonicity: -TWO_PI * ec * ej / (ej + el),
        basis,
        phase_extent: extent,
    })
}

fn charge_basis_levels(ec: f64, ej: f64, size: usize) -> Vec<f64> {
    let cut = (size / 2) as f64;
    let mut h = DMatrix::<f64>::zeros(size, size);
    for i in 0..size {
        let n = i as f64 - cut;
        h[(i, i)] = 4.0 * ec * n * n;
        if i + 1 < size {
            h[(i, i + 1)] = -0.5 * ej;
            h[(i + 1, i)] = -0.5 * ej;
        }
    }
    sorted_levels(SymmetricEigen::new(h).eigenvalues.as_slice())
}

fn sorted_levels(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v.truncate(REPORTED_LEVELS);
    v
}

fn phase_grid_levels(ec: f64, el: f64, ej: f64, points: usize) -> Result<(Vec<f64>, f64)> {
    let sigma = (8.0 * ec / (el + ej)).sqrt().sqrt();
    let mut extent = 10.0 * sigma;
    let h = 2.0 * extent / (points - 1) as f64;
    let mut points = points;
    while points <= MAX_GRID_POINTS {
        let grid: Vec<f64> = (0..points).map(|i| -extent + h * i as f64).collect();
        let mut ham = DMatrix::<f64>::zeros(points, points);
        let pi2 = std::f64::consts::PI.powi(2);
        for i in 0..points {
            for j in 0..points {
                let kinetic = if i == j {
                    pi2 / (3.0 * h * h)
                } else {
                    let d = i as f64 - j as f64;
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    2.0 * sign / (h * h * d * d)
                };
                ham[(i, j)] = 4.0 * ec * kinetic;
            }
            let phi = grid[i];
            ham[(i, i)] += 0.5 * el * phi * phi - ej * phi.cos();
        }
        let eig = SymmetricEigen::new(ham);
        let mut order: Vec<usize> = (0..points).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let edge = order[..3]
            .iter()
            .map(|&k| {
                let col = eig.eigenvectors.column(k);
                let peak = col.amax();
                col[0].abs().max(col[points - 1].abs()) / peak
            })
            .fold(0.0, f64::max);
        if edge < BOUNDARY_TOLERANCE {
            let levels: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            return Ok((sorted_levels(&levels), extent));
        }
        extent *= 1.5;
        points = 2 * (extent / h).ceil() as usize + 1;
        extent = h * (points - 1) as f64 / 2.0;
    }
    Err(Error::NotConverged {
        what: "in-line transmon phase grid",
        detail: format!("boundary amplitude above {BOUNDARY_TOLERANCE:e} at φ_max = {extent:.3}"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    CurrentBiased,
    EndCoupled,
    ExactNumeric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub model: ModelTag,
    /// ω_r (rad/s)
    pub resonator_frequency: f64,
    /// ω_p (rad/s)
    pub plasma_frequency: f64,
    /// g (rad/s)
    pub coupling: f64,
    pub ratio: f64,
    /// Signed anharmonicity (rad/s).
    pub anharmonicity: f64,
    /// Inputs and intermediate quantities, by name.
    pub provenance: Vec<(String, f64)>,
}

/// (ω_r/2ω_p)√(Z_vac/(8πα Z_r))·[E_C/(8(E_J+E_L))]^{1/4}.
pub fn current_biased_ratio(omega_r: f64, omega_p: f64, z_r: f64, ec: f64, ej_plus_el: f64) -> f64 {
    omega_r / (2.0 * omega_p)
        * (VACUUM_IMPEDANCE / (8.0 * std::f64::consts::PI * FINE_STRUCTURE * z_r)).sqrt()
        * (ec / (8.0 * ej_plus_el)).powf(0.25)
}

/// √(2π Z'_r α/Z_vac)·(E_J/2E_C)^{1/4}.
pub fn end_coupled_ratio(z_r_prime: f64, ec: f64, ej: f64) -> f64 {
    (TWO_PI * z_r_prime * FINE_STRUCTURE / VACUUM_IMPEDANCE).sqrt() * (ej / (2.0 * ec)).powf(0.25)
}

/// Junction in series with the current of a lumped LC: L, C of the oscillator
/// (H, F), junction capacitance (F) and Josephson energy (Hz).
pub fn current_biased_coupling(l: f64, c: f64, cj: f64, ej: f64) -> Result<CouplingReport> {
    for (name, v) in [("L", l), ("C", c), ("C_J", cj), ("E_J", ej)] {
        if !(v > 0.0) {
            return Err(Error::invalid(name, "must be positive"));
        }
    }
    let ec = charging_energy_hz(cj);
    let el = REDUCED_FLUX_QUANTUM.powi(2) / (4.0 * l) / PLANCK;
    if ej + el <= 10.0 * ec {
        log::warn!("E_J + E_L = {:.3e} Hz is not large against E_C = {ec:.3e} Hz; the weakly anharmonic picture is unreliable", ej + el);
    }
    let omega_p = TWO_PI * (8.0 * ec * (ej + el)).sqrt();
    let omega_r = 1.0 / (l * c).sqrt();
    let z_r = (l / c).sqrt();
    let ratio = current_biased_ratio(omega_r, omega_p, z_r, ec, ej + el);
    Ok(CouplingReport {
        model: ModelTag::CurrentBiased,
        resonator_frequency: omega_r,
        plasma_frequency: omega_p,
        coupling: ratio * omega_p,
        ratio,
        anharmonicity: -TWO_PI * ec * ej / (ej + el),
        provenance: vec![
            ("L_h".into(), l),
            ("C_f".into(), c),
            ("cj_f".into(), cj),
            ("ej_hz".into(), ej),
            ("ec_hz".into(), ec),
            ("el_hz".into(), el),
            ("z_r_ohm".into(), z_r),
        ],
    })
}

/// Effective transmon at distance ℓ_q = ℓ − x_J from the right end of a λ/2
/// line, evaluated at `flux`. ω_r is the fundamental with the junction shorted.
pub fn end_coupled_model(spec: &CircuitSpec, flux: f64) -> Result<CouplingReport> {
    spec.validate()?;
    let c0 = spec.right.capacitance_per_length;
    let l_q = spec.half_length - spec.junction_position;
    if l_q / (2.0 * spec.half_length) > 0.1 {
        log::warn!("junction is {:.1}% of the line from the end; the λ/2 picture is unreliable", 100.0 * l_q / (2.0 * spec.half_length));
    }
    let cj = spec.junction.capacitance;
    let line_c = spec.line_capacitance();
    let c_r = (line_c + cj) / 2.0;
    let c_s = l_q * c0;
    let c_q = cj + c_s;
    let ec = charging_energy_hz(c_q);
    let ej = effective_josephson_energy(&spec.junction, flux);
    let omega_p = TWO_PI * (8.0 * ec * ej).sqrt();
    let omega_r = find_bare_modes(spec, 1)?.modes[0].frequency;
    let z_r_prime = 1.0 / (c_r * omega_r);
    let ratio = end_coupled_ratio(z_r_prime, ec, ej);
    let charge_coupling = cj / (c_q * c_r);
    Ok(CouplingReport {
        model: ModelTag::EndCoupled,
        resonator_frequency: omega_r,
        plasma_frequency: omega_p,
        coupling: ratio * omega_p,
        ratio,
        anharmonicity: -TWO_PI * ec,
        provenance: vec![
            ("flux_phi0".into(), flux),
            ("ej_hz".into(), ej),
            ("ec_hz".into(), ec),
            ("l_q_m".into(), l_q),
            ("c_r_prime_f".into(), c_r),
            ("c_q_f".into(), c_q),
            ("z_r_prime_ohm".into(), z_r_prime),
            ("charge_coupling_per_f".into(), charge_coupling),
            ("charge_negligible".into(), f64::from(u8::from(cj < c_s && c_s < line_c))),
        ],
    })
}

/// One flux point of the avoided-crossing sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingPoint {
    pub flux: f64,
    /// ω_1, ω_2 (rad/s)
    pub frequencies: [f64; 2],
    /// Effective-model ω_r and ω_p (rad/s).
    pub effective_resonator: f64,
    pub effective_plasma: f64,
    /// K_11, K_22 (rad/s)
    pub kerr: [f64; 2],
    pub participation: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvoidedCrossing {
    pub report: CouplingReport,
    /// Flux of minimum splitting (Φ0).
    pub crossing_flux: f64,
    pub sweep: Vec<CrossingPoint>,
}

fn crossing_point(spec: &CircuitSpec, flux: f64, omega_r: f64) -> Result<CrossingPoint> {
    let basis = find_modes(spec, flux, 2)?;
    let props = mode_properties(&basis)?;
    let couplings = nonlinear_couplings(&props)?;
    let ec = charging_energy_hz(spec.junction.capacitance + (spec.half_length - spec.junction_position) * spec.right.capacitance_per_length);
    let ej = effective_josephson_energy(&spec.junction, flux);
    let eta = |i: usize| props[i].inductive_participation().unwrap_or(0.0);
    Ok(CrossingPoint {
        flux,
        frequencies: [basis.modes[0].frequency, basis.modes[1].frequency],
        effective_resonator: omega_r,
        effective_plasma: TWO_PI * (8.0 * ec * ej).sqrt(),
        kerr: [couplings.self_kerr(1), couplings.self_kerr(2)],
        participation: [eta(0), eta(1)],
    })
}

fn splitting(spec: &CircuitSpec, flux: f64) -> Result<(f64, f64)> {
    let b = find_modes(spec, flux, 2)?;
    Ok((b.modes[1].frequency - b.modes[0].frequency, 0.5 * (b.modes[1].frequency + b.modes[0].frequency)))
}

/// Sweeps the two lowest exact modes over `flux_range` on `points` fluxes and
/// reads g off half the minimum splitting, refined by golden-section search.
pub fn avoided_crossing(spec: &CircuitSpec, flux_range: (f64, f64), points: usize) -> Result<AvoidedCrossing> {
    let (lo, hi) = flux_range;
    if points < 3 || !(hi > lo) {
        return Err(Error::invalid("flux range", "need at least 3 points on a nonempty range"));
    }
    let omega_r = find_bare_modes(spec, 1)?.modes[0].frequency;
    let fluxes: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
    let sweep: Vec<CrossingPoint> = fluxes
        .par_iter()
        .map(|&f| crossing_point(spec, f, omega_r))
        .collect::<Result<_>>()?;
    let gaps: Vec<f64> = sweep.iter().map(|p| p.frequencies[1] - p.frequencies[0]).collect();
    let best = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty");
    if best == 0 || best == points - 1 {
        return Err(Error::NoCrossingFound(lo, hi));
    }

    let (mut a, mut b) = (fluxes[best - 1], fluxes[best + 1]);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = splitting(spec, x1)?.0;
    let mut f2 = splitting(spec, x2)?.0;
    while b - a > 1e-9 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = splitting(spec, x1)?.0;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = splitting(spec, x2)?.0;
        }
    }
    let flux = 0.5 * (a + b);
    let (gap, mean) = splitting(spec, flux)?;
    let g = gap / 2.0;
    let props = mode_properties(&find_modes(spec, flux, 2)?)?;
    let anharmonicity = -nonlinear_couplings(&props)?.self_kerr(1);
    Ok(AvoidedCrossing {
        report: CouplingReport {
            model: ModelTag::ExactNumeric,
            resonator_frequency: omega_r,
            plasma_frequency: mean,
            coupling: g,
            ratio: g / mean,
            anharmonicity,
            provenance: vec![
                ("crossing_flux_phi0".into(), flux),
                ("flux_min_phi0".into(), lo),
                ("flux_max_phi0".into(), hi),
                ("points".into(), points as f64),
            ],
        },
        crossing_flux: flux,
        sweep,
    })
}

/// Φ_x/Φ0, ω_1/2π, ω_2/2π, ω_r/2π, ω_p/2π (GHz), K_11, K_22 (MHz), η_l,1, η_l,2.
pub fn crossing_table(sweep: &[CrossingPoint]) -> Table {
    let header = [
        "flux_phi0", "f1_ghz", "f2_ghz", "fr_eff_ghz", "fp_eff_ghz", "k11_mhz", "k22_mhz", "eta_l1", "eta_l2",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let ghz = |w: f64| w / TWO_PI / 1e9;
    let mhz = |w: f64| w / TWO_PI / 1e6;
    let rows = sweep
        .iter()
        .map(|p| {
            vec![
                p.flux,
                ghz(p.frequencies[0]),
                ghz(p.frequencies[1]),
                ghz(p.effective_resonator),
                ghz(p.effective_plasma),
                mhz(p.kerr[0]),
                mhz(p.kerr[1]),
                p.participation[0],
                p.participation[1],
            ]
        })
        .collect();
    Table { header, rows }
}

/// One point of the short-line limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthPoint {
    /// 2ℓ (m)
    pub total_length: f64,
    /// ω_1 (rad/s)
    pub frequency: f64,
    /// √(8 E_C,T E_J), rad/s
    pub plasma_frequency: f64,
    /// K_11 (rad/s)
    pub kerr: f64,
    /// E_C,T = e²/[2(2ℓC⁰/4 + C_J)] (Hz)
    pub transmon_charging_energy: f64,
}

impl LengthPoint {
    pub fn frequency_ratio(&self) -> f64 {
        self.frequency / self.plasma_frequency
    }

    pub fn kerr_ratio(&self) -> f64 {
        self.kerr / (TWO_PI * self.transmon_charging_energy)
    }
}

/// First-mode frequency and Kerr against the lumped-transmon values as the
/// line is shortened; the junction keeps its relative position.
pub fn length_sweep(spec: &CircuitSpec, flux: f64, total_lengths: &[f64]) -> Result<Vec<LengthPoint>> {
    let ej = effective_josephson_energy(&spec.junction, flux);
    total_lengths
        .par_iter()
        .map(|&len| {
            let s = spec.with_half_length(len / 2.0);
            let basis = find_modes(&s, flux, 1)?;
            let props = mode_properties(&basis)?;
            let kerr = nonlinear_couplings(&props)?.self_kerr(1);
            let ect = charging_energy_hz(s.line_capacitance() / 4.0 + s.junction.capacitance);
            Ok(LengthPoint {
                total_length: len,
                frequency: basis.modes[0].frequency,
                plasma_frequency: TWO_PI * (8.0 * ect * ej).sqrt(),
                kerr,
                transmon_charging_energy: ect,
            })
        })
        .collect()
}

pub fn length_table(points: &[LengthPoint]) -> Table {
    Table {
        header: ["total_length_m", "f1_ghz", "fp_ghz", "w1_over_wp", "k11_over_ect"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: points
            .iter()
            .map(|p| {
                vec![
                    p.total_length,
                    p.frequency / TWO_PI / 1e9,
                    p.plasma_frequency / TWO_PI / 1e9,
                    p.frequency_ratio(),
                    p.kerr_ratio(),
                ]
            })
            .collect(),
    }
}

//! Quartic-order couplings, flux-pump amplitudes, port loss and the critical
//! photon number.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{effective_josephson_energy, CircuitSpec, JunctionKind};
use crate::constants::{FLUX_QUANTUM, HBAR, PLANCK};
use crate::error::{Error, Result};
use crate::modes::{find_modes, mode_properties, ModeBasis, ModeProperties};
use crate::table::Table;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// One entry of the beam-splitter tensor, m < n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamSplitter {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    /// ζ_lmn (rad/s)
    pub value: f64,
}

/// Couplings restricted to the junction-coupled modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonlinearCouplings {
    /// 1-based indices of the coupled modes; all matrices follow this order.
    pub modes: Vec<usize>,
    /// ω_m (rad/s)
    pub frequencies: Vec<f64>,
    /// ω'_m = ω_m − Σ_n K_mn (rad/s)
    pub shifted_frequencies: Vec<f64>,
    /// K_mn (rad/s)
    pub kerr: Vec<Vec<f64>>,
    pub beam_splitter: Vec<BeamSplitter>,
}

impl NonlinearCouplings {
    /// Position of 1-based mode `index` in the coupled-mode list.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.modes.iter().position(|&m| m == index)
    }

    /// K_mm for 1-based mode `index`, zero for junction-blind modes.
    pub fn self_kerr(&self, index: usize) -> f64 {
        self.position(index).map_or(0.0, |i| self.kerr[i][i])
    }

    pub fn cross_kerr(&self, m: usize, n: usize) -> f64 {
        match (self.position(m), self.position(n)) {
            (Some(i), Some(j)) => self.kerr[i][j],
            _ => 0.0,
        }
    }

    pub fn zeta(&self, l: usize, m: usize, n: usize) -> f64 {
        let (m, n) = (m.min(n), m.max(n));
        self.beam_splitter
            .iter()
            .find(|z| z.l == l && z.m == m && z.n == n)
            .map_or(0.0, |z| z.value)
    }
}

/// ζ_lmn = (1 − δ_lm/2)(K_ll² K_mm K_nn)^{1/4}.
pub fn beam_splitter_amplitude(l: usize, m: usize, k_ll: f64, k_mm: f64, k_nn: f64) -> f64 {
    let prefactor = if l == m { 0.5 } else { 1.0 };
    prefactor * (k_ll * k_ll * k_mm * k_nn).sqrt().sqrt()
}

pub fn nonlinear_couplings(props: &[ModeProperties]) -> Result<NonlinearCouplings> {
    let coupled: Vec<&ModeProperties> = props.iter().filter(|p| p.is_coupled()).collect();
    if coupled.is_empty() {
        return Err(Error::NoCoupledMode);
    }
    let self_kerr: Vec<f64> = coupled
        .iter()
        .map(|p| {
            let c = p.coupled.expect("filtered");
            TWO_PI * c.charging_energy * c.inductive_participation
        })
        .collect();
    let n = coupled.len();
    let kerr: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        self_kerr[i]
                    } else {
                        2.0 * (self_kerr[i] * self_kerr[j]).sqrt()
                    }
                })
                .collect()
        })
        .collect();

    let frequencies: Vec<f64> = coupled.iter().map(|p| p.frequency).collect();
    let shifted_frequencies: Vec<f64> = (0..n)
        .map(|i| {
            let shift: f64 = kerr[i].iter().sum();
            let tail = kerr[i][n - 1];
            if n > 1 && tail > 0.01 * shift {
                log::debug!(
                    "frequency shift of mode {} not converged in mode count: last mode carries {:.1}%",
                    coupled[i].index,
                    100.0 * tail / shift
                );
            }
            frequencies[i] - shift
        })
        .collect();

    let modes: Vec<usize> = coupled.iter().map(|p| p.index).collect();
    let mut beam_splitter = Vec::new();
    for l in 0..n {
        for m in 0..n {
            for k in (m + 1)..n {
                beam_splitter.push(BeamSplitter {
                    l: modes[l],
                    m: modes[m],
                    n: modes[k],
                    value: beam_splitter_amplitude(l, m, self_kerr[l], self_kerr[m], self_kerr[k]),
                });
            }
        }
    }

    Ok(NonlinearCouplings {
        modes,
        frequencies,
        shifted_frequencies,
        kerr,
        beam_splitter,
    })
}

/// Flux-pump amplitudes for the coupled modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PumpAmplitudes {
    /// Φ_x (Φ0)
    pub flux: f64,
    /// Φ_rf (Φ0)
    pub flux_rf: f64,
    /// ω_d (rad/s)
    pub drive_frequency: f64,
    pub modes: Vec<usize>,
    /// g_m (rad/s)
    pub one_photon: Vec<f64>,
    /// g_mn (rad/s), symmetric
    pub two_photon: Vec<Vec<f64>>,
}

impl PumpAmplitudes {
    pub fn two_photon_between(&self, m: usize, n: usize) -> f64 {
        let i = self.modes.iter().position(|&x| x == m);
        let j = self.modes.iter().position(|&x| x == n);
        match (i, j) {
            (Some(i), Some(j)) => self.two_photon[i][j],
            _ => 0.0,
        }
    }
}

fn squid_parameters(spec: &CircuitSpec) -> Result<(f64, f64)> {
    match spec.junction.kind {
        JunctionKind::Squid {
            total_josephson_energy,
            asymmetry,
        } => Ok((total_josephson_energy, asymmetry)),
        JunctionKind::Single { .. } => Err(Error::NotASquid),
    }
}

/// One- and two-photon pump amplitudes for a SQUID modulated as
/// Φ_x + Φ_rf cos ω_d t. Fluxes in units of Φ0.
pub fn pump_amplitudes(
    spec: &CircuitSpec,
    props: &[ModeProperties],
    flux: f64,
    flux_rf: f64,
    drive_frequency: f64,
) -> Result<PumpAmplitudes> {
    let (ej_sigma, d) = squid_parameters(spec)?;
    if flux_rf.abs() > 0.1 {
        log::warn!("pump amplitude {flux_rf} Φ0 is not small; the expansion to first order in Φ_rf is unreliable");
    }
    let phi_x = TWO_PI * flux;
    let phi_rf = TWO_PI * flux_rf;
    let q = TWO_PI / FLUX_QUANTUM;
    let energy = PLANCK * ej_sigma;
    let coupled: Vec<(usize, f64, f64)> = props
        .iter()
        .filter_map(|p| p.coupled.map(|c| (p.index, c.capacitance, p.frequency)))
        .collect();
    let one_photon = coupled
        .iter()
        .map(|&(_, c, w)| q * d * energy * (phi_x / 2.0).cos() / (8.0 * HBAR * c * w).sqrt() * phi_rf)
        .collect();
    let two_photon = coupled
        .iter()
        .map(|&(_, cm, wm)| {
            coupled
                .iter()
                .map(|&(_, cn, wn)| {
                    q * q * energy * (phi_x / 2.0).sin() / (4.0 * (cm * cn * wm * wn).sqrt())
                        * phi_rf
                })
                .collect()
        })
        .collect();
    Ok(PumpAmplitudes {
        flux,
        flux_rf,
        drive_frequency,
        modes: coupled.iter().map(|c| c.0).collect(),
        one_photon,
        two_photon,
    })
}

/// √(∂ω_m/∂Φ_x · ∂ω_n/∂Φ_x)·Φ_rf with derivatives from central differences of
/// step `step` (Φ0), re-solving the modes at each side.
pub fn pump_amplitude_from_derivatives(
    spec: &CircuitSpec,
    m: usize,
    n: usize,
    flux: f64,
    flux_rf: f64,
    step: f64,
) -> Result<f64> {
    let (_, d) = squid_parameters(spec)?;
    let distance = (flux.rem_euclid(1.0) - 0.5).abs();
    if d >= 0.1 || distance <= step {
        return Err(Error::NearHalfQuantum { flux, asymmetry: d });
    }
    let count = m.max(n);
    let above = find_modes(spec, flux + step, count)?;
    let below = find_modes(spec, flux - step, count)?;
    let slope = |i: usize| (above.mode(i).frequency - below.mode(i).frequency) / (2.0 * step);
    Ok((slope(m) * slope(n)).abs().sqrt() * flux_rf)
}

/// Perturbative capacitive-port loss: κ_m = Σ_α ω_m² C_α² Z_ext u_m(x_α)² / C_Σ.
/// This is a modeling choice, isolated here so it can be swapped.
pub fn decay_rates(basis: &ModeBasis) -> Vec<f64> {
    let ports = basis.circuit.ports;
    basis
        .modes
        .iter()
        .map(|mode| {
            let w2 = mode.frequency * mode.frequency;
            let input = ports.input_capacitance.powi(2) * mode.value_at_input().powi(2);
            let output = ports.output_capacitance.powi(2) * mode.value_at_output().powi(2);
            w2 * ports.external_impedance * (input + output) / basis.total_capacitance
        })
        .collect()
}

/// n_c = E_J h / (ħ ω_m), cross-checked against √η_l √(E_J/8E'_C) and
/// η_l √(E_J/(8ħK_mm/h)) to 1e-9 relative.
pub fn critical_photon_number(props: &ModeProperties, ej_hz: f64) -> Result<f64> {
    let coupled = props.coupled.ok_or(Error::NoCoupledMode)?;
    let eta = coupled.inductive_participation;
    let ec = coupled.charging_energy;
    let kerr_hz = ec * eta;
    let direct = ej_hz * PLANCK / (HBAR * props.frequency);
    let via_charging = eta.sqrt() * (ej_hz / (8.0 * ec)).sqrt();
    let via_kerr = eta * (ej_hz / (8.0 * kerr_hz)).sqrt();
    let forms = [direct, via_charging, via_kerr];
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    if rel(direct, via_charging) > 1e-9 || rel(direct, via_kerr) > 1e-9 {
        return Err(Error::IdentityViolation {
            mode: props.index,
            forms,
        });
    }
    Ok(direct)
}

/// Everything computed at one flux bias.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxPoint {
    pub flux: f64,
    pub josephson_energy: f64,
    pub basis: ModeBasis,
    pub properties: Vec<ModeProperties>,
    pub couplings: NonlinearCouplings,
    pub pump: Option<PumpAmplitudes>,
    pub decay: Vec<f64>,
}

/// Settings shared by every point of a flux sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSettings {
    pub modes: usize,
    /// Φ_rf (Φ0); pump amplitudes are only computed for SQUIDs.
    pub flux_rf: f64,
    /// ω_d (rad/s)
    pub drive_frequency: f64,
}

pub fn analyze_flux_point(spec: &CircuitSpec, flux: f64, settings: &SweepSettings) -> Result<FluxPoint> {
    let basis = find_modes(spec, flux, settings.modes)?;
    let properties = mode_properties(&basis)?;
    let couplings = nonlinear_couplings(&properties)?;
    let pump = if spec.junction.is_squid() {
        Some(pump_amplitudes(
            spec,
            &properties,
            flux,
            settings.flux_rf,
            settings.drive_frequency,
        )?)
    } else {
        None
    };
    let decay = decay_rates(&basis);
    Ok(FluxPoint {
        flux,
        josephson_energy: effective_josephson_energy(&spec.junction, flux),
        basis,
        properties,
        couplings,
        pump,
        decay,
    })
}

/// Evaluates every flux in parallel; results keep the input order.
pub fn flux_sweep(spec: &CircuitSpec, fluxes: &[f64], settings: &SweepSettings) -> Result<Vec<FluxPoint>> {
    fluxes
        .par_iter()
        .map(|&f| analyze_flux_point(spec, f, settings))
        .collect()
}

/// Sweep table: Φ_x/Φ0, ω_m/2π (GHz), K_mn/2π, ζ_lmn/2π, g_m/2π, g_mn/2π, κ_m/2π (MHz).
/// Coupling columns use 1-based mode labels; junction-blind entries are zero.
pub fn sweep_table(points: &[FluxPoint], modes: usize) -> Table {
    let mut header = vec!["flux_phi0".to_string()];
    for m in 1..=modes {
        header.push(format!("f{m}_ghz"));
    }
    for m in 1..=modes {
        for n in m..=modes {
            header.push(format!("k{m}{n}_mhz"));
        }
    }
    for l in 1..=modes {
        for m in 1..=modes {
            for n in (m + 1)..=modes {
                header.push(format!("zeta{l}{m}{n}_mhz"));
            }
        }
    }
    for m in 1..=modes {
        header.push(format!("g{m}_mhz"));
    }
    for m in 1..=modes {
        for n in m..=modes {
            header.push(format!("g{m}{n}_mhz"));
        }
    }
    for m in 1..=modes {
        header.push(format!("kappa{m}_mhz"));
    }

    let mhz = |w: f64| w / TWO_PI / 1e6;
    let rows = points
        .iter()
        .map(|p| {
            let mut row = vec![p.flux];
            row.extend(p.basis.modes.iter().map(|m| m.frequency_hz() / 1e9));
            for m in 1..=modes {
                for n in m..=modes {
                    row.push(mhz(p.couplings.cross_kerr(m, n)));
                }
            }
            for l in 1..=modes {
                for m in 1..=modes {
                    for n in (m + 1)..=modes {
                        row.push(mhz(p.couplings.zeta(l, m, n)));
                    }
                }
            }
            for m in 1..=modes {
                let g = p.pump.as_ref().map_or(0.0, |pump| {
                    pump.modes
                        .iter()
                        .position(|&x| x == m)
                        .map_or(0.0, |i| pump.one_photon[i])
                });
                row.push(mhz(g));
            }
            for m in 1..=modes {
                for n in m..=modes {
                    let g = p.pump.as_ref().map_or(0.0, |pump| pump.two_photon_between(m, n));
                    row.push(mhz(g));
                }
            }
            row.extend(p.decay.iter().map(|&k| mhz(k)));
            row
        })
        .collect();
    Table { header, rows }
}

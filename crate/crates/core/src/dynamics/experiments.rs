//! Photon-blockade and Kerr cat-state experiments.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::fock::{coherent_amplitudes, coherent_state, DensityMatrix, FockSpace, SparseOperator};
use super::hamiltonian::{single_mode_hamiltonian, DriveSpec, Frame};
use super::lindblad::{evolve_lindblad, step_bound, uniform_times, EvolveOptions, Jump, Liouvillian, Trajectory};
use super::pulse::{simpson, FluxPulse, KerrSchedule};
use crate::error::{Error, Result};
use crate::nonlinear::FluxPoint;

/// Drive a single Kerr mode at ω_d = ω_r − K/2 starting from vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockadeParams {
    /// ω_r (rad/s)
    pub frequency: f64,
    /// K (rad/s)
    pub kerr: f64,
    /// κ (1/s)
    pub decay: f64,
    /// ε (rad/s)
    pub drive: f64,
    pub t_end: f64,
    pub samples: usize,
    pub fock: usize,
    pub frame: BlockadeFrame,
    /// Step override (s); `None` uses the stability bound.
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockadeFrame {
    Lab,
    Rotating,
}

impl BlockadeParams {
    pub fn drive_frequency(&self) -> f64 {
        self.frequency - 0.5 * self.kerr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockadeResult {
    pub params: BlockadeParams,
    pub drive_frequency: f64,
    pub dt: f64,
    pub trajectory: Trajectory,
}

impl BlockadeResult {
    pub fn max_photon_number(&self) -> f64 {
        self.trajectory.mean_photon.iter().copied().fold(0.0, f64::max)
    }
}

pub fn simulate_blockade(params: &BlockadeParams) -> Result<BlockadeResult> {
    if !(params.t_end > 0.0) || params.samples == 0 {
        return Err(Error::invalid("t_end", "need a positive duration and at least one sample"));
    }
    let space = FockSpace::new(params.fock)?;
    let wd = params.drive_frequency();
    let frame = match params.frame {
        BlockadeFrame::Lab => Frame::Lab,
        BlockadeFrame::Rotating => Frame::Rotating(wd),
    };
    let drive = DriveSpec::new(params.drive, wd)?;
    let h = single_mode_hamiltonian(params.frequency, params.kerr, Some(drive), frame, &space);
    let jump = Jump::new(space.sparse_annihilation());
    let fixed = (!h.is_time_dependent()).then(|| h.at(0.0));
    let generator = |t: f64| Liouvillian {
        hamiltonian: fixed.clone().unwrap_or_else(|| h.at(t)),
        collapses: vec![(params.decay, &jump)],
    };
    let bound = step_bound(&generator(0.0));
    let dt = params.dt.unwrap_or(bound);
    let times = uniform_times(params.t_end, params.samples);
    let trajectory = evolve_lindblad(
        &DensityMatrix::vacuum(params.fock),
        generator,
        &times,
        EvolveOptions {
            dt,
            keep_states: false,
        },
    )?;
    Ok(BlockadeResult {
        params: *params,
        drive_frequency: wd,
        dt,
        trajectory,
    })
}

/// Local maxima of `series` above `threshold`.
pub fn count_peaks(series: &[f64], threshold: f64) -> usize {
    series
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] >= w[2] && w[1] > threshold)
        .count()
}

/// |ψ_cat(α)⟩ = (e^{iπ/4}|−iα⟩ + e^{−iπ/4}|iα⟩)/√2, renormalized after truncation.
pub fn cat_state(alpha: Complex64, dim: usize) -> DVector<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let quarter = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let v = coherent_amplitudes(-i * alpha, dim) * quarter + coherent_amplitudes(i * alpha, dim) * quarter.conj();
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// max_θ ⟨ψ_cat(αe^{iθ})|ρ|ψ_cat(αe^{iθ})⟩, returned with the maximizing θ.
pub fn cat_fidelity(rho: &DensityMatrix, alpha: Complex64) -> (f64, f64) {
    let dim = rho.dim();
    let f = |theta: f64| rho.overlap(&cat_state(alpha * Complex64::from_polar(1.0, theta), dim));
    let grid = 720;
    let step = std::f64::consts::TAU / grid as f64;
    let best = (0..grid)
        .map(|k| (k as f64 * step, f(k as f64 * step)))
        .fold((0.0, f64::MIN), |acc, v| if v.1 > acc.1 { v } else { acc });
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let theta = 0.5 * (a + b);
    let value = f(theta).max(best.1);
    (value, theta.rem_euclid(std::f64::consts::TAU))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatParams {
    /// Initial coherent amplitude α.
    pub alpha: f64,
    pub fock: usize,
    pub flux_start: f64,
    pub flux_peak: f64,
    /// Raised-cosine ramp time (s).
    pub ramp: f64,
    /// Accumulated Kerr phase to reach (rad); π for a two-component cat.
    pub phase_target: f64,
    /// Hold κ at its value at the peak flux instead of following the schedule.
    pub constant_decay: bool,
    /// Multiplies every decay rate; zero gives the lossless control.
    pub decay_scale: f64,
    pub samples: usize,
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatResult {
    pub params: CatParams,
    pub pulse: FluxPulse,
    /// Total pulse duration 2 t_ramp + t_plateau (s).
    pub tau_used: f64,
    /// ∫K dt over the pulse, evaluated independently of the plateau solve.
    pub accumulated_phase: f64,
    pub fidelity: f64,
    pub rotation_angle: f64,
    pub dt: f64,
    pub trajectory: Trajectory,
}

/// Tabulates K, ω and κ of mode `mode` (1-based) over a flux sweep.
pub fn kerr_schedule(points: &[FluxPoint], mode: usize) -> Result<KerrSchedule> {
    let mut fluxes = Vec::with_capacity(points.len());
    let mut kerr = Vec::with_capacity(points.len());
    let mut frequency = Vec::with_capacity(points.len());
    let mut decay = Vec::with_capacity(points.len());
    for p in points {
        let idx = p
            .couplings
            .position(mode)
            .ok_or_else(|| Error::invalid("mode", format!("mode {mode} carries no Kerr coupling")))?;
        fluxes.push(p.flux);
        kerr.push(p.couplings.self_kerr(mode));
        frequency.push(p.couplings.frequencies[idx]);
        decay.push(p.decay[mode - 1]);
    }
    KerrSchedule::new(fluxes, kerr, frequency, decay)
}

/// Builds the pulse whose plateau makes ∫K dt hit the phase target.
pub fn scale_pulse(schedule: &KerrSchedule, params: &CatParams) -> Result<FluxPulse> {
    let (lo, hi) = schedule.domain();
    for f in [params.flux_start, params.flux_peak] {
        if f < lo - 1e-12 || f > hi + 1e-12 {
            return Err(Error::PhaseTargetUnreachable(format!(
                "flux {f} outside the tabulated range [{lo}, {hi}]"
            )));
        }
    }
    let template = FluxPulse {
        start: params.flux_start,
        peak: params.flux_peak,
        ramp: params.ramp,
        plateau: 0.0,
    };
    let ramp_phase = if params.ramp > 0.0 {
        simpson(|t| schedule.kerr_at(template.flux(t)), 0.0, params.ramp, 4000)
    } else {
        0.0
    };
    let k_peak = schedule.kerr_at(params.flux_peak);
    let plateau = (params.phase_target - 2.0 * ramp_phase) / k_peak;
    if !(plateau >= 0.0) || !plateau.is_finite() {
        return Err(Error::PhaseTargetUnreachable(format!(
            "ramps alone accumulate {:.4} rad against a target of {:.4} rad",
            2.0 * ramp_phase,
            params.phase_target
        )));
    }
    Ok(FluxPulse { plateau, ..template })
}

fn pulse_phase(schedule: &KerrSchedule, pulse: &FluxPulse) -> f64 {
    let k = |t: f64| schedule.kerr_at(pulse.flux(t));
    let r = pulse.ramp;
    let ramps = if r > 0.0 {
        simpson(k, 0.0, r, 8000) + simpson(k, r + pulse.plateau, pulse.duration(), 8000)
    } else {
        0.0
    };
    ramps + schedule.kerr_at(pulse.peak) * pulse.plateau
}

/// Evolves |α⟩ under −(K(t)/2)n² with loss √κ a through the scaled flux pulse,
/// in the frame rotating at the instantaneous mode frequency.
pub fn simulate_cat(schedule: &KerrSchedule, params: &CatParams) -> Result<CatResult> {
    let pulse = scale_pulse(schedule, params)?;
    let accumulated_phase = pulse_phase(schedule, &pulse);
    let alpha = Complex64::new(params.alpha, 0.0);
    let rho0 = coherent_state(alpha, params.fock)?;
    let space = FockSpace::new(params.fock)?;
    let jump = Jump::new(space.sparse_annihilation());
    let n2: Vec<f64> = (0..params.fock).map(|n| (n * n) as f64).collect();
    let peak_decay = schedule.decay_at(params.flux_peak);
    let generator = |t: f64| {
        let flux = pulse.flux(t);
        let k = schedule.kerr_at(flux);
        let kappa = if params.constant_decay {
            peak_decay
        } else {
            schedule.decay_at(flux)
        } * params.decay_scale;
        Liouvillian {
            hamiltonian: SparseOperator::diagonal(&n2.iter().map(|v| -0.5 * k * v).collect::<Vec<_>>()),
            collapses: vec![(kappa, &jump)],
        }
    };
    let bound = step_bound(&generator(pulse.ramp + 0.5 * pulse.plateau));
    let dt = params.dt.unwrap_or(bound);
    let tau = pulse.duration();
    let times = uniform_times(tau, params.samples.max(1));
    let trajectory = evolve_lindblad(
        &rho0,
        generator,
        &times,
        EvolveOptions {
            dt,
            keep_states: false,
        },
    )?;
    let (fidelity, rotation_angle) = cat_fidelity(&trajectory.final_state, alpha);
    Ok(CatResult {
        params: *params,
        pulse,
        tau_used: tau,
        accumulated_phase,
        fidelity,
        rotation_angle,
        dt,
        trajectory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cat_state_is_normalized_kerr_image() {
        let alpha = Complex64::new(2.0, 0.0);
        let psi = coherent_amplitudes(alpha, 40);
        // e^{iπn²/2}|α⟩
        let evolved = DVector::from_fn(40, |n, _| psi[n] * Complex64::from_polar(1.0, PI / 2.0 * (n * n) as f64));
        let rho = DensityMatrix::pure(&evolved);
        let (f, _) = cat_fidelity(&rho, alpha);
        assert!((f - 1.0).abs() < 1e-10);
        assert!((cat_state(alpha, 40).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lossless_constant_kerr_makes_a_perfect_cat() {
        let k = 2.0 * PI * 20e6;
        let schedule = KerrSchedule::constant(k, 0.0, 0.0).unwrap();
        let params = CatParams {
            alpha: 2.0,
            fock: 30,
            flux_start: 0.3,
            flux_peak: 0.5,
            ramp: 0.0,
            phase_target: PI,
            constant_decay: false,
            decay_scale: 0.0,
            samples: 10,
            dt: None,
        };
        let r = simulate_cat(&schedule, &params).unwrap();
        assert!((r.tau_used - PI / k).abs() / r.tau_used < 1e-12);
        assert!(r.fidelity > 1.0 - 1e-6, "F = {}", r.fidelity);
        assert!((r.trajectory.purity.last().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn kerr_revival_returns_coherent_state() {
        let k = 1.0;
        let space = FockSpace::new(30).unwrap();
        let jump = Jump::new(space.sparse_annihilation());
        let n2: Vec<f64> = (0..30).map(|n| -0.5 * k * (n * n) as f64).collect();
        let h = SparseOperator::diagonal(&n2);
        let rho0 = coherent_state(Complex64::new(1.5, 0.0), 30).unwrap();
        let gen = |_t: f64| Liouvillian {
            hamiltonian: h.clone(),
            collapses: vec![(0.0, &jump)],
        };
        let bound = step_bound(&gen(0.0));
        let traj = evolve_lindblad(&rho0, gen, &[0.0, 2.0 * PI / k], EvolveOptions { dt: bound, keep_states: false }).unwrap();
        let rho = traj.final_state;
        let best = (0..360)
            .map(|d| {
                let a = Complex64::from_polar(1.5, d as f64 * PI / 180.0);
                rho.overlap(&coherent_amplitudes(a, 30))
            })
            .fold(0.0, f64::max);
        assert!(best > 1.0 - 1e-6, "revival overlap {best}");
    }

    #[test]
    fn unreachable_phase_is_reported() {
        let schedule = KerrSchedule::constant(1e9, 0.0, 0.0).unwrap();
        let params = CatParams {
            alpha: 1.0,
            fock: 20,
            flux_start: 0.3,
            flux_peak: 0.5,
            ramp: 1e-6,
            phase_target: PI,
            constant_decay: false,
            decay_scale: 1.0,
            samples: 2,
            dt: None,
        };
        assert!(matches!(simulate_cat(&schedule, &params), Err(Error::PhaseTargetUnreachable(_))));
    }

    #[test]
    fn undriven_blockade_stays_empty() {
        let p = BlockadeParams {
            frequency: 2.0 * PI * 4e9,
            kerr: 2.0 * PI * 20e6,
            decay: 2.0 * PI * 0.1e6,
            drive: 0.0,
            t_end: 50e-9,
            samples: 10,
            fock: 8,
            frame: BlockadeFrame::Rotating,
            dt: None,
        };
        let r = simulate_blockade(&p).unwrap();
        assert!(r.trajectory.mean_photon.iter().all(|&n| n == 0.0));
    }
}

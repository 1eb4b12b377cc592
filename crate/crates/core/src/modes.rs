//! Normal modes of the linearized resonator + junction circuit.
//!
//! The envelope of mode m is
//!
//! ```text
//! u_m(x) = A_m sin[k_m (x + ℓ) − φ_i]          −ℓ ≤ x < x_J
//! u_m(x) = A_m B_m sin[k'_m (x − ℓ) + φ_o]     x_J < x ≤ ℓ,   k'_m v_r = k_m v_l
//! ```
//!
//! The port phases come from the homogeneous capacitive boundary condition,
//! B_m from current continuity at the junction, and k_m from the remaining
//! junction condition (current = C_J δ̈ + δ/L_J). Normalization uses the
//! capacitance-weighted inner product so that ⟨u_m·u_n⟩ = C_Σ δ_mn.

use serde::Serialize;

use crate::circuit::{effective_josephson_energy, CircuitSpec, LineSegmentSpec, PortSpec};
use crate::constants::{charging_energy_hz, josephson_inductance};
use crate::error::{Error, Result};
use crate::integrals::{cos_cos, sin_sin};
use crate::roots::{bisect, refine, scan_brackets};

/// Linear load presented by the junction to the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum JunctionLoad {
    /// L_J → 0: the junction is a wire and the envelope is continuous.
    Short,
    /// Linearized junction: inductance L_J (H) in parallel with C_J (F).
    Linear { inductance: f64, capacitance: f64 },
}

impl JunctionLoad {
    pub fn at_flux(spec: &CircuitSpec, flux: f64) -> Self {
        let ej = effective_josephson_energy(&spec.junction, flux);
        JunctionLoad::Linear {
            inductance: josephson_inductance(ej),
            capacitance: spec.junction.capacitance,
        }
    }

    fn capacitance(&self) -> f64 {
        match *self {
            JunctionLoad::Short => 0.0,
            JunctionLoad::Linear { capacitance, .. } => capacitance,
        }
    }
}

/// Wavevector scan settings for [`find_modes_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Upper end of the k scan (1/m). `None` picks (M+4)π over the
    /// velocity-weighted line length.
    pub k_max: Option<f64>,
    /// Grid cells per expected root.
    pub points_per_root: usize,
    /// Relative tolerance of the refined roots.
    pub rel_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            k_max: None,
            points_per_root: 2000,
            rel_tol: 1e-12,
        }
    }
}

/// Line geometry and junction load, with everything the residual needs.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    half_length: f64,
    position: f64,
    left: LineSegmentSpec,
    right: LineSegmentSpec,
    ports: PortSpec,
    load: JunctionLoad,
}

/// Trigonometric state of a trial wavevector.
#[derive(Debug, Clone, Copy)]
struct Trial {
    k_right: f64,
    omega: f64,
    phase_in: f64,
    phase_out: f64,
    /// k(x_J + ℓ) − φ_i
    arg_left: f64,
    /// k'(x_J − ℓ) + φ_o
    arg_right: f64,
}

impl Geometry {
    fn new(spec: &CircuitSpec, load: JunctionLoad) -> Self {
        Geometry {
            half_length: spec.half_length,
            position: spec.junction_position,
            left: spec.left,
            right: spec.right,
            ports: spec.ports,
            load,
        }
    }

    fn impedance_ratio(&self) -> f64 {
        self.right.impedance() / self.left.impedance()
    }

    fn trial(&self, k: f64) -> Trial {
        let v_l = self.left.velocity();
        let omega = k * v_l;
        let k_right = omega / self.right.velocity();
        // tan φ = |Z_port / Z_segment| with Z_port = 1/(ωC); φ → π/2 for an open end
        let phase_in = 1f64.atan2(self.left.impedance() * omega * self.ports.input_capacitance);
        let phase_out = 1f64.atan2(self.right.impedance() * omega * self.ports.output_capacitance);
        Trial {
            k_right,
            omega,
            phase_in,
            phase_out,
            arg_left: k * (self.position + self.half_length) - phase_in,
            arg_right: k_right * (self.position - self.half_length) + phase_out,
        }
    }

    /// Junction-condition factor [L⁰_l ℓ / L_J − (kℓ)² C_J / (C⁰_l ℓ)].
    fn junction_factor(&self, k: f64) -> Option<f64> {
        match self.load {
            JunctionLoad::Short => None,
            JunctionLoad::Linear {
                inductance,
                capacitance,
            } => {
                let l = self.half_length;
                Some(
                    self.left.inductance_per_length * l / inductance
                        - (k * l).powi(2) * capacitance / (self.left.capacitance_per_length * l),
                )
            }
        }
    }

    fn residual(&self, k: f64) -> f64 {
        let t = self.trial(k);
        let (s_l, c_l) = t.arg_left.sin_cos();
        let (s_r, c_r) = t.arg_right.sin_cos();
        let bracket = self.impedance_ratio() * s_r * c_l - s_l * c_r;
        match self.junction_factor(k) {
            None => bracket,
            Some(x) => bracket * x - k * self.half_length * c_l * c_r,
        }
    }

    fn default_k_max(&self, count: usize) -> f64 {
        let ratio = self.left.velocity() / self.right.velocity();
        let effective = (self.position + self.half_length) + ratio * (self.half_length - self.position);
        (count + 4) as f64 * std::f64::consts::PI / effective
    }

    fn total_capacitance(&self) -> f64 {
        self.left.capacitance_per_length * (self.position + self.half_length)
            + self.right.capacitance_per_length * (self.half_length - self.position)
            + self.ports.input_capacitance
            + self.ports.output_capacitance
            + self.load.capacitance()
    }
}

/// Pole-free form of the wavevector eigenvalue condition.
///
/// Both sides of the tan-form equation are multiplied by
/// cos[k v_l/v_r (x_J − ℓ) + φ_o] · cos[k (x_J + ℓ) − φ_i], so the residual is
/// smooth in k. Port phases are evaluated self-consistently at ω = k v_l.
/// `ej_hz = None` treats the junction as a short.
pub fn eigenvalue_residual(k: f64, spec: &CircuitSpec, ej_hz: Option<f64>) -> f64 {
    let load = match ej_hz {
        None => JunctionLoad::Short,
        Some(ej) => JunctionLoad::Linear {
            inductance: josephson_inductance(ej),
            capacitance: spec.junction.capacitance,
        },
    };
    Geometry::new(spec, load).residual(k)
}

/// One normal mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeEnvelope {
    /// 1-based mode index.
    pub index: usize,
    /// k_m, left-segment reference (1/m).
    pub wavevector: f64,
    /// k'_m = k_m v_l / v_r (1/m).
    pub right_wavevector: f64,
    /// ω_m (rad/s).
    pub frequency: f64,
    /// A_m
    pub amplitude: f64,
    /// B_m
    pub relative_amplitude: f64,
    /// φ_i (rad)
    pub phase_in: f64,
    /// φ_o (rad)
    pub phase_out: f64,
    /// Δu_m = u_m(x_J⁺) − u_m(x_J⁻)
    pub kink: f64,
    half_length: f64,
    position: f64,
}

impl ModeEnvelope {
    fn left_arg(&self, x: f64) -> f64 {
        self.wavevector * (x + self.half_length) - self.phase_in
    }

    fn right_arg(&self, x: f64) -> f64 {
        self.right_wavevector * (x - self.half_length) + self.phase_out
    }

    /// u_m(x); the left branch is used for x < x_J and the right branch otherwise.
    pub fn value(&self, x: f64) -> f64 {
        if x < self.position {
            self.amplitude * self.left_arg(x).sin()
        } else {
            self.amplitude * self.relative_amplitude * self.right_arg(x).sin()
        }
    }

    /// ∂_x u_m(x), same branch convention as [`ModeEnvelope::value`].
    pub fn slope(&self, x: f64) -> f64 {
        if x < self.position {
            self.amplitude * self.wavevector * self.left_arg(x).cos()
        } else {
            self.amplitude
                * self.relative_amplitude
                * self.right_wavevector
                * self.right_arg(x).cos()
        }
    }

    /// u_m(x_J⁻)
    pub fn value_below_junction(&self) -> f64 {
        self.amplitude * self.left_arg(self.position).sin()
    }

    /// u_m(x_J⁺)
    pub fn value_above_junction(&self) -> f64 {
        self.amplitude * self.relative_amplitude * self.right_arg(self.position).sin()
    }

    /// u_m(−ℓ)
    pub fn value_at_input(&self) -> f64 {
        self.value(-self.half_length)
    }

    /// u_m(ℓ)
    pub fn value_at_output(&self) -> f64 {
        self.amplitude * self.relative_amplitude * self.phase_out.sin()
    }

    /// Upper bound of max_x |u_m(x)|: the larger of the two branch amplitudes.
    pub fn peak_amplitude(&self) -> f64 {
        self.amplitude.abs().max((self.amplitude * self.relative_amplitude).abs())
    }

    /// Δu_m negligible against the envelope scale.
    pub fn is_junction_blind(&self) -> bool {
        self.kink.abs() < 1e-9 * self.peak_amplitude()
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency / (2.0 * std::f64::consts::PI)
    }
}

/// Solved normal-mode family of one circuit at one flux bias.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeBasis {
    pub circuit: CircuitSpec,
    /// External flux (Φ0) at which the junction was linearized.
    pub flux: f64,
    pub load: JunctionLoad,
    pub modes: Vec<ModeEnvelope>,
    /// C_Σ (F)
    pub total_capacitance: f64,
}

impl ModeBasis {
    /// Effective E_J/h (Hz) used for this basis; `None` for a shorted junction.
    pub fn josephson_energy(&self) -> Option<f64> {
        match self.load {
            JunctionLoad::Short => None,
            JunctionLoad::Linear { .. } => {
                Some(effective_josephson_energy(&self.circuit.junction, self.flux))
            }
        }
    }

    pub fn junction_inductance(&self) -> Option<f64> {
        match self.load {
            JunctionLoad::Short => None,
            JunctionLoad::Linear { inductance, .. } => Some(inductance),
        }
    }

    pub fn mode(&self, index: usize) -> &ModeEnvelope {
        &self.modes[index - 1]
    }

    /// Per-mode records for the JSON export.
    pub fn records(&self) -> Vec<ModeRecord> {
        self.modes
            .iter()
            .map(|m| ModeRecord {
                m: m.index,
                k_per_m: m.wavevector,
                omega_rad_s: m.frequency,
                a: m.amplitude,
                b: m.relative_amplitude,
                phi_i: m.phase_in,
                phi_o: m.phase_out,
                delta_u: m.kink,
            })
            .collect()
    }

    /// Samples every envelope on `points` uniform positions across [−ℓ, ℓ],
    /// plus the two one-sided limits at the junction. Rows are (x, u_1..u_M).
    pub fn sample_envelopes(&self, points: usize) -> Vec<(f64, Vec<f64>)> {
        let l = self.circuit.half_length;
        let xj = self.circuit.junction_position;
        let mut rows: Vec<(f64, Vec<f64>)> = Vec::with_capacity(points + 2);
        let mut junction_done = false;
        for i in 0..points {
            let x = -l + 2.0 * l * i as f64 / (points.max(2) - 1) as f64;
            if !junction_done && x >= xj {
                rows.push((xj, self.modes.iter().map(|m| m.value_below_junction()).collect()));
                rows.push((xj, self.modes.iter().map(|m| m.value_above_junction()).collect()));
                junction_done = true;
                if x == xj {
                    continue;
                }
            }
            rows.push((x, self.modes.iter().map(|m| m.value(x)).collect()));
        }
        rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeRecord {
    pub m: usize,
    pub k_per_m: f64,
    pub omega_rad_s: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub phi_i: f64,
    pub phi_o: f64,
    pub delta_u: f64,
}

/// Lowest `count` modes with the junction linearized at `flux`.
pub fn find_modes(spec: &CircuitSpec, flux: f64, count: usize) -> Result<ModeBasis> {
    find_modes_with(spec, flux, JunctionLoad::at_flux(spec, flux), count, &ScanOptions::default())
}

/// Lowest `count` modes of the same line with the junction replaced by a wire
/// and no junction capacitance.
pub fn find_bare_modes(spec: &CircuitSpec, count: usize) -> Result<ModeBasis> {
    let mut bare = *spec;
    bare.junction.capacitance = 0.0;
    find_modes_with(&bare, 0.0, JunctionLoad::Short, count, &ScanOptions::default())
}

pub fn find_modes_with(
    spec: &CircuitSpec,
    flux: f64,
    load: JunctionLoad,
    count: usize,
    options: &ScanOptions,
) -> Result<ModeBasis> {
    spec.validate()?;
    if count == 0 {
        return Err(Error::invalid("modes", "mode count must be at least 1"));
    }
    if let JunctionLoad::Linear { inductance, .. } = load {
        if !(inductance.is_finite() && inductance > 0.0) {
            return Err(Error::invalid(
                "junction",
                format!("effective Josephson energy at flux {flux} is not positive"),
            ));
        }
    }
    let geom = Geometry::new(spec, load);
    let k_max = options.k_max.unwrap_or_else(|| geom.default_k_max(count));
    let points = options.points_per_root * (count + 4);
    let brackets = scan_brackets(|k| geom.residual(k), 0.0, k_max, points)?;

    let total_capacitance = geom.total_capacitance();
    let mut modes = Vec::with_capacity(count);
    for bracket in brackets {
        let k = refine(|k| geom.residual(k), bracket, options.rel_tol)?;
        if let Some(mut mode) = build_envelope(&geom, k, total_capacitance) {
            mode.index = modes.len() + 1;
            modes.push(mode);
            if modes.len() == count {
                break;
            }
        }
    }
    if modes.len() < count {
        return Err(Error::FewerRootsThanRequested {
            found: modes.len(),
            requested: count,
            k_max,
        });
    }
    Ok(ModeBasis {
        circuit: *spec,
        flux,
        load,
        modes,
        total_capacitance,
    })
}

/// Envelope for a root of the residual, or `None` if the root does not satisfy
/// the junction conditions (a spurious zero of the regularized form).
fn build_envelope(geom: &Geometry, k: f64, total_capacitance: f64) -> Option<ModeEnvelope> {
    let t = geom.trial(k);
    let (s_l, c_l) = t.arg_left.sin_cos();
    let (s_r, c_r) = t.arg_right.sin_cos();
    let double_node = c_l.abs() < 1e-8 && c_r.abs() < 1e-8;
    let short = matches!(geom.load, JunctionLoad::Short);
    let relative = if double_node || (short && s_r.abs() >= c_r.abs()) {
        // no current through the junction (or no junction at all): continuity of u
        s_l / s_r
    } else {
        // current continuity; also covers a short sitting on a node of u
        geom.impedance_ratio() * c_l / c_r
    };
    if !relative.is_finite() {
        return None;
    }
    let mut mode = ModeEnvelope {
        index: 0,
        wavevector: k,
        right_wavevector: t.k_right,
        frequency: t.omega,
        amplitude: 1.0,
        relative_amplitude: relative,
        phase_in: t.phase_in,
        phase_out: t.phase_out,
        kink: relative * s_r - s_l,
        half_length: geom.half_length,
        position: geom.position,
    };
    if !junction_conditions_hold(geom, &mode) {
        return None;
    }
    let norm = self_product(geom, &mode);
    let amplitude = (total_capacitance / norm).sqrt();
    mode.amplitude = amplitude;
    mode.kink *= amplitude;
    Some(mode)
}

/// Checks current continuity and the junction constitutive relation on an
/// unnormalized envelope.
fn junction_conditions_hold(geom: &Geometry, mode: &ModeEnvelope) -> bool {
    let i_left = mode.amplitude * mode.wavevector * mode.left_arg(geom.position).cos()
        / geom.left.inductance_per_length;
    let i_right = mode.amplitude
        * mode.relative_amplitude
        * mode.right_wavevector
        * mode.right_arg(geom.position).cos()
        / geom.right.inductance_per_length;
    let scale = mode.peak_amplitude() * mode.wavevector / geom.left.inductance_per_length;
    if (i_left - i_right).abs() > 1e-6 * scale {
        return false;
    }
    match geom.load {
        JunctionLoad::Short => mode.kink.abs() <= 1e-6 * mode.peak_amplitude(),
        JunctionLoad::Linear {
            inductance,
            capacitance,
        } => {
            let admittance = 1.0 / inductance - mode.frequency.powi(2) * capacitance;
            let predicted = mode.kink * admittance;
            let scale = scale.max((mode.peak_amplitude() * admittance).abs());
            (i_left - predicted).abs() <= 1e-6 * scale
        }
    }
}

/// Capacitance-weighted product ⟨u_m·u_n⟩ without the junction term.
fn line_and_port_product(geom: &Geometry, a: &ModeEnvelope, b: &ModeEnvelope) -> f64 {
    let l = geom.half_length;
    let xj = geom.position;
    let left = sin_sin(
        a.wavevector,
        a.wavevector * l - a.phase_in,
        b.wavevector,
        b.wavevector * l - b.phase_in,
        -l,
        xj,
    );
    let right = sin_sin(
        a.right_wavevector,
        -a.right_wavevector * l + a.phase_out,
        b.right_wavevector,
        -b.right_wavevector * l + b.phase_out,
        xj,
        l,
    );
    geom.left.capacitance_per_length * a.amplitude * b.amplitude * left
        + geom.right.capacitance_per_length
            * a.amplitude
            * a.relative_amplitude
            * b.amplitude
            * b.relative_amplitude
            * right
        + geom.ports.input_capacitance * a.value_at_input() * b.value_at_input()
        + geom.ports.output_capacitance * a.value_at_output() * b.value_at_output()
}

/// ∫(1/L⁰) ∂u_m ∂u_n dx over the line.
fn line_slope_product(geom: &Geometry, a: &ModeEnvelope, b: &ModeEnvelope) -> f64 {
    let l = geom.half_length;
    let xj = geom.position;
    let left = cos_cos(
        a.wavevector,
        a.wavevector * l - a.phase_in,
        b.wavevector,
        b.wavevector * l - b.phase_in,
        -l,
        xj,
    );
    let right = cos_cos(
        a.right_wavevector,
        -a.right_wavevector * l + a.phase_out,
        b.right_wavevector,
        -b.right_wavevector * l + b.phase_out,
        xj,
        l,
    );
    a.amplitude * b.amplitude * a.wavevector * b.wavevector * left
        / geom.left.inductance_per_length
        + a.amplitude
            * a.relative_amplitude
            * b.amplitude
            * b.relative_amplitude
            * a.right_wavevector
            * b.right_wavevector
            * right
            / geom.right.inductance_per_length
}

fn self_product(geom: &Geometry, mode: &ModeEnvelope) -> f64 {
    line_and_port_product(geom, mode, mode) + geom.load.capacitance() * mode.kink * mode.kink
}

fn basis_geometry(basis: &ModeBasis) -> Geometry {
    Geometry::new(&basis.circuit, basis.load)
}

/// ⟨u_m·u_n⟩ = ∫C⁰u_m u_n + C_i u_m(−ℓ)u_n(−ℓ) + C_o u_m(ℓ)u_n(ℓ) + C_J Δu_m Δu_n (F).
/// Indices are 1-based.
pub fn inner_product(m: usize, n: usize, basis: &ModeBasis) -> f64 {
    let geom = basis_geometry(basis);
    let (a, b) = (basis.mode(m), basis.mode(n));
    line_and_port_product(&geom, a, b) + geom.load.capacitance() * a.kink * b.kink
}

/// ⟨∂u_m·∂u_n⟩ = ∫(1/L⁰) ∂u_m ∂u_n + Δu_m Δu_n / L_J (1/H). Indices are 1-based.
pub fn derivative_inner_product(m: usize, n: usize, basis: &ModeBasis) -> f64 {
    let geom = basis_geometry(basis);
    let (a, b) = (basis.mode(m), basis.mode(n));
    let junction = match basis.load {
        JunctionLoad::Short => 0.0,
        JunctionLoad::Linear { inductance, .. } => a.kink * b.kink / inductance,
    };
    line_slope_product(&geom, a, b) + junction
}

/// Effective lumped parameters of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeProperties {
    pub index: usize,
    /// ω_m (rad/s)
    pub frequency: f64,
    pub kink: f64,
    /// C̃_m: capacitance seen by the mode outside the junction (F)
    pub resonator_capacitance: f64,
    /// L̃_m: inductance of the line alone (H)
    pub resonator_inductance: f64,
    /// L_m = 1/(C_Σ ω_m²) (H)
    pub mode_inductance: f64,
    /// Rescaled quantities; absent for junction-blind modes.
    pub coupled: Option<CoupledProperties>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoupledProperties {
    /// C'_m = C_Σ/Δu_m² (F)
    pub capacitance: f64,
    /// L'_m = L_m Δu_m² (H)
    pub inductance: f64,
    /// η_c,m = C_J / C'_m
    pub capacitive_participation: f64,
    /// η_l,m = L'_m / L_J
    pub inductive_participation: f64,
    /// E'_C,m = e²/(2C'_m), in Hz
    pub charging_energy: f64,
}

impl ModeProperties {
    pub fn is_coupled(&self) -> bool {
        self.coupled.is_some()
    }

    pub fn inductive_participation(&self) -> Option<f64> {
        self.coupled.map(|c| c.inductive_participation)
    }
}

/// Lumped parameters of every mode, with both participation sum rules checked
/// to 1e-6.
pub fn mode_properties(basis: &ModeBasis) -> Result<Vec<ModeProperties>> {
    let geom = basis_geometry(basis);
    let c_sigma = basis.total_capacitance;
    basis
        .modes
        .iter()
        .map(|mode| {
            let resonator_capacitance = line_and_port_product(&geom, mode, mode);
            let inv_resonator_inductance = line_slope_product(&geom, mode, mode);
            let mode_inductance = 1.0 / (c_sigma * mode.frequency * mode.frequency);
            let coupled = match basis.load {
                JunctionLoad::Linear {
                    inductance,
                    capacitance,
                } if !mode.is_junction_blind() => {
                    let dk2 = mode.kink * mode.kink;
                    let c_prime = c_sigma / dk2;
                    let l_prime = mode_inductance * dk2;
                    let eta_c = capacitance / c_prime;
                    let eta_l = l_prime / inductance;
                    let cap_rule = eta_c + resonator_capacitance / c_sigma - 1.0;
                    let ind_rule = eta_l + mode_inductance * inv_resonator_inductance - 1.0;
                    if cap_rule.abs() > 1e-6 || ind_rule.abs() > 1e-6 {
                        return Err(Error::SumRuleViolation {
                            mode: mode.index,
                            capacitive: cap_rule,
                            inductive: ind_rule,
                        });
                    }
                    Some(CoupledProperties {
                        capacitance: c_prime,
                        inductance: l_prime,
                        capacitive_participation: eta_c,
                        inductive_participation: eta_l,
                        charging_energy: charging_energy_hz(c_prime),
                    })
                }
                _ => None,
            };
            Ok(ModeProperties {
                index: mode.index,
                frequency: mode.frequency,
                kink: mode.kink,
                resonator_capacitance,
                resonator_inductance: 1.0 / inv_resonator_inductance,
                mode_inductance,
                coupled,
            })
        })
        .collect()
}

/// Phase velocity that puts the junction-free fundamental of a uniform line
/// of impedance `impedance` at `target_hz`, solved by bisection.
pub fn calibrate_velocity(
    half_length: f64,
    impedance: f64,
    ports: PortSpec,
    target_hz: f64,
) -> Result<f64> {
    let open_velocity = target_hz * 4.0 * half_length;
    let fundamental = |v: f64| -> f64 {
        let seg = LineSegmentSpec::from_impedance_velocity(impedance, v);
        let spec = CircuitSpec {
            half_length,
            junction_position: 0.0,
            left: seg,
            right: seg,
            ports,
            junction: crate::circuit::JunctionSpec::single(1.0, 0.0),
        };
        match find_bare_modes(&spec, 1) {
            Ok(basis) => basis.modes[0].frequency_hz() - target_hz,
            Err(_) => f64::NAN,
        }
    };
    bisect(fundamental, 0.5 * open_velocity, 2.0 * open_velocity, open_velocity * 1e-14)
}

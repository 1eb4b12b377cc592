//! Physical constants (CODATA 2018, SI).
//!
//! All energies in the crate are carried as equivalent frequencies `E/h` in Hz.

use std::f64::consts::PI;

/// Planck constant (J s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Superconducting flux quantum h/2e (Wb).
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);
/// Reduced flux quantum Φ0/2π (Wb).
pub const REDUCED_FLUX_QUANTUM: f64 = FLUX_QUANTUM / (2.0 * PI);
/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Impedance of free space 1/(ε0 c) (Ω).
pub const VACUUM_IMPEDANCE: f64 = 1.0 / (VACUUM_PERMITTIVITY * SPEED_OF_LIGHT);
/// von Klitzing constant h/e² (Ω).
pub const RESISTANCE_QUANTUM: f64 = PLANCK / (ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);
/// Fine-structure constant Z_vac/(2 R_K).
pub const FINE_STRUCTURE: f64 = VACUUM_IMPEDANCE / (2.0 * RESISTANCE_QUANTUM);

/// Named constants, in a fixed order, for experiment manifests.
pub fn table() -> Vec<(&'static str, f64)> {
    vec![
        ("planck_j_s", PLANCK),
        ("hbar_j_s", HBAR),
        ("elementary_charge_c", ELEMENTARY_CHARGE),
        ("flux_quantum_wb", FLUX_QUANTUM),
        ("vacuum_permittivity_f_per_m", VACUUM_PERMITTIVITY),
        ("speed_of_light_m_per_s", SPEED_OF_LIGHT),
        ("vacuum_impedance_ohm", VACUUM_IMPEDANCE),
        ("resistance_quantum_ohm", RESISTANCE_QUANTUM),
        ("fine_structure", FINE_STRUCTURE),
    ]
}

/// Josephson inductance (Φ0/2π)²/(h E_J) for E_J given in Hz.
pub fn josephson_inductance(ej_hz: f64) -> f64 {
    REDUCED_FLUX_QUANTUM * REDUCED_FLUX_QUANTUM / (PLANCK * ej_hz)
}

/// Charging energy e²/2C expressed in Hz.
pub fn charging_energy_hz(capacitance: f64) -> f64 {
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * capacitance) / PLANCK
}

#![allow(dead_code)]

use kerrline::circuit::{CircuitSpec, JunctionSpec, LineSegmentSpec, PortSpec};

/// Phase velocity that puts the junction-free fundamental of the 1.2 cm, 50 Ω
/// line with 10 fF ports at 4.95 GHz.
pub const VELOCITY: f64 = 119_987_783.226_900_18;
pub const HALF_LENGTH: f64 = 6e-3;

pub fn line() -> LineSegmentSpec {
    LineSegmentSpec::from_impedance_velocity(50.0, VELOCITY)
}

pub fn ports(c: f64) -> PortSpec {
    PortSpec {
        input_capacitance: c,
        output_capacitance: c,
        external_impedance: 50.0,
    }
}

pub fn circuit(position: f64, ports: PortSpec, junction: JunctionSpec) -> CircuitSpec {
    CircuitSpec {
        half_length: HALF_LENGTH,
        junction_position: position,
        left: line(),
        right: line(),
        ports,
        junction,
    }
}

/// SQUID at 3ℓ/4 with weakly coupled ports.
pub fn cat_circuit() -> CircuitSpec {
    circuit(
        0.75 * HALF_LENGTH,
        ports(2.5e-15),
        JunctionSpec::squid(622e9, 0.05, 0.0),
    )
}

/// Symmetric SQUID at ℓ/2 used as a three-mode converter.
pub fn jpc_circuit() -> CircuitSpec {
    circuit(
        0.5 * HALF_LENGTH,
        ports(10e-15),
        JunctionSpec::squid(636e9, 0.0, 0.0),
    )
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

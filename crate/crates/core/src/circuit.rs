//! Physical description of a transmission-line resonator interrupted by a
//! Josephson junction or SQUID, plus ingestion of the JSON config document.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constants;
use crate::error::{Error, Result};

/// Telegrapher parameters of one side of the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSegmentSpec {
    /// C⁰ (F/m)
    pub capacitance_per_length: f64,
    /// L⁰ (H/m)
    pub inductance_per_length: f64,
}

impl LineSegmentSpec {
    pub fn from_impedance_velocity(impedance: f64, velocity: f64) -> Self {
        LineSegmentSpec {
            capacitance_per_length: 1.0 / (impedance * velocity),
            inductance_per_length: impedance / velocity,
        }
    }

    /// Characteristic impedance √(L⁰/C⁰) (Ω).
    pub fn impedance(&self) -> f64 {
        (self.inductance_per_length / self.capacitance_per_length).sqrt()
    }

    /// Phase velocity 1/√(L⁰C⁰) (m/s).
    pub fn velocity(&self) -> f64 {
        1.0 / (self.inductance_per_length * self.capacitance_per_length).sqrt()
    }

    fn validate(&self, path: &str) -> Result<()> {
        positive(&format!("{path}.c_per_m"), self.capacitance_per_length)?;
        positive(&format!("{path}.l_per_m"), self.inductance_per_length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortSpec {
    /// C_i at x = −ℓ (F)
    pub input_capacitance: f64,
    /// C_o at x = +ℓ (F)
    pub output_capacitance: f64,
    /// Load impedance seen through the coupling capacitors; used for decay rates only (Ω).
    pub external_impedance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum JunctionKind {
    Single {
        /// E_J/h (Hz)
        josephson_energy: f64,
    },
    Squid {
        /// E_JΣ/h = (E_J1 + E_J2)/h (Hz)
        total_josephson_energy: f64,
        /// d = |E_J1 − E_J2| / E_JΣ
        asymmetry: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionSpec {
    pub kind: JunctionKind,
    /// C_J (F)
    pub capacitance: f64,
}

impl JunctionSpec {
    pub fn single(josephson_energy: f64, capacitance: f64) -> Self {
        JunctionSpec {
            kind: JunctionKind::Single { josephson_energy },
            capacitance,
        }
    }

    pub fn squid(total_josephson_energy: f64, asymmetry: f64, capacitance: f64) -> Self {
        JunctionSpec {
            kind: JunctionKind::Squid {
                total_josephson_energy,
                asymmetry,
            },
            capacitance,
        }
    }

    pub fn is_squid(&self) -> bool {
        matches!(self.kind, JunctionKind::Squid { .. })
    }

    /// Largest reachable Josephson energy (E_J or E_JΣ), in Hz.
    pub fn max_josephson_energy(&self) -> f64 {
        match self.kind {
            JunctionKind::Single { josephson_energy } => josephson_energy,
            JunctionKind::Squid {
                total_josephson_energy,
                ..
            } => total_josephson_energy,
        }
    }

    /// Asymmetry d, zero for a single junction.
    pub fn asymmetry(&self) -> f64 {
        match self.kind {
            JunctionKind::Single { .. } => 0.0,
            JunctionKind::Squid { asymmetry, .. } => asymmetry,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            JunctionKind::Single { josephson_energy } => {
                positive("junction.ej_hz", josephson_energy)?;
            }
            JunctionKind::Squid {
                total_josephson_energy,
                asymmetry,
            } => {
                positive("junction.ejsigma_hz", total_josephson_energy)?;
                if !(0.0..=1.0).contains(&asymmetry) {
                    return Err(Error::invalid(
                        "junction.d",
                        format!("asymmetry must lie in [0, 1], got {asymmetry}"),
                    ));
                }
            }
        }
        non_negative("junction.cj_f", self.capacitance)
    }
}

/// Effective Josephson energy E_J(Φx) of the junction, in Hz.
///
/// `flux` is the external flux in units of Φ0. A single junction ignores it.
/// For a SQUID this is E_JΣ |cos πΦx| √(1 + d² tan² πΦx), evaluated in the
/// equivalent pole-free form E_JΣ √(cos² πΦx + d² sin² πΦx).
pub fn effective_josephson_energy(junction: &JunctionSpec, flux: f64) -> f64 {
    match junction.kind {
        JunctionKind::Single { josephson_energy } => josephson_energy,
        JunctionKind::Squid {
            total_josephson_energy,
            asymmetry,
        } => {
            let (s, c) = (PI * flux).sin_cos();
            total_josephson_energy * (c * c + asymmetry * asymmetry * s * s).sqrt()
        }
    }
}

/// Gauge phase δ0 with tan δ0 = d tan(πΦx/Φ0), in radians.
///
/// Only reported; it is removed by a gauge transformation before any mode or
/// Kerr computation.
pub fn squid_gauge_phase(junction: &JunctionSpec, flux: f64) -> f64 {
    match junction.kind {
        JunctionKind::Single { .. } => 0.0,
        JunctionKind::Squid { asymmetry, .. } => {
            let (s, c) = (PI * flux).sin_cos();
            (asymmetry * s).atan2(c)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    /// ℓ (m); the resonator spans [−ℓ, ℓ].
    pub half_length: f64,
    /// x_J (m), strictly inside (−ℓ, ℓ).
    pub junction_position: f64,
    pub left: LineSegmentSpec,
    pub right: LineSegmentSpec,
    pub ports: PortSpec,
    pub junction: JunctionSpec,
}

impl CircuitSpec {
    pub fn validate(&self) -> Result<()> {
        positive("resonator.half_length_m", self.half_length)?;
        self.left.validate("resonator.left")?;
        self.right.validate("resonator.right")?;
        non_negative("ports.c_in_f", self.ports.input_capacitance)?;
        non_negative("ports.c_out_f", self.ports.output_capacitance)?;
        positive("ports.z_ext_ohm", self.ports.external_impedance)?;
        self.junction.validate()?;
        let (x, l) = (self.junction_position, self.half_length);
        if !x.is_finite() || x <= -l || x >= l {
            return Err(Error::invalid(
                "junction.position_m",
                format!("junction position {x} m lies outside the resonator (-{l}, {l})"),
            ));
        }
        Ok(())
    }

    /// Length of line to the left of the junction, x_J + ℓ.
    pub fn left_length(&self) -> f64 {
        self.junction_position + self.half_length
    }

    /// Length of line to the right of the junction, ℓ − x_J.
    pub fn right_length(&self) -> f64 {
        self.half_length - self.junction_position
    }

    /// C_Σ = ∫C⁰dx + C_i + C_o + C_J.
    pub fn total_capacitance(&self) -> f64 {
        self.line_capacitance()
            + self.ports.input_capacitance
            + self.ports.output_capacitance
            + self.junction.capacitance
    }

    /// ∫C⁰ dx over the whole line.
    pub fn line_capacitance(&self) -> f64 {
        self.left.capacitance_per_length * self.left_length()
            + self.right.capacitance_per_length * self.right_length()
    }

    /// ∫L⁰ dx over the whole line.
    pub fn line_inductance(&self) -> f64 {
        self.left.inductance_per_length * self.left_length()
            + self.right.inductance_per_length * self.right_length()
    }

    /// Same circuit with the junction moved to `position`.
    pub fn with_junction_position(&self, position: f64) -> Self {
        CircuitSpec {
            junction_position: position,
            ..*self
        }
    }

    /// Same circuit with both ends scaled so the total length is `2 * half_length`,
    /// keeping the junction at the same relative position.
    pub fn with_half_length(&self, half_length: f64) -> Self {
        let rel = self.junction_position / self.half_length;
        CircuitSpec {
            half_length,
            junction_position: rel * half_length,
            ..*self
        }
    }

    pub fn with_junction(&self, junction: JunctionSpec) -> Self {
        CircuitSpec { junction, ..*self }
    }

    pub fn with_ports(&self, ports: PortSpec) -> Self {
        CircuitSpec { ports, ..*self }
    }
}

fn positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be > 0, got {value}")))
    }
}

fn non_negative(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be >= 0, got {value}")))
    }
}

// ---------------------------------------------------------------------------
// Config document

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub c_per_m: f64,
    pub l_per_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorDoc {
    pub half_length_m: f64,
    pub left: SegmentDoc,
    pub right: SegmentDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortsDoc {
    pub c_in_f: f64,
    pub c_out_f: f64,
    pub z_ext_ohm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JunctionDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ejsigma_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    pub cj_f: f64,
    pub position_m: f64,
}

/// Optional experiment settings carried alongside the circuit. Every key is
/// optional; subcommands fall back to their defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDoc {
    pub modes: Option<usize>,
    pub flux: Option<f64>,
    pub flux_rf: Option<f64>,
    pub flux_min: Option<f64>,
    pub flux_max: Option<f64>,
    pub flux_points: Option<usize>,
    pub position_min_m: Option<f64>,
    pub position_max_m: Option<f64>,
    pub position_points: Option<usize>,
    pub ej_min_hz: Option<f64>,
    pub ej_max_hz: Option<f64>,
    pub ej_points: Option<usize>,
    pub half_length_min_m: Option<f64>,
    pub half_length_max_m: Option<f64>,
    pub half_length_points: Option<usize>,
    pub envelope_points: Option<usize>,
    pub fock: Option<usize>,
    pub drive_hz: Option<f64>,
    pub t_end_s: Option<f64>,
    pub samples: Option<usize>,
    pub blockade_fluxes: Option<Vec<f64>>,
    pub blockade_fock: Option<Vec<usize>>,
    pub blockade_t_end_s: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub flux_start: Option<f64>,
    pub flux_peak: Option<f64>,
    pub t_ramp_s: Option<f64>,
    pub constant_kappa: Option<bool>,
    pub wigner_extent: Option<f64>,
    pub wigner_points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub resonator: ResonatorDoc,
    pub ports: PortsDoc,
    pub junction: JunctionDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentDoc>,
}

impl ConfigDocument {
    /// Parses a JSON value, reporting schema errors with their field path.
    pub fn from_value(value: Value) -> Result<Self> {
        serde_path_to_error::deserialize(value).map_err(|err| Error::Schema {
            path: err.path().to_string(),
            message: err.inner().to_string(),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|err| Error::Schema {
            path: ".".into(),
            message: err.to_string(),
        })?;
        Self::from_value(value)
    }

    pub fn to_spec(&self) -> Result<CircuitSpec> {
        let j = &self.junction;
        let kind = match j.kind.as_str() {
            "single" => {
                reject_key("junction.ejsigma_hz", j.ejsigma_hz.is_some(), "single")?;
                reject_key("junction.d", j.d.is_some(), "single")?;
                JunctionKind::Single {
                    josephson_energy: require("junction.ej_hz", j.ej_hz)?,
                }
            }
            "squid" => {
                reject_key("junction.ej_hz", j.ej_hz.is_some(), "squid")?;
                JunctionKind::Squid {
                    total_josephson_energy: require("junction.ejsigma_hz", j.ejsigma_hz)?,
                    asymmetry: require("junction.d", j.d)?,
                }
            }
            other => {
                return Err(Error::Schema {
                    path: "junction.type".into(),
                    message: format!("expected \"single\" or \"squid\", got {other:?}"),
                })
            }
        };
        let spec = CircuitSpec {
            half_length: self.resonator.half_length_m,
            junction_position: j.position_m,
            left: LineSegmentSpec {
                capacitance_per_length: self.resonator.left.c_per_m,
                inductance_per_length: self.resonator.left.l_per_m,
            },
            right: LineSegmentSpec {
                capacitance_per_length: self.resonator.right.c_per_m,
                inductance_per_length: self.resonator.right.l_per_m,
            },
            ports: PortSpec {
                input_capacitance: self.ports.c_in_f,
                output_capacitance: self.ports.c_out_f,
                external_impedance: self.ports.z_ext_ohm,
            },
            junction: JunctionSpec {
                kind,
                capacitance: j.cj_f,
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn experiment(&self) -> ExperimentDoc {
        self.experiment.clone().unwrap_or_default()
    }

    /// Inverse of [`ConfigDocument::to_spec`].
    pub fn from_spec(spec: &CircuitSpec) -> Self {
        let (kind, ej_hz, ejsigma_hz, d) = match spec.junction.kind {
            JunctionKind::Single { josephson_energy } => {
                ("single", Some(josephson_energy), None, None)
            }
            JunctionKind::Squid {
                total_josephson_energy,
                asymmetry,
            } => ("squid", None, Some(total_josephson_energy), Some(asymmetry)),
        };
        ConfigDocument {
            resonator: ResonatorDoc {
                half_length_m: spec.half_length,
                left: SegmentDoc {
                    c_per_m: spec.left.capacitance_per_length,
                    l_per_m: spec.left.inductance_per_length,
                },
                right: SegmentDoc {
                    c_per_m: spec.right.capacitance_per_length,
                    l_per_m: spec.right.inductance_per_length,
                },
            },
            ports: PortsDoc {
                c_in_f: spec.ports.input_capacitance,
                c_out_f: spec.ports.output_capacitance,
                z_ext_ohm: spec.ports.external_impedance,
            },
            junction: JunctionDoc {
                kind: kind.into(),
                ej_hz,
                ejsigma_hz,
                d,
                cj_f: spec.junction.capacitance,
                position_m: spec.junction_position,
            },
            experiment: None,
        }
    }
}

fn require(path: &str, value: Option<f64>) -> Result<f64> {
    value.ok_or_else(|| Error::Schema {
        path: path.into(),
        message: "missing field".into(),
    })
}

fn reject_key(path: &str, present: bool, kind: &str) -> Result<()> {
    if present {
        Err(Error::Schema {
            path: path.into(),
            message: format!("not allowed for junction type {kind:?}"),
        })
    } else {
        Ok(())
    }
}

/// Applies a dotted-path override such as `junction.d=0.1` to a raw JSON
/// document. The value is parsed as JSON when possible, else kept as a string.
/// Only existing keys, or keys the schema allows inside `experiment`, may be set.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let (path, raw) = assignment.split_once('=').ok_or_else(|| Error::Schema {
        path: assignment.into(),
        message: "override must look like key=value".into(),
    })?;
    let value: Value =
        serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    let mut cursor = doc;
    for (i, key) in keys.iter().enumerate() {
        let obj = cursor.as_object_mut().ok_or_else(|| Error::Schema {
            path: keys[..i].join("."),
            message: "not an object".into(),
        })?;
        if i + 1 == keys.len() {
            obj.insert((*key).to_string(), value);
            return Ok(());
        }
        if !obj.contains_key(*key) && *key == "experiment" {
            obj.insert("experiment".into(), Value::Object(Default::default()));
        }
        cursor = obj.get_mut(*key).ok_or_else(|| Error::Schema {
            path: keys[..=i].join("."),
            message: "unknown key".into(),
        })?;
    }
    Ok(())
}

/// Reads, overrides, and validates a config file.
pub fn load_and_validate_spec(
    path: &Path,
    overrides: &[String],
) -> Result<(ConfigDocument, CircuitSpec)> {
    let text = std::fs::read_to_string(path)?;
    let mut value: Value = serde_json::from_str(&text).map_err(|err| Error::Schema {
        path: ".".into(),
        message: err.to_string(),
    })?;
    for assignment in overrides {
        apply_override(&mut value, assignment)?;
    }
    let doc = ConfigDocument::from_value(value)?;
    let spec = doc.to_spec()?;
    Ok((doc, spec))
}

/// Josephson inductance of the junction at a given flux.
pub fn junction_inductance(junction: &JunctionSpec, flux: f64) -> f64 {
    constants::josephson_inductance(effective_josephson_energy(junction, flux))
}

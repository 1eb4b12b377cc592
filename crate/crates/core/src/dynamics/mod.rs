//! Open-system dynamics of a single Kerr mode in a truncated Fock space.

pub mod experiments;
pub mod fock;
pub mod hamiltonian;
pub mod lindblad;
pub mod pulse;
pub mod wigner;

pub use experiments::{
    cat_fidelity, cat_state, count_peaks, scale_pulse, simulate_blockade, simulate_cat, BlockadeFrame,
    BlockadeParams, BlockadeResult, CatParams, CatResult,
};
pub use fock::{coherent_state, DensityMatrix, FockSpace, SparseOperator};
pub use hamiltonian::{single_mode_hamiltonian, two_mode_hamiltonian, DriveSpec, Frame, TwoModeParams};
pub use lindblad::{evolve_lindblad, uniform_times, EvolveOptions, Jump, Liouvillian, Trajectory};
pub use pulse::{FluxPulse, KerrSchedule};
pub use wigner::{symmetric_axis, wigner, WignerGrid};

//! Single-mode Kerr Hamiltonians with a coherent drive, and the two-mode
//! flux-pumped Hamiltonian on a tensor-product space. All operators are H/ħ
//! in rad/s.

use num_complex::Complex64;
use serde::Serialize;

use super::fock::{CMatrix, FockSpace, SparseOperator};
use crate::error::{Error, Result};

/// Coherent drive ε(a† e^{−iω_d t} + a e^{iω_d t}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveSpec {
    /// ε (rad/s)
    pub amplitude: f64,
    /// ω_d (rad/s)
    pub frequency: f64,
}

impl DriveSpec {
    pub fn new(amplitude: f64, frequency: f64) -> Result<Self> {
        if !(amplitude >= 0.0) {
            return Err(Error::invalid("drive.amplitude", "must be nonnegative"));
        }
        Ok(DriveSpec {
            amplitude,
            frequency,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Lab,
    /// Frame rotating at the given frequency (rad/s).
    Rotating(f64),
}

/// ω_eff n − (K/2)n² + drive, expressed in `frame`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeHamiltonian {
    static_part: SparseOperator,
    drive: Option<DriveSpec>,
    /// Drive detuning from the frame (rad/s); the drive is static when zero.
    drive_detuning: f64,
    annihilation: SparseOperator,
}

pub fn single_mode_hamiltonian(
    omega_eff: f64,
    kerr: f64,
    drive: Option<DriveSpec>,
    frame: Frame,
    space: &FockSpace,
) -> SingleModeHamiltonian {
    let reference = match frame {
        Frame::Lab => 0.0,
        Frame::Rotating(w) => w,
    };
    let diag: Vec<f64> = (0..space.dim())
        .map(|n| {
            let n = n as f64;
            (omega_eff - reference) * n - 0.5 * kerr * n * n
        })
        .collect();
    SingleModeHamiltonian {
        static_part: SparseOperator::diagonal(&diag),
        drive,
        drive_detuning: drive.map_or(0.0, |d| d.frequency - reference),
        annihilation: space.sparse_annihilation(),
    }
}

impl SingleModeHamiltonian {
    pub fn is_time_dependent(&self) -> bool {
        self.drive.is_some_and(|d| d.amplitude != 0.0 && self.drive_detuning != 0.0)
    }

    pub fn at(&self, t: f64) -> SparseOperator {
        let mut h = self.static_part.clone();
        if let Some(d) = self.drive {
            if d.amplitude != 0.0 {
                let phase = Complex64::from_polar(d.amplitude, -self.drive_detuning * t);
                // ε e^{−iΔt} a† + ε e^{iΔt} a
                h.add_scaled(&self.annihilation.adjoint(), phase);
                h.add_scaled(&self.annihilation, phase.conj());
            }
        }
        h
    }

    pub fn dense_at(&self, t: f64) -> CMatrix {
        self.at(t).to_dense()
    }
}

/// Parameters of the two-mode pumped Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoModeParams {
    /// ω_i, ω_j (rad/s)
    pub frequencies: [f64; 2],
    /// K_mn (rad/s)
    pub kerr: [[f64; 2]; 2],
    /// g_mn (rad/s)
    pub pump: [[f64; 2]; 2],
    /// ω_d (rad/s)
    pub drive_frequency: f64,
}

pub const MAX_TWO_MODE_DIM: usize = 12;

/// Σ_m ω_m n_m − Σ_mn (K_mn/2) n_m n_n − Σ_mn ½(g_mn e^{−iω_d t} + c.c.)(a_m + a_m†)(a_n + a_n†)
/// on the product space of dimensions `dims`, mode i as the left factor.
pub fn two_mode_hamiltonian(params: &TwoModeParams, dims: [usize; 2], t: f64) -> Result<CMatrix> {
    if dims.iter().any(|&d| !(2..=MAX_TWO_MODE_DIM).contains(&d)) {
        return Err(Error::invalid(
            "fock",
            format!("two-mode dimensions must lie in 2..={MAX_TWO_MODE_DIM}"),
        ));
    }
    let spaces = [FockSpace::new(dims[0])?, FockSpace::new(dims[1])?];
    let eye = [CMatrix::identity(dims[0], dims[0]), CMatrix::identity(dims[1], dims[1])];
    let embed = |m: usize, op: &CMatrix| -> CMatrix {
        if m == 0 {
            op.kronecker(&eye[1])
        } else {
            eye[0].kronecker(op)
        }
    };
    let number = [embed(0, spaces[0].number()), embed(1, spaces[1].number())];
    let quadrature = [
        embed(0, &(spaces[0].annihilation() + spaces[0].creation())),
        embed(1, &(spaces[1].annihilation() + spaces[1].creation())),
    ];
    let dim = dims[0] * dims[1];
    let mut h = CMatrix::zeros(dim, dim);
    let re = |x: f64| Complex64::new(x, 0.0);
    for m in 0..2 {
        h += &number[m] * re(params.frequencies[m]);
        for n in 0..2 {
            h -= &number[m] * &number[n] * re(0.5 * params.kerr[m][n]);
            let pump = 2.0 * params.pump[m][n] * (params.drive_frequency * t).cos();
            h -= &quadrature[m] * &quadrature[n] * re(0.5 * pump);
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undriven_levels() {
        let space = FockSpace::new(8).unwrap();
        let h = single_mode_hamiltonian(3.0, 0.4, None, Frame::Lab, &space).dense_at(0.0);
        for n in 0..8 {
            let nf = n as f64;
            assert!((h[(n, n)].re - (3.0 * nf - 0.2 * nf * nf)).abs() < 1e-14);
        }
        let zero = single_mode_hamiltonian(3.0, 0.0, None, Frame::Rotating(3.0), &space).dense_at(1.0);
        assert_eq!(zero.camax(), 0.0);
    }

    #[test]
    fn blockade_resonance_degenerates_lowest_pair() {
        let space = FockSpace::new(6).unwrap();
        let (w, k) = (40.0, 2.0);
        let h = single_mode_hamiltonian(w, k, None, Frame::Rotating(w - k / 2.0), &space).dense_at(0.0);
        assert!((h[(1, 1)] - h[(0, 0)]).norm() < 1e-14);
        assert!((h[(2, 2)] - h[(1, 1)]).norm() > 1.0);
    }

    #[test]
    fn two_mode_is_hermitian_and_bounded() {
        let p = TwoModeParams {
            frequencies: [5.0, 8.0],
            kerr: [[0.1, 0.2], [0.2, 0.3]],
            pump: [[0.0, 0.05], [0.05, 0.0]],
            drive_frequency: 3.0,
        };
        let h = two_mode_hamiltonian(&p, [4, 5], 0.7).unwrap();
        assert_eq!(h.nrows(), 20);
        assert!((&h - h.adjoint()).camax() < 1e-14);
        assert!(two_mode_hamiltonian(&p, [13, 2], 0.0).is_err());
    }
}

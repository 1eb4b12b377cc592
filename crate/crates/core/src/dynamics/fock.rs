//! Truncated Fock space, sparse operators and density matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Operator stored as (row, column, value) triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    pub dim: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        SparseOperator {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        SparseOperator {
            dim: values.len(),
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, &v)| (i, i, Complex64::new(v, 0.0)))
                .collect(),
        }
    }

    /// Keeps entries with |value| > 0.
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != ZERO {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        SparseOperator {
            dim: m.nrows(),
            entries,
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        SparseOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, j, v)| (j, i, v.conj())).collect(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        SparseOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, j, v)| (i, j, c * v)).collect(),
        }
    }

    /// Concatenates the entries of `other` scaled by `c`.
    pub fn add_scaled(&mut self, other: &SparseOperator, c: Complex64) {
        self.entries
            .extend(other.entries.iter().map(|&(i, j, v)| (i, j, c * v)));
    }

    /// Sums duplicate positions and drops zeros; entries end up in row-major order.
    pub fn compact(&mut self) {
        self.entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut out: Vec<(usize, usize, Complex64)> = Vec::with_capacity(self.entries.len());
        for &(i, j, v) in &self.entries {
            match out.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => out.push((i, j, v)),
            }
        }
        out.retain(|e| e.2 != ZERO);
        self.entries = out;
    }

    /// A†A, computed densely then compacted.
    pub fn adjoint_product(&self) -> Self {
        let d = self.to_dense();
        let mut p = Self::from_dense(&(d.adjoint() * d));
        p.compact();
        p
    }

    /// out += c·A·ρ for column-major ρ.
    pub fn left_apply(&self, rho: &[Complex64], out: &mut [Complex64], c: Complex64) {
        let banded = Banded::new(self, c);
        for (src, dst) in rho.chunks_exact(self.dim).zip(out.chunks_exact_mut(self.dim)) {
            banded.apply_column(src, dst);
        }
    }

    /// Row lists: `rows[i]` holds (k, c·A_ik).
    pub(crate) fn rows(&self, c: Complex64) -> Vec<Vec<(usize, Complex64)>> {
        let mut rows = vec![Vec::new(); self.dim];
        for &(i, k, v) in &self.entries {
            rows[i].push((k, c * v));
        }
        rows
    }

    /// out += c·ρ·A for column-major ρ.
    pub fn right_apply(&self, rho: &[Complex64], out: &mut [Complex64], c: Complex64) {
        let n = self.dim;
        for &(k, j, v) in &self.entries {
            let w = c * v;
            let (src, dst) = (&rho[k * n..(k + 1) * n], &mut out[j * n..(j + 1) * n]);
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * s;
            }
        }
    }

    /// Gershgorin bounds on the real part of the spectrum, returned as max − min.
    pub fn spectral_range_bound(&self) -> f64 {
        let mut center = vec![0.0; self.dim];
        let mut radius = vec![0.0; self.dim];
        for &(i, j, v) in &self.entries {
            if i == j {
                center[i] += v.re;
            } else {
                radius[i] += v.norm();
            }
        }
        let hi = (0..self.dim).map(|i| center[i] + radius[i]).fold(f64::NEG_INFINITY, f64::max);
        let lo = (0..self.dim).map(|i| center[i] - radius[i]).fold(f64::INFINITY, f64::min);
        if self.dim == 0 {
            0.0
        } else {
            hi - lo
        }
    }
}

/// Single-mode Fock space truncated to `dim` levels.
#[derive(Debug, Clone)]
pub struct FockSpace {
    dim: usize,
    annihilation: CMatrix,
    number: CMatrix,
    number_squared: CMatrix,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("fock", "Fock dimension must be at least 2"));
        }
        let mut a = CMatrix::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        let number = CMatrix::from_diagonal(&DVector::from_fn(dim, |i, _| Complex64::new(i as f64, 0.0)));
        let number_squared = &number * &number;
        Ok(FockSpace {
            dim,
            annihilation: a,
            number,
            number_squared,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn annihilation(&self) -> &CMatrix {
        &self.annihilation
    }

    pub fn creation(&self) -> CMatrix {
        self.annihilation.adjoint()
    }

    pub fn number(&self) -> &CMatrix {
        &self.number
    }

    pub fn number_squared(&self) -> &CMatrix {
        &self.number_squared
    }

    pub fn sparse_annihilation(&self) -> SparseOperator {
        SparseOperator {
            dim: self.dim,
            entries: (1..self.dim)
                .map(|n| (n - 1, n, Complex64::new((n as f64).sqrt(), 0.0)))
                .collect(),
        }
    }

    pub fn sparse_number(&self) -> SparseOperator {
        SparseOperator::diagonal(&(0..self.dim).map(|n| n as f64).collect::<Vec<_>>())
    }
}

/// Normalized truncated coherent-state amplitudes e^{−|α|²/2} αⁿ/√n!.
pub fn coherent_amplitudes(alpha: Complex64, dim: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(dim, ZERO);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        v[n] = c;
        c *= alpha / ((n + 1) as f64).sqrt();
    }
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Smallest dimension accepted for a coherent state of amplitude |α|.
pub fn required_dimension(alpha_abs: f64) -> usize {
    (alpha_abs * alpha_abs + 6.0 * alpha_abs + 9.0).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix {
    #[serde(skip)]
    pub matrix: CMatrix,
}

impl DensityMatrix {
    pub fn from_matrix(matrix: CMatrix) -> Self {
        DensityMatrix { matrix }
    }

    pub fn pure(state: &DVector<Complex64>) -> Self {
        DensityMatrix {
            matrix: state * state.adjoint(),
        }
    }

    pub fn vacuum(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(0, 0)] = ONE;
        DensityMatrix { matrix: m }
    }

    pub fn fock(dim: usize, n: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(n, n)] = ONE;
        DensityMatrix { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim()).map(|n| n as f64 * self.matrix[(n, n)].re).sum()
    }

    pub fn population(&self, n: usize) -> f64 {
        self.matrix[(n, n)].re
    }

    /// Tr[ρ A]
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        (&self.matrix * op).trace()
    }

    /// ⟨ψ|ρ|ψ⟩ for a normalized ψ.
    pub fn overlap(&self, psi: &DVector<Complex64>) -> f64 {
        (psi.adjoint() * &self.matrix * psi)[(0, 0)].re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().min()
    }

    /// Trace within 1e-9, Hermitian within 1e-12, eigenvalues above −1e-9.
    pub fn check(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - ONE).norm() > 1e-9 {
            return Err(Error::invalid("rho", format!("trace {tr} differs from 1")));
        }
        let h = self.hermiticity_error();
        if h > 1e-12 {
            return Err(Error::invalid("rho", format!("not Hermitian ({h:.2e})")));
        }
        let e = self.min_eigenvalue();
        if e < -1e-9 {
            return Err(Error::invalid("rho", format!("negative eigenvalue {e:.2e}")));
        }
        Ok(())
    }
}

/// Pure coherent state |α⟩ truncated to `dim` levels and renormalized.
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<DensityMatrix> {
    let required = required_dimension(alpha.norm());
    if dim < required {
        return Err(Error::TruncationTooSmall {
            dim,
            alpha_abs: alpha.norm(),
            required,
        });
    }
    Ok(DensityMatrix::pure(&coherent_amplitudes(alpha, dim)))
}

/// An operator stored by diagonal, so products run over contiguous slices.
pub(crate) struct Banded {
    dim: usize,
    diagonals: Vec<(isize, Vec<Complex64>)>,
}

impl Banded {
    /// c·A
    pub(crate) fn new(op: &SparseOperator, c: Complex64) -> Self {
        let n = op.dim;
        let mut diagonals: Vec<(isize, Vec<Complex64>)> = Vec::new();
        for &(i, k, v) in &op.entries {
            let offset = k as isize - i as isize;
            let slot = match diagonals.iter().position(|d| d.0 == offset) {
                Some(p) => p,
                None => {
                    diagonals.push((offset, vec![ZERO; n - offset.unsigned_abs()]));
                    diagonals.len() - 1
                }
            };
            diagonals[slot].1[i.min(k)] += c * v;
        }
        Banded { dim: n, diagonals }
    }

    /// dst += A·src for one column.
    pub(crate) fn apply_column(&self, src: &[Complex64], dst: &mut [Complex64]) {
        self.apply_column_from(src, dst, 0);
    }

    /// dst[i] += (A·src)[i] for rows i ≥ `first`.
    pub(crate) fn apply_column_from(&self, src: &[Complex64], dst: &mut [Complex64], first: usize) {
        let n = self.dim;
        for (offset, coef) in &self.diagonals {
            let d = offset.unsigned_abs();
            // row i pairs with coef[i] and src[i + d] above the diagonal,
            // coef[i - d] and src[i - d] below it
            if *offset >= 0 {
                if first >= n - d {
                    continue;
                }
                let rows = first..n - d;
                for ((o, w), x) in dst[rows.clone()].iter_mut().zip(&coef[rows.clone()]).zip(&src[rows.start + d..]) {
                    *o += w * x;
                }
            } else {
                let start = first.max(d);
                if start >= n {
                    continue;
                }
                for ((o, w), x) in dst[start..].iter_mut().zip(&coef[start - d..]).zip(&src[start - d..]) {
                    *o += w * x;
                }
            }
        }
    }
}

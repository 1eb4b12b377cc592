//! Wigner quasi-probability W(x, p) = (1/π) Tr[ρ D(β) Π D†(β)] with
//! β = (x + ip)/√2, normalized so that ∫W dx dp = 1.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::fock::DensityMatrix;
use crate::table::Table;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    /// values[i_p * xs.len() + i_x]
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn at(&self, ix: usize, ip: usize) -> f64 {
        self.values[ip * self.xs.len() + ix]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Riemann sum of W over the grid cells.
    pub fn integral(&self) -> f64 {
        let dx = if self.xs.len() > 1 { self.xs[1] - self.xs[0] } else { 1.0 };
        let dp = if self.ps.len() > 1 { self.ps[1] - self.ps[0] } else { 1.0 };
        self.values.iter().sum::<f64>() * dx * dp
    }

    pub fn table(&self) -> Table {
        let mut rows = Vec::with_capacity(self.values.len());
        for (ip, &p) in self.ps.iter().enumerate() {
            for (ix, &x) in self.xs.iter().enumerate() {
                rows.push(vec![x, p, self.at(ix, ip)]);
            }
        }
        Table {
            header: vec!["x".into(), "p".into(), "w".into()],
            rows,
        }
    }
}

/// Symmetric grid of `points` values on [−extent, extent].
pub fn symmetric_axis(extent: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![0.0];
    }
    (0..points)
        .map(|i| -extent + 2.0 * extent * i as f64 / (points - 1) as f64)
        .collect()
}

pub fn wigner(rho: &DensityMatrix, xs: &[f64], ps: &[f64]) -> WignerGrid {
    let n = rho.dim();
    let log_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let points: Vec<(f64, f64)> = ps
        .iter()
        .flat_map(|&p| xs.iter().map(move |&x| (x, p)))
        .collect();
    let values = points
        .par_iter()
        .map(|&(x, p)| {
            let beta = Complex64::new(x, p) / std::f64::consts::SQRT_2;
            displaced_parity(rho, 2.0 * beta, &log_fact) / std::f64::consts::PI
        })
        .collect();
    WignerGrid {
        xs: xs.to_vec(),
        ps: ps.to_vec(),
        values,
    }
}

/// Tr[ρ D(γ) Π] = Σ_mn ρ_nm (−1)ⁿ ⟨m|D(γ)|n⟩.
fn displaced_parity(rho: &DensityMatrix, gamma: Complex64, log_fact: &[f64]) -> f64 {
    let n = rho.dim();
    let m = &rho.matrix;
    let x = gamma.norm_sqr();
    if x == 0.0 {
        return (0..n)
            .map(|k| if k % 2 == 0 { m[(k, k)].re } else { -m[(k, k)].re })
            .sum();
    }
    let (r, theta) = (gamma.norm(), gamma.arg());
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..n {
        // ⟨j+k|D|j⟩ = √(j!/(j+k)!) γᵏ e^{−x/2} L_j^{(k)}(x); the transpose element
        // ⟨j|D|j+k⟩ carries (−γ*)ᵏ instead.
        let kf = k as f64;
        let phase_lower = Complex64::from_polar(1.0, kf * theta);
        let phase_upper = Complex64::from_polar(if k % 2 == 0 { 1.0 } else { -1.0 }, -kf * theta);
        let (mut l_prev, mut l) = (0.0, 1.0);
        for j in 0..(n - k) {
            if j == 1 {
                l_prev = 1.0;
                l = 1.0 + kf - x;
            } else if j > 1 {
                let jf = (j - 1) as f64;
                let next = ((2.0 * jf + 1.0 + kf - x) * l - (jf + kf) * l_prev) / (jf + 1.0);
                l_prev = l;
                l = next;
            }
            let log_pref = 0.5 * (log_fact[j] - log_fact[j + k]) - 0.5 * x + kf * r.ln();
            let d = log_pref.exp() * l;
            let sign_j = if j % 2 == 0 { 1.0 } else { -1.0 };
            // ρ_{n,m} ⟨m|D|n⟩ (−1)ⁿ with (m, n) = (j+k, j)
            total += m[(j, j + k)] * phase_lower * (d * sign_j);
            if k > 0 {
                let sign_jk = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
                // (m, n) = (j, j+k)
                total += m[(j + k, j)] * phase_upper * (d * sign_jk);
            }
        }
    }
    total.re
}

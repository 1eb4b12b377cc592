//! Fixed-step RK4 integration of the Lindblad master equation.

use num_complex::Complex64;
use serde::Serialize;

use super::fock::{Banded, CMatrix, DensityMatrix, SparseOperator};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A collapse operator L with its cached L†L.
#[derive(Debug, Clone, PartialEq)]
pub struct Jump {
    pub op: SparseOperator,
    op_adjoint: SparseOperator,
    op_dag_op: SparseOperator,
}

impl Jump {
    pub fn new(op: SparseOperator) -> Self {
        let op_adjoint = op.adjoint();
        let op_dag_op = op.adjoint_product();
        Jump {
            op,
            op_adjoint,
            op_dag_op,
        }
    }
}

/// Generator at one instant: H/ħ (rad/s) and collapse channels with rates (1/s).
pub struct Liouvillian<'a> {
    pub hamiltonian: SparseOperator,
    pub collapses: Vec<(f64, &'a Jump)>,
}

impl Liouvillian<'_> {
    /// Largest rate the integrator has to resolve: the Hamiltonian spectral
    /// range or the total loss rate scaled by the top Fock level.
    pub fn max_rate(&self) -> f64 {
        let dim = self.hamiltonian.dim as f64;
        let loss: f64 = self.collapses.iter().map(|(k, _)| k).sum();
        self.hamiltonian.spectral_range_bound().max(loss * (dim - 1.0).max(1.0))
    }

    /// dρ/dt = Gρ + ρG† + Σ κ LρL† with G = −iH − ½Σ κ L†L, for Hermitian ρ.
    /// Only the lower triangle is computed, column by column, and mirrored,
    /// so the output is exactly Hermitian:
    /// (ρG†)[:, j] = Σ_k conj(G_jk)·ρ[:, k] and (LρL†)[:, j] = Σ_k conj(L_jk)·L·ρ[:, k].
    fn apply(&self, rho: &[Complex64], out: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = self.hamiltonian.dim;
        let one = Complex64::new(1.0, 0.0);
        let conj_rows = |op: &SparseOperator| -> Vec<Vec<(usize, Complex64)>> {
            op.rows(one)
                .into_iter()
                .map(|r| r.into_iter().map(|(k, v)| (k, v.conj())).collect())
                .collect()
        };
        let mut g = self.hamiltonian.scaled(-I);
        let mut jumps = Vec::new();
        for &(rate, jump) in &self.collapses {
            if rate != 0.0 {
                g.add_scaled(&jump.op_dag_op, Complex64::new(-0.5 * rate, 0.0));
                jumps.push((Banded::new(&jump.op, Complex64::new(rate, 0.0)), conj_rows(&jump.op)));
            }
        }
        g.compact();
        let g_rows = conj_rows(&g);
        let g = Banded::new(&g, one);
        let column = &mut scratch[..n];
        for j in 0..n {
            let dst = &mut out[j * n..(j + 1) * n];
            dst[j..].fill(ZERO);
            g.apply_column_from(&rho[j * n..(j + 1) * n], dst, j);
            for &(k, w) in &g_rows[j] {
                for (d, x) in dst[j..].iter_mut().zip(&rho[k * n + j..(k + 1) * n]) {
                    *d += w * x;
                }
            }
            for (op, rows) in &jumps {
                for &(k, w) in &rows[j] {
                    column[j..].fill(ZERO);
                    op.apply_column_from(&rho[k * n..(k + 1) * n], column, j);
                    for (d, c) in dst[j..].iter_mut().zip(&column[j..]) {
                        *d += w * c;
                    }
                }
            }
            dst[j].im = 0.0;
        }
        const TILE: usize = 32;
        for jb in (0..n).step_by(TILE) {
            for ib in (jb..n).step_by(TILE) {
                for j in jb..(jb + TILE).min(n) {
                    for i in ib.max(j + 1)..(ib + TILE).min(n) {
                        out[i * n + j] = out[j * n + i].conj();
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Sample times (s).
    pub times: Vec<f64>,
    pub mean_photon: Vec<f64>,
    /// ⟨1|ρ|1⟩
    pub p1: Vec<f64>,
    pub purity: Vec<f64>,
    /// Largest |Tr ρ − 1| seen before renormalization.
    pub max_trace_drift: f64,
    /// Largest ‖ρ − ρ†‖_max over the samples.
    pub max_hermiticity_error: f64,
    pub steps: usize,
    #[serde(skip)]
    pub states: Vec<DensityMatrix>,
    #[serde(skip)]
    pub final_state: DensityMatrix,
}

impl Trajectory {
    pub fn table(&self) -> crate::table::Table {
        crate::table::Table {
            header: ["t_ns", "n_mean", "p1", "purity"].iter().map(|s| s.to_string()).collect(),
            rows: (0..self.times.len())
                .map(|i| vec![self.times[i] * 1e9, self.mean_photon[i], self.p1[i], self.purity[i]])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Upper bound on the RK4 step (s).
    pub dt: f64,
    /// Keep ρ at every sample time.
    pub keep_states: bool,
}

const TRACE_TOLERANCE: f64 = 1e-6;
const STEP_SAFETY: f64 = 0.05;

/// Largest admissible step for a generator: 0.05 / max-rate.
pub fn step_bound(l: &Liouvillian) -> f64 {
    let rate = l.max_rate();
    if rate > 0.0 {
        STEP_SAFETY / rate
    } else {
        f64::INFINITY
    }
}

/// Integrates dρ/dt = −i[H,ρ] + Σ_j κ_j(L_j ρ L_j† − ½{L_j†L_j, ρ}) from
/// `times[0]` through every sample time. Each interval is cut into equal
/// steps no longer than `options.dt`. The trace is renormalized after every
/// step; a drift above 1e-6 is an error.
pub fn evolve_lindblad<'a, G>(
    rho0: &DensityMatrix,
    generator: G,
    times: &[f64],
    options: EvolveOptions,
) -> Result<Trajectory>
where
    G: Fn(f64) -> Liouvillian<'a>,
{
    if times.is_empty() || times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::invalid("times", "sample times must be nondecreasing and nonempty"));
    }
    if !(options.dt > 0.0) {
        return Err(Error::invalid("dt", "time step must be positive"));
    }
    let probes = [times[0], 0.5 * (times[0] + times[times.len() - 1]), times[times.len() - 1]];
    let bound = probes
        .iter()
        .map(|&t| step_bound(&generator(t)))
        .fold(f64::INFINITY, f64::min);
    if options.dt > bound {
        return Err(Error::StepTooLarge {
            dt: options.dt,
            bound,
        });
    }

    let n = rho0.dim();
    let len = n * n;
    let mut rho: Vec<Complex64> = rho0.matrix.as_slice().to_vec();
    let mut k = [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]];
    let mut stage = vec![ZERO; len];
    let mut scratch = vec![ZERO; len];

    let mut traj = Trajectory {
        times: Vec::with_capacity(times.len()),
        mean_photon: Vec::with_capacity(times.len()),
        p1: Vec::with_capacity(times.len()),
        purity: Vec::with_capacity(times.len()),
        max_trace_drift: 0.0,
        max_hermiticity_error: 0.0,
        steps: 0,
        states: Vec::new(),
        final_state: rho0.clone(),
    };
    let record = |t: f64, rho: &[Complex64], traj: &mut Trajectory| {
        let state = DensityMatrix::from_matrix(CMatrix::from_column_slice(n, n, rho));
        traj.times.push(t);
        traj.mean_photon.push(state.mean_photon_number());
        traj.p1.push(if n > 1 { state.population(1) } else { 0.0 });
        traj.purity.push(state.purity());
        traj.max_hermiticity_error = traj.max_hermiticity_error.max(state.hermiticity_error());
        if options.keep_states {
            traj.states.push(state.clone());
        }
        traj.final_state = state;
    };
    record(times[0], &rho, &mut traj);

    for w in times.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let span = t1 - t0;
        if span == 0.0 {
            record(t1, &rho, &mut traj);
            continue;
        }
        let steps = (span / options.dt).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for s in 0..steps {
            let t = t0 + h * s as f64;
            let l_start = generator(t);
            let l_mid = generator(t + 0.5 * h);
            let l_end = generator(t + h);

            l_start.apply(&rho, &mut k[0], &mut scratch);
            axpy(&rho, &k[0], 0.5 * h, &mut stage);
            l_mid.apply(&stage, &mut k[1], &mut scratch);
            axpy(&rho, &k[1], 0.5 * h, &mut stage);
            l_mid.apply(&stage, &mut k[2], &mut scratch);
            axpy(&rho, &k[2], h, &mut stage);
            l_end.apply(&stage, &mut k[3], &mut scratch);
            for i in 0..len {
                rho[i] += (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]) * (h / 6.0);
            }

            let tr: Complex64 = (0..n).map(|i| rho[i * n + i]).sum();
            let drift = (tr - Complex64::new(1.0, 0.0)).norm();
            traj.max_trace_drift = traj.max_trace_drift.max(drift);
            if drift > TRACE_TOLERANCE {
                return Err(Error::TraceDrift {
                    drift,
                    time: t + h,
                });
            }
            let inv = 1.0 / tr.re;
            rho.iter_mut().for_each(|z| *z *= inv);
            traj.steps += 1;
        }
        record(t1, &rho, &mut traj);
    }
    if traj.max_trace_drift > 1e-10 {
        log::debug!("trace renormalized; largest drift {:.3e}", traj.max_trace_drift);
    }
    Ok(traj)
}

fn axpy(x: &[Complex64], y: &[Complex64], a: f64, out: &mut [Complex64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + yi * a;
    }
}

/// Uniform grid of `samples` + 1 times on [0, t_end].
pub fn uniform_times(t_end: f64, samples: usize) -> Vec<f64> {
    (0..=samples).map(|i| t_end * i as f64 / samples as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::fock::{coherent_state, FockSpace};

    #[test]
    fn linear_cavity_decay_law() {
        let space = FockSpace::new(30).unwrap();
        let jump = Jump::new(space.sparse_annihilation());
        let kappa = 1.0;
        let rho0 = coherent_state(Complex64::new(1.5, 0.5), 30).unwrap();
        let gen = |_t: f64| Liouvillian {
            hamiltonian: SparseOperator::zeros(30),
            collapses: vec![(kappa, &jump)],
        };
        let times = uniform_times(2.0, 20);
        let traj = evolve_lindblad(&rho0, gen, &times, EvolveOptions { dt: 1e-3, keep_states: false }).unwrap();
        for (t, n) in traj.times.iter().zip(&traj.mean_photon) {
            let want = 2.5 * (-kappa * t).exp();
            assert!((n - want).abs() / want < 1e-6, "t={t}: {n} vs {want}");
        }
    }

    #[test]
    fn step_bound_enforced() {
        let space = FockSpace::new(10).unwrap();
        let h = space.sparse_number().scaled(Complex64::new(100.0, 0.0));
        let rho0 = DensityMatrix::vacuum(10);
        let gen = |_t: f64| Liouvillian {
            hamiltonian: h.clone(),
            collapses: vec![],
        };
        let err = evolve_lindblad(&rho0, gen, &[0.0, 1.0], EvolveOptions { dt: 1e-3, keep_states: false });
        assert!(matches!(err, Err(Error::StepTooLarge { .. })));
    }
}

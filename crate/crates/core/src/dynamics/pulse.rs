//! Flux pulses and flux-indexed tables of mode parameters.

use serde::Serialize;

use crate::error::{Error, Result};

/// Raised-cosine excursion Φ_start → Φ_peak → Φ_start (fluxes in Φ0, times in s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxPulse {
    pub start: f64,
    pub peak: f64,
    pub ramp: f64,
    pub plateau: f64,
}

impl FluxPulse {
    pub fn duration(&self) -> f64 {
        2.0 * self.ramp + self.plateau
    }

    /// Fraction of the excursion reached at time t, in [0, 1].
    pub fn shape(&self, t: f64) -> f64 {
        let (r, p) = (self.ramp, self.plateau);
        if t <= 0.0 || t >= 2.0 * r + p {
            0.0
        } else if t < r {
            0.5 * (1.0 - (std::f64::consts::PI * t / r).cos())
        } else if t <= r + p {
            1.0
        } else {
            0.5 * (1.0 + (std::f64::consts::PI * (t - r - p) / r).cos())
        }
    }

    pub fn flux(&self, t: f64) -> f64 {
        self.start + (self.peak - self.start) * self.shape(t)
    }
}

/// Piecewise-cubic monotone (Fritsch–Carlson) interpolant on a strictly
/// increasing grid; clamps outside the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n || x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("schedule", "need at least two strictly increasing grid points"));
        }
        let secant: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i])).collect();
        let mut slope = vec![0.0; n];
        slope[0] = secant[0];
        slope[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            slope[i] = if secant[i - 1] * secant[i] <= 0.0 {
                0.0
            } else {
                let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
                let (w0, w1) = (2.0 * h1 + h0, h1 + 2.0 * h0);
                (w0 + w1) / (w0 / secant[i - 1] + w1 / secant[i])
            };
        }
        Ok(MonotoneCubic { x, y, slope })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.x.partition_point(|&v| v <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.y[i]
            + (s3 - 2.0 * s2 + s) * h * self.slope[i]
            + (-2.0 * s3 + 3.0 * s2) * self.y[i + 1]
            + (s3 - s2) * h * self.slope[i + 1]
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }
}

/// K(Φ), ω_r(Φ) and κ(Φ) of one mode, tabulated on a flux grid. K is
/// interpolated in log space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KerrSchedule {
    pub fluxes: Vec<f64>,
    /// K (rad/s)
    pub kerr: Vec<f64>,
    /// ω_r (rad/s)
    pub frequency: Vec<f64>,
    /// κ (1/s)
    pub decay: Vec<f64>,
    #[serde(skip)]
    log_kerr: MonotoneCubic,
    #[serde(skip)]
    decay_interp: MonotoneCubic,
}

impl KerrSchedule {
    pub fn new(fluxes: Vec<f64>, kerr: Vec<f64>, frequency: Vec<f64>, decay: Vec<f64>) -> Result<Self> {
        if kerr.iter().any(|&k| !(k > 0.0)) {
            return Err(Error::invalid("schedule", "Kerr coefficients must be positive"));
        }
        let log_kerr = MonotoneCubic::new(fluxes.clone(), kerr.iter().map(|k| k.ln()).collect())?;
        let decay_interp = MonotoneCubic::new(fluxes.clone(), decay.clone())?;
        if frequency.len() != fluxes.len() {
            return Err(Error::invalid("schedule", "column lengths differ"));
        }
        Ok(KerrSchedule {
            fluxes,
            kerr,
            frequency,
            decay,
            log_kerr,
            decay_interp,
        })
    }

    /// Constant parameters, independent of flux.
    pub fn constant(kerr: f64, frequency: f64, decay: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![kerr; 2], vec![frequency; 2], vec![decay; 2])
    }

    pub fn kerr_at(&self, flux: f64) -> f64 {
        self.log_kerr.eval(flux).exp()
    }

    pub fn decay_at(&self, flux: f64) -> f64 {
        self.decay_interp.eval(flux)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.log_kerr.domain()
    }
}

/// Composite Simpson rule with `intervals` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * i as f64);
    }
    s * h / 3.0
}

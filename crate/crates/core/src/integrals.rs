//! Closed-form integrals of products of sinusoids over a finite interval.

/// ∫_{x0}^{x1} cos(w x + p) dx, stable as w → 0.
pub fn cos_integral(w: f64, p: f64, x0: f64, x1: f64) -> f64 {
    let half = 0.5 * (x1 - x0);
    let mid = 0.5 * (x1 + x0);
    2.0 * half * (w * mid + p).cos() * sinc(w * half)
}

/// ∫_{x0}^{x1} sin(a x + b) sin(c x + d) dx.
pub fn sin_sin(a: f64, b: f64, c: f64, d: f64, x0: f64, x1: f64) -> f64 {
    0.5 * (cos_integral(a - c, b - d, x0, x1) - cos_integral(a + c, b + d, x0, x1))
}

/// ∫_{x0}^{x1} cos(a x + b) cos(c x + d) dx.
pub fn cos_cos(a: f64, b: f64, c: f64, d: f64, x0: f64, x1: f64) -> f64 {
    0.5 * (cos_integral(a - c, b - d, x0, x1) + cos_integral(a + c, b + d, x0, x1))
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + h * i as f64);
        }
        s * h / 3.0
    }

    #[test]
    fn products_match_quadrature() {
        let cases = [
            (3.0, 0.2, 5.0, -0.4),
            (2.0, 0.1, 2.0, 0.1),
            (2.0, 0.1, 2.0 + 1e-9, 0.3),
            (7.5, 1.0, 0.5, 2.0),
        ];
        for &(a, b, c, d) in &cases {
            let (x0, x1) = (-0.7, 1.3);
            let ss = simpson(|x| (a * x + b).sin() * (c * x + d).sin(), x0, x1, 4000);
            let cc = simpson(|x| (a * x + b).cos() * (c * x + d).cos(), x0, x1, 4000);
            assert!((sin_sin(a, b, c, d, x0, x1) - ss).abs() < 1e-10);
            assert!((cos_cos(a, b, c, d, x0, x1) - cc).abs() < 1e-10);
        }
    }
}

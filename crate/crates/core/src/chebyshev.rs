//! Piecewise Chebyshev interpolation on uniform panels.

use std::f64::consts::PI;

/// Chebyshev series on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl ChebyshevSeries {
    /// Interpolates `f` at the `degree + 1` Chebyshev points of the first kind.
    pub fn fit<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, degree: usize) -> Self {
        let n = degree + 1;
        let samples: Vec<f64> = (0..n)
            .map(|k| {
                let theta = PI * (k as f64 + 0.5) / n as f64;
                f(0.5 * (a + b) + 0.5 * (b - a) * theta.cos())
            })
            .collect();
        let coeffs = (0..n)
            .map(|j| {
                let s: f64 = samples
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                    .sum();
                let c = 2.0 * s / n as f64;
                if j == 0 {
                    c / 2.0
                } else {
                    c
                }
            })
            .collect();
        Self { a, b, coeffs }
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let u = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + self.coeffs[0]
    }
}

/// Equal-width panels covering `[start, start + width·len)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseChebyshev {
    start: f64,
    width: f64,
    panels: Vec<ChebyshevSeries>,
}

impl PiecewiseChebyshev {
    pub fn fit<F: Fn(f64) -> f64 + Sync>(f: F, start: f64, end: f64, width: f64, degree: usize) -> Self {
        use rayon::prelude::*;
        let count = ((end - start) / width).ceil().max(1.0) as usize;
        let panels = (0..count)
            .into_par_iter()
            .map(|i| {
                let a = start + width * i as f64;
                ChebyshevSeries::fit(&f, a, a + width, degree)
            })
            .collect();
        Self {
            start,
            width,
            panels,
        }
    }

    pub fn end(&self) -> f64 {
        self.start + self.width * self.panels.len() as f64
    }

    /// `None` outside the covered range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        if x < self.start || x > self.end() {
            return None;
        }
        let i = (((x - self.start) / self.width) as usize).min(self.panels.len() - 1);
        Some(self.panels[i].eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_polynomials_and_smooth_functions() {
        let s = ChebyshevSeries::fit(|x| 3.0 * x * x * x - x + 2.0, -2.0, 5.0, 3);
        for x in [-2.0, 0.3, 4.9] {
            assert!((s.eval(x) - (3.0 * x * x * x - x + 2.0)).abs() < 1e-12);
        }
        let p = PiecewiseChebyshev::fit(f64::sin, 0.0, 20.0, PI / 4.0, 16);
        for i in 0..=200 {
            let x = 0.1 * i as f64;
            assert!((p.eval(x).unwrap() - x.sin()).abs() < 1e-14, "x={x}");
        }
        assert!(p.eval(-0.1).is_none());
        assert!(p.eval(p.end() + 1.0).is_none());
    }
}

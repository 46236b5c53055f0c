//! Sampled functions on the periodized box `[-L, L)^d`, their discrete
//! Fourier transforms, and `L^p` norms.
//!
//! The transform convention is `f̂(ξ) = ∫ e^{-iξ·x} f(x) dx`, discretized as
//! `coeffs[j] = spacing^d · Σ_x e^{-iξ_j·x} values[x]` with
//! `ξ_j = π j / L`, `j ∈ {-N/2, …, N/2 - 1}` per axis. Coefficients are
//! stored in FFT order along every axis (non-negative frequencies first).

mod io;
mod radial;

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{domain, Error, Result};

pub use io::{read_descriptor, read_raw_values, write_raw_values, FieldDescriptor};
pub use radial::{FarField, RadialRule, RadialSpectrum};

/// Uniform grid on `[-L, L)^d` with `N` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    half_extent: f64,
    samples: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_extent: f64, samples: usize) -> Result<Self> {
        if dim < 1 {
            return Err(domain("grid dimension must be at least 1"));
        }
        if !(half_extent > 0.0 && half_extent.is_finite()) {
            return Err(domain(format!("half_extent must be positive, got {half_extent}")));
        }
        if samples < 4 || !samples.is_multiple_of(2) {
            return Err(domain(format!(
                "samples per axis must be even and at least 4, got {samples}"
            )));
        }
        samples
            .checked_pow(dim as u32)
            .ok_or_else(|| domain("grid too large"))?;
        Ok(Self {
            dim,
            half_extent,
            samples,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.samples as f64
    }

    /// Total number of grid points, `N^d`.
    pub fn len(&self) -> usize {
        self.samples.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of sample `i` along any axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.spacing()
    }

    /// Signed frequency index of storage slot `i` (FFT order).
    pub fn frequency_index(&self, i: usize) -> i64 {
        let n = self.samples as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    pub fn frequency(&self, i: usize) -> f64 {
        PI * self.frequency_index(i) as f64 / self.half_extent
    }

    pub fn frequency_spacing(&self) -> f64 {
        PI / self.half_extent
    }

    pub fn nyquist(&self) -> f64 {
        PI * self.samples as f64 / (2.0 * self.half_extent)
    }

    pub fn axis_coordinates(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.coordinate(i)).collect()
    }

    pub fn axis_frequencies(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.frequency(i)).collect()
    }

    /// Row-major multi-index of a flat index (axis 0 varies slowest).
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.samples;
            flat /= self.samples;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.samples + i)
    }

    /// `|ξ|` at every storage slot of a spectrum on this grid.
    pub fn frequency_norms(&self) -> Vec<f64> {
        let freqs = self.axis_frequencies();
        let mut out = Vec::with_capacity(self.len());
        for flat in 0..self.len() {
            let idx = self.unravel(flat);
            let r2: f64 = idx.iter().map(|&i| freqs[i] * freqs[i]).sum();
            out.push(r2.sqrt());
        }
        out
    }
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    match values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Function values on a [`GridSpec`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(domain(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid,
        }
    }

    /// Sample `f` at every grid point.
    pub fn from_fn<F>(grid: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let coords = grid.axis_coordinates();
        let mut x = vec![0.0; grid.dim()];
        let mut values = Vec::with_capacity(grid.len());
        for flat in 0..grid.len() {
            for (a, i) in grid.unravel(flat).into_iter().enumerate() {
                x[a] = coords[i];
            }
            values.push(f(&x));
        }
        Self::new(grid, values)
    }

    /// Real-valued convenience wrapper around [`SampledField::from_fn`].
    pub fn from_real_fn<F>(grid: GridSpec, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Discrete Fourier transform of a [`SampledField`], scaled to approximate `f̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(domain(format!(
                "spectrum has {} coefficients, grid needs {}",
                coeffs.len(),
                grid.len()
            )));
        }
        check_finite(&coeffs)?;
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }
}

fn fft_all_axes(data: &mut [Complex64], grid: &GridSpec, direction: FftDirection) {
    let n = grid.samples();
    let d = grid.dim();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft(n, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let outer = n.pow(axis as u32);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

/// `(-1)^{Σ i_a}`: the phase `e^{-iξ_j·x_0}` of the box corner `x_0 = (-L, …, -L)`.
fn corner_phase_sign(grid: &GridSpec, flat: usize) -> f64 {
    let parity: usize = grid.unravel(flat).iter().sum();
    if parity.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Forward transform: `coeffs[j] = spacing^d Σ_x e^{-iξ_j·x} values[x]`.
pub fn dft(field: &SampledField) -> Result<Spectrum> {
    check_finite(field.values())?;
    let grid = *field.grid();
    let mut data = field.values().to_vec();
    fft_all_axes(&mut data, &grid, FftDirection::Forward);
    let scale = grid.spacing().powi(grid.dim() as i32);
    for (flat, c) in data.iter_mut().enumerate() {
        *c *= scale * corner_phase_sign(&grid, flat);
    }
    Spectrum::new(grid, data)
}

/// Inverse of [`dft`].
pub fn idft(spectrum: &Spectrum) -> Result<SampledField> {
    check_finite(spectrum.coeffs())?;
    let grid = *spectrum.grid();
    let mut data: Vec<Complex64> = spectrum
        .coeffs()
        .iter()
        .enumerate()
        .map(|(flat, c)| c * corner_phase_sign(&grid, flat))
        .collect();
    fft_all_axes(&mut data, &grid, FftDirection::Inverse);
    let scale = 1.0 / (grid.spacing().powi(grid.dim() as i32) * grid.len() as f64);
    for v in data.iter_mut() {
        *v *= scale;
    }
    SampledField::new(grid, data)
}

pub(crate) fn check_exponent(p: f64, name: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(domain(format!("{name} must be in [1, inf], got {p}")));
    }
    Ok(())
}

/// Riemann-sum `L^p` norm of a field; `p = f64::INFINITY` gives the grid maximum.
pub fn lp_norm(field: &SampledField, p: f64) -> Result<f64> {
    check_exponent(p, "p")?;
    Ok(lp_norm_values(field.values(), field.grid(), p))
}

pub(crate) fn lp_norm_values(values: &[Complex64], grid: &GridSpec, p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let cell = grid.spacing().powi(grid.dim() as i32);
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v.norm_sqr()).sum()
    } else if p == 1.0 {
        values.iter().map(|v| v.norm()).sum()
    } else {
        values.iter().map(|v| v.norm().powf(p)).sum()
    };
    (sum * cell).powf(1.0 / p)
}

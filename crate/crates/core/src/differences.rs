//! Finite differences `Δ_y^m f(x) = Σ_k (-1)^{m-k} C(m,k) f(x + k y)`, their
//! fractional extension through the multiplier `(e^{iy·ξ} - 1)^m`, and the
//! directional modulus `δ_{p,m}[f](y) = ‖Δ_y^m f‖_p`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::field::{check_exponent, dft, idft, lp_norm_values, GridSpec, SampledField, Spectrum};

/// Order `m > 0` of a difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceOrder {
    m: f64,
}

impl DifferenceOrder {
    pub fn new(m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(domain(format!("difference order must be positive, got {m}")));
        }
        Ok(Self { m })
    }

    pub fn value(&self) -> f64 {
        self.m
    }

    pub fn is_integer(&self) -> bool {
        self.m.fract() == 0.0 && self.m <= u32::MAX as f64
    }

    pub fn as_integer(&self) -> Option<u32> {
        self.is_integer().then_some(self.m as u32)
    }
}

/// A step rounded to the nearest grid vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SnappedStep {
    pub cells: Vec<i64>,
    pub step: Vec<f64>,
    /// Euclidean distance between the requested and the snapped step.
    pub distance: f64,
}

pub fn snap_to_grid(grid: &GridSpec, y: &[f64]) -> Result<SnappedStep> {
    if y.len() != grid.dim() {
        return Err(domain(format!(
            "step has {} components, grid dimension is {}",
            y.len(),
            grid.dim()
        )));
    }
    let s = grid.spacing();
    let cells: Vec<i64> = y.iter().map(|&v| (v / s).round() as i64).collect();
    let step: Vec<f64> = cells.iter().map(|&c| c as f64 * s).collect();
    let distance = y
        .iter()
        .zip(&step)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(SnappedStep {
        cells,
        step,
        distance,
    })
}

fn binomial(m: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

fn is_zero_step(y: &[f64]) -> bool {
    y.iter().all(|&v| v == 0.0)
}

/// Values of `Δ_y^m f` for an integer `m` and a step of whole cells, periodic wraparound.
fn shifted_combination(field: &SampledField, cells: &[i64], m: u32) -> Vec<Complex64> {
    let grid = field.grid();
    let n = grid.samples();
    let d = grid.dim();
    let values = field.values();
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    let strides: Vec<usize> = (0..d).map(|a| n.pow((d - 1 - a) as u32)).collect();
    for k in 0..=m {
        let coeff = binomial(m, k) * if (m - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        let shift: Vec<usize> = cells
            .iter()
            .map(|&c| (c * k as i64).rem_euclid(n as i64) as usize)
            .collect();
        let mut idx = vec![0usize; d];
        for o in out.iter_mut() {
            let src: usize = (0..d)
                .map(|a| {
                    let i = idx[a] + shift[a];
                    (if i >= n { i - n } else { i }) * strides[a]
                })
                .sum();
            *o += coeff * values[src];
            for a in (0..d).rev() {
                idx[a] += 1;
                if idx[a] < n {
                    break;
                }
                idx[a] = 0;
            }
        }
    }
    out
}

/// `Δ_y^m f` for integer `m`, with `y` snapped to the grid.
pub fn finite_difference(
    field: &SampledField,
    y: &[f64],
    order: DifferenceOrder,
) -> Result<SampledField> {
    let m = order.as_integer().ok_or_else(|| {
        Error::Unsupported(format!(
            "finite_difference needs an integer order, got {}; use fractional_difference",
            order.value()
        ))
    })?;
    let snapped = snap_to_grid(field.grid(), y)?;
    if is_zero_step(y) {
        log::warn!("zero step: Δ_0^m f = 0");
        return Ok(SampledField::zeros(*field.grid()));
    }
    if snapped.cells.iter().all(|&c| c == 0) {
        return Err(Error::SnapFailure {
            step: y.to_vec(),
            spacing: field.grid().spacing(),
        });
    }
    if snapped.distance > 0.0 {
        log::debug!("step {y:?} snapped to {:?} (distance {:e})", snapped.step, snapped.distance);
    }
    SampledField::new(*field.grid(), shifted_combination(field, &snapped.cells, m))
}

/// `(e^{iθ} - 1)^m` on the principal branch, with `0^m = 0`.
pub fn difference_multiplier(theta: f64, m: f64) -> Complex64 {
    let half = (theta / 2.0).sin();
    let z = Complex64::new(-2.0 * half * half, theta.sin());
    if m.fract() == 0.0 && m.abs() <= i32::MAX as f64 {
        return z.powi(m as i32);
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    (z.ln() * m).exp()
}

/// Multiplies the spectrum by `(e^{iy·ξ} - 1)^m`.
pub fn fractional_difference(
    spectrum: &Spectrum,
    y: &[f64],
    order: DifferenceOrder,
) -> Result<Spectrum> {
    let grid = *spectrum.grid();
    if y.len() != grid.dim() {
        return Err(domain(format!(
            "step has {} components, grid dimension is {}",
            y.len(),
            grid.dim()
        )));
    }
    let freqs = grid.axis_frequencies();
    let m = order.value();
    let coeffs = spectrum
        .coeffs()
        .iter()
        .enumerate()
        .map(|(flat, c)| {
            let theta: f64 = grid
                .unravel(flat)
                .iter()
                .zip(y)
                .map(|(&i, &ya)| ya * freqs[i])
                .sum();
            c * difference_multiplier(theta, m)
        })
        .collect();
    Spectrum::new(grid, coeffs)
}

/// A field together with its spectrum, for repeated modulus evaluations.
#[derive(Debug, Clone)]
pub struct Signal {
    field: SampledField,
    spectrum: Spectrum,
    power: Vec<f64>,
}

impl Signal {
    pub fn from_field(field: SampledField) -> Result<Self> {
        let spectrum = dft(&field)?;
        Ok(Self::assemble(field, spectrum))
    }

    pub fn from_spectrum(spectrum: Spectrum) -> Result<Self> {
        let field = idft(&spectrum)?;
        Ok(Self::assemble(field, spectrum))
    }

    fn assemble(field: SampledField, spectrum: Spectrum) -> Self {
        let power = spectrum.coeffs().iter().map(|c| c.norm_sqr()).collect();
        Self {
            field,
            spectrum,
            power,
        }
    }

    pub fn field(&self) -> &SampledField {
        &self.field
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn grid(&self) -> &GridSpec {
        self.field.grid()
    }

    /// `|f̂(ξ)|²` at every storage slot.
    pub fn power(&self) -> &[f64] {
        &self.power
    }

    /// `(2π)^{-d} Σ |2 sin(y·ξ/2)|^{2m} |f̂(ξ)|² Δξ^d`, the square of `δ_{2,m}[f](y)`.
    pub fn delta2_squared(&self, y: &[f64], m: f64) -> f64 {
        let grid = self.grid();
        let n = grid.samples();
        let d = grid.dim();
        let freqs = grid.axis_frequencies();
        let half_phase = |a: usize| -> Vec<Complex64> {
            freqs
                .iter()
                .map(|&xi| Complex64::from_polar(1.0, 0.5 * y[a] * xi))
                .collect()
        };
        let mut outer = vec![Complex64::new(1.0, 0.0)];
        for a in 0..d - 1 {
            let axis = half_phase(a);
            outer = outer
                .iter()
                .flat_map(|p| axis.iter().map(move |q| p * q))
                .collect();
        }
        let inner = half_phase(d - 1);
        let int_m = (m.fract() == 0.0 && m <= i32::MAX as f64).then_some(m as i32);
        let mut total = 0.0;
        for (o, prefix) in outer.iter().enumerate() {
            let row = &self.power[o * n..(o + 1) * n];
            let mut acc = 0.0;
            for (q, &pw) in inner.iter().zip(row) {
                if pw == 0.0 {
                    continue;
                }
                let s = (prefix * q).im;
                let w = 4.0 * s * s;
                acc += pw * match int_m {
                    Some(k) => w.powi(k),
                    None => w.powf(m),
                };
            }
            total += acc;
        }
        let dxi = grid.frequency_spacing();
        total * (dxi / (2.0 * PI)).powi(d as i32)
    }
}

/// `δ_{p,m}[f](y) = ‖Δ_y^m f‖_p`.
///
/// `p = 2` is evaluated spectrally for any `y`. Otherwise integer orders
/// use the snapped spatial difference and fractional orders the multiplier
/// followed by an inverse transform.
pub fn delta(signal: &Signal, y: &[f64], p: f64, order: DifferenceOrder) -> Result<f64> {
    check_exponent(p, "p")?;
    let grid = signal.grid();
    if y.len() != grid.dim() {
        return Err(domain(format!(
            "step has {} components, grid dimension is {}",
            y.len(),
            grid.dim()
        )));
    }
    if is_zero_step(y) {
        return Ok(0.0);
    }
    if p == 2.0 {
        return Ok(signal.delta2_squared(y, order.value()).max(0.0).sqrt());
    }
    let values = if order.is_integer() {
        finite_difference(signal.field(), y, order)?.into_values()
    } else {
        idft(&fractional_difference(signal.spectrum(), y, order)?)?.into_values()
    };
    Ok(lp_norm_values(&values, grid, p))
}

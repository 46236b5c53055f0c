//! True, modified and Bessel tails of Fourier transforms:
//!
//! - true: `ψ_{p'}[g](t) = (∫_{|ξ|≥t} |g|^{p'})^{1/p'}`
//! - modified: `ψ_{p',m}[g](t) = (∫ min(1, (|ξ|/t)^{mp'}) |g|^{p'})^{1/p'}`
//! - Bessel: `Ψ_{p',m}[g](t) = (∫ G_{mp'/2}(|ξ|/t) |g|^{p'})^{1/p'}`
//!
//! with the sup variants for `p' = ∞`.

mod kernel;
mod radial;

use std::f64::consts::PI;

use crate::analysis::profile::{ArgumentRole, DecayProfile, DyadicGrid};
use crate::error::{domain, Error, Result};
use crate::field::{check_exponent, RadialSpectrum, Spectrum};

pub use kernel::{g_alpha, large_v_limit, small_v_constant, GKernel, TABLE_CAP};
use radial::{sup_outside, sup_ramp, weighted_integral, Weight};

/// Default fraction of the Nyquist frequency up to which gridded tails are trusted.
pub const DEFAULT_BAND_MARGIN: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailVariant {
    True,
    Modified,
    Bessel,
    SupTrue,
    SupModified,
}

/// Which tail to compute, with its exponent `p'` and order `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailKind {
    variant: TailVariant,
    pprime: f64,
    m: f64,
}

impl TailKind {
    /// `True` and `Modified` with `p' = ∞` become their sup variants.
    pub fn new(variant: TailVariant, pprime: f64, m: f64) -> Result<Self> {
        check_exponent(pprime, "pprime")?;
        let uses_m = !matches!(variant, TailVariant::True | TailVariant::SupTrue);
        if uses_m && !(m > 0.0 && m.is_finite()) {
            return Err(domain(format!("m must be positive, got {m}")));
        }
        let variant = match (variant, pprime.is_infinite()) {
            (TailVariant::True, true) => TailVariant::SupTrue,
            (TailVariant::Modified, true) => TailVariant::SupModified,
            (TailVariant::Bessel, true) => {
                return Err(domain("the Bessel tail needs a finite pprime"))
            }
            (TailVariant::SupTrue | TailVariant::SupModified, false) => {
                return Err(domain("sup tails need pprime = inf"))
            }
            (v, _) => v,
        };
        Ok(Self { variant, pprime, m })
    }

    pub fn true_tail(pprime: f64) -> Result<Self> {
        Self::new(TailVariant::True, pprime, 1.0)
    }

    pub fn modified(pprime: f64, m: f64) -> Result<Self> {
        Self::new(TailVariant::Modified, pprime, m)
    }

    pub fn bessel(pprime: f64, m: f64) -> Result<Self> {
        Self::new(TailVariant::Bessel, pprime, m)
    }

    pub fn variant(&self) -> TailVariant {
        self.variant
    }

    pub fn pprime(&self) -> f64 {
        self.pprime
    }

    pub fn m(&self) -> f64 {
        self.m
    }
}

/// A spectrum whose tails can be taken.
#[derive(Debug, Clone, Copy)]
pub enum TailSource<'a> {
    Grid(&'a Spectrum),
    Radial(&'a RadialSpectrum),
}

impl<'a> From<&'a Spectrum> for TailSource<'a> {
    fn from(s: &'a Spectrum) -> Self {
        TailSource::Grid(s)
    }
}

impl<'a> From<&'a RadialSpectrum> for TailSource<'a> {
    fn from(s: &'a RadialSpectrum) -> Self {
        TailSource::Radial(s)
    }
}

impl TailSource<'_> {
    pub fn dim(&self) -> usize {
        match self {
            TailSource::Grid(s) => s.grid().dim(),
            TailSource::Radial(s) => s.dim(),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn check_band(spec: &Spectrum, t: f64, margin: f64) -> Result<()> {
    let nyquist = spec.grid().nyquist();
    let limit = margin * nyquist;
    if t > limit {
        return Err(Error::OutOfBand {
            t,
            limit,
            margin,
            nyquist,
        });
    }
    Ok(())
}

fn power(v: f64, p: f64) -> f64 {
    if p == 2.0 {
        v * v
    } else if p == 1.0 {
        v
    } else {
        v.powf(p)
    }
}

fn grid_tail(spec: &Spectrum, kind: &TailKind, t: f64) -> Result<f64> {
    let grid = spec.grid();
    let norms = grid.frequency_norms();
    let coeffs = spec.coeffs();
    let p = kind.pprime;
    let m = kind.m;
    match kind.variant {
        TailVariant::SupTrue => Ok(norms
            .iter()
            .zip(coeffs)
            .filter(|(&r, _)| r >= t)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)),
        TailVariant::SupModified => Ok(norms
            .iter()
            .zip(coeffs)
            .map(|(&r, c)| (r / t).powf(m).min(1.0) * c.norm())
            .fold(0.0, f64::max)),
        TailVariant::True | TailVariant::Modified | TailVariant::Bessel => {
            let cell = grid.frequency_spacing().powi(grid.dim() as i32);
            let sum: f64 = match kind.variant {
                TailVariant::True => norms
                    .iter()
                    .zip(coeffs)
                    .filter(|(&r, _)| r >= t)
                    .map(|(_, c)| power(c.norm(), p))
                    .sum(),
                TailVariant::Modified => {
                    let e = m * p;
                    norms
                        .iter()
                        .zip(coeffs)
                        .map(|(&r, c)| {
                            let w = if r >= t { 1.0 } else { (r / t).powf(e) };
                            w * power(c.norm(), p)
                        })
                        .sum()
                }
                _ => {
                    let reach = norms.iter().cloned().fold(0.0, f64::max) / t;
                    let kernel = GKernel::new(grid.dim(), m * p / 2.0, reach)?;
                    norms
                        .iter()
                        .zip(coeffs)
                        .map(|(&r, c)| kernel.eval(r / t) * power(c.norm(), p))
                        .sum()
                }
            };
            Ok((sum * cell).powf(1.0 / p))
        }
    }
}

fn radial_tail(spec: &RadialSpectrum, kind: &TailKind, t: f64) -> Result<f64> {
    let p = kind.pprime;
    if !spec.is_integrable(p) {
        return Err(domain(format!(
            "the radial spectrum is not in L^{p}: its p'-th power is not integrable"
        )));
    }
    let m = kind.m;
    let value = match kind.variant {
        TailVariant::SupTrue => return Ok(sup_outside(spec, t)),
        TailVariant::SupModified => return Ok(sup_ramp(spec, m, t)),
        TailVariant::True => weighted_integral(spec, p, &Weight::Outside(t)),
        TailVariant::Modified => weighted_integral(spec, p, &Weight::Ramp { t, e: m * p }),
        TailVariant::Bessel => {
            let kernel = GKernel::new(spec.dim(), m * p / 2.0, 256.0)?;
            weighted_integral(spec, p, &Weight::Kernel { t, kernel })
        }
    };
    Ok(value.max(0.0).powf(1.0 / p))
}

/// Any tail at `t`, with a configurable usable band for gridded spectra.
pub fn tail_with_margin<'a>(
    source: impl Into<TailSource<'a>>,
    kind: &TailKind,
    t: f64,
    margin: f64,
) -> Result<f64> {
    check_t(t)?;
    let source = source.into();
    if kind.variant == TailVariant::Bessel && source.dim() < 2 {
        return Err(Error::Unsupported(format!(
            "the Bessel tail is defined for d >= 2, got d = {}",
            source.dim()
        )));
    }
    match source {
        TailSource::Grid(spec) => {
            check_band(spec, t, margin)?;
            grid_tail(spec, kind, t)
        }
        TailSource::Radial(spec) => radial_tail(spec, kind, t),
    }
}

pub fn tail<'a>(source: impl Into<TailSource<'a>>, kind: &TailKind, t: f64) -> Result<f64> {
    tail_with_margin(source, kind, t, DEFAULT_BAND_MARGIN)
}

/// `ψ_{p'}[g](t)`; the sup over `|ξ| ≥ t` when `p' = ∞`.
pub fn true_tail<'a>(source: impl Into<TailSource<'a>>, pprime: f64, t: f64) -> Result<f64> {
    tail(source, &TailKind::true_tail(pprime)?, t)
}

/// `ψ_{p',m}[g](t)`.
pub fn modified_tail<'a>(
    source: impl Into<TailSource<'a>>,
    pprime: f64,
    m: f64,
    t: f64,
) -> Result<f64> {
    tail(source, &TailKind::modified(pprime, m)?, t)
}

/// `Ψ_{p',m}[g](t)` with the kernel `G_{mp'/2}`.
pub fn bessel_tail<'a>(
    source: impl Into<TailSource<'a>>,
    pprime: f64,
    m: f64,
    t: f64,
) -> Result<f64> {
    tail(source, &TailKind::bessel(pprime, m)?, t)
}

/// Tail values on every grid point, in increasing `t`.
pub fn tail_profile<'a>(
    source: impl Into<TailSource<'a>>,
    kind: &TailKind,
    t_grid: &DyadicGrid,
) -> Result<DecayProfile> {
    let source = source.into();
    let ts = t_grid.points();
    if ts.is_empty() {
        return Err(domain("empty t grid"));
    }
    let points = ts
        .iter()
        .map(|&t| Ok((t, tail(source, kind, t)?)))
        .collect::<Result<Vec<_>>>()?;
    DecayProfile::new(points, ArgumentRole::T)
}

/// `ω_{2,m,2}[f](h)` of the function whose transform has modulus `spec`,
/// from `ω² = (2π)^{-d} ∫ G_m(h|ξ|) |f̂(ξ)|² dξ`.
pub fn radial_modulus(spec: &RadialSpectrum, m: f64, h: f64) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(domain(format!("m must be positive, got {m}")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain(format!("h must be positive, got {h}")));
    }
    if !spec.is_integrable(2.0) {
        return Err(domain("the radial spectrum is not square integrable"));
    }
    let kernel = GKernel::new(spec.dim(), m, 256.0)?;
    let v = weighted_integral(spec, 2.0, &Weight::Kernel { t: 1.0 / h, kernel });
    Ok((v.max(0.0) / (2.0 * PI).powi(spec.dim() as i32)).sqrt())
}

//! Tails of analytic radial spectra by one-dimensional quadrature in `r = |ξ|`.

use std::f64::consts::PI;

use super::kernel::GKernel;
use crate::field::{FarField, RadialRule, RadialSpectrum};
use crate::moduli::sphere_area;
use crate::quadrature::{gauss_kronrod21, integrate_adaptive};

/// Bessel-type integrals are closed with the kernel's mean beyond `r = FAR_KERNEL · t`.
const FAR_KERNEL: f64 = 256.0;
/// Oscillating profiles are integrated out to `OSC_REACH · max(t, 1)`.
const OSC_REACH: f64 = 1024.0;
const MAX_SEGMENTS: usize = 200;

/// Radial weights `w(r)` multiplying `|g(r)|^{p'}`.
#[derive(Debug, Clone)]
pub(crate) enum Weight {
    /// `1` for `r ≥ t`, else `0`.
    Outside(f64),
    /// `min(1, (r/t)^e)`.
    Ramp { t: f64, e: f64 },
    /// `K(r/t)` with `K` a `G_α` kernel.
    Kernel { t: f64, kernel: GKernel },
}

impl Weight {
    fn eval(&self, r: f64) -> f64 {
        match self {
            Weight::Outside(t) => {
                if r >= *t {
                    1.0
                } else {
                    0.0
                }
            }
            Weight::Ramp { t, e } => {
                if r >= *t {
                    1.0
                } else {
                    (r / t).powf(*e)
                }
            }
            Weight::Kernel { t, kernel } => kernel.eval(r / t),
        }
    }

    fn lower_limit(&self) -> f64 {
        match self {
            Weight::Outside(t) => *t,
            _ => 0.0,
        }
    }

    fn scale(&self) -> f64 {
        match self {
            Weight::Outside(t) | Weight::Ramp { t, .. } | Weight::Kernel { t, .. } => *t,
        }
    }

    /// Average of the weight far out.
    fn far_mean(&self) -> f64 {
        match self {
            Weight::Outside(_) | Weight::Ramp { .. } => 1.0,
            Weight::Kernel { kernel, .. } => kernel.limit(),
        }
    }

    fn period(&self) -> Option<f64> {
        match self {
            Weight::Kernel { t, .. } => Some(2.0 * PI * t),
            _ => None,
        }
    }

    fn far_start(&self) -> f64 {
        match self {
            Weight::Kernel { t, .. } => FAR_KERNEL * t,
            Weight::Outside(t) | Weight::Ramp { t, .. } => *t,
        }
    }
}

fn profile_power(spec: &RadialSpectrum, r: f64, pprime: f64) -> f64 {
    let g = spec.profile(r);
    if pprime == 2.0 {
        g * g
    } else if pprime == 1.0 {
        g
    } else {
        g.powf(pprime)
    }
}

/// `|S^{d-1}| ∫_a^b w(r) |g(r)|^{p'} r^{d-1} dr` over panels split at the
/// profile breakpoints, at `t`, and every `period`.
fn integrate_panels(
    spec: &RadialSpectrum,
    pprime: f64,
    weight: &Weight,
    a: f64,
    b: f64,
    period: Option<f64>,
) -> f64 {
    if b <= a {
        return 0.0;
    }
    let d = spec.dim() as i32;
    let f = |r: f64| weight.eval(r) * profile_power(spec, r, pprime) * r.powi(d - 1);
    let mut cuts = vec![a, b];
    cuts.extend(spec.breakpoints());
    cuts.push(weight.scale());
    if let Some(p) = period {
        let first = (a / p).floor() as i64 + 1;
        let mut k = first;
        while (k as f64) * p < b {
            cuts.push(k as f64 * p);
            k += 1;
        }
    }
    cuts.retain(|&c| c >= a && c <= b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let coarse: f64 = cuts
        .windows(2)
        .map(|w| gauss_kronrod21(&f, w[0], w[1]).0.abs())
        .sum();
    let panels = (cuts.len() - 1).max(1) as f64;
    let abs_tol = 1e-14 * coarse / panels;
    let total: f64 = cuts
        .windows(2)
        .map(|w| integrate_adaptive(&f, w[0], w[1], abs_tol, 1e-12, MAX_SEGMENTS).value)
        .sum();
    sphere_area(spec.dim()) * total
}

/// The period of the integrand's oscillation, if any, to align panels with.
fn panel_period(spec: &RadialSpectrum, weight: &Weight) -> Option<f64> {
    let profile_period = match spec.rule() {
        RadialRule::IntervalTransform => Some(2.0 * PI),
        _ => None,
    };
    match (profile_period, weight.period()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// `|S^{d-1}| ∫_0^∞ w(r) |g(r)|^{p'} r^{d-1} dr` for finite `p'`.
///
/// Pure-power pieces are integrated in closed form. Oscillating integrands
/// are closed past a cutoff by their period-average times the power envelope.
pub(crate) fn weighted_integral(spec: &RadialSpectrum, pprime: f64, weight: &Weight) -> f64 {
    let d = spec.dim() as f64;
    let lo = weight.lower_limit();
    let area = sphere_area(spec.dim());
    let period = panel_period(spec, weight);
    match spec.far_field(pprime) {
        FarField::Compact(r_max) => integrate_panels(spec, pprime, weight, lo, r_max, period),
        FarField::Rapid(cutoff) => {
            let hi = (lo * lo + cutoff * cutoff).sqrt();
            integrate_panels(spec, pprime, weight, lo, hi, period)
        }
        FarField::Power { k, start } => {
            let decay = k * pprime - d;
            match weight {
                Weight::Outside(t) | Weight::Ramp { t, .. } => {
                    let t = *t;
                    let split = t.max(start);
                    let head = integrate_panels(spec, pprime, weight, lo, start.min(split), period);
                    // ∫_start^t (r/t)^e r^{-kp'+d-1} dr on the ramp
                    let ramp = match weight {
                        Weight::Ramp { e, .. } if t > start => {
                            let s = e - decay;
                            let inner = if s.abs() < 1e-12 {
                                (t / start).ln()
                            } else {
                                (t.powf(s) - start.powf(s)) / s
                            };
                            area * t.powf(-e) * inner
                        }
                        _ => 0.0,
                    };
                    head + ramp + area * split.powf(-decay) / decay
                }
                Weight::Kernel { .. } => {
                    let far = weight.far_start().max(start);
                    let body = integrate_panels(spec, pprime, weight, lo, far, period);
                    body + area * weight.far_mean() * far.powf(-decay) / decay
                }
            }
        }
        FarField::Oscillating { k, period: osc } => {
            let decay = k * pprime - d;
            let reach = (OSC_REACH * weight.scale().max(1.0)).max(weight.far_start());
            let far = osc * (reach / osc).ceil();
            let body = integrate_panels(spec, pprime, weight, lo, far, period);
            let mean = spec.oscillation_mean(pprime) * weight.far_mean();
            body + area * mean * far.powf(-decay) / decay
        }
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd).max(f(a)).max(f(b))
}

/// Maximum of `f` on `[a, b]`: dense log-spaced scan, then golden-section refinement
/// around the best sample.
fn scan_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, extra: &[f64]) -> f64 {
    if b <= a {
        return f(a);
    }
    const SAMPLES: usize = 4096;
    let lo = a.max(b * 1e-9);
    let xs: Vec<f64> = (0..=SAMPLES)
        .map(|i| lo * (b / lo).powf(i as f64 / SAMPLES as f64))
        .collect();
    let (best, _) = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, f(x)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let left = xs[best.saturating_sub(1)];
    let right = xs[(best + 1).min(SAMPLES)];
    let mut value = golden_max(f, left, right);
    for &x in extra.iter().chain([a, b].iter()) {
        if x >= a && x <= b {
            value = value.max(f(x));
        }
    }
    value
}

/// `sup_{r ≥ t} |g(r)|`.
pub(crate) fn sup_outside(spec: &RadialSpectrum, t: f64) -> f64 {
    match spec.rule() {
        RadialRule::IntervalTransform => {
            // The maximum lies within the period containing t or the next one.
            let p = 2.0 * PI;
            let k = (t / p).floor();
            let f = |r: f64| spec.profile(r);
            let first = golden_max(&f, t, (k + 1.0) * p);
            let second = golden_max(&f, (k + 1.0) * p, (k + 2.0) * p);
            first.max(second).max(f(t))
        }
        RadialRule::Band { center, half_width } => {
            if t <= center + half_width {
                1.0
            } else {
                0.0
            }
        }
        // The remaining profiles are nonincreasing in r.
        _ => spec.profile(t),
    }
}

/// `sup_r min(1, (r/t)^m) |g(r)|`.
pub(crate) fn sup_ramp(spec: &RadialSpectrum, m: f64, t: f64) -> f64 {
    let outside = sup_outside(spec, t);
    let f = |r: f64| (r / t).powf(m) * spec.profile(r);
    let inside = match spec.rule() {
        RadialRule::Band { center, half_width } => {
            let top = (center + half_width).min(t);
            if top >= center - half_width {
                f(top)
            } else {
                0.0
            }
        }
        RadialRule::Zero => 0.0,
        _ => scan_max(&f, 0.0, t, &spec.breakpoints()),
    };
    outside.max(inside)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(d: usize, alpha: f64, pprime: f64) -> RadialSpectrum {
        RadialSpectrum::new(d, RadialRule::PowerLaw { alpha, pprime }).unwrap()
    }

    #[test]
    fn closed_form_and_quadrature_agree_for_pure_power() {
        let s = power(2, 0.5, 2.0);
        for t in [1.0, 3.0, 100.0] {
            let closed = weighted_integral(&s, 2.0, &Weight::Outside(t));
            let f = |r: f64| s.profile(r).powi(2) * r;
            // r = t / u maps [t, ∞) to (0, 1]
            let g = |u: f64| if u == 0.0 { 0.0 } else { f(t / u) * t / (u * u) };
            let q = integrate_adaptive(&g, 0.0, 1.0, 0.0, 1e-13, 400);
            let numeric = 2.0 * PI * q.value;
            assert!((closed - numeric).abs() < 1e-8 * closed, "t={t}: {closed} vs {numeric}");
        }
    }

    #[test]
    fn ramp_closed_form_matches_quadrature() {
        for alpha in [0.5, 1.0, 2.0] {
            let s = power(2, alpha, 2.0);
            let t = 37.0;
            let closed = weighted_integral(&s, 2.0, &Weight::Ramp { t, e: 2.0 });
            let f = |r: f64| (r / t).min(1.0).powi(2) * s.profile(r).powi(2) * r;
            let inner = integrate_adaptive(&f, 0.0, 1.0, 0.0, 1e-13, 400).value
                + integrate_adaptive(&f, 1.0, t, 0.0, 1e-13, 400).value;
            let outer = t.powf(-2.0 * alpha) / (2.0 * alpha);
            let numeric = 2.0 * PI * (inner + outer);
            assert!((closed - numeric).abs() < 1e-10 * closed, "alpha={alpha}");
        }
    }

    #[test]
    fn interval_tail_asymptotics() {
        let s = RadialSpectrum::new(1, RadialRule::IntervalTransform).unwrap();
        for t in [64.0, 128.0, 256.0] {
            let v = weighted_integral(&s, 2.0, &Weight::Outside(t));
            assert!((t * v / 4.0 - 1.0).abs() < 0.05, "t={t}: {}", t * v);
        }
        // ∫_R |2 sin(ξ/2)/ξ|² dξ = 2π
        let total = weighted_integral(&s, 2.0, &Weight::Outside(0.0));
        assert!((total - 2.0 * PI).abs() < 1e-7, "{total}");
    }

    #[test]
    fn gaussian_ramp_closed_form() {
        // ∫ min(1,(r/t)^2) e^{-r²} r dr · 2π, with |g|² = (2π)² e^{-r²}
        let s = RadialSpectrum::new(2, RadialRule::Gaussian { sigma: 1.0 }).unwrap();
        let t = 1.5;
        let got = weighted_integral(&s, 2.0, &Weight::Ramp { t, e: 2.0 });
        let x = t * t;
        let inner = (1.0 - (1.0 + x) * (-x).exp()) / (2.0 * x);
        let outer = (-x).exp() / 2.0;
        let expected = 2.0 * PI * (2.0 * PI).powi(2) * (inner + outer);
        assert!((got - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn sups() {
        let s = power(2, 0.5, f64::INFINITY);
        assert_eq!(sup_outside(&s, 4.0), 0.5);
        assert!((sup_ramp(&s, 1.0, 4.0) - 0.5).abs() < 1e-15);
        let heavy = power(2, 2.0, f64::INFINITY);
        let a = sup_ramp(&heavy, 1.0, 16.0) * 16.0;
        let b = sup_ramp(&heavy, 1.0, 1024.0) * 1024.0;
        assert!((a - b).abs() < 1e-12 * a);
        let i = RadialSpectrum::new(1, RadialRule::IntervalTransform).unwrap();
        // |2 sin(r/2)/r| decreases from r = 10 to its zero at 4π
        assert_eq!(sup_outside(&i, 10.0), i.profile(10.0));
        let v = sup_outside(&i, 13.0);
        assert!(v <= 2.0 / 13.0 && v > 2.0 / (5.0 * PI) * 0.99);
    }
}

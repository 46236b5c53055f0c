use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};

/// Analytic radial profiles `r ↦ |ĝ|(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialRule {
    /// `r^{-k}` for `r ≥ 1` with `k = d/p' + α`, and a cubic fill inside.
    PowerLaw { alpha: f64, pprime: f64 },
    /// `exp(1 - 1/(1 - (r/R)²))` for `r < R`, zero outside.
    Bump { radius: f64 },
    /// Transform of `exp(-|x|²/(2σ²))`: `(2π)^{d/2} σ^d exp(-σ² r²/2)`.
    Gaussian { sigma: f64 },
    /// `|2 sin(r/2) / r|`, the modulus of the transform of the indicator of `[0, 1]` (d = 1).
    IntervalTransform,
    /// Indicator of `center - half_width ≤ r ≤ center + half_width`.
    Band { center: f64, half_width: f64 },
    Zero,
}

/// Large-`r` behaviour of a profile, used to close radial integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FarField {
    /// Profile vanishes for `r > R`.
    Compact(f64),
    /// Profile is below `1e-35` of its peak (raised to `p'`) beyond this radius.
    Rapid(f64),
    /// Profile is exactly `r^{-k}` beyond `start`.
    Power { k: f64, start: f64 },
    /// Profile oscillates with the given period; `|g|^{p'}` averages to
    /// `mean(p') · r^{-k p'}`.
    Oscillating { k: f64, period: f64 },
}

/// A radial spectrum `|ĝ|(|ξ|)` on `R^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSpectrum {
    dim: usize,
    rule: RadialRule,
}

impl RadialSpectrum {
    pub fn new(dim: usize, rule: RadialRule) -> Result<Self> {
        if dim < 1 {
            return Err(domain("dimension must be at least 1"));
        }
        match rule {
            RadialRule::PowerLaw { alpha, pprime } => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(domain(format!("alpha must be positive, got {alpha}")));
                }
                if pprime.is_nan() || pprime < 1.0 {
                    return Err(domain(format!("pprime must be in [1, inf], got {pprime}")));
                }
            }
            RadialRule::Bump { radius } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(domain(format!("bump radius must be positive, got {radius}")));
                }
            }
            RadialRule::Gaussian { sigma } => {
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(domain(format!("sigma must be positive, got {sigma}")));
                }
            }
            RadialRule::IntervalTransform => {
                if dim != 1 {
                    return Err(domain("the interval transform is a d = 1 spectrum"));
                }
            }
            RadialRule::Band { center, half_width } => {
                if !(half_width > 0.0 && center - half_width >= 0.0 && center.is_finite()) {
                    return Err(domain(format!(
                        "band needs 0 < half_width <= center, got center {center}, half_width {half_width}"
                    )));
                }
            }
            RadialRule::Zero => {}
        }
        Ok(Self { dim, rule })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rule(&self) -> RadialRule {
        self.rule
    }

    /// Radius beyond which the profile vanishes identically.
    pub fn support_bound(&self) -> Option<f64> {
        match self.rule {
            RadialRule::Bump { radius } => Some(radius),
            RadialRule::Band { center, half_width } => Some(center + half_width),
            RadialRule::Zero => Some(0.0),
            _ => None,
        }
    }

    /// Decay exponent `k` of the power-law rule, `d/p' + α`.
    fn power_exponent(&self) -> Option<f64> {
        match self.rule {
            RadialRule::PowerLaw { alpha, pprime } => Some(self.dim as f64 / pprime + alpha),
            _ => None,
        }
    }

    pub fn profile(&self, r: f64) -> f64 {
        let r = r.abs();
        match self.rule {
            RadialRule::PowerLaw { .. } => {
                let k = self.power_exponent().expect("power law");
                if r >= 1.0 {
                    r.powf(-k)
                } else {
                    let (a0, a2, a3) = cubic_fill(k);
                    a0 + r * r * (a2 + a3 * r)
                }
            }
            RadialRule::Bump { radius } => {
                let u = r / radius;
                if u >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                }
            }
            RadialRule::Gaussian { sigma } => {
                let d = self.dim as f64;
                (2.0 * PI).powf(d / 2.0) * sigma.powf(d) * (-0.5 * sigma * sigma * r * r).exp()
            }
            RadialRule::IntervalTransform => {
                if r < 1e-8 {
                    1.0 - r * r / 24.0
                } else {
                    (2.0 * (r / 2.0).sin() / r).abs()
                }
            }
            RadialRule::Band { center, half_width } => {
                if (r - center).abs() <= half_width {
                    1.0
                } else {
                    0.0
                }
            }
            RadialRule::Zero => 0.0,
        }
    }

    /// Radii where the profile is not smooth; quadrature splits there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.rule {
            RadialRule::PowerLaw { .. } => vec![1.0],
            RadialRule::Band { center, half_width } => vec![center - half_width, center + half_width],
            _ => Vec::new(),
        }
    }

    pub fn far_field(&self, pprime: f64) -> FarField {
        match self.rule {
            RadialRule::PowerLaw { .. } => FarField::Power {
                k: self.power_exponent().expect("power law"),
                start: 1.0,
            },
            RadialRule::Bump { radius } => FarField::Compact(radius),
            RadialRule::Band { center, half_width } => FarField::Compact(center + half_width),
            RadialRule::Zero => FarField::Compact(0.0),
            RadialRule::Gaussian { sigma } => {
                let p = if pprime.is_infinite() { 1.0 } else { pprime };
                FarField::Rapid((2.0 * 80.0 / p).sqrt() / sigma)
            }
            RadialRule::IntervalTransform => FarField::Oscillating {
                k: 1.0,
                period: 2.0 * PI,
            },
        }
    }

    /// Mean of `|g|^{p'} r^{k p'}` over one period, for oscillating profiles.
    pub fn oscillation_mean(&self, pprime: f64) -> f64 {
        match self.rule {
            // mean of |2 sin(r/2)|^p over a period
            RadialRule::IntervalTransform => {
                2f64.powf(pprime)
                    * (ln_gamma((pprime + 1.0) / 2.0) - ln_gamma(pprime / 2.0 + 1.0)).exp()
                    / PI.sqrt()
            }
            _ => 1.0,
        }
    }

    /// Whether `∫ profile^{p'} r^{d-1} dr` is finite (for `p' = ∞`, whether the profile is bounded).
    pub fn is_integrable(&self, pprime: f64) -> bool {
        if pprime.is_infinite() {
            return true;
        }
        match self.far_field(pprime) {
            FarField::Compact(_) | FarField::Rapid(_) => true,
            FarField::Power { k, .. } | FarField::Oscillating { k, .. } => {
                k * pprime > self.dim as f64
            }
        }
    }
}

/// Coefficients `(a0, a2, a3)` of `a0 + a2 r² + a3 r³` matching `r^{-k}` at `r = 1`
/// in value, first and second derivative.
pub(crate) fn cubic_fill(k: f64) -> (f64, f64, f64) {
    let a3 = k * (k + 2.0) / 3.0;
    let a2 = -k * (k + 3.0) / 2.0;
    let a0 = 1.0 + k * (k + 5.0) / 6.0;
    (a0, a2, a3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(RadialSpectrum::new(2, RadialRule::PowerLaw { alpha: 0.0, pprime: 2.0 }).is_err());
        assert!(RadialSpectrum::new(2, RadialRule::PowerLaw { alpha: 1.0, pprime: 0.5 }).is_err());
        assert!(RadialSpectrum::new(2, RadialRule::IntervalTransform).is_err());
        assert!(RadialSpectrum::new(1, RadialRule::Band { center: 0.1, half_width: 0.2 }).is_err());
        assert!(RadialSpectrum::new(0, RadialRule::Zero).is_err());
    }

    #[test]
    fn support_bounds() {
        let b = RadialSpectrum::new(2, RadialRule::Bump { radius: 4.0 }).unwrap();
        assert_eq!(b.support_bound(), Some(4.0));
        assert_eq!(b.profile(4.0), 0.0);
        assert_eq!(b.profile(5.0), 0.0);
        assert!((b.profile(0.0) - 1.0).abs() < 1e-15);
        let g = RadialSpectrum::new(2, RadialRule::Gaussian { sigma: 1.0 }).unwrap();
        assert_eq!(g.support_bound(), None);
        assert!((g.profile(0.0) - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn interval_transform_matches_sinc() {
        let s = RadialSpectrum::new(1, RadialRule::IntervalTransform).unwrap();
        assert!((s.profile(PI) - 2.0 / PI).abs() < 1e-15);
        assert!(s.profile(2.0 * PI) < 1e-15);
        assert!((s.profile(1e-9) - 1.0).abs() < 1e-15);
        // mean of 4 sin²(r/2) is 2
        assert!((s.oscillation_mean(2.0) - 2.0).abs() < 1e-13);
        // mean of |2 sin(r/2)| is 4/π
        assert!((s.oscillation_mean(1.0) - 4.0 / PI).abs() < 1e-13);
        assert!(!s.is_integrable(1.0));
        assert!(s.is_integrable(2.0));
    }

    fn numeric_derivative(s: &RadialSpectrum, r: f64, h: f64) -> f64 {
        (s.profile(r + h) - s.profile(r - h)) / (2.0 * h)
    }

    #[test]
    fn power_law_fill_is_c1_at_one() {
        for (d, alpha, pprime) in [(2, 0.5, 2.0), (3, 1.0, 2.0), (1, 0.3, f64::INFINITY)] {
            let s = RadialSpectrum::new(d, RadialRule::PowerLaw { alpha, pprime }).unwrap();
            let k = d as f64 / pprime + alpha;
            let (a0, a2, a3) = cubic_fill(k);
            assert!((a0 + a2 + a3 - 1.0).abs() < 1e-12);
            assert!((2.0 * a2 + 3.0 * a3 + k).abs() < 1e-12);
            assert!((2.0 * a2 + 6.0 * a3 - k * (k + 1.0)).abs() < 1e-12);
            let left = numeric_derivative(&s, 1.0 - 1e-4, 1e-5);
            let right = numeric_derivative(&s, 1.0 + 1e-4, 1e-5);
            assert!((left - right).abs() < 1e-3 * k * (k + 1.0));
        }
    }

    proptest! {
        #[test]
        fn power_law_profile_is_positive_and_nonincreasing(
            alpha in 0.05f64..4.0,
            d in 1usize..4,
            r in 0.0f64..3.0,
            dr in 1e-6f64..0.5,
        ) {
            let s = RadialSpectrum::new(d, RadialRule::PowerLaw { alpha, pprime: 2.0 }).unwrap();
            prop_assert!(s.profile(r) > 0.0);
            prop_assert!(s.profile(r + dr) <= s.profile(r) * (1.0 + 1e-14));
        }
    }
}

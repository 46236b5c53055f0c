//! Log-space least-squares fits of `C·t^{-γ}·(log t)^β` to decay profiles.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::profile::DecayProfile;
use crate::error::{Error, Result};

/// Values at or below this fraction of the profile maximum count as zero.
pub const ZERO_FLOOR: f64 = 1e-14;
/// Relative residual reduction PowerLog needs before Auto prefers it.
pub const AUTO_IMPROVEMENT: f64 = 0.25;
/// Below this PurePower residual the pure law is already exact.
pub const EXACT_RESIDUAL: f64 = 1e-10;
/// PowerLog needs `log log t` well defined.
pub const POWER_LOG_MIN_T: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FitModel {
    PurePower,
    PowerLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    PurePower,
    PowerLog,
    Auto,
}

impl std::str::FromStr for ModelChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" | "pure" | "purepower" => Ok(Self::PurePower),
            "powerlog" => Ok(Self::PowerLog),
            "auto" => Ok(Self::Auto),
            _ => Err(Error::Parse(format!("unknown model {s:?}; expected auto, power or powerlog"))),
        }
    }
}

/// `value ≈ amplitude · t^{-gamma} · (log t)^{log_power}` over `[t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub gamma: f64,
    pub log_power: f64,
    pub amplitude: f64,
    pub max_rel_residual: f64,
    pub model: FitModel,
    pub t_min: f64,
    pub t_max: f64,
    pub points_used: usize,
    /// Whether the first and last octave were dropped.
    pub trimmed: bool,
}

impl ExponentFit {
    pub fn eval(&self, t: f64) -> f64 {
        let base = self.amplitude * t.powf(-self.gamma);
        match self.model {
            FitModel::PurePower => base,
            FitModel::PowerLog => base * t.ln().powf(self.log_power),
        }
    }
}

/// The profile vanishes from `t0` on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroTail {
    pub t0: f64,
    /// Exactly zero, as opposed to merely below the numerical floor.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FitOutcome {
    Law(ExponentFit),
    ZeroTail(ZeroTail),
}

impl FitOutcome {
    pub fn law(self) -> Result<ExponentFit> {
        match self {
            FitOutcome::Law(f) => Ok(f),
            FitOutcome::ZeroTail(z) => Err(Error::NoPowerLaw(format!(
                "profile is zero from t = {} on{}",
                z.t0,
                if z.exact { "" } else { " (below numerical floor)" }
            ))),
        }
    }
}

fn trim(points: &[(f64, f64)]) -> (Vec<(f64, f64)>, bool) {
    let lo = points[0].0 * 2.0;
    let hi = points[points.len() - 1].0 / 2.0;
    let kept: Vec<_> = points
        .iter()
        .copied()
        .filter(|&(t, _)| t >= lo && t <= hi)
        .collect();
    if kept.len() >= 4 {
        (kept, true)
    } else {
        (points.to_vec(), false)
    }
}

fn least_squares(points: &[(f64, f64)], model: FitModel, trimmed: bool) -> Result<ExponentFit> {
    let cols = match model {
        FitModel::PurePower => 2,
        FitModel::PowerLog => 3,
    };
    let n = points.len();
    let a = DMatrix::from_fn(n, cols, |i, j| {
        let t = points[i].0;
        match j {
            0 => 1.0,
            1 => -t.ln(),
            _ => t.ln().ln(),
        }
    });
    let b = DVector::from_iterator(n, points.iter().map(|&(_, v)| v.ln()));
    let x = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Fit(e.to_string()))?;
    let mut fit = ExponentFit {
        gamma: x[1],
        log_power: if cols == 3 { x[2] } else { 0.0 },
        amplitude: x[0].exp(),
        max_rel_residual: 0.0,
        model,
        t_min: points[0].0,
        t_max: points[n - 1].0,
        points_used: n,
        trimmed,
    };
    fit.max_rel_residual = points
        .iter()
        .map(|&(t, v)| (fit.eval(t) / v - 1.0).abs())
        .fold(0.0, f64::max);
    if !(fit.gamma.is_finite() && fit.log_power.is_finite() && fit.amplitude.is_finite()) {
        return Err(Error::Fit("least-squares solution is not finite".into()));
    }
    Ok(fit)
}

fn fit_model(points: &[(f64, f64)], model: FitModel) -> Result<ExponentFit> {
    let usable: Vec<_> = match model {
        FitModel::PurePower => points.to_vec(),
        FitModel::PowerLog => points
            .iter()
            .copied()
            .filter(|&(t, _)| t >= POWER_LOG_MIN_T)
            .collect(),
    };
    if usable.len() < 4 {
        return Err(Error::Fit(format!(
            "{model:?} needs at least 4 usable points, got {}",
            usable.len()
        )));
    }
    let (kept, trimmed) = trim(&usable);
    least_squares(&kept, model, trimmed)
}

/// Fits a decay law to `profile`.
///
/// Values at or below [`ZERO_FLOOR`] times the maximum end the usable range;
/// if any occur the outcome is [`FitOutcome::ZeroTail`] from the first one.
pub fn fit_exponent(profile: &DecayProfile, model: ModelChoice) -> Result<FitOutcome> {
    let points = profile.points();
    let max = points.iter().map(|p| p.1).fold(0.0, f64::max);
    if let Some(k) = points.iter().position(|p| p.1 <= ZERO_FLOOR * max) {
        return Ok(FitOutcome::ZeroTail(ZeroTail {
            t0: points[k].0,
            exact: points[k..].iter().all(|p| p.1 == 0.0),
        }));
    }
    if points.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 positive points, got {}", points.len())));
    }
    let fit = match model {
        ModelChoice::PurePower => fit_model(points, FitModel::PurePower)?,
        ModelChoice::PowerLog => fit_model(points, FitModel::PowerLog)?,
        ModelChoice::Auto => {
            let pure = fit_model(points, FitModel::PurePower)?;
            match fit_model(points, FitModel::PowerLog) {
                Ok(log)
                    if pure.max_rel_residual > EXACT_RESIDUAL
                        && log.max_rel_residual
                            <= (1.0 - AUTO_IMPROVEMENT) * pure.max_rel_residual =>
                {
                    log
                }
                _ => pure,
            }
        }
    };
    Ok(FitOutcome::Law(fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::profile::{ArgumentRole, DyadicGrid};
    use crate::field::{RadialRule, RadialSpectrum};
    use crate::tails::{tail_profile, TailKind};
    use proptest::prelude::*;

    fn synthetic(grid: DyadicGrid, f: impl Fn(f64) -> f64) -> DecayProfile {
        DecayProfile::new(grid.points().into_iter().map(|t| (t, f(t))).collect(), ArgumentRole::T)
            .unwrap()
    }

    #[test]
    fn recovers_exact_power() {
        let p = synthetic(DyadicGrid::octaves(0, 10).unwrap(), |t| 3.0 * t.powf(-0.5));
        let f = fit_exponent(&p, ModelChoice::Auto).unwrap().law().unwrap();
        assert_eq!(f.model, FitModel::PurePower);
        assert!((f.gamma - 0.5).abs() < 1e-12);
        assert_eq!(f.log_power, 0.0);
        assert!((f.amplitude - 3.0).abs() < 1e-11);
        assert!(f.max_rel_residual < 1e-12);
        assert!(f.trimmed);
        assert_eq!((f.t_min, f.t_max), (2.0, 512.0));
    }

    #[test]
    fn auto_detects_log_factor() {
        let p = synthetic(DyadicGrid::octaves(2, 12).unwrap(), |t| t.powf(-1.0) * t.ln().sqrt());
        let f = fit_exponent(&p, ModelChoice::Auto).unwrap().law().unwrap();
        assert_eq!(f.model, FitModel::PowerLog);
        assert!((f.gamma - 1.0).abs() < 0.02);
        assert!((f.log_power - 0.5).abs() < 0.05);
    }

    #[test]
    fn power_law_tail_profile() {
        let s = RadialSpectrum::new(2, RadialRule::PowerLaw { alpha: 0.5, pprime: 2.0 }).unwrap();
        let grid = DyadicGrid::octaves(0, 10).unwrap();
        let p = tail_profile(&s, &TailKind::true_tail(2.0).unwrap(), &grid).unwrap();
        let f = fit_exponent(&p, ModelChoice::Auto).unwrap().law().unwrap();
        assert!((f.gamma - 0.5).abs() < 0.01);
    }

    #[test]
    fn zero_tails() {
        let g = DyadicGrid::octaves(0, 6).unwrap();
        let p = synthetic(g, |t| if t < 5.0 { 1.0 / t } else { 0.0 });
        assert_eq!(
            fit_exponent(&p, ModelChoice::Auto).unwrap(),
            FitOutcome::ZeroTail(ZeroTail { t0: 8.0, exact: true })
        );
        let p = synthetic(g, |t| (-t * t).exp());
        match fit_exponent(&p, ModelChoice::Auto).unwrap() {
            FitOutcome::ZeroTail(z) => assert!(!z.exact && z.t0 == 8.0),
            other => panic!("{other:?}"),
        }
        let p = synthetic(g, |_| 0.0);
        assert!(matches!(fit_exponent(&p, ModelChoice::Auto).unwrap(), FitOutcome::ZeroTail(z) if z.t0 == 1.0));
    }

    #[test]
    fn too_few_points() {
        let p = synthetic(DyadicGrid::octaves(0, 2).unwrap(), |t| 1.0 / t);
        assert!(matches!(fit_exponent(&p, ModelChoice::Auto), Err(Error::Fit(_))));
        let p = synthetic(DyadicGrid::octaves(-3, 1).unwrap(), |t| 1.0 / t);
        assert!(matches!(fit_exponent(&p, ModelChoice::PowerLog), Err(Error::Fit(_))));
    }

    #[test]
    fn parses_model_names() {
        assert_eq!("auto".parse::<ModelChoice>().unwrap(), ModelChoice::Auto);
        assert_eq!("power".parse::<ModelChoice>().unwrap(), ModelChoice::PurePower);
        assert_eq!("powerlog".parse::<ModelChoice>().unwrap(), ModelChoice::PowerLog);
        assert!("cubic".parse::<ModelChoice>().is_err());
    }

    proptest! {
        #[test]
        fn scaling_leaves_exponents_unchanged(
            gamma in 0.1f64..3.0,
            beta in -1.0f64..1.0,
            wiggle in 0.0f64..0.2,
            scale in 1e-6f64..1e6,
        ) {
            let law = |t: f64| t.powf(-gamma) * t.ln().powf(beta) * (1.0 + wiggle * (t.ln()).sin());
            let g = DyadicGrid::octaves(2, 12).unwrap();
            let p = synthetic(g, law);
            let q = p.map_values(|_, v| scale * v).unwrap();
            for model in [ModelChoice::PurePower, ModelChoice::PowerLog] {
                let a = fit_exponent(&p, model).unwrap().law().unwrap();
                let b = fit_exponent(&q, model).unwrap().law().unwrap();
                prop_assert!((a.gamma - b.gamma).abs() < 1e-10);
                prop_assert!((a.log_power - b.log_power).abs() < 1e-10);
                prop_assert!((b.amplitude / a.amplitude / scale - 1.0).abs() < 1e-9);
                prop_assert!((a.max_rel_residual - b.max_rel_residual).abs() < 1e-9);
            }
        }
    }
}

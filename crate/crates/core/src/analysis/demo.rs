//! Worked failures: the line, and the endpoint `γ = 2`.

use std::f64::consts::PI;

use super::fit::{fit_exponent, ExponentFit, ModelChoice};
use super::profile::DyadicGrid;
use super::verify::{FitSummary, GridRange, VerificationReport};
use crate::error::{domain, Result};
use crate::field::{RadialRule, RadialSpectrum};
use crate::tails::{radial_modulus, tail_profile, true_tail, TailKind};

pub const DEFAULT_WIDTHS: [f64; 3] = [0.2, 0.05, 0.0125];
pub const GAMMA2_GAMMA_TOLERANCE: f64 = 0.02;
pub const GAMMA2_LOG_TOLERANCE: f64 = 0.05;

/// `ψ₂[g_w](1) / ω_{2,1,2}[f_w](1)` for spectra `g_w` concentrated on
/// `2π − w ≤ |ξ| ≤ 2π + w`. Each ratio must be at least twice the previous
/// one whenever the width shrinks fourfold.
pub fn demo_d1_counterexample(widths: &[f64]) -> Result<VerificationReport> {
    if widths.is_empty() {
        return Err(domain("need at least one width"));
    }
    for (i, &w) in widths.iter().enumerate() {
        if !(w > 0.0 && w <= 0.25) {
            return Err(domain(format!("widths must lie in (0, 1/4], got {w}")));
        }
        if i > 0 && w >= widths[i - 1] {
            return Err(domain("widths must be strictly decreasing"));
        }
    }
    let mut ratios = Vec::with_capacity(widths.len());
    let mut notes = Vec::new();
    for &w in widths {
        let spec = RadialSpectrum::new(
            1,
            RadialRule::Band {
                center: 2.0 * PI,
                half_width: w,
            },
        )?;
        let tail = true_tail(&spec, 2.0, 1.0)?;
        let modulus = radial_modulus(&spec, 1.0, 1.0)?;
        let r = tail / modulus;
        notes.push(format!(
            "w = {w}: psi_2(1) = {tail:.6e}, omega_(2,1,2)(1) = {modulus:.6e}, ratio = {r:.6e}"
        ));
        ratios.push(r);
    }
    let mut passed = ratios.iter().all(|r| r.is_finite() && *r > 0.0);
    for k in 1..widths.len() {
        let shrink = widths[k - 1] / widths[k];
        let needed = 2f64.powf(shrink.log(4.0));
        let gain = ratios[k] / ratios[k - 1];
        let ok = gain >= needed;
        notes.push(format!(
            "w {} -> {}: ratio grew {gain:.4}x, needed {needed:.4}x: {ok}",
            widths[k - 1],
            widths[k]
        ));
        passed &= ok;
    }
    Ok(VerificationReport {
        case_name: "d1-counterexample".into(),
        grid: GridRange {
            t_min: 1.0,
            t_max: 1.0,
            count: 1,
        },
        lower_constant: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        upper_constant: ratios.iter().copied().fold(0.0, f64::max),
        fit: None,
        passed,
        notes,
        components: Vec::new(),
    })
}

fn fit_report(case: &str, fit: &ExponentFit, gamma: f64, beta: f64) -> VerificationReport {
    let dg = (fit.gamma - gamma).abs();
    let db = (fit.log_power - beta).abs();
    let passed = dg <= GAMMA2_GAMMA_TOLERANCE && db <= GAMMA2_LOG_TOLERANCE;
    VerificationReport {
        case_name: case.into(),
        grid: GridRange {
            t_min: fit.t_min,
            t_max: fit.t_max,
            count: fit.points_used,
        },
        lower_constant: fit.amplitude,
        upper_constant: fit.amplitude,
        fit: Some(FitSummary::from(fit)),
        passed,
        notes: vec![format!(
            "expected (gamma, beta) = ({gamma}, {beta}), fitted ({:.6}, {:.6}), tolerances {GAMMA2_GAMMA_TOLERANCE} / {GAMMA2_LOG_TOLERANCE}",
            fit.gamma, fit.log_power
        )],
        components: Vec::new(),
    }
}

/// Tails of `|ξ|^{-2}` (`d = 2`, `|ξ| ≥ 1`): the true tail decays like
/// `t^{-1}` while the first-order modified tail picks up `(log t)^{1/2}`.
pub fn demo_gamma2_failure() -> Result<VerificationReport> {
    let spec = RadialSpectrum::new(
        2,
        RadialRule::PowerLaw {
            alpha: 1.0,
            pprime: 2.0,
        },
    )?;
    let grid = DyadicGrid::octaves(2, 12)?;
    let truth = tail_profile(&spec, &TailKind::true_tail(2.0)?, &grid)?;
    let modified = tail_profile(&spec, &TailKind::modified(2.0, 1.0)?, &grid)?;
    let true_fit = fit_exponent(&truth, ModelChoice::PurePower)?.law()?;
    let mod_fit = fit_exponent(&modified, ModelChoice::PowerLog)?.law()?;
    let true_side = fit_report("gamma2-true-tail", &true_fit, 1.0, 0.0);
    let mod_side = fit_report("gamma2-modified-tail", &mod_fit, 1.0, 0.5);

    let ratio: Vec<f64> = modified
        .values()
        .iter()
        .zip(truth.values())
        .map(|(a, b)| a / b)
        .collect();
    let increasing = ratio.windows(2).all(|w| w[1] > w[0]);
    let mut notes = vec![format!(
        "psi_(2,1)/psi_2 from {:.6} to {:.6}, strictly increasing: {increasing}",
        ratio[0],
        ratio[ratio.len() - 1]
    )];
    let x = grid.points();
    let c = (ratio[ratio.len() - 1].powi(2) - ratio[0].powi(2))
        / (x[x.len() - 1].ln() - x[0].ln());
    notes.push(format!(
        "(psi_(2,1)/psi_2)^2 grows by {c:.6} per unit of log t, i.e. like log t"
    ));
    Ok(VerificationReport {
        case_name: "gamma2-failure".into(),
        grid: GridRange {
            t_min: grid.start(),
            t_max: grid.end(),
            count: grid.count(),
        },
        lower_constant: ratio[0],
        upper_constant: ratio[ratio.len() - 1],
        fit: mod_side.fit,
        passed: increasing && true_side.passed && mod_side.passed,
        notes,
        components: vec![true_side, mod_side],
    })
}

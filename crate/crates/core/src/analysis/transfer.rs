//! Exponent transfer between true and modified tails.

use serde::Serialize;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// From a two-sided true-tail law `t^{-α}` to the modified tail.
    TrueToModified,
    /// From a two-sided modified-tail law `t^{-α}` to the true tail.
    ModifiedToTrue,
}

/// Law implied for the other tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PredictedLaw {
    /// `≍ t^{-gamma} (log t)^{log_power}`.
    TwoSided { gamma: f64, log_power: f64 },
    /// `≳ t^{-gamma} (log t)^{log_power}` only.
    LowerBound { gamma: f64, log_power: f64 },
    /// Only the trivial lower bound 0.
    ZeroBound,
}

impl PredictedLaw {
    pub fn exponents(&self) -> Option<(f64, f64)> {
        match *self {
            PredictedLaw::TwoSided { gamma, log_power } | PredictedLaw::LowerBound { gamma, log_power } => {
                Some((gamma, log_power))
            }
            PredictedLaw::ZeroBound => None,
        }
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

pub fn transfer_predict(alpha: f64, m: f64, pprime: f64, direction: Direction) -> Result<PredictedLaw> {
    for (name, x) in [("alpha", alpha), ("m", m)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(domain(format!("{name} must be positive, got {x}")));
        }
    }
    if !(pprime >= 1.0) {
        return Err(domain(format!("pprime must be in [1, inf], got {pprime}")));
    }
    let below = alpha < m && !same(alpha, m);
    Ok(match direction {
        Direction::TrueToModified if below => PredictedLaw::TwoSided {
            gamma: alpha,
            log_power: 0.0,
        },
        Direction::TrueToModified if same(alpha, m) && pprime.is_finite() => PredictedLaw::TwoSided {
            gamma: m,
            log_power: 1.0 / pprime,
        },
        Direction::TrueToModified => PredictedLaw::TwoSided {
            gamma: m,
            log_power: 0.0,
        },
        Direction::ModifiedToTrue if below => PredictedLaw::LowerBound {
            gamma: alpha,
            log_power: 0.0,
        },
        Direction::ModifiedToTrue => PredictedLaw::ZeroBound,
    })
}

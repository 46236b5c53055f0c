//! The kernel `G_α(v) = 2^α ∫_{S^{d-1}} (1 - cos(y·w))^α dS(y)`, `|w| = v`,
//! reduced to `2^α |S^{d-2}| ∫_0^π (1 - cos(v cos θ))^α sin^{d-2} θ dθ`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use statrs::function::gamma::ln_gamma;

use crate::chebyshev::PiecewiseChebyshev;
use crate::error::{domain, Error, Result};
use crate::moduli::sphere_area;
use crate::quadrature::{gauss_legendre, gauss_legendre_smoothed};

const NODES_PER_PANEL: usize = 24;
/// Non-integer orders have algebraic endpoint singularities and use the smoothed rule.
const SMOOTHED_NODES_PER_PANEL: usize = 48;
const SMALL_V: f64 = 1e-3;
const PANEL_WIDTH: f64 = PI / 4.0;
const PANEL_DEGREE: usize = 16;
const MIN_TABLE_END: f64 = 64.0;
/// Tables are never built past this point; larger arguments use direct quadrature.
pub const TABLE_CAP: f64 = 1024.0;

fn check(d: usize, alpha: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::Unsupported(format!(
            "G_alpha is defined for d >= 2, got d = {d}"
        )));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

fn g_direct(d: usize, alpha: f64, v: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let sin_power = (d - 2) as i32;
    let integrand = |theta: f64| {
        let h = (0.5 * v * theta.cos()).sin();
        let one_minus_cos = 2.0 * h * h;
        let base = if alpha == 1.0 {
            one_minus_cos
        } else if alpha.fract() == 0.0 {
            one_minus_cos.powi(alpha as i32)
        } else {
            one_minus_cos.powf(alpha)
        };
        base * theta.sin().powi(sin_power)
    };
    // Split [0, π/2] where v cos θ crosses a multiple of π; the integrand is
    // symmetric about θ = π/2.
    let mut cuts = vec![PI / 2.0];
    let mut j = 1;
    while (j as f64) * PI < v {
        cuts.push((j as f64 * PI / v).acos());
        j += 1;
    }
    cuts.push(0.0);
    cuts.reverse();
    let half: f64 = if alpha.fract() == 0.0 {
        cuts.windows(2)
            .map(|w| {
                let (mid, rad) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
                rad * nodes
                    .iter()
                    .zip(weights)
                    .map(|(&x, &wt)| wt * integrand(mid + rad * x))
                    .sum::<f64>()
            })
            .sum()
    } else {
        cuts.windows(2)
            .map(|w| gauss_legendre_smoothed(&integrand, w[0], w[1], nodes, weights))
            .sum()
    };
    2f64.powf(alpha) * sphere_area(d - 1) * 2.0 * half
}

/// `G_α(v)` by panel-wise Gauss–Legendre quadrature in the polar angle.
pub fn g_alpha(d: usize, alpha: f64, v: f64) -> Result<f64> {
    check(d, alpha)?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(domain(format!("v must be finite and nonnegative, got {v}")));
    }
    let (x, w) = rule_for(alpha);
    Ok(g_direct(d, alpha, v, &x, &w))
}

fn rule_for(alpha: f64) -> (Vec<f64>, Vec<f64>) {
    if alpha.fract() == 0.0 {
        gauss_legendre(NODES_PER_PANEL)
    } else {
        gauss_legendre(SMOOTHED_NODES_PER_PANEL)
    }
}

/// `G_α(v) / v^{2α}` as `v → 0`: `|S^{d-2}| Γ(α+1/2) Γ((d-1)/2) / Γ(α+d/2)`.
pub fn small_v_constant(d: usize, alpha: f64) -> f64 {
    sphere_area(d - 1) * polar_moment(d, 2.0 * alpha)
}

/// `∫_0^π |cos θ|^β sin^{d-2} θ dθ`.
fn polar_moment(d: usize, beta: f64) -> f64 {
    let h = (d as f64 - 1.0) / 2.0;
    (ln_gamma((beta + 1.0) / 2.0) + ln_gamma(h) - ln_gamma((beta + d as f64) / 2.0)).exp()
}

fn small_v_series(d: usize, alpha: f64, v: f64) -> f64 {
    let h2 = -alpha / 12.0 * sphere_area(d - 1) * polar_moment(d, 2.0 * alpha + 2.0);
    v.powf(2.0 * alpha) * (small_v_constant(d, alpha) + h2 * v * v)
}

/// Mean of `2^α (1 - cos u)^α` over a period: `4^α Γ(α+1/2) / (√π Γ(α+1))`.
pub(crate) fn oscillation_mean(alpha: f64) -> f64 {
    (alpha * 4f64.ln() + ln_gamma(alpha + 0.5) - 0.5 * PI.ln() - ln_gamma(alpha + 1.0)).exp()
}

/// `lim_{v→∞} G_α(v) = |S^{d-1}| 4^α Γ(α+1/2) / (√π Γ(α+1))`.
pub fn large_v_limit(d: usize, alpha: f64) -> f64 {
    sphere_area(d) * oscillation_mean(alpha)
}

#[derive(Debug)]
struct GTable {
    near: PiecewiseChebyshev,
    far: PiecewiseChebyshev,
}

impl GTable {
    fn build(d: usize, alpha: f64, end: f64) -> Self {
        let (x, w) = rule_for(alpha);
        let near = PiecewiseChebyshev::fit(
            |v| g_direct(d, alpha, v, &x, &w) / v.powf(2.0 * alpha),
            0.0,
            2.0 * PI,
            PANEL_WIDTH,
            PANEL_DEGREE,
        );
        let far = PiecewiseChebyshev::fit(
            |v| g_direct(d, alpha, v, &x, &w),
            2.0 * PI,
            end,
            PANEL_WIDTH,
            PANEL_DEGREE,
        );
        Self { near, far }
    }

    fn end(&self) -> f64 {
        self.far.end()
    }
}

type TableKey = (usize, u64);

fn tables() -> &'static RwLock<HashMap<TableKey, Arc<GTable>>> {
    static TABLES: OnceLock<RwLock<HashMap<TableKey, Arc<GTable>>>> = OnceLock::new();
    TABLES.get_or_init(|| RwLock::new(HashMap::new()))
}

fn build_lock() -> &'static Mutex<()> {
    static LOCK: OnceLock<Mutex<()>> = OnceLock::new();
    LOCK.get_or_init(|| Mutex::new(()))
}

fn lookup(key: TableKey, reach: f64) -> Option<Arc<GTable>> {
    let map = tables().read().unwrap_or_else(|e| e.into_inner());
    map.get(&key).filter(|t| t.end() >= reach).cloned()
}

fn table(d: usize, alpha: f64, reach: f64) -> Arc<GTable> {
    let key = (d, alpha.to_bits());
    let reach = reach.min(TABLE_CAP);
    if let Some(t) = lookup(key, reach) {
        return t;
    }
    let _guard = build_lock().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = lookup(key, reach) {
        return t;
    }
    let mut end = MIN_TABLE_END;
    while end < reach {
        end *= 2.0;
    }
    log::debug!("building G table for d = {d}, alpha = {alpha} on [0, {end}]");
    let built = Arc::new(GTable::build(d, alpha, end.min(TABLE_CAP)));
    tables()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, built.clone());
    built
}

/// Fast evaluator of `G_α` for one `(d, α)`.
///
/// For `d = 1` the two-point sphere gives `2^{α+1} (1 - cos v)^α` exactly.
/// For `d ≥ 2` values come from a shared Chebyshev table, with the two-term
/// small-`v` series below `1e-3` and direct quadrature beyond [`TABLE_CAP`].
#[derive(Debug, Clone)]
pub struct GKernel {
    d: usize,
    alpha: f64,
    table: Option<Arc<GTable>>,
}

impl GKernel {
    /// Kernel usable without fallback on `[0, reach]` (up to [`TABLE_CAP`]).
    pub fn new(d: usize, alpha: f64, reach: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain(format!("alpha must be positive, got {alpha}")));
        }
        if d == 0 {
            return Err(domain("dimension must be at least 1"));
        }
        let table = (d >= 2).then(|| table(d, alpha, reach));
        Ok(Self { d, alpha, table })
    }

    pub fn limit(&self) -> f64 {
        large_v_limit(self.d, self.alpha)
    }

    pub fn eval(&self, v: f64) -> f64 {
        let v = v.abs();
        let Some(table) = &self.table else {
            let h = (0.5 * v).sin();
            return 2f64.powf(self.alpha) * 2.0 * (2.0 * h * h).powf(self.alpha);
        };
        if v < SMALL_V {
            return small_v_series(self.d, self.alpha, v);
        }
        if v < 2.0 * PI {
            if let Some(h) = table.near.eval(v) {
                return h * v.powf(2.0 * self.alpha);
            }
        }
        if let Some(g) = table.far.eval(v) {
            return g;
        }
        let (x, w) = rule_for(self.alpha);
        g_direct(self.d, self.alpha, v, &x, &w)
    }
}

/// Power series of `J_0`, used as an independent check of the `d = 2` kernel.
#[cfg(test)]
fn bessel_j0(v: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= -(v * v) / (4.0 * (k * k) as f64);
        sum += term;
    }
    sum
}

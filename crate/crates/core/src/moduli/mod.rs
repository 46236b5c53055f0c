//! Integral moduli of continuity
//! `ω_{p,m,q}[f](h) = (∫_{S^{d-1}} δ_{p,m}[f](h y)^q dS(y))^{1/q}` and the
//! supremum variant `ω_{p,m,∞}[f](h) = sup_{|y| ≤ h} δ_{p,m}[f](y)`.

mod sphere;

use rayon::prelude::*;

use crate::analysis::profile::{DecayProfile, DyadicGrid};
use crate::differences::{delta, DifferenceOrder, Signal};
use crate::error::{domain, Error, Result};
use crate::field::check_exponent;

pub use sphere::{default_order, sphere_area, sphere_rule, SphereRule};

/// Relative change allowed between a rule and its doubled-order refinement.
pub const SELF_CHECK_TOLERANCE: f64 = 1e-8;

/// Largest order the self-check escalates to.
pub fn max_order(d: usize) -> usize {
    match d {
        1 => 1,
        2 => 8192,
        3 => 192,
        _ => 48,
    }
}

fn check_rule(signal: &Signal, rule: &SphereRule) -> Result<()> {
    if rule.dim() != signal.grid().dim() {
        return Err(domain(format!(
            "sphere rule is for d = {}, field has d = {}",
            rule.dim(),
            signal.grid().dim()
        )));
    }
    Ok(())
}

fn scaled(y: &[f64], h: f64) -> Vec<f64> {
    y.iter().map(|c| c * h).collect()
}

/// `δ_{p,m}[f](h y_i)^p`-free evaluation: returns `δ(h y_i)` for every node,
/// reusing antipodal pairs when `p = 2`.
fn directional_deltas(
    signal: &Signal,
    p: f64,
    order: DifferenceOrder,
    h: f64,
    rule: &SphereRule,
) -> Result<Vec<f64>> {
    let n = rule.len();
    let symmetric = p == 2.0;
    let owners: Vec<usize> = (0..n)
        .map(|i| match rule.antipode(i) {
            Some(j) if symmetric && j < i => j,
            _ => i,
        })
        .collect();
    let unique: Vec<usize> = (0..n).filter(|&i| owners[i] == i).collect();
    let values: Vec<f64> = unique
        .par_iter()
        .map(|&i| delta(signal, &scaled(&rule.nodes()[i], h), p, order))
        .collect::<Result<_>>()?;
    let mut by_node = vec![0.0; n];
    for (&i, &v) in unique.iter().zip(&values) {
        by_node[i] = v;
    }
    Ok((0..n).map(|i| by_node[owners[i]]).collect())
}

/// `ω_{p,m,q}[f](h)` for `1 ≤ q < ∞` with the given sphere rule.
pub fn omega(
    signal: &Signal,
    p: f64,
    order: DifferenceOrder,
    q: f64,
    h: f64,
    rule: &SphereRule,
) -> Result<f64> {
    check_exponent(p, "p")?;
    if !(q >= 1.0 && q.is_finite()) {
        return Err(domain(format!("q must be in [1, inf), got {q}; use omega_sup for q = inf")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain(format!("h must be positive, got {h}")));
    }
    check_rule(signal, rule)?;
    let deltas = directional_deltas(signal, p, order, h, rule)?;
    let sum: f64 = deltas
        .iter()
        .zip(rule.weights())
        .map(|(&d, &w)| w * d.powf(q))
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// Radii searched by [`omega_sup`]: `{2^{j/n}} ∩ [spacing, h) ∪ {h}`, or
/// `{spacing}` when `h` is below one grid spacing.
pub fn sup_radii(h: f64, spacing: f64, per_octave: usize) -> Vec<f64> {
    if h < spacing {
        return vec![spacing];
    }
    let n = per_octave.max(1) as f64;
    let lo = (spacing.log2() * n).ceil() as i64;
    let mut radii: Vec<f64> = (lo..)
        .map(|j| 2f64.powf(j as f64 / n))
        .take_while(|&r| r < h)
        .collect();
    radii.push(h);
    radii
}

/// Smallest step the sup search may use: one cell on the spatial path, none
/// on the spectral path.
fn step_floor(signal: &Signal, p: f64, order: DifferenceOrder, h: f64) -> f64 {
    let spacing = signal.grid().spacing();
    if p == 2.0 || !order.is_integer() {
        spacing.min(h)
    } else {
        spacing
    }
}

/// `ω_{p,m,∞}[f](h)` over the radii of [`sup_radii`] times the nodes of `rule`.
///
/// Steps below one grid cell are only searched on the spectral path
/// (`p = 2` or fractional `m`); the spatial path uses one cell instead.
pub fn omega_sup_with_rule(
    signal: &Signal,
    p: f64,
    order: DifferenceOrder,
    h: f64,
    search_grid_size: usize,
    rule: &SphereRule,
) -> Result<f64> {
    check_exponent(p, "p")?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain(format!("h must be positive, got {h}")));
    }
    check_rule(signal, rule)?;
    let mut best: f64 = 0.0;
    for r in sup_radii(h, step_floor(signal, p, order, h), search_grid_size) {
        let deltas = directional_deltas(signal, p, order, r, rule)?;
        best = deltas.into_iter().fold(best, f64::max);
    }
    Ok(best)
}

/// [`omega_sup_with_rule`] with the default sphere rule for the field's dimension.
pub fn omega_sup(
    signal: &Signal,
    p: f64,
    order: DifferenceOrder,
    h: f64,
    search_grid_size: usize,
) -> Result<f64> {
    let d = signal.grid().dim();
    let rule = sphere_rule(d, default_order(d))?;
    omega_sup_with_rule(signal, p, order, h, search_grid_size, &rule)
}

fn relative_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Settings for [`omega_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileOptions {
    /// Radii per octave for the `q = ∞` search.
    pub sup_per_octave: usize,
    pub self_check: bool,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            sup_per_octave: 4,
            self_check: true,
        }
    }
}

/// Sweeps `ω_{p,m,q}[f](h)` over the grid points `h ∈ (0, 1]`.
///
/// On the spectral path (`p = 2` or fractional `m`) each value is accepted
/// only once the doubled-order rule moves it by less than
/// [`SELF_CHECK_TOLERANCE`]; the order is doubled until that holds or
/// [`max_order`] is exceeded. `q = ∞` profiles are made monotone by a running
/// maximum over increasing `h`.
pub fn omega_profile(
    signal: &Signal,
    p: f64,
    order: DifferenceOrder,
    q: f64,
    h_grid: &DyadicGrid,
    rule: &SphereRule,
    options: ProfileOptions,
) -> Result<DecayProfile> {
    check_rule(signal, rule)?;
    let hs = h_grid.points();
    if hs.is_empty() {
        return Err(domain("empty h grid"));
    }
    if let Some(&h) = hs.iter().find(|&&h| !(h > 0.0 && h <= 1.0)) {
        return Err(domain(format!("h grid must lie in (0, 1], found {h}")));
    }
    let d = rule.dim();
    let mut samples = Vec::with_capacity(hs.len());
    if q.is_infinite() {
        check_exponent(p, "p")?;
        let mut seen = std::collections::HashSet::new();
        let mut running: f64 = 0.0;
        for &h in &hs {
            for r in sup_radii(h, step_floor(signal, p, order, h), options.sup_per_octave) {
                if seen.insert(r.to_bits()) {
                    let best = directional_deltas(signal, p, order, r, rule)?
                        .into_iter()
                        .fold(0.0, f64::max);
                    running = running.max(best);
                }
            }
            samples.push((h, running));
        }
        return DecayProfile::from_steps(samples);
    }
    let spectral = p == 2.0 || !order.is_integer();
    let check = options.self_check && spectral && d >= 2;
    let mut current = rule.clone();
    for &h in &hs {
        let mut value = omega(signal, p, order, q, h, &current)?;
        if check {
            loop {
                let finer = sphere_rule(d, current.order() * 2)?;
                let refined = omega(signal, p, order, q, h, &finer)?;
                let change = relative_change(value, refined);
                if change < SELF_CHECK_TOLERANCE {
                    value = refined;
                    break;
                }
                if finer.order() >= max_order(d) {
                    return Err(Error::Unconverged {
                        h,
                        order: finer.order(),
                        rel_change: change,
                    });
                }
                log::debug!(
                    "h = {h}: order {} -> {} moved omega by {change:e}",
                    current.order(),
                    finer.order()
                );
                current = finer;
                value = refined;
            }
        }
        samples.push((h, value));
    }
    DecayProfile::from_steps(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GridSpec, SampledField};
    use std::f64::consts::PI;

    fn ord(m: f64) -> DifferenceOrder {
        DifferenceOrder::new(m).unwrap()
    }

    fn interval() -> Signal {
        let grid = GridSpec::new(1, 16.0, 4096).unwrap();
        Signal::from_field(
            SampledField::from_real_fn(grid, |x| if (0.0..=1.0).contains(&x[0]) { 1.0 } else { 0.0 })
                .unwrap(),
        )
        .unwrap()
    }

    fn gaussian(d: usize, l: f64, n: usize) -> Signal {
        let grid = GridSpec::new(d, l, n).unwrap();
        Signal::from_field(
            SampledField::from_real_fn(grid, |x| (-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp())
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn interval_modulus_is_two_sqrt_h() {
        let s = interval();
        let spacing = s.grid().spacing();
        let rule = sphere_rule(1, 1).unwrap();
        for h in [1.0, 0.5, 0.125, 1.0 / 64.0] {
            let w = omega(&s, 2.0, ord(1.0), 2.0, h, &rule).unwrap();
            assert!((w - 2.0 * h.sqrt()).abs() < 3.0 * spacing, "h={h}: {w}");
            let sup = omega_sup(&s, 2.0, ord(1.0), h, 4).unwrap();
            assert!((sup - (2.0 * h).sqrt()).abs() < 3.0 * spacing, "h={h}: {sup}");
        }
    }

    #[test]
    fn zero_field_has_zero_modulus() {
        let grid = GridSpec::new(2, 4.0, 16).unwrap();
        let s = Signal::from_field(SampledField::zeros(grid)).unwrap();
        let rule = sphere_rule(2, 16).unwrap();
        assert_eq!(omega(&s, 2.0, ord(1.0), 2.0, 0.5, &rule).unwrap(), 0.0);
        let grid = DyadicGrid::octaves(-3, 0).unwrap();
        let p = omega_profile(&s, 2.0, ord(1.0), 2.0, &grid, &rule, ProfileOptions::default())
            .unwrap();
        assert!(p.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sub_spacing_sup_on_spatial_path_uses_one_spacing() {
        let s = interval();
        let spacing = s.grid().spacing();
        assert_eq!(sup_radii(spacing / 3.0, spacing, 4), vec![spacing]);
        let a = omega_sup(&s, 1.0, ord(1.0), spacing / 3.0, 4).unwrap();
        let b = omega_sup(&s, 1.0, ord(1.0), spacing, 4).unwrap();
        assert_eq!(a, b);
        let a = omega_sup(&s, 2.0, ord(1.0), spacing / 3.0, 4).unwrap();
        let b = omega_sup(&s, 2.0, ord(1.0), spacing, 4).unwrap();
        assert!(a < b);
    }

    #[test]
    fn sup_dominates_normalized_average() {
        let s = gaussian(2, 8.0, 64);
        let rule = sphere_rule(2, 64).unwrap();
        for h in [0.25, 0.5, 1.0] {
            let avg = omega(&s, 2.0, ord(1.0), 2.0, h, &rule).unwrap();
            let sup = omega_sup_with_rule(&s, 2.0, ord(1.0), h, 4, &rule).unwrap();
            assert!(avg <= (2.0 * PI).sqrt() * sup * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = gaussian(2, 8.0, 16);
        let rule = sphere_rule(2, 8).unwrap();
        assert!(omega(&s, 2.0, ord(1.0), 0.5, 0.5, &rule).is_err());
        assert!(omega(&s, 2.0, ord(1.0), 2.0, 0.0, &rule).is_err());
        assert!(omega(&s, 2.0, ord(1.0), 2.0, 0.5, &sphere_rule(3, 4).unwrap()).is_err());
        let bad = DyadicGrid::new(1.0, 4.0, 3).unwrap();
        assert!(omega_profile(&s, 2.0, ord(1.0), 2.0, &bad, &rule, ProfileOptions::default())
            .is_err());
    }

    #[test]
    fn self_check_escalates_order() {
        let s = gaussian(2, 8.0, 64);
        let rule = sphere_rule(2, 4).unwrap();
        let grid = DyadicGrid::octaves(-2, 0).unwrap();
        let p = omega_profile(&s, 2.0, ord(1.0), 2.0, &grid, &rule, ProfileOptions::default())
            .unwrap();
        let reference = sphere_rule(2, 512).unwrap();
        for (h, v) in grid.points().iter().zip(p.values().iter().rev()) {
            let exact = omega(&s, 2.0, ord(1.0), 2.0, *h, &reference).unwrap();
            assert!((v - exact).abs() < 1e-7 * exact);
        }
    }

    #[test]
    fn sup_profile_is_monotone() {
        let s = gaussian(2, 8.0, 32);
        let rule = sphere_rule(2, 16).unwrap();
        let grid = DyadicGrid::octaves(-4, 0).unwrap();
        let p = omega_profile(&s, 1.0, ord(1.0), f64::INFINITY, &grid, &rule, ProfileOptions::default())
            .unwrap();
        let v = p.values();
        assert!(v.windows(2).all(|w| w[1] <= w[0]));
    }
}

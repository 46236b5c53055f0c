use std::collections::HashMap;
use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};
use crate::quadrature::{gauss_gegenbauer, gauss_legendre};

/// Surface measure `|S^{d-1}| = 2 π^{d/2} / Γ(d/2)`; `|S^0| = 2`.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            let h = d as f64 / 2.0;
            2.0 * (h * PI.ln() - ln_gamma(h)).exp()
        }
    }
}

/// Quadrature nodes and weights on `S^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    dim: usize,
    order: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    antipodes: Vec<Option<usize>>,
}

impl SphereRule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of `-y_i` in the rule, when present.
    pub fn antipode(&self, i: usize) -> Option<usize> {
        self.antipodes[i]
    }
}

fn build(d: usize, order: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    match d {
        1 => (vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0]),
        2 => {
            let w = 2.0 * PI / order as f64;
            let nodes = (0..order)
                .map(|k| {
                    let phi = 2.0 * PI * k as f64 / order as f64;
                    vec![phi.cos(), phi.sin()]
                })
                .collect();
            (nodes, vec![w; order])
        }
        _ => {
            // y = (t, sqrt(1 - t²) z), z ∈ S^{d-2}, density (1 - t²)^{(d-3)/2}
            let (ts, tw) = if d == 3 {
                gauss_legendre(order)
            } else {
                gauss_gegenbauer(order, (d as f64 - 3.0) / 2.0)
            };
            let sub_order = if d == 3 { 2 * order } else { order };
            let (sub_nodes, sub_weights) = build(d - 1, sub_order);
            let mut nodes = Vec::with_capacity(ts.len() * sub_nodes.len());
            let mut weights = Vec::with_capacity(nodes.capacity());
            for (&t, &w) in ts.iter().zip(&tw) {
                let s = (1.0 - t * t).max(0.0).sqrt();
                for (z, &zw) in sub_nodes.iter().zip(&sub_weights) {
                    let mut y = Vec::with_capacity(d);
                    y.push(t);
                    y.extend(z.iter().map(|c| s * c));
                    nodes.push(y);
                    weights.push(w * zw);
                }
            }
            (nodes, weights)
        }
    }
}

fn antipode_map(nodes: &[Vec<f64>]) -> Vec<Option<usize>> {
    let key = |y: &[f64]| -> Vec<i64> { y.iter().map(|c| (c * 1e9).round() as i64).collect() };
    let index: HashMap<Vec<i64>, usize> =
        nodes.iter().enumerate().map(|(i, y)| (key(y), i)).collect();
    nodes
        .iter()
        .map(|y| {
            let neg: Vec<f64> = y.iter().map(|c| -c).collect();
            index.get(&key(&neg)).copied()
        })
        .collect()
}

/// Quadrature rule on `S^{d-1}`.
///
/// `d = 1`: the two points `±1` with unit weights. `d = 2`: `order`
/// equispaced points. `d = 3`: Gauss–Legendre in `cos θ` with `order` nodes
/// times `2·order` equispaced azimuths. `d ≥ 4`: Gauss–Gegenbauer in the
/// first coordinate times the rule on `S^{d-2}`, recursively.
pub fn sphere_rule(d: usize, order: usize) -> Result<SphereRule> {
    if d < 1 {
        return Err(domain("sphere dimension d must be at least 1"));
    }
    if order < 1 {
        return Err(domain("sphere rule order must be at least 1"));
    }
    let (nodes, weights) = build(d, order);
    let antipodes = antipode_map(&nodes);
    Ok(SphereRule {
        dim: d,
        order,
        nodes,
        weights,
        antipodes,
    })
}

/// Default resolution: 64 points on the circle, 24 × 48 on `S²`.
pub fn default_order(d: usize) -> usize {
    match d {
        1 => 1,
        2 => 64,
        3 => 24,
        _ => 12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_dimensional_rule_is_two_points() {
        for order in [1, 5, 64] {
            let r = sphere_rule(1, order).unwrap();
            assert_eq!(r.nodes(), &[vec![1.0], vec![-1.0]]);
            assert_eq!(r.weights(), &[1.0, 1.0]);
            assert_eq!(r.antipode(0), Some(1));
        }
        assert!(sphere_rule(0, 4).is_err());
        assert!(sphere_rule(2, 0).is_err());
    }

    #[test]
    fn circle_weights_sum_to_two_pi() {
        let r = sphere_rule(2, 8).unwrap();
        let total: f64 = r.weights().iter().sum();
        assert_eq!(total, 2.0 * PI);
        assert_eq!(r.antipode(1), Some(5));
        assert_eq!(sphere_rule(2, 7).unwrap().antipode(0), None);
    }

    #[test]
    fn sphere_second_moment() {
        let r = sphere_rule(3, 24).unwrap();
        let e = [0.3, -0.5, 0.8];
        let norm = (e.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let q: f64 = r
            .nodes()
            .iter()
            .zip(r.weights())
            .map(|(y, w)| {
                let dot: f64 = y.iter().zip(&e).map(|(a, b)| a * b / norm).sum();
                w * dot * dot
            })
            .sum();
        assert!((q - 4.0 * PI / 3.0).abs() < 1e-12, "{q}");
        assert_eq!(r.len(), 24 * 48);
        assert!(r.antipode(17).is_some());
    }

    #[test]
    fn higher_dimensional_rules() {
        for d in 4..=6 {
            let r = sphere_rule(d, 6).unwrap();
            let total: f64 = r.weights().iter().sum();
            assert!((total - sphere_area(d)).abs() < 1e-12 * sphere_area(d), "d={d}");
            // ∫ y_1² dS = |S^{d-1}| / d
            let q: f64 = r.nodes().iter().zip(r.weights()).map(|(y, w)| w * y[d - 1] * y[d - 1]).sum();
            assert!((q - sphere_area(d) / d as f64).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn areas() {
        assert_eq!(sphere_area(1), 2.0);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn weights_sum_and_unit_nodes(d in 1usize..5, order in 1usize..20) {
            let r = sphere_rule(d, order).unwrap();
            let total: f64 = r.weights().iter().sum();
            prop_assert!((total - sphere_area(d)).abs() < 1e-12 * sphere_area(d));
            prop_assert!(r.weights().iter().all(|&w| w > 0.0));
            for y in r.nodes() {
                let n: f64 = y.iter().map(|c| c * c).sum::<f64>().sqrt();
                prop_assert!((n - 1.0).abs() < 1e-14);
            }
        }
    }
}

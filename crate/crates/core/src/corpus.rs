//! Named analytic test functions and spectra.
//!
//! URIs have the form `corpus:<name>?<k>=<v>&...`. Gridded entries accept
//! `L` (half extent) and `N` (samples per axis) to override their default grid.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::field::{GridSpec, RadialRule, RadialSpectrum, SampledField};

/// Decay facts known in closed form for an entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Known {
    /// Exponent `γ` with `ω_{2,1,2}(ε)² ≍ ε^γ` and `ψ_2(t)² ≍ t^{-γ}`.
    pub gamma: Option<f64>,
    pub log_power: f64,
    pub closed_form_tail: Option<&'static str>,
    pub closed_form_modulus: Option<&'static str>,
}

/// What a corpus entry builds.
#[derive(Debug, Clone)]
pub enum CorpusObject {
    Field(SampledField),
    Spectrum(RadialSpectrum),
}

impl CorpusObject {
    pub fn into_field(self) -> Result<SampledField> {
        match self {
            CorpusObject::Field(f) => Ok(f),
            CorpusObject::Spectrum(_) => Err(domain("this corpus entry is a spectrum, not a field")),
        }
    }

    pub fn into_spectrum(self) -> Result<RadialSpectrum> {
        match self {
            CorpusObject::Spectrum(s) => Ok(s),
            CorpusObject::Field(_) => Err(domain("this corpus entry is a field, not a radial spectrum")),
        }
    }
}

/// Registry description of one entry.
#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [&'static str],
    pub known: Known,
}

const GRID_PARAMS: [&str; 2] = ["L", "N"];

const NONE: Known = Known {
    gamma: None,
    log_power: 0.0,
    closed_form_tail: None,
    closed_form_modulus: None,
};

pub const REGISTRY: &[CorpusEntry] = &[
    CorpusEntry {
        name: "ball",
        summary: "indicator of the ball |x| <= r, d in {1, 2, 3}",
        params: &["d", "r", "L", "N"],
        known: Known {
            gamma: Some(1.0),
            log_power: 0.0,
            closed_form_tail: None,
            closed_form_modulus: None,
        },
    },
    CorpusEntry {
        name: "interval",
        summary: "indicator of [0, 1] on the line",
        params: &["L", "N"],
        known: Known {
            gamma: Some(1.0),
            log_power: 0.0,
            closed_form_tail: Some("t psi_2(t)^2 -> 4"),
            closed_form_modulus: Some("omega_{2,1,2}(eps)^2 = 4 eps for eps <= 1"),
        },
    },
    CorpusEntry {
        name: "gaussian",
        summary: "exp(-|x|^2 / (2 sigma^2))",
        params: &["d", "sigma", "L", "N"],
        known: NONE,
    },
    CorpusEntry {
        name: "powerlaw",
        summary: "radial spectrum |xi|^{-(d/p') - alpha} for |xi| >= 1, cubic fill inside",
        params: &["d", "pprime", "alpha"],
        known: Known {
            gamma: None,
            log_power: 0.0,
            closed_form_tail: Some("psi_{p'}(t) = (|S^{d-1}| / (alpha p'))^{1/p'} t^{-alpha}, t >= 1"),
            closed_form_modulus: None,
        },
    },
    CorpusEntry {
        name: "borderline",
        summary: "powerlaw with alpha = m",
        params: &["d", "pprime", "m"],
        known: NONE,
    },
    CorpusEntry {
        name: "bump",
        summary: "smooth radial spectrum supported in |xi| <= R",
        params: &["d", "R"],
        known: NONE,
    },
    CorpusEntry {
        name: "conc",
        summary: "d = 1 spectrum: indicator of 2 pi - w <= |xi| <= 2 pi + w",
        params: &["w"],
        known: NONE,
    },
    CorpusEntry {
        name: "interval-ft",
        summary: "|2 sin(xi/2) / xi|, the transform modulus of the interval indicator",
        params: &[],
        known: Known {
            gamma: Some(1.0),
            log_power: 0.0,
            closed_form_tail: Some("t psi_2(t)^2 -> 4"),
            closed_form_modulus: None,
        },
    },
    CorpusEntry {
        name: "gaussian-ft",
        summary: "(2 pi)^{d/2} sigma^d exp(-sigma^2 |xi|^2 / 2)",
        params: &["d", "sigma"],
        known: NONE,
    },
];

pub fn entry(name: &str) -> Result<&'static CorpusEntry> {
    REGISTRY.iter().find(|e| e.name == name).ok_or_else(|| {
        let names: Vec<&str> = REGISTRY.iter().map(|e| e.name).collect();
        Error::Parse(format!("unknown corpus entry {name:?}; known: {}", names.join(", ")))
    })
}

/// Splits `corpus:<name>?k=v&...` into the name and its parameters.
pub fn parse_uri(uri: &str) -> Result<(String, BTreeMap<String, String>)> {
    let body = uri
        .strip_prefix("corpus:")
        .ok_or_else(|| Error::Parse(format!("corpus URI must start with \"corpus:\", got {uri:?}")))?;
    let (name, query) = body.split_once('?').unwrap_or((body, ""));
    let mut params = BTreeMap::new();
    for pair in query.split('&').filter(|s| !s.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("corpus parameter must be k=v, got {pair:?}")))?;
        if params.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Parse(format!("corpus parameter {k:?} given twice")));
        }
    }
    Ok((name.to_string(), params))
}

struct Params<'a> {
    name: &'a str,
    map: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn real(&self, key: &str, default: f64) -> Result<f64> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => {
                let x = match v.as_str() {
                    "inf" | "infinity" => f64::INFINITY,
                    s => s.parse().map_err(|_| {
                        Error::Parse(format!("{}: parameter {key}={v:?} is not a number", self.name))
                    })?,
                };
                Ok(x)
            }
        }
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64> {
        let x = self.real(key, default)?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(domain(format!("{}: {key} must be positive, got {x}", self.name)));
        }
        Ok(x)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                Error::Parse(format!("{}: parameter {key}={v:?} is not a positive integer", self.name))
            }),
        }
    }
}

fn default_samples(d: usize) -> usize {
    match d {
        1 => 4096,
        2 => 1024,
        _ => 64,
    }
}

fn resolve_grid(
    p: &Params,
    d: usize,
    default_l: f64,
    default_n: usize,
    grid: Option<GridSpec>,
) -> Result<GridSpec> {
    match grid {
        Some(g) => {
            if g.dim() != d {
                return Err(domain(format!(
                    "{}: grid has d = {}, entry has d = {d}",
                    p.name,
                    g.dim()
                )));
            }
            Ok(g)
        }
        None => GridSpec::new(d, p.positive("L", default_l)?, p.count("N", default_n)?),
    }
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Builds a corpus entry. `grid` overrides the default grid of gridded entries.
pub fn make(
    name: &str,
    params: &BTreeMap<String, String>,
    grid: Option<GridSpec>,
) -> Result<CorpusObject> {
    let e = entry(name)?;
    for key in params.keys() {
        if !e.params.contains(&key.as_str()) {
            return Err(Error::Parse(format!(
                "{name}: unknown parameter {key:?}; accepted: {}",
                e.params.join(", ")
            )));
        }
    }
    let p = Params { name, map: params };
    let dim = |default: usize| -> Result<usize> {
        let d = p.count("d", default)?;
        if d == 0 {
            return Err(domain(format!("{name}: d must be at least 1")));
        }
        Ok(d)
    };
    match name {
        "ball" => {
            let d = dim(2)?;
            if !(1..=3).contains(&d) {
                return Err(domain(format!("ball: d must be 1, 2 or 3, got {d}")));
            }
            let r = p.positive("r", 1.0)?;
            let g = resolve_grid(&p, d, 8.0 * r, default_samples(d), grid)?;
            let r2 = r * r;
            let f = SampledField::from_real_fn(g, |x| if norm2(x) <= r2 { 1.0 } else { 0.0 })?;
            Ok(CorpusObject::Field(f))
        }
        "interval" => {
            let g = resolve_grid(&p, 1, 16.0, 4096, grid)?;
            let f = SampledField::from_real_fn(g, |x| if (0.0..=1.0).contains(&x[0]) { 1.0 } else { 0.0 })?;
            Ok(CorpusObject::Field(f))
        }
        "gaussian" => {
            let d = dim(1)?;
            let sigma = p.positive("sigma", 1.0)?;
            let (l, n) = match d {
                1 => (16.0, 512),
                2 => (8.0, 128),
                _ => (7.5, 40),
            };
            let g = resolve_grid(&p, d, l * sigma, n, grid)?;
            let s2 = 2.0 * sigma * sigma;
            let f = SampledField::from_real_fn(g, |x| (-norm2(x) / s2).exp())?;
            Ok(CorpusObject::Field(f))
        }
        "powerlaw" | "borderline" => {
            let d = dim(2)?;
            let pprime = p.real("pprime", 2.0)?;
            let alpha = if name == "powerlaw" {
                p.positive("alpha", 0.5)?
            } else {
                p.positive("m", 1.0)?
            };
            Ok(CorpusObject::Spectrum(RadialSpectrum::new(
                d,
                RadialRule::PowerLaw { alpha, pprime },
            )?))
        }
        "bump" => {
            let d = dim(2)?;
            let radius = p.positive("R", 4.0)?;
            Ok(CorpusObject::Spectrum(RadialSpectrum::new(d, RadialRule::Bump { radius })?))
        }
        "conc" => {
            let w = p.positive("w", 0.2)?;
            if w > 0.25 {
                return Err(domain(format!("conc: w must be in (0, 1/4], got {w}")));
            }
            Ok(CorpusObject::Spectrum(RadialSpectrum::new(
                1,
                RadialRule::Band {
                    center: 2.0 * PI,
                    half_width: w,
                },
            )?))
        }
        "interval-ft" => Ok(CorpusObject::Spectrum(RadialSpectrum::new(
            1,
            RadialRule::IntervalTransform,
        )?)),
        "gaussian-ft" => {
            let d = dim(1)?;
            let sigma = p.positive("sigma", 1.0)?;
            Ok(CorpusObject::Spectrum(RadialSpectrum::new(d, RadialRule::Gaussian { sigma })?))
        }
        _ => unreachable!("registry and constructors list the same names"),
    }
}

/// Builds the entry named by a `corpus:` URI.
pub fn make_from_uri(uri: &str, grid: Option<GridSpec>) -> Result<CorpusObject> {
    let (name, params) = parse_uri(uri)?;
    if grid.is_some() {
        if let Some(k) = GRID_PARAMS.iter().find(|k| params.contains_key(**k)) {
            return Err(Error::Parse(format!(
                "{name}: parameter {k} conflicts with an explicit grid"
            )));
        }
    }
    make(&name, &params, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::lp_norm;
    use crate::tails::true_tail;

    #[test]
    fn parses_uris() {
        let (name, p) = parse_uri("corpus:ball?d=2&r=1").unwrap();
        assert_eq!(name, "ball");
        assert_eq!(p["d"], "2");
        assert_eq!(parse_uri("corpus:interval").unwrap().1.len(), 0);
        assert!(parse_uri("file:x").is_err());
        assert!(parse_uri("corpus:ball?d").is_err());
        assert!(parse_uri("corpus:ball?d=1&d=2").is_err());
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(make_from_uri("corpus:nope", None).is_err());
        assert!(make_from_uri("corpus:ball?q=1", None).is_err());
        assert!(make_from_uri("corpus:powerlaw?alpha=0", None).is_err());
        assert!(make_from_uri("corpus:powerlaw?alpha=-1", None).is_err());
        assert!(make_from_uri("corpus:ball?d=4", None).is_err());
        assert!(make_from_uri("corpus:conc?w=0.5", None).is_err());
    }

    #[test]
    fn unit_interval_ball() {
        let f = make_from_uri("corpus:ball?d=1&r=0.5", None).unwrap().into_field().unwrap();
        assert_eq!(f.grid().half_extent(), 4.0);
        let n = lp_norm(&f, 2.0).unwrap();
        assert!((n - 1.0).abs() <= f.grid().spacing(), "{n}");
    }

    #[test]
    fn power_law_tail() {
        let s = make_from_uri("corpus:powerlaw?d=2&pprime=2&alpha=0.5", None)
            .unwrap()
            .into_spectrum()
            .unwrap();
        for t in [1.0, 10.0, 100.0] {
            let v = true_tail(&s, 2.0, t).unwrap();
            let exact = (2.0 * PI).sqrt() * t.powf(-0.5);
            assert!((v - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn bump_tail_vanishes_past_support() {
        let s = make_from_uri("corpus:bump?R=4", None).unwrap().into_spectrum().unwrap();
        assert_eq!(true_tail(&s, 2.0, 4.5).unwrap(), 0.0);
        assert_eq!(true_tail(&s, 2.0, 100.0).unwrap(), 0.0);
    }

    #[test]
    fn explicit_grid_overrides_defaults() {
        let g = GridSpec::new(2, 2.0, 64).unwrap();
        let f = make_from_uri("corpus:ball?d=2", Some(g)).unwrap().into_field().unwrap();
        assert_eq!(*f.grid(), g);
        assert!(make_from_uri("corpus:ball?d=2&N=32", Some(g)).is_err());
        let f = make_from_uri("corpus:gaussian?d=2&L=4&N=32", None).unwrap().into_field().unwrap();
        assert_eq!(f.grid().samples(), 32);
    }

    #[test]
    fn powerlaw_is_continuous_at_one() {
        for uri in ["corpus:powerlaw?d=2&alpha=0.3", "corpus:borderline?d=3&m=2&pprime=1.5"] {
            let s = make_from_uri(uri, None).unwrap().into_spectrum().unwrap();
            let below = s.profile(1.0 - 1e-13);
            assert!((below - 1.0).abs() < 1e-12);
            let h = 1e-6;
            let left = (s.profile(1.0) - s.profile(1.0 - h)) / h;
            let right = (s.profile(1.0 + h) - s.profile(1.0)) / h;
            assert!((left - right).abs() < 1e-4);
        }
    }

    #[test]
    fn registry_is_consistent() {
        for e in REGISTRY {
            assert_eq!(entry(e.name).unwrap().name, e.name);
            let built = make(e.name, &BTreeMap::new(), None);
            assert!(built.is_ok(), "{}", e.name);
        }
    }
}

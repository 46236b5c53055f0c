use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Geometric grid `a, a·r, …, b` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicGrid {
    start: f64,
    end: f64,
    count: usize,
}

impl DyadicGrid {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        if !(start > 0.0 && end.is_finite() && end >= start) {
            return Err(domain(format!("grid needs 0 < start <= end, got {start}..{end}")));
        }
        if count == 0 {
            return Err(domain("grid is empty"));
        }
        if count == 1 && start != end {
            return Err(domain("a one-point grid needs start == end"));
        }
        Ok(Self { start, end, count })
    }

    /// Powers of two `2^lo, …, 2^hi`.
    pub fn octaves(lo: i32, hi: i32) -> Result<Self> {
        if hi < lo {
            return Err(domain("octave range is empty"));
        }
        Self::new(2f64.powi(lo), 2f64.powi(hi), (hi - lo) as usize + 1)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Increasing grid points; exact powers-of-two multiples when the ratio is 2.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let steps = (self.count - 1) as f64;
        let octaves = (self.end / self.start).log2();
        if (octaves - steps).abs() < 1e-9 {
            return (0..self.count)
                .map(|k| self.start * 2f64.powi(k as i32))
                .collect();
        }
        let ratio = (self.end / self.start).ln() / steps;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.end
                } else {
                    self.start * (ratio * k as f64).exp()
                }
            })
            .collect()
    }
}

fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid number {s:?}"));
    if let Some((base, exp)) = s.split_once('^') {
        let b: f64 = base.trim().parse().map_err(|_| bad())?;
        let e: f64 = exp.trim().parse().map_err(|_| bad())?;
        return Ok(b.powf(e));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| bad())?;
        let d: f64 = den.trim().parse().map_err(|_| bad())?;
        return Ok(n / d);
    }
    s.parse().map_err(|_| bad())
}

impl FromStr for DyadicGrid {
    type Err = Error;

    /// `dyadic:<a>..<b>:<n>`; `:<n>` may be omitted when `b/a` is a power of two.
    /// Endpoints accept `2^k` and `p/q` forms.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("dyadic:")
            .ok_or_else(|| Error::Parse(format!("grid must start with \"dyadic:\", got {s:?}")))?;
        let (range, count) = match body.rsplit_once(':') {
            Some((r, c)) => (r, Some(c)),
            None => (body, None),
        };
        let (a, b) = range
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("grid range must be <a>..<b>, got {range:?}")))?;
        let (a, b) = (parse_number(a)?, parse_number(b)?);
        let count = match count {
            Some(c) => c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid grid count {c:?}")))?,
            None => {
                let oct = (b / a).log2();
                if !(oct.is_finite() && oct >= 0.0 && (oct - oct.round()).abs() < 1e-9) {
                    return Err(Error::Parse(format!(
                        "grid {s:?} needs an explicit count unless b/a is a power of two"
                    )));
                }
                oct.round() as usize + 1
            }
        };
        Self::new(a, b, count)
    }
}

impl fmt::Display for DyadicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dyadic:{}..{}:{}", self.start, self.end, self.count)
    }
}

/// Whether profile abscissae are frequencies `t` or steps `ε = 1/t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArgumentRole {
    T,
    Epsilon,
}

/// Samples `(t_k, value_k)` with `t` strictly increasing.
///
/// For [`ArgumentRole::Epsilon`] profiles the stored abscissa is still
/// `t = 1/ε`, so every profile decays in its first coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayProfile {
    points: Vec<(f64, f64)>,
    role: ArgumentRole,
}

impl DecayProfile {
    pub fn new(points: Vec<(f64, f64)>, role: ArgumentRole) -> Result<Self> {
        for (i, &(t, v)) in points.iter().enumerate() {
            if !(t > 0.0 && t.is_finite()) {
                return Err(domain(format!("profile abscissa must be positive, got {t}")));
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(domain(format!("profile value must be finite and nonnegative, got {v}")));
            }
            if i > 0 && points[i - 1].0 >= t {
                return Err(domain("profile abscissae must be strictly increasing"));
            }
        }
        Ok(Self { points, role })
    }

    /// Builds a profile from modulus samples `(h, value)` in any order.
    pub fn from_steps(mut samples: Vec<(f64, f64)>) -> Result<Self> {
        samples.sort_by(|a, b| b.0.total_cmp(&a.0));
        Self::new(
            samples.into_iter().map(|(h, v)| (1.0 / h, v)).collect(),
            ArgumentRole::Epsilon,
        )
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn role(&self) -> ArgumentRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ts(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }

    pub fn map_values(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        Self::new(
            self.points.iter().map(|&(t, v)| (t, f(t, v))).collect(),
            self.role,
        )
    }

    /// CSV with header `t,value` (or `h,value` for step profiles, `h = 1/t`).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match self.role {
            ArgumentRole::T => {
                w.write_record(["t", "value"])?;
                for &(t, v) in &self.points {
                    w.write_record([format!("{t:.16e}"), format!("{v:.16e}")])?;
                }
            }
            ArgumentRole::Epsilon => {
                w.write_record(["h", "value"])?;
                for &(t, v) in self.points.iter().rev() {
                    w.write_record([format!("{:.16e}", 1.0 / t), format!("{v:.16e}")])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        let role = match (headers.get(0).map(str::trim), headers.get(1).map(str::trim)) {
            (Some("t"), Some("value")) => ArgumentRole::T,
            (Some("h"), Some("value")) => ArgumentRole::Epsilon,
            _ => {
                return Err(Error::Parse(format!(
                    "profile CSV header must be t,value or h,value, got {:?}",
                    headers.iter().collect::<Vec<_>>()
                )))
            }
        };
        let mut samples = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let field = |i: usize| -> Result<f64> {
                let s = rec.get(i).unwrap_or("").trim();
                s.parse()
                    .map_err(|_| Error::Parse(format!("invalid profile number {s:?}")))
            };
            samples.push((field(0)?, field(1)?));
        }
        match role {
            ArgumentRole::T => Self::new(samples, role),
            ArgumentRole::Epsilon => Self::from_steps(samples),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grids() {
        let g: DyadicGrid = "dyadic:1..1024:11".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 11);
        assert_eq!(p[3], 8.0);
        assert_eq!(p[10], 1024.0);
        let g: DyadicGrid = "dyadic:2^-6..1".parse().unwrap();
        assert_eq!(g.points(), vec![1.0 / 64.0, 1.0 / 32.0, 1.0 / 16.0, 0.125, 0.25, 0.5, 1.0]);
        let g: DyadicGrid = "dyadic:1..10:3".parse().unwrap();
        let p = g.points();
        assert!((p[1] - 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(p[2], 10.0);
        assert!("dyadic:1..10".parse::<DyadicGrid>().is_err());
        assert!("linear:1..2:2".parse::<DyadicGrid>().is_err());
        assert!("dyadic:4..2:2".parse::<DyadicGrid>().is_err());
        assert!("dyadic:1/4..4:5".parse::<DyadicGrid>().is_ok());
    }

    #[test]
    fn profile_validation() {
        assert!(DecayProfile::new(vec![(1.0, 1.0), (1.0, 2.0)], ArgumentRole::T).is_err());
        assert!(DecayProfile::new(vec![(1.0, f64::NAN)], ArgumentRole::T).is_err());
        assert!(DecayProfile::new(vec![(1.0, -1.0)], ArgumentRole::T).is_err());
        let p = DecayProfile::from_steps(vec![(0.25, 1.0), (1.0, 2.0), (0.5, 1.5)]).unwrap();
        assert_eq!(p.ts(), vec![1.0, 2.0, 4.0]);
        assert_eq!(p.values(), vec![2.0, 1.5, 1.0]);
    }

    #[test]
    fn csv_round_trip() {
        for role in [ArgumentRole::T, ArgumentRole::Epsilon] {
            let p = DecayProfile::new(vec![(1.0, 0.1), (2.0, 1.0 / 3.0), (4.0, 0.0)], role).unwrap();
            let mut buf = Vec::new();
            p.write_csv(&mut buf).unwrap();
            let text = String::from_utf8(buf.clone()).unwrap();
            assert!(text.contains("3.3333333333333331e-1"));
            assert_eq!(DecayProfile::read_csv(buf.as_slice()).unwrap(), p);
        }
    }
}

//! Quantifier domains: real grids, truncated dense subgroups and the mixed
//! `(u in subgroup, v in grid)` pattern.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Enumerations larger than this are refused.
pub const MAX_DOMAIN_POINTS: usize = 20_000_000;

/// An exact element `a + b sqrt(2)` of `Q + Q sqrt(2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadSurd {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Self {
            a: BigRational::from_integer(BigInt::from(a)),
            b: BigRational::from_integer(BigInt::from(b)),
        }
    }

    pub fn dyadic(m: i64, level: u32) -> Self {
        let den = BigInt::from(1u8) << level;
        Self {
            a: BigRational::new(BigInt::from(m), den),
            b: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    /// Exact sign of `a + b sqrt(2)`.
    pub fn signum(&self) -> Ordering {
        let (sa, sb) = (sign_of(&self.a), sign_of(&self.b));
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                let a2 = &self.a * &self.a;
                let two_b2 = &self.b * &self.b * BigRational::from_integer(BigInt::from(2));
                match a2.cmp(&two_b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Nearest double to the real embedding. When the two terms have opposite signs the
    /// conjugate form `(a^2 - 2 b^2) / (a - b sqrt 2)` avoids cancellation.
    pub fn value(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let s2 = std::f64::consts::SQRT_2;
        if sign_of(&self.a) != sign_of(&self.b) && !self.a.is_zero() && !self.b.is_zero() {
            let norm = &self.a * &self.a
                - &self.b * &self.b * BigRational::from_integer(BigInt::from(2));
            norm.to_f64().unwrap_or(f64::NAN) / (a - b * s2)
        } else {
            a + b * s2
        }
    }
}

fn sign_of(x: &BigRational) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl Add for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: &QuadSurd) -> QuadSurd {
        QuadSurd::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: &QuadSurd) -> QuadSurd {
        QuadSurd::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd::new(-&self.a, -&self.b)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*sqrt2", self.a, self.b)
    }
}

/// A domain point: its double embedding plus, for subgroup points, the exact element.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainPoint {
    pub value: f64,
    pub exact: Option<QuadSurd>,
}

impl DomainPoint {
    pub fn real(value: f64) -> Self {
        Self { value, exact: None }
    }
}

/// A finite truncation of a dense additive subgroup of the reals.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DenseSubgroupSpec {
    /// `{ m / 2^level : 1 <= m <= floor(bound * 2^level) }`.
    Dyadic { level: u32, bound: f64 },
    /// `{ a + b sqrt 2 : |a|, |b| <= coeff_bound } intersected with (0, bound]`.
    ZAdjoinSqrt2 { coeff_bound: u64, bound: f64 },
}

impl DenseSubgroupSpec {
    pub fn bound(&self) -> f64 {
        match *self {
            Self::Dyadic { bound, .. } | Self::ZAdjoinSqrt2 { bound, .. } => bound,
        }
    }

    fn validate(&self) -> Result<()> {
        let bound = self.bound();
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::Domain(format!("subgroup bound must be positive, got {bound}")));
        }
        match *self {
            Self::Dyadic { level, .. } if level == 0 || level > 60 => {
                Err(Error::Domain(format!("dyadic level must be in 1..=60, got {level}")))
            }
            Self::ZAdjoinSqrt2 { coeff_bound, .. } if coeff_bound == 0 || coeff_bound > 1 << 40 => {
                Err(Error::Domain(format!("coefficient bound out of range: {coeff_bound}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for DenseSubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dyadic { level, bound } => write!(f, "dyadic(L={level},X={bound})"),
            Self::ZAdjoinSqrt2 { coeff_bound, bound } => {
                write!(f, "zsqrt2(N={coeff_bound},X={bound})")
            }
        }
    }
}

/// Where the quantifiers of an equation range.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    /// Both `u` and `v` range over the listed points.
    RealGrid { points: Vec<f64> },
    /// Both `u` and `v` range over the subgroup truncation.
    Subgroup { subgroup: DenseSubgroupSpec },
    /// `u` ranges over the subgroup, `v` over the grid.
    Mixed {
        u_domain: DenseSubgroupSpec,
        v_grid: Vec<f64>,
    },
}

impl DomainSpec {
    pub fn grid(points: Vec<f64>) -> Self {
        Self::RealGrid { points }
    }

    pub fn subgroup(subgroup: DenseSubgroupSpec) -> Self {
        Self::Subgroup { subgroup }
    }

    /// The `u` and `v` ranges over which pairs are formed.
    pub fn pair_ranges(&self) -> Result<(Vec<DomainPoint>, Vec<DomainPoint>)> {
        match self {
            Self::RealGrid { points } => {
                let pts = grid_points(points)?;
                Ok((pts.clone(), pts))
            }
            Self::Subgroup { subgroup } => {
                let pts = subgroup_points(subgroup)?;
                Ok((pts.clone(), pts))
            }
            Self::Mixed { u_domain, v_grid } => {
                Ok((subgroup_points(u_domain)?, grid_points(v_grid)?))
            }
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Self::RealGrid { points } => match (points.first(), points.last()) {
                (Some(lo), Some(hi)) => format!("grid[{lo}..{hi}; {}]", points.len()),
                _ => "grid[]".into(),
            },
            Self::Subgroup { subgroup } => subgroup.to_string(),
            Self::Mixed { u_domain, v_grid } => {
                format!("mixed(u: {u_domain}, v: grid of {})", v_grid.len())
            }
        }
    }
}

fn grid_points(points: &[f64]) -> Result<Vec<DomainPoint>> {
    if points.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    if let Some(x) = points.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("non-finite grid point {x}")));
    }
    if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::Domain(format!(
            "grid not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(points.iter().map(|&x| DomainPoint::real(x)).collect())
}

/// `count` uniformly spaced points from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::Usage(format!("grid count must be at least 2, got {count}")));
    }
    if !(min.is_finite() && max.is_finite() && max > min) {
        return Err(Error::Usage(format!("invalid grid range [{min}, {max}]")));
    }
    let step = (max - min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| if i == count - 1 { max } else { min + step * i as f64 })
        .collect())
}

/// Materializes a subgroup truncation, sorted ascending, with exact coordinates.
pub fn subgroup_points(spec: &DenseSubgroupSpec) -> Result<Vec<DomainPoint>> {
    spec.validate()?;
    let pts = match *spec {
        DenseSubgroupSpec::Dyadic { level, bound } => {
            let scale = (1u64 << level) as f64;
            let count = (bound * scale).floor();
            if count > MAX_DOMAIN_POINTS as f64 {
                return Err(Error::Domain(format!("{spec} has too many points ({count})")));
            }
            (1..=count as i64)
                .map(|m| DomainPoint {
                    value: m as f64 / scale,
                    exact: Some(QuadSurd::dyadic(m, level)),
                })
                .collect::<Vec<_>>()
        }
        DenseSubgroupSpec::ZAdjoinSqrt2 { coeff_bound, bound } => {
            zsqrt2_points(coeff_bound as i64, bound)?
        }
    };
    if pts.is_empty() {
        return Err(Error::Domain(format!("{spec} contains no points in (0, {}]", spec.bound())));
    }
    Ok(pts)
}

fn zsqrt2_points(n: i64, bound: f64) -> Result<Vec<DomainPoint>> {
    let s2 = std::f64::consts::SQRT_2;
    let mut out = Vec::new();
    for b in -n..=n {
        let shift = b as f64 * s2;
        // Candidate window for a, widened by one on each side and then filtered exactly.
        let lo = ((-shift).floor() as i64 - 1).max(-n);
        let hi = ((bound - shift).floor() as i64 + 1).min(n);
        for a in lo..=hi {
            let q = QuadSurd::from_ints(a, b);
            if q.signum() != Ordering::Greater {
                continue;
            }
            let value = q.value();
            if value <= bound {
                out.push(DomainPoint { value, exact: Some(q) });
            }
        }
        if out.len() > MAX_DOMAIN_POINTS {
            return Err(Error::Domain("subgroup enumeration too large".into()));
        }
    }
    out.sort_by(|p, q| p.value.total_cmp(&q.value));
    Ok(out)
}

/// All points of the domain, sorted and duplicate-free. For a mixed domain this is the
/// union of both ranges.
pub fn domain_points(spec: &DomainSpec) -> Result<Vec<DomainPoint>> {
    match spec {
        DomainSpec::RealGrid { points } => grid_points(points),
        DomainSpec::Subgroup { subgroup } => subgroup_points(subgroup),
        DomainSpec::Mixed { u_domain, v_grid } => {
            let mut pts = subgroup_points(u_domain)?;
            pts.extend(grid_points(v_grid)?);
            pts.sort_by(|p, q| p.value.total_cmp(&q.value));
            pts.dedup_by(|p, q| p.value == q.value);
            Ok(pts)
        }
    }
}

//! Closed-form rate/memory tradeoffs, converse bounds and comparison tables.
//!
//! Everything here is exact rational arithmetic. [`decimal`] is the only
//! place a value becomes floating point.

mod bounds;
mod compare;

use std::fmt;

use serde::Serialize;

use crate::combinatorics::choose;
use crate::error::{Error, Result};
use crate::scheme::{Topology, Variant};
use crate::Rational;

pub use bounds::{
    bounds_row, feasibility_floor, gap_certificate, lower_bound, min_feasible_memory, BoundsRow, GapCertificate, Regime,
};
pub use compare::{compare_same_access, compare_same_cache, CompareMode, CompareRow};

fn int(x: usize) -> Rational {
    Rational::from_integer(x as i128)
}

fn binom_q(n: usize, k: isize) -> Rational {
    int(choose(n, k))
}

fn check_t(c: usize, r: usize, t: usize) -> Result<()> {
    Topology::new(c, r, 1)?;
    if t > c - r {
        return Err(Error::InvalidParams(format!("need 0 <= t <= C-r = {}, got t={t}", c - r)));
    }
    Ok(())
}

/// Cache size of the keyed scheme at parameter `t`:
/// `N·C(C-1,t-1)/C(C-r,t) + C(C-1,r-1)`.
pub fn memory_sp(c: usize, r: usize, n: usize, t: usize) -> Result<Rational> {
    check_t(c, r, t)?;
    Ok(int(n) * binom_q(c - 1, t as isize - 1) / binom_q(c - r, t as isize) + binom_q(c - 1, r as isize - 1))
}

/// Broadcast size of the keyed scheme: `C(C,t+r)/C(C-r,t)`.
pub fn rate_sp(c: usize, r: usize, t: usize) -> Result<Rational> {
    check_t(c, r, t)?;
    Ok(binom_q(c, (t + r) as isize) / binom_q(c - r, t as isize))
}

/// Cache size of the unkeyed single-transmission corner: `N·C(C-1,r)`.
pub fn memory_corner(c: usize, r: usize, n: usize) -> Result<Rational> {
    Topology::new(c, r, n)?;
    Ok(int(n) * binom_q(c - 1, r as isize))
}

/// Dedicated-cache memory points `Nt/(K-t) + 1`.
pub fn rpkp_memory(k: usize, n: usize, t: usize) -> Result<Rational> {
    if k < 2 || t > k - 2 {
        return Err(Error::InvalidParams(format!("need K >= 2 and t <= K-2, got K={k} t={t}")));
    }
    Ok(int(n * t) / int(k - t) + 1)
}

/// Dedicated-cache rate `K(N+M-1)/(N+(K+1)(M-1))`, evaluated at its memory points.
pub fn rpkp_rate(k: usize, n: usize, m: Rational) -> Rational {
    let one = Rational::from_integer(1);
    int(k) * (int(n) + m - one) / (int(n) + int(k + 1) * (m - one))
}

/// Label of a curve point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PointLabel {
    /// The scheme parameter `t` that produces this point.
    Scheme(usize),
    /// A memory-shared point between two vertices.
    Interpolated,
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointLabel::Scheme(t) => write!(f, "{t}"),
            PointLabel::Interpolated => f.write_str("interpolated"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateMemoryPoint {
    pub m: Rational,
    pub r: Rational,
    pub t: PointLabel,
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeoffCurve {
    pub topology: Topology,
    pub variant: Variant,
    /// Scheme points sorted by memory.
    pub points: Vec<RateMemoryPoint>,
    /// Lower convex envelope: strictly increasing `M`, strictly decreasing `R`.
    pub envelope: Vec<RateMemoryPoint>,
}

impl TradeoffCurve {
    fn from_points(topology: Topology, variant: Variant, mut points: Vec<RateMemoryPoint>) -> Self {
        points.sort_by(|a, b| a.m.cmp(&b.m).then(a.r.cmp(&b.r)));
        let envelope = lower_envelope(&points);
        Self { topology, variant, points, envelope }
    }

    pub fn min_memory(&self) -> Rational {
        self.envelope[0].m
    }

    pub fn max_memory(&self) -> Rational {
        self.envelope[self.envelope.len() - 1].m
    }

    pub fn contains_memory(&self, m: Rational) -> bool {
        self.min_memory() <= m && m <= self.max_memory()
    }

    pub fn is_vertex(&self, m: Rational) -> bool {
        self.envelope.iter().any(|p| p.m == m)
    }
}

/// Lower convex envelope of a point set, after dropping dominated points.
pub fn lower_envelope(points: &[RateMemoryPoint]) -> Vec<RateMemoryPoint> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.m.cmp(&b.m).then(a.r.cmp(&b.r)));
    let mut pareto: Vec<RateMemoryPoint> = Vec::new();
    for p in sorted {
        if pareto.last().is_none_or(|last| p.r < last.r) {
            pareto.push(p);
        }
    }
    let mut hull: Vec<RateMemoryPoint> = Vec::new();
    for p in pareto {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.m - a.m) * (p.r - a.r) - (b.r - a.r) * (p.m - a.m);
            if cross > Rational::from_integer(0) {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Points `t = 0..=C-r` of the secretive and private scheme.
pub fn curve_secrecy_privacy(c: usize, r: usize, n: usize) -> Result<TradeoffCurve> {
    let topology = Topology::new(c, r, n)?;
    let points = (0..=c - r)
        .map(|t| {
            Ok(RateMemoryPoint {
                m: memory_sp(c, r, n, t)?,
                r: rate_sp(c, r, t)?,
                t: PointLabel::Scheme(t),
                variant: Variant::SecrecyPrivacy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TradeoffCurve::from_points(topology, Variant::SecrecyPrivacy, points))
}

/// Points `t = 0..C-r` of the secretive scheme plus the rate-1 corner at
/// `t = C-r`.
pub fn curve_secrecy_only(c: usize, r: usize, n: usize) -> Result<TradeoffCurve> {
    let topology = Topology::new(c, r, n)?;
    let mut points = (0..c - r)
        .map(|t| {
            Ok(RateMemoryPoint {
                m: memory_sp(c, r, n, t)?,
                r: rate_sp(c, r, t)?,
                t: PointLabel::Scheme(t),
                variant: Variant::SecrecyOnly,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.push(RateMemoryPoint {
        m: memory_corner(c, r, n)?,
        r: Rational::from_integer(1),
        t: PointLabel::Scheme(c - r),
        variant: Variant::SecrecyOnly,
    });
    Ok(TradeoffCurve::from_points(topology, Variant::SecrecyOnly, points))
}

/// The dedicated-cache baseline with `K` users, from its own rate formula.
pub fn curve_rpkp(k: usize, n: usize) -> Result<TradeoffCurve> {
    let topology = Topology::new(k, 1, n)?;
    let mut points = Vec::new();
    if k >= 2 {
        for t in 0..=k - 2 {
            let m = rpkp_memory(k, n, t)?;
            points.push(RateMemoryPoint {
                m,
                r: rpkp_rate(k, n, m),
                t: PointLabel::Scheme(t),
                variant: Variant::DedicatedRpkp,
            });
        }
    }
    points.push(RateMemoryPoint {
        m: int(n * (k - 1)),
        r: Rational::from_integer(1),
        t: PointLabel::Scheme(k - 1),
        variant: Variant::DedicatedRpkp,
    });
    Ok(TradeoffCurve::from_points(topology, Variant::DedicatedRpkp, points))
}

pub fn curve(variant: Variant, c: usize, r: usize, n: usize) -> Result<TradeoffCurve> {
    match variant {
        Variant::SecrecyPrivacy => curve_secrecy_privacy(c, r, n),
        Variant::SecrecyOnly => curve_secrecy_only(c, r, n),
        Variant::DedicatedRpkp if r == 1 => curve_rpkp(c, n),
        Variant::DedicatedRpkp => Err(Error::InvalidParams("the dedicated baseline needs r = 1".into())),
    }
}

/// Rate of the memory-shared envelope at `m`. Memory beyond the last vertex
/// keeps the final rate.
pub fn memory_share(curve: &TradeoffCurve, m: Rational) -> Result<Rational> {
    let env = &curve.envelope;
    if m < curve.min_memory() {
        return Err(Error::Infeasible(format!(
            "M = {m} is below the smallest achievable memory {} for {}",
            curve.min_memory(),
            curve.topology
        )));
    }
    if m >= curve.max_memory() {
        return Ok(env[env.len() - 1].r);
    }
    let i = env.partition_point(|p| p.m <= m);
    let (a, b) = (env[i - 1], env[i]);
    Ok(a.r + (b.r - a.r) * (m - a.m) / (b.m - a.m))
}

/// `samples` evenly spaced memory-shared points across the envelope's range.
pub fn sample_envelope(curve: &TradeoffCurve, samples: usize) -> Vec<RateMemoryPoint> {
    let (lo, hi) = (curve.min_memory(), curve.max_memory());
    let steps = samples.max(2) - 1;
    (0..=steps)
        .map(|i| {
            let m = lo + (hi - lo) * Rational::new(i as i128, steps as i128);
            RateMemoryPoint {
                m,
                r: memory_share(curve, m).expect("sample inside the envelope"),
                t: if curve.is_vertex(m) {
                    curve.envelope.iter().find(|p| p.m == m).map(|p| p.t).unwrap()
                } else {
                    PointLabel::Interpolated
                },
                variant: curve.variant,
            }
        })
        .collect()
}

/// Decimal rendering with 12 significant digits.
pub fn decimal(x: Rational) -> String {
    let f = *x.numer() as f64 / *x.denom() as f64;
    let rounded: f64 = format!("{f:.11e}").parse().expect("valid float literal");
    format!("{rounded}")
}

#[cfg(test)]
mod tests;

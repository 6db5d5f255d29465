use std::fmt;

use serde::Serialize;

use super::{curve_secrecy_privacy, int, memory_share, memory_sp};
use crate::error::{Error, Result};
use crate::scheme::Topology;
use crate::Rational;

/// Smallest cache size admitting any secretive scheme: `(K-1)/(C-r)`.
pub fn min_feasible_memory(c: usize, r: usize) -> Result<Rational> {
    let topo = Topology::new(c, r, 1)?;
    if r == c {
        return Err(Error::NotApplicable("r = C has a single user and no memory constraint".into()));
    }
    Ok(int(topo.users() - 1) / int(c - r))
}

/// `(min(N,K)-1)/(C-r)`: the same cut-set argument run over at most `N`
/// distinct demands. Equals [`min_feasible_memory`] whenever `N >= K`.
pub fn feasibility_floor(c: usize, r: usize, n: usize) -> Result<Rational> {
    let topo = Topology::new(c, r, n)?;
    if r == c {
        return Err(Error::NotApplicable("r = C has a single user and no memory constraint".into()));
    }
    Ok(int(topo.users().min(n) - 1) / int(c - r))
}

/// Cut-set lower bound on the optimal rate at cache size `m`.
pub fn lower_bound(c: usize, r: usize, n: usize, m: Rational) -> Result<Rational> {
    let topo = Topology::new(c, r, n)?;
    let one = Rational::from_integer(1);
    if r == c {
        return Ok(one);
    }
    let floor = feasibility_floor(c, r, n)?;
    if m < floor {
        return Err(Error::Infeasible(format!("M = {m} is below the minimum feasible memory {floor}")));
    }
    let mut best = one;
    for l in 1..=(n / 2).min(topo.users()) {
        let f = n / l;
        if f < 2 {
            continue;
        }
        let z = (l + r - 1).min(c);
        let term = (int(l * f) - one - int(z - r) * m) / int(f - 1);
        best = best.max(term);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Optimal,
    Order5,
    Uncertified,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Optimal => "optimal",
            Regime::Order5 => "order5",
            Regime::Uncertified => "uncertified",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapCertificate {
    pub achievable: Rational,
    pub lower_bound: Rational,
    pub ratio: Rational,
    pub regime: Regime,
    /// The ratio bound the regime claims, if any.
    pub claimed: Option<Rational>,
    pub within_claim: bool,
}

/// Ratio of the keyed scheme's envelope to the lower bound at `m`.
///
/// With `r >= C-1` and `N >= 2K` the optimal regime covers the scheme's
/// vertices and every memory at or past the rate-1 point. Memory-shared
/// points strictly between the `t = 0` and `t = 1` vertices are left
/// uncertified, since the straight-line envelope can exceed the bound there.
pub fn gap_certificate(c: usize, r: usize, n: usize, m: Rational) -> Result<GapCertificate> {
    let topo = Topology::new(c, r, n)?;
    let k = topo.users();
    let curve = curve_secrecy_privacy(c, r, n)?;
    let achievable = memory_share(&curve, m)?;
    let lb = lower_bound(c, r, n, m)?;
    let ratio = achievable / lb;

    let optimal = r + 1 >= c && n >= 2 * k && (curve.is_vertex(m) || m >= curve.max_memory());
    // The threshold `N/(C-r) + C(C-1,r-1)` is the `t = 1` cache size.
    let order5 = r + 1 < c && k <= 5 * (r + 1) && m >= memory_sp(c, r, n, 1)?;
    let (regime, claimed) = if optimal {
        (Regime::Optimal, Some(Rational::from_integer(1)))
    } else if order5 {
        (Regime::Order5, Some(Rational::from_integer(5)))
    } else {
        (Regime::Uncertified, None)
    };
    Ok(GapCertificate {
        achievable,
        lower_bound: lb,
        ratio,
        regime,
        claimed,
        within_claim: claimed.is_none_or(|b| ratio <= b),
    })
}

/// One row of the bounds table. Fields are absent where the memory is
/// infeasible or not reached by the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsRow {
    pub m: Rational,
    pub lower_bound: Option<Rational>,
    pub achievable: Option<Rational>,
    pub ratio: Option<Rational>,
    /// `optimal`, `order5`, `uncertified`, `unachieved` or `infeasible`.
    pub regime: String,
}

pub fn bounds_row(c: usize, r: usize, n: usize, m: Rational) -> Result<BoundsRow> {
    Topology::new(c, r, n)?;
    let lb = match lower_bound(c, r, n, m) {
        Ok(lb) => lb,
        Err(Error::Infeasible(_)) => {
            return Ok(BoundsRow { m, lower_bound: None, achievable: None, ratio: None, regime: "infeasible".into() })
        }
        Err(e) => return Err(e),
    };
    match gap_certificate(c, r, n, m) {
        Ok(cert) => Ok(BoundsRow {
            m,
            lower_bound: Some(lb),
            achievable: Some(cert.achievable),
            ratio: Some(cert.ratio),
            regime: cert.regime.to_string(),
        }),
        Err(Error::Infeasible(_)) => {
            Ok(BoundsRow { m, lower_bound: Some(lb), achievable: None, ratio: None, regime: "unachieved".into() })
        }
        Err(e) => Err(e),
    }
}

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{curve_secrecy_only, int, memory_share, TradeoffCurve};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    SameCache,
    SameAccess,
}

impl fmt::Display for CompareMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompareMode::SameCache => "same-cache",
            CompareMode::SameAccess => "same-access",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompareRow {
    pub mode: CompareMode,
    pub c: usize,
    pub n: usize,
    pub r: usize,
    /// Cache size in same-cache mode, per-user access memory `r·M` otherwise.
    pub m_axis: Rational,
    pub rpu: Rational,
    /// The `r = 1` curve stands for the dedicated-cache baseline.
    pub baseline: bool,
}

/// Builds the aligned table. `axis` maps a curve's memory to the table's
/// memory axis and `users` gives the rate normaliser for each `r`.
fn aligned(
    mode: CompareMode,
    c: usize,
    n: usize,
    r_list: &[usize],
    axis: impl Fn(usize) -> Rational,
    users: impl Fn(usize) -> Rational,
) -> Result<Vec<CompareRow>> {
    if r_list.is_empty() {
        return Err(Error::InvalidParams("empty r list".into()));
    }
    let mut rs = r_list.to_vec();
    rs.sort_unstable();
    rs.dedup();
    let curves: Vec<(usize, TradeoffCurve)> =
        rs.iter().map(|&r| Ok((r, curve_secrecy_only(c, r, n)?))).collect::<Result<_>>()?;
    let grid: BTreeSet<Rational> =
        curves.iter().flat_map(|(r, cv)| cv.envelope.iter().map(|p| p.m * axis(*r))).collect();

    let mut rows = Vec::new();
    for (r, cv) in &curves {
        let scale = axis(*r);
        for &x in &grid {
            let m = x / scale;
            if !cv.contains_memory(m) {
                continue;
            }
            rows.push(CompareRow {
                mode,
                c,
                n,
                r: *r,
                m_axis: x,
                rpu: memory_share(cv, m)? / users(*r),
                baseline: *r == 1,
            });
        }
    }
    Ok(rows)
}

/// Rate per user `R/C(C,r)` against the common cache size. Each curve
/// contributes rows only inside its own achievable memory range.
pub fn compare_same_cache(c: usize, n: usize, r_list: &[usize]) -> Result<Vec<CompareRow>> {
    aligned(CompareMode::SameCache, c, n, r_list, |_| int(1), |r| int(crate::combinatorics::choose(c, r as isize)))
}

/// Rates against the memory each user accesses, `r·M`.
///
/// All curves are normalised by the common cache count `C`, which is the
/// dedicated setup's user count; the ordering of rows therefore matches the
/// ordering of the raw rates.
pub fn compare_same_access(c: usize, n: usize, r_list: &[usize]) -> Result<Vec<CompareRow>> {
    aligned(CompareMode::SameAccess, c, n, r_list, int, |_| int(c))
}

//! Subsets of `[1..=C]`, their lexicographic ranks, and exact binomials.
//!
//! Users, shares and transmissions are all indexed by fixed-size subsets of
//! the cache set. A subset is a strictly increasing `Vec<usize>` of 1-based
//! cache labels; its rank is the 0-based position in lexicographic order.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Exact binomial coefficient. Negative `k` and `k > n` give 0.
pub fn binom(n: u64, k: i64) -> Result<u64> {
    if k < 0 || k as u64 > n {
        return Ok(0);
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return Err(Error::Overflow { n, k: k as i64 });
        }
    }
    Ok(acc as u64)
}

/// Binomial on small arguments already validated by the caller.
///
/// Panics on overflow; every caller bounds `n` through topology validation.
pub(crate) fn choose(n: usize, k: isize) -> usize {
    binom(n as u64, k as i64).expect("binomial overflow on validated topology") as usize
}

/// All `k`-subsets of `[1..=ground_size]` in lexicographic order.
pub fn enumerate_subsets(ground_size: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(k <= ground_size, "k = {k} exceeds ground size {ground_size}");
    let mut out = Vec::with_capacity(choose(ground_size, k as isize));
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(current.clone());
        // Rightmost position that can still be incremented.
        let Some(pos) = (0..k).rev().find(|&i| current[i] < ground_size - (k - 1 - i)) else {
            break;
        };
        current[pos] += 1;
        for i in pos + 1..k {
            current[i] = current[i - 1] + 1;
        }
    }
    out
}

fn validate(subset: &[usize], ground_size: usize) -> Result<()> {
    let in_range = subset.iter().all(|&e| (1..=ground_size).contains(&e));
    let increasing = subset.windows(2).all(|w| w[0] < w[1]);
    if in_range && increasing {
        Ok(())
    } else {
        Err(Error::MalformedSubset { subset: subset.to_vec(), ground_size })
    }
}

/// Position of `subset` within `enumerate_subsets(ground_size, subset.len())`.
pub fn subset_rank(subset: &[usize], ground_size: usize) -> Result<u64> {
    validate(subset, ground_size)?;
    let k = subset.len();
    let mut rank = 0u64;
    let mut prev = 0usize;
    for (i, &e) in subset.iter().enumerate() {
        for skipped in prev + 1..e {
            rank += binom((ground_size - skipped) as u64, (k - i - 1) as i64)?;
        }
        prev = e;
    }
    Ok(rank)
}

/// Inverse of [`subset_rank`].
pub fn subset_unrank(rank: u64, ground_size: usize, k: usize) -> Result<Vec<usize>> {
    let total = binom(ground_size as u64, k as i64)?;
    if k > ground_size || rank >= total {
        return Err(Error::RankOutOfRange { rank, ground_size, k });
    }
    let mut remaining = rank;
    let mut out = Vec::with_capacity(k);
    let mut candidate = 1usize;
    for i in 0..k {
        loop {
            let block = binom((ground_size - candidate) as u64, (k - i - 1) as i64)?;
            if remaining < block {
                out.push(candidate);
                candidate += 1;
                break;
            }
            remaining -= block;
            candidate += 1;
        }
    }
    Ok(out)
}

/// Number of distinct `t`-subsets that meet a fixed `r`-subset of `[C]`.
///
/// Evaluated as the alternating inclusion–exclusion sum; equals
/// `C(C,t) - C(C-r,t)`.
pub fn effective_shares(c: usize, r: usize, t: usize) -> u64 {
    assert!(r >= 1 && r <= c && t <= c - r, "need 1 <= r <= C and t <= C - r");
    let mut acc: i128 = 0;
    for j in 1..=r {
        let term = i128::from(choose(r, j as isize) as u64) * i128::from(choose(c - j, t as isize - j as isize) as u64);
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc as u64
}

/// A precomputed family `Ω_k` over `[1..=ground_size]` with O(1) rank lookup.
#[derive(Debug, Clone)]
pub struct SubsetFamily {
    ground_size: usize,
    k: usize,
    members: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SubsetFamily {
    pub fn new(ground_size: usize, k: usize) -> Self {
        let members = enumerate_subsets(ground_size, k);
        let index = members.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { ground_size, k, members, index }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, rank: usize) -> &[usize] {
        &self.members[rank]
    }

    pub fn rank_of(&self, subset: &[usize]) -> Option<usize> {
        self.index.get(subset).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.members.iter().map(Vec::as_slice)
    }
}

pub(crate) fn is_disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

pub(crate) fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

pub(crate) fn difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| !b.contains(x)).collect()
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Renders a subset as `{1 2 3}`.
pub fn format_subset(subset: &[usize]) -> String {
    let inner: Vec<String> = subset.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(" "))
}

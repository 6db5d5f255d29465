//! Placement and delivery over the combinatorial topology.
//!
//! There are `C` caches and one user per `r`-subset of caches. Every file is
//! secret-shared into `C(C,t)` shares indexed by `t`-subsets; share `T` is
//! stored in every cache of `T`. Under [`Variant::SecrecyPrivacy`] each
//! cache also holds additive fragments of the per-user masks
//! `D_{G,T} = W̃_{p_G,T} ⊕ V_{G∪T}`, and the broadcast carries one payload
//! per `(t+r)`-subset plus the masked demand vectors `q_G = e_{d_G} ⊕ p_G`.

mod decode;
mod delivery;
mod dump;
mod placement;
mod randomness;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{choose, difference, effective_shares, is_disjoint, is_subset, union_sorted, SubsetFamily};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::sharing::SharingParams;

pub use decode::decode;
pub use delivery::{deliver, Broadcast, DemandVector};
pub use dump::{dump_broadcast, dump_caches, DumpRecord};
pub use placement::{encode_library, place, CacheContents, Library, Placement};
pub use randomness::{draw_randomness, Randomness, TapeLayout};

/// Largest cache count accepted by [`Topology::new`]; keeps every binomial
/// and rational product comfortably inside 128-bit arithmetic.
pub const MAX_CACHES: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Topology {
    caches: usize,
    access: usize,
    files: usize,
}

impl Topology {
    pub fn new(caches: usize, access: usize, files: usize) -> Result<Self> {
        if caches == 0 || caches > MAX_CACHES {
            return Err(Error::InvalidTopology(format!("need 1 <= C <= {MAX_CACHES}, got C={caches}")));
        }
        if access == 0 || access > caches {
            return Err(Error::InvalidTopology(format!("need 1 <= r <= C, got r={access} with C={caches}")));
        }
        if files == 0 {
            return Err(Error::InvalidTopology("need N >= 1".into()));
        }
        Ok(Self { caches, access, files })
    }

    /// `C`
    pub fn caches(&self) -> usize {
        self.caches
    }

    /// `r`
    pub fn access(&self) -> usize {
        self.access
    }

    /// `N`
    pub fn files(&self) -> usize {
        self.files
    }

    /// `K = C(C, r)`
    pub fn users(&self) -> usize {
        choose(self.caches, self.access as isize)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C={} r={} N={}", self.caches, self.access, self.files)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Secrecy and demand privacy.
    SecrecyPrivacy,
    /// Secrecy only; all privacy vectors are zero and `t = C - r` switches
    /// to the single unkeyed transmission.
    SecrecyOnly,
    /// The dedicated-cache baseline: [`Variant::SecrecyOnly`] restricted to `r = 1`.
    DedicatedRpkp,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::SecrecyPrivacy => "secrecy_privacy",
            Variant::SecrecyOnly => "secrecy_only",
            Variant::DedicatedRpkp => "rpkp",
        }
    }

    /// Whether the variant aims at demand privacy.
    pub fn is_private(&self) -> bool {
        matches!(self, Variant::SecrecyPrivacy)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "secrecy_privacy" | "secrecy-privacy" | "sp" => Ok(Variant::SecrecyPrivacy),
            "secrecy_only" | "secrecy-only" | "s" => Ok(Variant::SecrecyOnly),
            "rpkp" | "dedicated" => Ok(Variant::DedicatedRpkp),
            other => Err(Error::InvalidParams(format!("unknown variant {other:?}"))),
        }
    }
}

/// Index sets shared by placement, delivery and decoding.
#[derive(Debug)]
pub(crate) struct Layout {
    pub users: SubsetFamily,
    pub share_sets: SubsetFamily,
    pub tx_sets: SubsetFamily,
    /// For each user rank, the ranks of `t`-subsets disjoint from it.
    pub disjoint: Vec<Vec<usize>>,
    /// For each transmission rank `S`, the `(user rank G, share rank S∖G)`
    /// pairs with `G ⊂ S`.
    pub tx_terms: Vec<Vec<(usize, usize)>>,
}

impl Layout {
    fn new(c: usize, r: usize, t: usize) -> Self {
        let users = SubsetFamily::new(c, r);
        let share_sets = SubsetFamily::new(c, t);
        let tx_sets = SubsetFamily::new(c, t + r);
        let disjoint = users
            .iter()
            .map(|g| share_sets.iter().enumerate().filter(|(_, tt)| is_disjoint(g, tt)).map(|(i, _)| i).collect())
            .collect();
        let tx_terms = tx_sets
            .iter()
            .map(|s| {
                users
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| is_subset(g, s))
                    .map(|(gi, g)| {
                        let rest = difference(s, g);
                        (gi, share_sets.rank_of(&rest).expect("S minus G is a t-subset"))
                    })
                    .collect()
            })
            .collect();
        Self { users, share_sets, tx_sets, disjoint, tx_terms }
    }

    pub fn tx_rank(&self, g: &[usize], tt: &[usize]) -> usize {
        self.tx_sets.rank_of(&union_sorted(g, tt)).expect("G ∪ T is a (t+r)-subset")
    }
}

#[derive(Debug, Clone)]
pub struct SchemeParams {
    topology: Topology,
    t: usize,
    variant: Variant,
    sharing: SharingParams,
    layout: Arc<Layout>,
}

impl SchemeParams {
    pub fn new(topology: Topology, t: usize, variant: Variant, s: usize) -> Result<Self> {
        Self::validate(&topology, t, variant)?;
        let n = choose(topology.caches, t as isize);
        let m = effective_shares(topology.caches, topology.access, t) as usize;
        let spec = FieldSpec::field_for(n as u64)?;
        let sharing = SharingParams::new(n, m, s, spec)?;
        Ok(Self::assemble(topology, t, variant, sharing))
    }

    /// Parameters with caller-supplied sharing (e.g. a mutated generator).
    /// `n` and `m` must agree with the topology.
    pub fn with_sharing(topology: Topology, t: usize, variant: Variant, sharing: SharingParams) -> Result<Self> {
        Self::validate(&topology, t, variant)?;
        let n = choose(topology.caches, t as isize);
        let m = effective_shares(topology.caches, topology.access, t) as usize;
        if sharing.n() != n || sharing.m() != m {
            return Err(Error::InvalidParams(format!(
                "sharing is ({}, {}) but the topology needs ({m}, {n})",
                sharing.m(),
                sharing.n()
            )));
        }
        Ok(Self::assemble(topology, t, variant, sharing))
    }

    fn validate(topology: &Topology, t: usize, variant: Variant) -> Result<()> {
        let c = topology.caches;
        let r = topology.access;
        if t > c - r {
            return Err(Error::InvalidParams(format!("t={t} is outside [0, C-r] = [0, {}]", c - r)));
        }
        if variant == Variant::DedicatedRpkp && r != 1 {
            return Err(Error::InvalidParams(format!("the dedicated baseline needs r = 1, got r={r}")));
        }
        Ok(())
    }

    fn assemble(topology: Topology, t: usize, variant: Variant, sharing: SharingParams) -> Self {
        let layout = Arc::new(Layout::new(topology.caches, topology.access, t));
        Self { topology, t, variant, sharing, layout }
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn sharing(&self) -> &SharingParams {
        &self.sharing
    }

    pub fn spec(&self) -> &FieldSpec {
        self.sharing.spec()
    }

    pub fn s(&self) -> usize {
        self.sharing.s()
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Secrecy-only with `t = C - r`: caches hold shares only and a single
    /// unkeyed transmission is sent.
    pub fn is_corner(&self) -> bool {
        !self.variant.is_private() && self.t == self.topology.caches - self.topology.access
    }

    /// Whether demand vectors are masked and transmitted.
    pub fn transmits_q(&self) -> bool {
        self.variant.is_private()
    }

    /// Whether transmissions are protected by keys `V_S` and caches hold key shares.
    pub fn uses_keys(&self) -> bool {
        !self.is_corner()
    }

    /// The user subsets `Ω_r` in lexicographic order.
    pub fn users(&self) -> impl Iterator<Item = &[usize]> {
        self.layout.users.iter()
    }

    pub fn user_rank(&self, user: &[usize]) -> Option<usize> {
        self.layout.users.rank_of(user)
    }

    pub fn user(&self, rank: usize) -> &[usize] {
        self.layout.users.get(rank)
    }

    /// Share index sets `Ω_t`.
    pub fn share_set(&self, rank: usize) -> &[usize] {
        self.layout.share_sets.get(rank)
    }

    /// Transmission index sets `Ω_{t+r}`.
    pub fn transmission_set(&self, rank: usize) -> &[usize] {
        self.layout.tx_sets.get(rank)
    }

    pub fn transmission_count(&self) -> usize {
        self.layout.tx_sets.len()
    }

    /// Ranks of the shares a user sees through its caches.
    pub fn accessible_shares(&self, user: &[usize]) -> Vec<usize> {
        self.layout.share_sets.iter().enumerate().filter(|(_, tt)| !is_disjoint(user, tt)).map(|(i, _)| i).collect()
    }
}

/// The dedicated-cache baseline with `K` users and caches.
pub fn rpkp_scheme(users: usize, files: usize, t: usize, s: usize) -> Result<SchemeParams> {
    SchemeParams::new(Topology::new(users, 1, files)?, t, Variant::DedicatedRpkp, s)
}

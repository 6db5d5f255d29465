//! Executable correctness, secrecy and privacy checks.
//!
//! Rank tests and randomized trials scale to any instance. Information
//! conditions are checked by full enumeration of all randomness and library
//! values on micro instances, comparing view distributions for exact
//! equality.

mod exhaustive;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{memory_corner, memory_sp, rate_sp};
use crate::combinatorics::{effective_shares, format_subset};
use crate::error::{Error, Result};
use crate::scheme::{decode, deliver, draw_randomness, place, DemandVector, Library, Randomness, SchemeParams};
use crate::sharing::{leakage_test, SharingParams};
use crate::Rational;

pub use exhaustive::{enumeration_size, verify_privacy_exhaustive, verify_secrecy_exhaustive};

/// Largest joint state count an exhaustive check will enumerate.
pub const ENUMERATION_BUDGET: u128 = 1 << 24;

/// Largest demand space the exhaustive correctness policy will walk.
pub const EXHAUSTIVE_DEMAND_LIMIT: u128 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Refused,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub instance: String,
    /// Trials run or joint states enumerated; the estimate when refused.
    pub size: u128,
    pub outcome: Outcome,
    /// Statistical distance for enumeration checks.
    pub distance: Option<f64>,
    pub witness: Option<String>,
    /// The check is expected to fail for this variant.
    pub expected_fail: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overhead_bits: Option<usize>,
    #[serde(skip)]
    pub exact_distance: Option<Rational>,
}

impl VerificationReport {
    fn new(check: &str, instance: String, size: u128) -> Self {
        Self {
            check: check.into(),
            instance,
            size,
            outcome: Outcome::Pass,
            distance: None,
            witness: None,
            expected_fail: false,
            overhead_bits: None,
            exact_distance: None,
        }
    }

    fn fail(mut self, witness: String) -> Self {
        self.outcome = Outcome::Fail;
        self.witness = Some(witness);
        self
    }

    fn with_distance(mut self, d: Rational) -> Self {
        self.distance = Some(*d.numer() as f64 / *d.denom() as f64);
        self.exact_distance = Some(d);
        self
    }

    /// Whether this report should make a verification run fail.
    pub fn is_failure(&self) -> bool {
        self.outcome == Outcome::Fail && !self.expected_fail
    }
}

/// Deliberate defects used to show the checks can detect a broken scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    #[default]
    None,
    /// Every transmission key `V_S` is zero.
    ZeroTransmissionKeys,
    /// All free key fragments take the same value.
    ReuseKeySplit,
    /// Two key columns of the generator coincide (or the only key column is zero).
    RankDeficientGenerator,
}

impl Fault {
    pub fn name(&self) -> &'static str {
        match self {
            Fault::None => "none",
            Fault::ZeroTransmissionKeys => "zero-v",
            Fault::ReuseKeySplit => "reuse-split",
            Fault::RankDeficientGenerator => "rank-deficient",
        }
    }

    /// Parameters carrying the fault. Only the generator fault changes them.
    pub fn params(&self, params: &SchemeParams) -> Result<SchemeParams> {
        if *self != Fault::RankDeficientGenerator {
            return Ok(params.clone());
        }
        let sharing = params.sharing();
        let (n, m) = (sharing.n(), sharing.m());
        if m == 0 {
            return Err(Error::NotApplicable("the generator has no key columns at t = 0".into()));
        }
        let mut broken = sharing.generator().clone();
        let first = n - m;
        for i in 0..n {
            let v = if m >= 2 { broken.get(i, first) } else { 0 };
            broken.set(i, n - 1, v);
        }
        let sharing = SharingParams::with_generator(n, m, sharing.s(), *sharing.spec(), broken)?;
        SchemeParams::with_sharing(*params.topology(), params.t(), params.variant(), sharing)
    }

    pub fn apply(&self, randomness: &mut Randomness) {
        match self {
            Fault::ZeroTransmissionKeys => randomness.zero_transmission_keys(),
            Fault::ReuseKeySplit => randomness.reuse_first_split(),
            Fault::None | Fault::RankDeficientGenerator => {}
        }
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Fault::None),
            "zero-v" => Ok(Fault::ZeroTransmissionKeys),
            "reuse-split" => Ok(Fault::ReuseKeySplit),
            "rank-deficient" => Ok(Fault::RankDeficientGenerator),
            other => Err(Error::InvalidParams(format!("unknown fault {other:?}"))),
        }
    }
}

pub(crate) fn describe(params: &SchemeParams, fault: Fault) -> String {
    let mut s = format!(
        "{} t={} variant={} l={} s={}",
        params.topology(),
        params.t(),
        params.variant(),
        params.spec().degree(),
        params.s()
    );
    if fault != Fault::None {
        s.push_str(&format!(" fault={fault}"));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DemandPolicy {
    Exhaustive,
    Random,
}

fn demand_space(params: &SchemeParams) -> u128 {
    let topo = params.topology();
    (topo.files() as u128).checked_pow(topo.users() as u32).unwrap_or(u128::MAX)
}

/// Per-trial seeds `(library, randomness, demands)` derived from `base + i`.
fn trial_seeds(base: u64, i: u64) -> (u64, u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(base.wrapping_add(i));
    (rng.gen(), rng.gen(), rng.gen())
}

/// Every user decodes its file for each tested demand vector.
///
/// Trial `i` draws its library and randomness from seed `base + i`. Under
/// the exhaustive policy trial `i` uses the `i`-th demand vector; otherwise
/// the demands are drawn from the same seed.
pub fn verify_correctness(
    params: &SchemeParams,
    policy: DemandPolicy,
    trials: u64,
    seed: u64,
    fault: Fault,
) -> Result<VerificationReport> {
    let faulty = fault.params(params)?;
    let params = &faulty;
    let instance = describe(params, fault);
    let space = demand_space(params);
    let count = match policy {
        DemandPolicy::Exhaustive if space > EXHAUSTIVE_DEMAND_LIMIT => {
            let mut report = VerificationReport::new("correctness", instance, space);
            report.outcome = Outcome::Refused;
            return Ok(report);
        }
        DemandPolicy::Exhaustive => space as u64,
        DemandPolicy::Random => trials,
    };
    let report = VerificationReport::new("correctness", instance, count as u128);
    for i in 0..count {
        let (lib_seed, rand_seed, demand_seed) = trial_seeds(seed, i);
        let demands = match policy {
            DemandPolicy::Exhaustive => DemandVector::nth(params, i),
            DemandPolicy::Random => DemandVector::random(params, demand_seed),
        };
        let library = Library::random(params, lib_seed);
        let mut randomness = draw_randomness(params, rand_seed);
        fault.apply(&mut randomness);
        let witness = |user: &[usize], what: &str| {
            format!("seed={} trial={i} demands={:?} user={} {what}", seed, demands.as_slice(), format_subset(user))
        };
        let placement = place(params, &library, &randomness)?;
        let bc = deliver(params, &randomness, &placement.shares, &demands)?;
        for (gi, g) in params.users().enumerate() {
            let want = demands.of(gi);
            match decode(params, g, &bc, &placement.caches_of(g), want, Some(&demands)) {
                Ok(out) if out == library.file(want) => {}
                Ok(_) => return Ok(report.fail(witness(g, "decoded the wrong file"))),
                Err(e) => return Ok(report.fail(witness(g, &e.to_string()))),
            }
        }
    }
    Ok(report)
}

/// The key columns restricted to each user's accessible shares have full row rank.
pub fn verify_cache_secrecy_rank(params: &SchemeParams, fault: Fault) -> Result<VerificationReport> {
    let faulty = fault.params(params)?;
    let params = &faulty;
    let topo = params.topology();
    let m = effective_shares(topo.caches(), topo.access(), params.t()) as usize;
    let report = VerificationReport::new("cache_secrecy_rank", describe(params, fault), topo.users() as u128);
    for g in params.users() {
        let rows = params.accessible_shares(g);
        if rows.len() != m {
            return Ok(report.fail(format!("user={} accesses {} shares, expected {m}", format_subset(g), rows.len())));
        }
        if !leakage_test(&rows, params.sharing())? {
            let sets: Vec<String> = rows.iter().map(|&i| format_subset(params.share_set(i))).collect();
            return Ok(report.fail(format!("user={} shares=[{}]", format_subset(g), sets.join(","))));
        }
    }
    Ok(report)
}

/// Measured cache and broadcast sizes equal the closed forms.
pub fn verify_rate_accounting(params: &SchemeParams, seed: u64) -> Result<VerificationReport> {
    let topo = params.topology();
    let (c, r, n, t) = (topo.caches(), topo.access(), topo.files(), params.t());
    let (want_m, want_r) = if params.is_corner() {
        (memory_corner(c, r, n)?, Rational::from_integer(1))
    } else {
        (memory_sp(c, r, n, t)?, rate_sp(c, r, t)?)
    };
    let (lib_seed, rand_seed, demand_seed) = trial_seeds(seed, 0);
    let library = Library::random(params, lib_seed);
    let randomness = draw_randomness(params, rand_seed);
    let placement = place(params, &library, &randomness)?;
    let demands = DemandVector::random(params, demand_seed);
    let bc = deliver(params, &randomness, &placement.shares, &demands)?;
    let mut report = VerificationReport::new("rate_accounting", describe(params, Fault::None), 1);
    report.overhead_bits = Some(bc.overhead_bits());
    for z in &placement.caches {
        let got = z.size_in_files(params);
        if got != want_m {
            return Ok(report.fail(format!("cache={} holds {got} files, expected {want_m}", z.cache)));
        }
    }
    let got = bc.rate(params);
    if got != want_r {
        return Ok(report.fail(format!("broadcast is {got} files, expected {want_r}")));
    }
    Ok(report)
}

/// Options for [`verify_all`].
#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub trials: u64,
    pub seed: u64,
    pub fault: Fault,
}

/// Correctness, rank and accounting checks, plus exhaustive secrecy and
/// privacy for every user when the instance fits the enumeration budget.
pub fn verify_all(params: &SchemeParams, options: SuiteOptions) -> Result<Vec<VerificationReport>> {
    let SuiteOptions { trials, seed, fault } = options;
    let policy = if demand_space(params) <= trials as u128 { DemandPolicy::Exhaustive } else { DemandPolicy::Random };
    let mut out = vec![verify_correctness(params, policy, trials, seed, fault)?];
    out.push(verify_cache_secrecy_rank(params, fault)?);
    out.push(verify_rate_accounting(params, seed)?);
    if params.s() == 1 {
        for g in params.users() {
            out.push(verify_secrecy_exhaustive(params, g, fault)?);
        }
        for g in params.users() {
            out.push(verify_privacy_exhaustive(params, g, fault)?);
        }
    }
    Ok(out)
}

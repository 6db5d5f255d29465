use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::placement::weighted_share;
use super::{Randomness, SchemeParams};
use crate::error::{Error, Result};
use crate::field::{xor_into, Symbol};
use crate::sharing::FileShares;
use crate::Rational;

/// One requested file (1-based) per user, users in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DemandVector(Vec<usize>);

impl DemandVector {
    pub fn new(params: &SchemeParams, demands: Vec<usize>) -> Result<Self> {
        let k = params.topology().users();
        let n = params.topology().files();
        if demands.len() != k {
            return Err(Error::InvalidDemands(format!("{} demands for K={k} users", demands.len())));
        }
        if let Some(&bad) = demands.iter().find(|&&d| d == 0 || d > n) {
            return Err(Error::InvalidDemands(format!("file index {bad} outside [1, {n}]")));
        }
        Ok(Self(demands))
    }

    pub fn random(params: &SchemeParams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = params.topology().files();
        Self((0..params.topology().users()).map(|_| rng.gen_range(1..=n)).collect())
    }

    /// The `index`-th demand vector in mixed-radix order over `[N]^K`.
    pub fn nth(params: &SchemeParams, mut index: u64) -> Self {
        let n = params.topology().files() as u64;
        let mut out = vec![0; params.topology().users()];
        for slot in out.iter_mut().rev() {
            *slot = (index % n) as usize + 1;
            index /= n;
        }
        Self(out)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn of(&self, user_rank: usize) -> usize {
        self.0[user_rank]
    }

    pub(crate) fn indicator(&self, user_rank: usize, files: usize) -> Vec<bool> {
        let mut e = vec![false; files];
        e[self.0[user_rank] - 1] = true;
        e
    }
}

/// The delivery-phase transmission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Broadcast {
    /// One payload per `(t+r)`-subset, in lexicographic order.
    pub payloads: Vec<Vec<Symbol>>,
    /// `q_G` per user; absent for the secrecy-only variants.
    pub q_vectors: Option<Vec<Vec<bool>>>,
}

impl Broadcast {
    pub fn payload_symbols(&self) -> usize {
        self.payloads.iter().map(Vec::len).sum()
    }

    /// Broadcast size in files, excluding the `q` vectors.
    pub fn rate(&self, params: &SchemeParams) -> Rational {
        Ratio::new(self.payload_symbols() as i128, params.sharing().file_len() as i128)
    }

    /// Size of the transmitted `q` vectors in bits.
    pub fn overhead_bits(&self) -> usize {
        self.q_vectors.as_ref().map_or(0, |q| q.iter().map(Vec::len).sum())
    }
}

/// Coefficient vectors applied to the shares in every payload: `q_G` for
/// the private variant, the demand indicators otherwise.
pub(crate) fn coefficients(params: &SchemeParams, randomness: &Randomness, demands: &DemandVector) -> Vec<Vec<bool>> {
    let files = params.topology().files();
    (0..params.topology().users())
        .map(|gi| {
            let mut q = demands.indicator(gi, files);
            if params.variant().is_private() {
                for (bit, &p) in q.iter_mut().zip(&randomness.privacy_vectors[gi]) {
                    *bit ^= p;
                }
            }
            q
        })
        .collect()
}

pub fn deliver(
    params: &SchemeParams,
    randomness: &Randomness,
    shares: &[FileShares],
    demands: &DemandVector,
) -> Result<Broadcast> {
    if demands.as_slice().len() != params.topology().users() {
        return Err(Error::InvalidDemands("demand vector length does not match K".into()));
    }
    if shares.len() != params.topology().files() {
        return Err(Error::DimensionMismatch(format!("shares for {} files, expected N", shares.len())));
    }
    let q = coefficients(params, randomness, demands);
    let layout = params.layout();
    let s = params.s();
    let payloads = layout
        .tx_terms
        .iter()
        .enumerate()
        .map(|(si, terms)| {
            let mut payload = if params.uses_keys() { randomness.transmission_keys[si].clone() } else { vec![0; s] };
            for &(gi, ti) in terms {
                xor_into(&mut payload, &weighted_share(shares, &q[gi], ti, s));
            }
            payload
        })
        .collect();
    Ok(Broadcast { payloads, q_vectors: params.transmits_q().then_some(q) })
}

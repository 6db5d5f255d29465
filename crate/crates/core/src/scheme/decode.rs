use super::delivery::{Broadcast, DemandVector};
use super::placement::CacheContents;
use super::SchemeParams;
use crate::combinatorics::is_disjoint;
use crate::error::{Error, Result};
use crate::field::{xor_into, Symbol};
use crate::sharing::reconstruct;

struct UserView<'a> {
    user: &'a [usize],
    caches: &'a [&'a CacheContents],
}

impl UserView<'_> {
    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::DecodeFailure { user: self.user.to_vec(), reason: reason.into() }
    }

    fn file_share(&self, params: &SchemeParams, file: usize, share_rank: usize) -> Result<&[Symbol]> {
        let tt = params.share_set(share_rank);
        self.caches
            .iter()
            .filter(|z| tt.contains(&z.cache))
            .find_map(|z| z.file_shares.get(&(file, share_rank)))
            .map(|v| &v[..])
            .ok_or_else(|| self.fail(format!("share W{file},{share_rank} missing from accessible caches")))
    }

    /// `W̃_{q,T}` assembled from cached shares.
    fn weighted(&self, params: &SchemeParams, q: &[bool], share_rank: usize) -> Result<Vec<Symbol>> {
        let mut acc = vec![0; params.s()];
        for (i, &bit) in q.iter().enumerate() {
            if bit {
                xor_into(&mut acc, self.file_share(params, i + 1, share_rank)?);
            }
        }
        Ok(acc)
    }

    /// `D_{H,T}` as the XOR of the fragments held by each cache of `H`.
    fn mask(&self, user_rank: usize, share_rank: usize, s: usize) -> Result<Vec<Symbol>> {
        let mut acc = vec![0; s];
        for z in self.caches {
            let frag = z
                .key_shares
                .get(&(user_rank, share_rank))
                .ok_or_else(|| self.fail(format!("key fragment missing from cache {}", z.cache)))?;
            xor_into(&mut acc, frag);
        }
        Ok(acc)
    }
}

/// Recovers the file `demand` requested by `user` from its caches and the
/// broadcast.
///
/// Secrecy-only broadcasts carry no demand information, so those variants
/// must be given the full demand vector through `side_demands`.
pub fn decode(
    params: &SchemeParams,
    user: &[usize],
    broadcast: &Broadcast,
    caches: &[&CacheContents],
    demand: usize,
    side_demands: Option<&DemandVector>,
) -> Result<Vec<Symbol>> {
    let topo = params.topology();
    let view = UserView { user, caches };
    let user_rank = params.user_rank(user).ok_or_else(|| view.fail("not a user of this topology"))?;
    let mut cache_ids: Vec<usize> = caches.iter().map(|z| z.cache).collect();
    cache_ids.sort_unstable();
    if cache_ids != user {
        return Err(view.fail(format!("expected caches {user:?}, got {cache_ids:?}")));
    }
    if demand == 0 || demand > topo.files() {
        return Err(Error::InvalidDemands(format!("file index {demand} outside [1, {}]", topo.files())));
    }

    let s = params.s();
    if broadcast.payloads.len() != params.transmission_count() {
        return Err(Error::InconsistentBroadcast(format!(
            "{} payloads, expected {}",
            broadcast.payloads.len(),
            params.transmission_count()
        )));
    }
    if broadcast.payloads.iter().any(|p| p.len() != s) {
        return Err(Error::InconsistentBroadcast(format!("payloads must hold {s} symbols")));
    }

    let coeffs: Vec<Vec<bool>> = if params.transmits_q() {
        let q = broadcast.q_vectors.as_ref().ok_or_else(|| Error::InconsistentBroadcast("q vectors missing".into()))?;
        if q.len() != topo.users() || q.iter().any(|v| v.len() != topo.files()) {
            return Err(Error::InconsistentBroadcast("q vectors have the wrong shape".into()));
        }
        q.clone()
    } else {
        let d = side_demands.ok_or_else(|| view.fail("secrecy-only decoding needs the demand vector"))?;
        if d.of(user_rank) != demand {
            return Err(view.fail("side demand vector disagrees with the user's demand"));
        }
        (0..topo.users()).map(|gi| d.indicator(gi, topo.files())).collect()
    };

    let layout = params.layout();
    let mut shares: Vec<Vec<Symbol>> = Vec::with_capacity(layout.share_sets.len());
    for (ti, tt) in layout.share_sets.iter().enumerate() {
        if !is_disjoint(user, tt) {
            shares.push(view.file_share(params, demand, ti)?.to_vec());
            continue;
        }
        let si = layout.tx_rank(user, tt);
        let mut share = broadcast.payloads[si].clone();
        if params.uses_keys() {
            xor_into(&mut share, &view.mask(user_rank, ti, s)?);
        }
        for &(gi, rest) in &layout.tx_terms[si] {
            if gi != user_rank {
                xor_into(&mut share, &view.weighted(params, &coeffs[gi], rest)?);
            }
        }
        shares.push(share);
    }

    let subfiles = reconstruct(&shares, params.sharing()).map_err(|e| view.fail(e.to_string()))?;
    Ok(subfiles.concat())
}

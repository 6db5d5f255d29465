use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Randomness, SchemeParams};
use crate::error::{Error, Result};
use crate::field::{xor_into, Symbol};
use crate::sharing::{encode_file, split_file, FileShares};
use crate::Rational;

/// `N` files of `(n - m)·s` symbols each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    files: Vec<Vec<Symbol>>,
}

impl Library {
    pub fn new(params: &SchemeParams, files: Vec<Vec<Symbol>>) -> Result<Self> {
        let expected = params.sharing().file_len();
        if files.len() != params.topology().files() {
            return Err(Error::DimensionMismatch(format!(
                "library has {} files, topology has N={}",
                files.len(),
                params.topology().files()
            )));
        }
        if let Some((i, f)) = files.iter().enumerate().find(|(_, f)| f.len() != expected) {
            return Err(Error::DimensionMismatch(format!(
                "file {} has {} symbols, expected {expected}",
                i + 1,
                f.len()
            )));
        }
        let mask = params.spec().mask();
        if files.iter().flatten().any(|&x| x & !mask != 0) {
            return Err(Error::InvalidParams("library symbol outside the field".into()));
        }
        Ok(Self { files })
    }

    pub fn zeros(params: &SchemeParams) -> Self {
        let len = params.sharing().file_len();
        Self { files: vec![vec![0; len]; params.topology().files()] }
    }

    pub fn random(params: &SchemeParams, seed: u64) -> Self {
        let len = params.sharing().file_len();
        let mask = params.spec().mask();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let files =
            (0..params.topology().files()).map(|_| (0..len).map(|_| rng.gen::<Symbol>() & mask).collect()).collect();
        Self { files }
    }

    /// File `i`, 1-based.
    pub fn file(&self, i: usize) -> &[Symbol] {
        &self.files[i - 1]
    }

    pub fn files(&self) -> &[Vec<Symbol>] {
        &self.files
    }
}

/// Contents of one cache. Shares are reference-counted: a share stored in
/// several caches is the same allocation in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheContents {
    /// 1-based cache label.
    pub cache: usize,
    /// `(file, share rank) -> W̃_{file,T}` for every `T` containing the cache.
    pub file_shares: BTreeMap<(usize, usize), Arc<[Symbol]>>,
    /// `(user rank, share rank) -> D^c_{G,T}` for every `G` containing the cache.
    pub key_shares: BTreeMap<(usize, usize), Arc<[Symbol]>>,
}

impl CacheContents {
    pub fn symbols(&self) -> usize {
        self.file_shares.values().chain(self.key_shares.values()).map(|v| v.len()).sum()
    }

    /// Stored size measured in files.
    pub fn size_in_files(&self, params: &SchemeParams) -> Rational {
        Ratio::new(self.symbols() as i128, params.sharing().file_len() as i128)
    }
}

#[derive(Debug, Clone)]
pub struct Placement {
    pub shares: Vec<FileShares>,
    pub caches: Vec<CacheContents>,
}

impl Placement {
    /// Cache `c`, 1-based.
    pub fn cache(&self, c: usize) -> &CacheContents {
        &self.caches[c - 1]
    }

    /// The caches a user reads, in the user's element order.
    pub fn caches_of<'a>(&'a self, user: &[usize]) -> Vec<&'a CacheContents> {
        user.iter().map(|&c| self.cache(c)).collect()
    }
}

pub fn encode_library(params: &SchemeParams, library: &Library, randomness: &Randomness) -> Result<Vec<FileShares>> {
    library
        .files
        .iter()
        .enumerate()
        .map(|(i, file)| {
            let subfiles = split_file(file, params.sharing())?;
            encode_file(i + 1, &subfiles, &randomness.encryption_keys[i], params.sharing())
        })
        .collect()
}

/// `⊕_{i : q_i = 1} W̃_{i,T}`.
pub(crate) fn weighted_share(shares: &[FileShares], q: &[bool], share_rank: usize, s: usize) -> Vec<Symbol> {
    let mut acc = vec![0; s];
    for (file, &bit) in shares.iter().zip(q) {
        if bit {
            xor_into(&mut acc, &file.shares[share_rank]);
        }
    }
    acc
}

/// Key fragments `D^a_{G,T}` for every user `G`, disjoint `T` and `a ∈ G`,
/// in the element order of `G`.
fn key_splits(params: &SchemeParams, shares: &[FileShares], randomness: &Randomness) -> Vec<Vec<Vec<Arc<[Symbol]>>>> {
    let layout = params.layout();
    let s = params.s();
    layout
        .users
        .iter()
        .enumerate()
        .map(|(gi, g)| {
            layout.disjoint[gi]
                .iter()
                .enumerate()
                .map(|(slot, &ti)| {
                    let tt = layout.share_sets.get(ti);
                    let mut last = weighted_share(shares, &randomness.privacy_vectors[gi], ti, s);
                    xor_into(&mut last, &randomness.transmission_keys[layout.tx_rank(g, tt)]);
                    let mut fragments: Vec<Arc<[Symbol]>> = Vec::with_capacity(g.len());
                    for draw in &randomness.split_draws[gi][slot] {
                        xor_into(&mut last, draw);
                        fragments.push(Arc::from(draw.as_slice()));
                    }
                    fragments.push(Arc::from(last));
                    fragments
                })
                .collect()
        })
        .collect()
}

/// Encodes the library and fills all `C` caches.
pub fn place(params: &SchemeParams, library: &Library, randomness: &Randomness) -> Result<Placement> {
    if library.files.len() != params.topology().files()
        || library.files.iter().any(|f| f.len() != params.sharing().file_len())
    {
        return Err(Error::DimensionMismatch("library does not match the scheme parameters".into()));
    }
    let shares = encode_library(params, library, randomness)?;
    let layout = params.layout();
    let mut caches: Vec<CacheContents> = (1..=params.topology().caches())
        .map(|cache| CacheContents { cache, file_shares: BTreeMap::new(), key_shares: BTreeMap::new() })
        .collect();

    for (ti, tt) in layout.share_sets.iter().enumerate() {
        for &c in tt {
            for file in &shares {
                caches[c - 1].file_shares.insert((file.file_index, ti), Arc::clone(&file.shares[ti]));
            }
        }
    }

    if params.uses_keys() {
        let splits = key_splits(params, &shares, randomness);
        for (gi, g) in layout.users.iter().enumerate() {
            for (slot, &ti) in layout.disjoint[gi].iter().enumerate() {
                for (pos, &a) in g.iter().enumerate() {
                    caches[a - 1].key_shares.insert((gi, ti), Arc::clone(&splits[gi][slot][pos]));
                }
            }
        }
    }
    Ok(Placement { shares, caches })
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SchemeParams;
use crate::error::{Error, Result};
use crate::field::Symbol;

/// All server-private random material.
///
/// `split_draws` holds the freely drawn key fragments `D^a_{G,T}` for the
/// `r - 1` smallest elements `a` of each user set `G`; the fragment for
/// `max(G)` depends on the file shares and is completed during placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Randomness {
    /// `[file][key]`, each `s` symbols.
    pub encryption_keys: Vec<Vec<Vec<Symbol>>>,
    /// One mask per transmission set, `s` symbols each.
    pub transmission_keys: Vec<Vec<Symbol>>,
    /// One length-`N` bit vector per user.
    pub privacy_vectors: Vec<Vec<bool>>,
    /// `[user][disjoint share slot][fragment]`, each `s` symbols.
    pub split_draws: Vec<Vec<Vec<Vec<Symbol>>>>,
}

/// How many free symbols and bits a [`Randomness`] consumes, in the order
/// encryption keys, transmission keys, key fragments (symbols), then privacy
/// vectors (bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TapeLayout {
    pub encryption_symbols: usize,
    pub transmission_symbols: usize,
    pub split_symbols: usize,
    pub privacy_bits: usize,
}

impl TapeLayout {
    pub fn of(params: &SchemeParams) -> Self {
        let topo = params.topology();
        let s = params.s();
        let m = params.sharing().m();
        let keyed = params.uses_keys();
        let slots = params.layout().disjoint.first().map_or(0, Vec::len);
        Self {
            encryption_symbols: topo.files() * m * s,
            transmission_symbols: if keyed { params.transmission_count() * s } else { 0 },
            split_symbols: if keyed { topo.users() * slots * (topo.access() - 1) * s } else { 0 },
            privacy_bits: if params.variant().is_private() { topo.users() * topo.files() } else { 0 },
        }
    }

    pub fn symbols(&self) -> usize {
        self.encryption_symbols + self.transmission_symbols + self.split_symbols
    }

    pub fn bits(&self) -> usize {
        self.privacy_bits
    }

    /// `log2` of the number of distinct tapes for field degree `l`.
    pub fn entropy_bits(&self, l: u32) -> u64 {
        self.symbols() as u64 * u64::from(l) + self.bits() as u64
    }
}

impl Randomness {
    /// Builds randomness from explicit symbol and bit tapes laid out as in
    /// [`TapeLayout`]. Exhaustive verification enumerates tapes through here.
    pub fn from_tape(params: &SchemeParams, symbols: &[Symbol], bits: &[bool]) -> Result<Self> {
        let layout = TapeLayout::of(params);
        if symbols.len() != layout.symbols() || bits.len() != layout.bits() {
            return Err(Error::DimensionMismatch(format!(
                "tape has {} symbols and {} bits, layout needs {} and {}",
                symbols.len(),
                bits.len(),
                layout.symbols(),
                layout.bits()
            )));
        }
        let mask = params.spec().mask();
        if symbols.iter().any(|&x| x & !mask != 0) {
            return Err(Error::ElementOutOfRange {
                value: u32::from(*symbols.iter().find(|&&x| x & !mask != 0).unwrap()),
                l: params.spec().degree(),
            });
        }
        let topo = params.topology();
        let s = params.s();
        let mut chunks = symbols.chunks(s.max(1));
        let mut next = || chunks.next().expect("tape length checked").to_vec();

        let m = params.sharing().m();
        let encryption_keys = (0..topo.files()).map(|_| (0..m).map(|_| next()).collect()).collect();
        let transmission_keys =
            if params.uses_keys() { (0..params.transmission_count()).map(|_| next()).collect() } else { Vec::new() };
        let split_draws = if params.uses_keys() {
            params
                .layout()
                .disjoint
                .iter()
                .map(|slots| slots.iter().map(|_| (1..topo.access()).map(|_| next()).collect()).collect())
                .collect()
        } else {
            Vec::new()
        };
        let privacy_vectors = if params.variant().is_private() {
            bits.chunks(topo.files()).map(<[bool]>::to_vec).collect()
        } else {
            vec![vec![false; topo.files()]; topo.users()]
        };
        Ok(Self { encryption_keys, transmission_keys, privacy_vectors, split_draws })
    }

    /// Overwrites every transmission key with zeros.
    pub fn zero_transmission_keys(&mut self) {
        for v in &mut self.transmission_keys {
            v.fill(0);
        }
    }

    /// Replaces every free key fragment with the first one, so the same
    /// fragment is reused across users.
    pub fn reuse_first_split(&mut self) {
        let Some(first) = self.split_draws.iter().flatten().flatten().next().cloned() else {
            return;
        };
        for slot in self.split_draws.iter_mut().flatten().flatten() {
            slot.clone_from(&first);
        }
    }
}

/// Deterministic draw of all randomness from a 64-bit seed.
pub fn draw_randomness(params: &SchemeParams, seed: u64) -> Randomness {
    let layout = TapeLayout::of(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = params.spec().mask();
    let symbols: Vec<Symbol> = (0..layout.symbols()).map(|_| rng.gen::<Symbol>() & mask).collect();
    let bits: Vec<bool> = (0..layout.bits()).map(|_| rng.gen()).collect();
    Randomness::from_tape(params, &symbols, &bits).expect("tape drawn to layout")
}

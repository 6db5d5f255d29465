use super::{Broadcast, CacheContents, SchemeParams};
use crate::combinatorics::format_subset;
use crate::field::Symbol;

/// One dumped entity: a manifest row plus its symbol stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DumpRecord {
    pub entity: &'static str,
    pub index_set: String,
    pub symbols: Vec<Symbol>,
}

impl DumpRecord {
    /// Hex rendering with `ceil(l / 4)` digits per symbol.
    pub fn hex(&self, l: u32) -> String {
        let width = l.div_ceil(4) as usize;
        self.symbols.iter().map(|x| format!("{x:0width$x}")).collect()
    }
}

/// Cache contents in cache order; file shares by `(file, T)`, then key
/// fragments by `(G, T)`.
pub fn dump_caches(params: &SchemeParams, caches: &[CacheContents]) -> Vec<DumpRecord> {
    let mut out = Vec::new();
    for z in caches {
        for (&(file, ti), share) in &z.file_shares {
            out.push(DumpRecord {
                entity: "cache_file_share",
                index_set: format!("Z{}/W{}/{}", z.cache, file, format_subset(params.share_set(ti))),
                symbols: share.to_vec(),
            });
        }
        for (&(gi, ti), frag) in &z.key_shares {
            out.push(DumpRecord {
                entity: "cache_key_share",
                index_set: format!(
                    "Z{}/D{}/{}/{}",
                    z.cache,
                    z.cache,
                    format_subset(params.user(gi)),
                    format_subset(params.share_set(ti))
                ),
                symbols: frag.to_vec(),
            });
        }
    }
    out
}

/// Payloads in lexicographic order of `S`, then `q` vectors in order of `G`.
pub fn dump_broadcast(params: &SchemeParams, broadcast: &Broadcast) -> Vec<DumpRecord> {
    let mut out: Vec<DumpRecord> = broadcast
        .payloads
        .iter()
        .enumerate()
        .map(|(si, p)| DumpRecord {
            entity: "payload",
            index_set: format!("T/{}", format_subset(params.transmission_set(si))),
            symbols: p.clone(),
        })
        .collect();
    if let Some(q) = &broadcast.q_vectors {
        out.extend(q.iter().enumerate().map(|(gi, bits)| DumpRecord {
            entity: "q_vector",
            index_set: format!("q/{}", format_subset(params.user(gi))),
            symbols: bits.iter().map(|&b| Symbol::from(b)).collect(),
        }));
    }
    out
}

//! `(m, n)` non-perfect secret sharing with a Cauchy generator.
//!
//! A secret of `(n - m)·s` symbols is cut into `n - m` subfiles of `s`
//! symbols, stacked with `m` uniformly random key vectors, and multiplied by
//! an `n x n` generator. Source columns are ordered subfiles first, keys
//! last, so the generator splits as `[C1 | C2]` with `C2` the key columns.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{cauchy_matrix, rank, solve, FieldMatrix, FieldSpec, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharingParams {
    n: usize,
    m: usize,
    s: usize,
    spec: FieldSpec,
    generator: FieldMatrix,
}

impl SharingParams {
    /// Parameters using the canonical `n x n` Cauchy generator over `spec`.
    pub fn new(n: usize, m: usize, s: usize, spec: FieldSpec) -> Result<Self> {
        let generator = cauchy_matrix(n, n, &spec)?;
        Self::with_generator(n, m, s, spec, generator)
    }

    /// Parameters with an arbitrary `n x n` generator. Used to build
    /// deliberately broken instances for fault injection.
    pub fn with_generator(n: usize, m: usize, s: usize, spec: FieldSpec, generator: FieldMatrix) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::InvalidParams(format!("need n >= 1 and s >= 1, got n={n} s={s}")));
        }
        if m >= n {
            return Err(Error::InvalidParams(format!("leakage threshold m={m} must be below n={n}")));
        }
        if generator.rows() != n || generator.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{}, expected {n}x{n}",
                generator.rows(),
                generator.cols()
            )));
        }
        Ok(Self { n, m, s, spec, generator })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of subfiles, `n - m`.
    pub fn subfiles(&self) -> usize {
        self.n - self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    /// Length of a whole file in symbols.
    pub fn file_len(&self) -> usize {
        self.subfiles() * self.s
    }
}

/// All `n` shares of one file, indexed by the rank of their `t`-subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileShares {
    pub file_index: usize,
    pub shares: Vec<Arc<[Symbol]>>,
}

pub fn split_file(file: &[Symbol], params: &SharingParams) -> Result<Vec<Vec<Symbol>>> {
    if file.len() != params.file_len() {
        return Err(Error::DimensionMismatch(format!(
            "file has {} symbols, expected {} = {} subfiles x {}",
            file.len(),
            params.file_len(),
            params.subfiles(),
            params.s
        )));
    }
    Ok(file.chunks(params.s).map(<[Symbol]>::to_vec).collect())
}

pub fn encode_file(
    file_index: usize,
    subfiles: &[Vec<Symbol>],
    keys: &[Vec<Symbol>],
    params: &SharingParams,
) -> Result<FileShares> {
    if subfiles.len() != params.subfiles() || keys.len() != params.m {
        return Err(Error::DimensionMismatch(format!(
            "got {} subfiles and {} keys, expected {} and {}",
            subfiles.len(),
            keys.len(),
            params.subfiles(),
            params.m
        )));
    }
    if subfiles.iter().chain(keys).any(|v| v.len() != params.s) {
        return Err(Error::DimensionMismatch(format!("every source vector must hold {} symbols", params.s)));
    }
    let source: Vec<Vec<Symbol>> = subfiles.iter().chain(keys).cloned().collect();
    let shares = params.generator.apply(&source, &params.spec)?;
    Ok(FileShares { file_index, shares: shares.into_iter().map(Arc::from).collect() })
}

/// Recovers the `n - m` subfiles from all `n` shares.
pub fn reconstruct(shares: &[impl AsRef<[Symbol]>], params: &SharingParams) -> Result<Vec<Vec<Symbol>>> {
    if shares.len() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "reconstruction needs all {} shares, got {}",
            params.n,
            shares.len()
        )));
    }
    let rhs: Vec<Vec<Symbol>> = shares.iter().map(|s| s.as_ref().to_vec()).collect();
    let mut source = solve(&params.generator, &rhs, &params.spec)?;
    source.truncate(params.subfiles());
    Ok(source)
}

/// True when the shares at `share_indices` (0-based rows of the generator)
/// carry no information about the subfiles: the key columns restricted to
/// those rows are linearly independent.
pub fn leakage_test(share_indices: &[usize], params: &SharingParams) -> Result<bool> {
    if share_indices.len() > params.m {
        return Err(Error::InvalidParams(format!(
            "{} shares exceed the threshold m={}",
            share_indices.len(),
            params.m
        )));
    }
    let mut sorted = share_indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != share_indices.len() || sorted.iter().any(|&i| i >= params.n) {
        return Err(Error::InvalidParams(format!(
            "share indices {share_indices:?} are not distinct in 0..{}",
            params.n
        )));
    }
    if share_indices.is_empty() {
        return Ok(true);
    }
    let key_cols: Vec<usize> = (params.subfiles()..params.n).collect();
    let key_block = params.generator.submatrix(share_indices, &key_cols);
    Ok(rank(&key_block, &params.spec) == share_indices.len())
}

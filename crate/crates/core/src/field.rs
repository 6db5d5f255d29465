//! Arithmetic in GF(2^l) for `1 <= l <= 16`, Cauchy matrices, and dense
//! linear algebra over the field.
//!
//! Elements are stored as `u16` bit patterns of polynomials over GF(2).
//! Each degree uses a fixed modulus: the irreducible polynomial of that
//! degree with the smallest integer encoding (for `l = 3` this is
//! `x^3 + x + 1 = 0xb`). Results are therefore bit-reproducible.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub type Symbol = u16;

pub const MAX_DEGREE: u32 = 16;

/// True iff `poly` (degree `deg(poly)`) has no factor of degree in `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let degree = degree_of(poly);
    if degree == 0 {
        return false;
    }
    for d in 1..=degree / 2 {
        for factor in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_mod(poly, factor) == 0 {
                return false;
            }
        }
    }
    true
}

fn degree_of(poly: u32) -> u32 {
    31 - poly.leading_zeros().min(31)
}

fn poly_mod(mut a: u32, b: u32) -> u32 {
    let db = degree_of(b);
    while a != 0 && degree_of(a) >= db {
        a ^= b << (degree_of(a) - db);
    }
    a
}

fn modulus_table() -> &'static [u32; MAX_DEGREE as usize] {
    static TABLE: OnceLock<[u32; MAX_DEGREE as usize]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0u32; MAX_DEGREE as usize];
        for l in 1..=MAX_DEGREE {
            table[(l - 1) as usize] = ((1u32 << l)..(1u32 << (l + 1)))
                .find(|&p| is_irreducible(p))
                .expect("an irreducible polynomial exists in every degree");
        }
        table
    })
}

/// The canonical modulus for GF(2^l).
pub fn canonical_modulus(l: u32) -> Result<u32> {
    if !(1..=MAX_DEGREE).contains(&l) {
        return Err(Error::UnsupportedDegree(l));
    }
    Ok(modulus_table()[(l - 1) as usize])
}

/// `(l, modulus)` for every supported degree.
pub fn modulus_table_rows() -> Vec<(u32, u32)> {
    (1..=MAX_DEGREE).map(|l| (l, modulus_table()[(l - 1) as usize])).collect()
}

/// A binary extension field GF(2^l) identified by its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    l: u32,
    modulus: u32,
}

impl FieldSpec {
    pub fn new(l: u32, modulus: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&l) {
            return Err(Error::UnsupportedDegree(l));
        }
        if degree_of(modulus) != l || !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus { l, modulus });
        }
        Ok(Self { l, modulus })
    }

    pub fn canonical(l: u32) -> Result<Self> {
        Self::new(l, canonical_modulus(l)?)
    }

    /// Smallest field with `2^l >= 2 * n_shares`, so that an `n x n` Cauchy
    /// generator has enough distinct evaluation points.
    pub fn field_for(n_shares: u64) -> Result<Self> {
        let needed = 2u128 * u128::from(n_shares.max(1));
        let mut l = 1u32;
        while (1u128 << l) < needed {
            l += 1;
            if l > MAX_DEGREE {
                return Err(Error::UnsupportedDegree(l));
            }
        }
        Self::canonical(l)
    }

    pub fn degree(&self) -> u32 {
        self.l
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.l
    }

    /// All-ones pattern over the `l` element bits.
    pub fn mask(&self) -> Symbol {
        ((1u32 << self.l) - 1) as Symbol
    }

    pub fn contains(&self, a: u32) -> bool {
        a < (1u32 << self.l)
    }

    pub fn check(&self, a: u32) -> Result<Symbol> {
        if self.contains(a) {
            Ok(a as Symbol)
        } else {
            Err(Error::ElementOutOfRange { value: a, l: self.l })
        }
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    /// Shift-and-add multiplication with reduction by the modulus.
    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        let mut a = u32::from(a);
        let mut b = u32::from(b);
        let top = 1u32 << self.l;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        acc as Symbol
    }

    pub fn pow(&self, a: Symbol, mut e: u64) -> Symbol {
        let mut base = a;
        let mut acc: Symbol = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^l - 2)`, the inverse in the multiplicative group.
    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// Element-wise `acc += coeff * v`.
    pub fn axpy(&self, acc: &mut [Symbol], coeff: Symbol, v: &[Symbol]) {
        debug_assert_eq!(acc.len(), v.len());
        if coeff == 0 {
            return;
        }
        for (x, &y) in acc.iter_mut().zip(v) {
            *x ^= self.mul(coeff, y);
        }
    }
}

/// Element-wise XOR of equal-length symbol vectors into `acc`.
pub fn xor_into(acc: &mut [Symbol], v: &[Symbol]) {
    debug_assert_eq!(acc.len(), v.len());
    for (x, &y) in acc.iter_mut().zip(v) {
        *x ^= y;
    }
}

/// Dense row-major matrix over a [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Symbol>,
}

impl FieldMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Symbol>, spec: &FieldSpec) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        for &e in &entries {
            spec.check(u32::from(e))?;
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Symbol {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Symbol) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j));
            }
        }
        Self { rows: rows.len(), cols: cols.len(), entries }
    }

    /// Applies the matrix to a column of symbol vectors: `out[i] = Σ_j A[i,j]·v[j]`.
    pub fn apply(&self, vectors: &[Vec<Symbol>], spec: &FieldSpec) -> Result<Vec<Vec<Symbol>>> {
        if vectors.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} input vectors for a matrix with {} columns",
                vectors.len(),
                self.cols
            )));
        }
        let len = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != len) {
            return Err(Error::DimensionMismatch("input vectors differ in length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = vec![0; len];
                for (j, v) in vectors.iter().enumerate() {
                    spec.axpy(&mut acc, self.get(i, j), v);
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &Self, spec: &FieldSpec) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) ^ spec.mul(a, other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }
}

/// The `u x v` Cauchy matrix with `x_i = i - 1` and `y_j = u + j - 1`.
pub fn cauchy_matrix(u: usize, v: usize, spec: &FieldSpec) -> Result<FieldMatrix> {
    let needed = (u + v) as u64;
    if needed > spec.order() {
        return Err(Error::FieldTooSmall { u, v, l: spec.degree(), needed, order: spec.order() });
    }
    let mut m = FieldMatrix::zeros(u, v);
    for i in 0..u {
        for j in 0..v {
            let x = i as Symbol;
            let y = (u + j) as Symbol;
            m.set(i, j, spec.inv(spec.add(x, y))?);
        }
    }
    Ok(m)
}

/// Rank over GF(2^l) by Gaussian elimination.
pub fn rank(matrix: &FieldMatrix, spec: &FieldSpec) -> usize {
    let mut m = matrix.clone();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
            continue;
        };
        swap_rows(&mut m, rank, pivot);
        let inv = spec.inv(m.get(rank, col)).expect("pivot is nonzero");
        for r in 0..m.rows {
            if r != rank && m.get(r, col) != 0 {
                let factor = spec.mul(m.get(r, col), inv);
                for c in col..m.cols {
                    let v = m.get(r, c) ^ spec.mul(factor, m.get(rank, c));
                    m.set(r, c, v);
                }
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

fn swap_rows(m: &mut FieldMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        m.entries.swap(a * m.cols + c, b * m.cols + c);
    }
}

/// Solves `matrix · X = rhs` where row `i` of `X` and `rhs` are symbol vectors.
pub fn solve(matrix: &FieldMatrix, rhs: &[Vec<Symbol>], spec: &FieldSpec) -> Result<Vec<Vec<Symbol>>> {
    let n = matrix.rows;
    if matrix.cols != n {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", n, matrix.cols)));
    }
    if rhs.len() != n {
        return Err(Error::DimensionMismatch(format!("{} right-hand sides for {n} equations", rhs.len())));
    }
    let width = rhs.first().map_or(0, Vec::len);
    if rhs.iter().any(|v| v.len() != width) {
        return Err(Error::DimensionMismatch("right-hand sides differ in length".into()));
    }
    let mut a = matrix.clone();
    let mut b: Vec<Vec<Symbol>> = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a.get(r, col) != 0).ok_or(Error::SingularMatrix)?;
        swap_rows(&mut a, col, pivot);
        b.swap(col, pivot);
        let inv = spec.inv(a.get(col, col))?;
        for c in 0..n {
            let v = spec.mul(a.get(col, c), inv);
            a.set(col, c, v);
        }
        for v in b[col].iter_mut() {
            *v = spec.mul(*v, inv);
        }
        for r in 0..n {
            let factor = a.get(r, col);
            if r == col || factor == 0 {
                continue;
            }
            for c in 0..n {
                let v = a.get(r, c) ^ spec.mul(factor, a.get(col, c));
                a.set(r, c, v);
            }
            let (pivot_row, target) = if r < col {
                let (lo, hi) = b.split_at_mut(col);
                (&hi[0], &mut lo[r])
            } else {
                let (lo, hi) = b.split_at_mut(r);
                (&lo[col], &mut hi[0])
            };
            spec.axpy(target, factor, pivot_row);
        }
    }
    Ok(b)
}

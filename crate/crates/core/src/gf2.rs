//! Linear algebra over GF(2) on single machine words.
//!
//! A vector of length `len <= 64` is stored in one `u64` with coordinate `i`
//! at bit `i`. Vectors of the ambient space GF(2)^{2m} split into an
//! `x`-block (bits `0..m`) and a `y`-block (bits `m..2m`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};

/// Largest supported vector length.
pub const MAX_LEN: usize = 64;

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

#[inline]
fn parity(word: u64) -> u8 {
    (word.count_ones() & 1) as u8
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitVector {
    len: usize,
    bits: u64,
}

impl BitVector {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len > MAX_LEN {
            return Err(argument(format!("vector length {len} exceeds {MAX_LEN}")));
        }
        if bits & !low_mask(len) != 0 {
            return Err(argument(format!("bits {bits:#x} set above length {len}")));
        }
        Ok(BitVector { len, bits })
    }

    pub fn zero(len: usize) -> Self {
        assert!(len <= MAX_LEN);
        BitVector { len, bits: 0 }
    }

    /// The unit vector with a one at coordinate `i` (0-based).
    pub fn unit(len: usize, i: usize) -> Self {
        assert!(i < len && len <= MAX_LEN);
        BitVector { len, bits: 1 << i }
    }

    /// Concatenation `(x, y)` of two blocks of length `m`.
    pub fn from_blocks(m: usize, x: u64, y: u64) -> Result<Self> {
        if 2 * m > MAX_LEN {
            return Err(argument(format!("block length {m} too large")));
        }
        if (x | y) & !low_mask(m) != 0 {
            return Err(argument("block has bits above its length"));
        }
        Ok(BitVector {
            len: 2 * m,
            bits: x | (y << m),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.bits >> i & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Standard dot product `u^T v`.
    pub fn dot(&self, other: &BitVector) -> Result<u8> {
        self.check_len(other)?;
        Ok(parity(self.bits & other.bits))
    }

    pub fn add(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        Ok(BitVector {
            len: self.len,
            bits: self.bits ^ other.bits,
        })
    }

    /// Splits a vector of even length into its `x` and `y` blocks.
    pub fn blocks(&self) -> (u64, u64) {
        let m = self.len / 2;
        (self.bits & low_mask(m), self.bits >> m)
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(argument(format!(
                "length mismatch: {} vs {}",
                self.len, other.len
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", self.bits >> i & 1)?;
        }
        write!(f, ")")
    }
}

/// Dense matrix over GF(2); row `i` is a word with entry `(i, j)` at bit `j`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    row_words: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_LEN);
        BitMatrix {
            rows,
            cols,
            row_words: vec![0; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut id = Self::zero(n, n);
        for i in 0..n {
            id.row_words[i] = 1 << i;
        }
        id
    }

    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols > MAX_LEN {
            return Err(argument(format!("{cols} columns exceed {MAX_LEN}")));
        }
        if rows.iter().any(|r| r & !low_mask(cols) != 0) {
            return Err(argument("row has bits beyond the column count"));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            row_words: rows,
        })
    }

    /// The block matrix `[[a, b], [c, d]]` of four `m x m` blocks.
    pub fn from_blocks(a: &BitMatrix, b: &BitMatrix, c: &BitMatrix, d: &BitMatrix) -> Result<Self> {
        let m = a.rows;
        for blk in [a, b, c, d] {
            if blk.rows != m || blk.cols != m {
                return Err(argument("blocks must all be square of equal order"));
            }
        }
        let mut rows = Vec::with_capacity(2 * m);
        for i in 0..m {
            rows.push(a.row_words[i] | (b.row_words[i] << m));
        }
        for i in 0..m {
            rows.push(c.row_words[i] | (d.row_words[i] << m));
        }
        BitMatrix::from_rows(2 * m, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector {
            len: self.cols,
            bits: self.row_words[i],
        }
    }

    pub fn row_words(&self) -> &[u64] {
        &self.row_words
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row_words[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        if value {
            self.row_words[i] |= 1 << j;
        } else {
            self.row_words[i] &= !(1 << j);
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self.get(i, i))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zero(self.cols, self.rows);
        for (i, &row) in self.row_words.iter().enumerate() {
            let mut bits = row;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                t.row_words[j] |= 1 << i;
                bits &= bits - 1;
            }
        }
        t
    }

    /// Matrix-vector product on raw words; no length checks.
    #[inline]
    pub(crate) fn apply_word(&self, v: u64) -> u64 {
        let mut out = 0u64;
        for (i, &row) in self.row_words.iter().enumerate() {
            out |= ((row & v).count_ones() as u64 & 1) << i;
        }
        out
    }

    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len != self.cols {
            return Err(argument(format!(
                "matrix has {} columns, vector has length {}",
                self.cols, v.len
            )));
        }
        Ok(BitVector {
            len: self.rows,
            bits: self.apply_word(v.bits),
        })
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(argument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let row_words = self
            .row_words
            .iter()
            .map(|&row| {
                let mut acc = 0u64;
                let mut bits = row;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= other.row_words[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: other.cols,
            row_words,
        })
    }

    /// Gauss-Jordan inverse; the pivot for each column is the lowest
    /// eligible row index. `None` for singular input.
    pub fn inverse(&self) -> Result<Option<BitMatrix>> {
        if !self.is_square() {
            return Err(argument("inverse requires a square matrix"));
        }
        let n = self.rows;
        let mut work = self.row_words.clone();
        let mut inv = BitMatrix::identity(n).row_words;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| work[r] >> col & 1 == 1) else {
                return Ok(None);
            };
            work.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && work[r] >> col & 1 == 1 {
                    work[r] ^= work[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(Some(BitMatrix {
            rows: n,
            cols: n,
            row_words: inv,
        }))
    }

    pub fn rank(&self) -> usize {
        let mut work = self.row_words.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if let Some(p) = (rank..self.rows).find(|&r| work[r] >> col & 1 == 1) {
                work.swap(rank, p);
                for r in 0..self.rows {
                    if r != rank && work[r] >> col & 1 == 1 {
                        work[r] ^= work[rank];
                    }
                }
                rank += 1;
            }
        }
        rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", if self.get(i, j) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The two non-degenerate quadratic forms on GF(2)^{2m}.
///
/// `Hyperbolic` is `sum x_i y_i` (Witt index `m`). `Elliptic` is
/// `sum_{i<m} x_i y_i + x_m^2 + x_m y_m + y_m^2` (Witt index `m - 1`), whose
/// maximal singular subspace is `{(x, 0) : x_m = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    Hyperbolic,
    Elliptic,
}

/// Raw-word evaluation of the form; `v` holds `2m` coordinates.
#[inline]
pub(crate) fn form_word(kind: FormKind, m: usize, v: u64) -> u8 {
    let x = v & low_mask(m);
    let y = v >> m;
    match kind {
        FormKind::Hyperbolic => parity(x & y),
        FormKind::Elliptic => {
            let top = 1u64 << (m - 1);
            let xm = ((x & top) != 0) as u8;
            let ym = ((y & top) != 0) as u8;
            parity(x & y & !top) ^ xm ^ (xm & ym) ^ ym
        }
    }
}

fn check_form_args(m: usize, v: &BitVector) -> Result<()> {
    if m < 2 || 2 * m > MAX_LEN {
        return Err(argument(format!("m = {m} outside 2..=32")));
    }
    if v.len != 2 * m {
        return Err(argument(format!(
            "vector length {} does not match 2m = {}",
            v.len,
            2 * m
        )));
    }
    Ok(())
}

pub fn quadratic_form(kind: FormKind, m: usize, v: &BitVector) -> Result<u8> {
    check_form_args(m, v)?;
    Ok(form_word(kind, m, v.bits))
}

/// Polarization `q(x + y) + q(x) + q(y)`.
pub fn bilinear_form(kind: FormKind, m: usize, x: &BitVector, y: &BitVector) -> Result<u8> {
    check_form_args(m, x)?;
    check_form_args(m, y)?;
    Ok(form_word(kind, m, x.bits ^ y.bits)
        ^ form_word(kind, m, x.bits)
        ^ form_word(kind, m, y.bits))
}

/// Finds a symmetric zero-diagonal `S` with `S u = v`.
///
/// Such a matrix exists iff `u = v = 0` or (`u != 0` and `u^T v = 0`). The
/// witness is the adjacency matrix of the graph that is complete on
/// `{i : u_i = v_i = 1}`, and attaches every `i` with `u_i = 0, v_i = 1`
/// to the lowest index in the support of `u`.
pub fn solve_symmetric_zero_diag(u: &BitVector, v: &BitVector) -> Result<Option<BitMatrix>> {
    u.check_len(v)?;
    let m = u.len;
    if m == 0 {
        return Err(argument("vectors must be non-empty"));
    }
    if u.is_zero() {
        return Ok(v.is_zero().then(|| BitMatrix::zero(m, m)));
    }
    if u.dot(v)? != 0 {
        return Ok(None);
    }
    let both = u.bits & v.bits;
    let only_v = !u.bits & v.bits;
    let anchor = u.bits.trailing_zeros() as usize;
    let mut s = BitMatrix::zero(m, m);
    for i in 0..m {
        if both >> i & 1 == 1 {
            s.row_words[i] |= both & !(1 << i);
        }
        if only_v >> i & 1 == 1 {
            s.row_words[i] |= 1 << anchor;
            s.row_words[anchor] |= 1 << i;
        }
    }
    debug_assert!(s.is_symmetric() && s.has_zero_diagonal());
    debug_assert_eq!(s.apply_word(u.bits), v.bits);
    Ok(Some(s))
}

//! Bit-packed linear algebra over GF(2).
//!
//! Vectors pack coordinate `i` into bit `i % 64` of word `i / 64`, so the
//! integer encoding of a vector (coordinate 0 is the least significant bit)
//! is directly usable as a table index. Matrices are stored column-major
//! because every consumer in this crate walks columns: the posterior
//! recursion folds one column per channel output, and rank is computed by
//! eliminating columns against a pivot basis without transposing.

use crate::error::{Error, Result};
use rand::RngCore;
use std::fmt;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

// ===== Vectors =====

/// A vector over GF(2) with a fixed length.
///
/// Invariant: bits at positions `>= len` in the backing words are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GF2Vector {
    len: usize,
    words: Vec<u64>,
}

impl GF2Vector {
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        GF2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 entries, coordinate 0 first.
    ///
    /// # Panics
    /// Panics if any entry is not 0 or 1.
    #[must_use]
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = GF2Vector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            assert!(b <= 1, "entry {i} is {b}, expected 0 or 1");
            v.set(i, b == 1);
        }
        v
    }

    /// Interprets the low `len` bits of `index` as a vector (`len <= 64`).
    #[must_use]
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS, "from_index supports at most 64 coordinates");
        let mut v = GF2Vector::zeros(len);
        if len > 0 {
            v.words[0] = index & mask_low(len);
        }
        v
    }

    /// The integer encoding of the vector (`len <= 64`).
    #[inline]
    #[must_use]
    pub fn as_index(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "as_index supports at most 64 coordinates");
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        let word = &mut self.words[i / WORD_BITS];
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    /// Adds `other` into `self` coordinate-wise.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn xor_assign(&mut self, other: &GF2Vector) {
        assert_eq!(self.len, other.len, "xor_assign length mismatch");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    #[inline]
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set coordinate, if any.
    #[must_use]
    pub fn lowest_set(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * WORD_BITS + self.words[i].trailing_zeros() as usize)
    }

    /// Uniformly random vector; consumes whole 64-bit words from `rng` in
    /// coordinate order, so the draw is reproducible given the rng state.
    #[must_use]
    pub fn random<R: RngCore>(len: usize, rng: &mut R) -> Self {
        let mut v = GF2Vector::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.next_u64();
        }
        v.mask_tail();
        v
    }

    /// Concatenation `(self, other)`.
    #[must_use]
    pub fn concat(&self, other: &GF2Vector) -> GF2Vector {
        let mut out = GF2Vector::zeros(self.len + other.len);
        for i in 0..self.len {
            out.set(i, self.get(i));
        }
        for i in 0..other.len {
            out.set(self.len + i, other.get(i));
        }
        out
    }

    #[must_use]
    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| u8::from(self.get(i))).collect()
    }

    fn mask_tail(&mut self) {
        let tail = self.len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= mask_low(tail);
            }
        }
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

#[inline]
fn mask_low(bits: usize) -> u64 {
    debug_assert!((1..=WORD_BITS).contains(&bits));
    u64::MAX >> (WORD_BITS - bits)
}

// ===== Matrices =====

/// A matrix over GF(2), stored as packed columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    words_per_col: usize,
    words: Vec<u64>,
}

impl GF2Matrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_col = words_for(rows);
        GF2Matrix {
            rows,
            cols,
            words_per_col,
            words: vec![0; words_per_col * cols],
        }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = GF2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 row slices.
    ///
    /// # Panics
    /// Panics on ragged rows or entries other than 0 and 1.
    #[must_use]
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = GF2Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "row {i} has {} entries, expected {c}", row.len());
            for (j, &b) in row.iter().enumerate() {
                assert!(b <= 1, "entry ({i}, {j}) is {b}, expected 0 or 1");
                m.set(i, j, b == 1);
            }
        }
        m
    }

    /// The systematic form `[I | a2]` with `a2` appended to an identity of
    /// size `a2.rows()`.
    #[must_use]
    pub fn systematic(a2: &GF2Matrix) -> Self {
        let m = a2.rows;
        let mut out = GF2Matrix::zeros(m, m + a2.cols);
        for i in 0..m {
            out.set(i, i, true);
        }
        for j in 0..a2.cols {
            out.col_words_mut(m + j).copy_from_slice(a2.col_words(j));
        }
        out
    }

    /// Uniformly random matrix: every entry is an independent fair bit.
    /// Columns are drawn in order, whole words at a time.
    #[must_use]
    pub fn random<R: RngCore>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = GF2Matrix::zeros(rows, cols);
        let tail = rows % WORD_BITS;
        for j in 0..cols {
            let wpc = m.words_per_col;
            let col = m.col_words_mut(j);
            for w in col.iter_mut() {
                *w = rng.next_u64();
            }
            if tail != 0 && wpc > 0 {
                col[wpc - 1] &= mask_low(tail);
            }
        }
        m
    }

    #[inline]
    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        self.col_words(j)[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        let word = &mut self.col_words_mut(j)[i / WORD_BITS];
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    #[inline]
    fn col_words(&self, j: usize) -> &[u64] {
        &self.words[j * self.words_per_col..(j + 1) * self.words_per_col]
    }

    #[inline]
    fn col_words_mut(&mut self, j: usize) -> &mut [u64] {
        &mut self.words[j * self.words_per_col..(j + 1) * self.words_per_col]
    }

    /// Column `j` as an owned vector.
    #[must_use]
    pub fn column(&self, j: usize) -> GF2Vector {
        assert!(j < self.cols, "column {j} out of range");
        GF2Vector {
            len: self.rows,
            words: self.col_words(j).to_vec(),
        }
    }

    /// Integer encoding of column `j` (`rows <= 64`).
    #[inline]
    #[must_use]
    pub fn column_index(&self, j: usize) -> u64 {
        assert!(self.rows <= WORD_BITS, "column_index supports at most 64 rows");
        assert!(j < self.cols, "column {j} out of range");
        self.col_words(j).first().copied().unwrap_or(0)
    }

    /// The matrix made of the selected columns, in the given order.
    /// Duplicate indices are allowed and copied as-is.
    pub fn submatrix_columns(&self, indices: &[usize]) -> Result<GF2Matrix> {
        for &j in indices {
            if j >= self.cols {
                return Err(Error::InvalidInput(format!(
                    "column index {j} out of range for a matrix with {} columns",
                    self.cols
                )));
            }
        }
        let mut out = GF2Matrix::zeros(self.rows, indices.len());
        for (k, &j) in indices.iter().enumerate() {
            out.col_words_mut(k).copy_from_slice(self.col_words(j));
        }
        Ok(out)
    }

    /// Rank over GF(2).
    #[must_use]
    pub fn rank(&self) -> usize {
        self.rank_of_columns(0..self.cols)
    }

    /// Rank of the submatrix formed by the given columns, computed without
    /// materializing it. Columns are folded into a pivot basis one at a
    /// time; each stored basis vector is reduced against all earlier ones,
    /// so a single pass per column suffices.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    #[must_use]
    pub fn rank_of_columns<I>(&self, indices: I) -> usize
    where
        I: IntoIterator<Item = usize>,
    {
        let wpc = self.words_per_col;
        let mut basis: Vec<u64> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut cur = vec![0u64; wpc];
        for j in indices {
            assert!(j < self.cols, "column {j} out of range");
            if pivots.len() == self.rows {
                break;
            }
            cur.copy_from_slice(self.col_words(j));
            for (b, &p) in pivots.iter().enumerate() {
                if cur[p / WORD_BITS] >> (p % WORD_BITS) & 1 == 1 {
                    for (c, &bw) in cur.iter_mut().zip(&basis[b * wpc..(b + 1) * wpc]) {
                        *c ^= bw;
                    }
                }
            }
            if let Some(w) = cur.iter().position(|&w| w != 0) {
                pivots.push(w * WORD_BITS + cur[w].trailing_zeros() as usize);
                basis.extend_from_slice(&cur);
            }
        }
        pivots.len()
    }

    /// Matrix-vector product over GF(2).
    pub fn matvec(&self, x: &GF2Vector) -> Result<GF2Vector> {
        if x.len != self.cols {
            return Err(Error::InvalidInput(format!(
                "matvec dimension mismatch: matrix has {} columns, vector has {} coordinates",
                self.cols, x.len
            )));
        }
        let mut acc = GF2Vector::zeros(self.rows);
        for (wi, &word) in x.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let j = wi * WORD_BITS + w.trailing_zeros() as usize;
                for (a, &c) in acc.words.iter_mut().zip(self.col_words(j)) {
                    *a ^= c;
                }
                w &= w - 1;
            }
        }
        Ok(acc)
    }

    // ===== Text format =====

    /// Parses the plain-text matrix format: a header line `m n`, then `m`
    /// lines of `n` unseparated 0/1 characters (row-major). Trailing blank
    /// lines are ignored.
    pub fn parse_text(input: &str) -> Result<GF2Matrix> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("matrix line 1: empty input, expected \"m n\"".into()))?;
        let mut parts = header.split_whitespace();
        let (m, n) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                let m: usize = a.parse().map_err(|_| {
                    Error::Parse(format!("matrix line 1: invalid row count {a:?}"))
                })?;
                let n: usize = b.parse().map_err(|_| {
                    Error::Parse(format!("matrix line 1: invalid column count {b:?}"))
                })?;
                (m, n)
            }
            _ => {
                return Err(Error::Parse(format!(
                    "matrix line 1: expected \"m n\", got {header:?}"
                )))
            }
        };
        if m == 0 || n == 0 {
            return Err(Error::Parse(format!(
                "matrix line 1: dimensions must be positive, got {m} x {n}"
            )));
        }
        let mut out = GF2Matrix::zeros(m, n);
        for i in 0..m {
            let line = lines.next().ok_or_else(|| {
                Error::Parse(format!("matrix: expected {m} rows, found {i}"))
            })?;
            let row = line.trim_end();
            if row.chars().count() != n {
                return Err(Error::Parse(format!(
                    "matrix line {}: expected {n} characters, got {}",
                    i + 2,
                    row.chars().count()
                )));
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => out.set(i, j, true),
                    _ => {
                        return Err(Error::Parse(format!(
                            "matrix line {}: invalid character {ch:?} at column {}",
                            i + 2,
                            j + 1
                        )))
                    }
                }
            }
        }
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!(
                "matrix: unexpected extra content {extra:?} after {m} rows"
            )));
        }
        Ok(out)
    }

    /// Renders the matrix in the same format accepted by [`parse_text`].
    ///
    /// [`parse_text`]: GF2Matrix::parse_text
    #[must_use]
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

//! Coset encoding against a systematic parity-check matrix.
//!
//! The code is keyed by `A = [I_m | A2]` of size `m x n`. A secret `s` picks
//! the coset `{x : A x = s}` and the local randomness `u` picks the member
//! `x = (s + A2 u, u)`, so the intended receiver recovers `s = A y` from a
//! clean copy `y = x`.

use crate::error::{Error, Result};
use crate::gf2::{GF2Matrix, GF2Vector};
use rand::RngCore;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetEncoder {
    a: GF2Matrix,
}

impl CosetEncoder {
    /// Wraps a systematic parity-check matrix `[I_m | A2]` with `m < n`.
    pub fn new(a: GF2Matrix) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if m == 0 || n <= m {
            return Err(Error::InvalidInput(format!(
                "parity-check matrix must be m x n with 0 < m < n, got {m} x {n}"
            )));
        }
        for i in 0..m {
            for j in 0..m {
                if a.get(i, j) != (i == j) {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not systematic: entry ({}, {}) of the leading {m} x {m} block is {}",
                        i + 1,
                        j + 1,
                        u8::from(a.get(i, j))
                    )));
                }
            }
        }
        Ok(CosetEncoder { a })
    }

    /// A fresh `[I_m | A2]` with `A2` drawn uniformly from `rng`.
    pub fn random<R: RngCore>(m: usize, n: usize, rng: &mut R) -> Result<Self> {
        if m == 0 || n <= m {
            return Err(Error::InvalidInput(format!(
                "parity-check matrix must be m x n with 0 < m < n, got {m} x {n}"
            )));
        }
        let a2 = GF2Matrix::random(m, n - m, rng);
        Ok(CosetEncoder {
            a: GF2Matrix::systematic(&a2),
        })
    }

    #[must_use]
    pub fn matrix(&self) -> &GF2Matrix {
        &self.a
    }

    #[must_use]
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Encodes the secret `s` (length `m`) with randomness `u` (length
    /// `n - m`) into the codeword `x = (s + A2 u, u)`.
    pub fn encode(&self, s: &GF2Vector, u: &GF2Vector) -> Result<GF2Vector> {
        let (m, n) = (self.m(), self.n());
        if s.len() != m || u.len() != n - m {
            return Err(Error::InvalidInput(format!(
                "encode expects |s| = {m} and |u| = {}, got {} and {}",
                n - m,
                s.len(),
                u.len()
            )));
        }
        let mut head = s.clone();
        for j in 0..n - m {
            if u.get(j) {
                head.xor_assign(&self.a.column(m + j));
            }
        }
        Ok(head.concat(u))
    }

    /// Encodes `s` with uniformly drawn randomness; returns `(x, u)`.
    pub fn encode_random<R: RngCore>(&self, s: &GF2Vector, rng: &mut R) -> Result<(GF2Vector, GF2Vector)> {
        let u = GF2Vector::random(self.n() - self.m(), rng);
        let x = self.encode(s, &u)?;
        Ok((x, u))
    }

    /// Recovers the secret from a noiseless copy of the codeword: `A y`.
    pub fn decode(&self, y: &GF2Vector) -> Result<GF2Vector> {
        self.a.matvec(y)
    }
}

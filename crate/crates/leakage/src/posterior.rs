//! Exact syndrome posteriors and conditional leakage.
//!
//! The eavesdropper sees `z^n`; under a uniform secret and uniform local
//! randomness the codeword is uniform on `F_2^n`, so the posterior of the
//! secret `s = A x` factors through the backward channel:
//!
//! ```text
//! beta[s] = sum over x with A x = s of  prod_i phi(x_i | z_i).
//! ```
//!
//! Folding in one position at a time keeps this exact and cheap: position
//! `r` with column `a_r` and weights `(phi(0|z_r), phi(1|z_r))` updates
//!
//! ```text
//! beta'[s] = phi(0|z_r) * beta[s] + phi(1|z_r) * beta[s ^ a_r],
//! ```
//!
//! an XOR-convolution by a two-point distribution. After all `n` positions
//! `beta` is the exact posterior, in `O(n 2^m)` time and `O(2^m)` space.
//! The same fold with weights `(1 - delta, delta)` yields the distribution
//! of the noise syndrome `A v^n` for BSC noise, which gives the average
//! leakage `I(S; Z^n) = m - H(A V^n)` without touching observations.
//!
//! Conditional leakage is `L(z^n) = m - H(S | Z^n = z^n)` in bits: the
//! drop from the secret's prior uncertainty `m` to its posterior entropy.

use crate::channel::BinaryInputChannel;
use crate::error::{Error, Result};
use crate::gf2::GF2Matrix;
use crate::observation::Observation;

/// Default bound on the secret length `m`; the posterior table has `2^m`
/// entries, so 24 caps it at 128 MiB of `f64`.
pub const DEFAULT_M_CAP: usize = 24;

/// Mass drift up to this is attributed to rounding and silently accepted.
const DRIFT_ACCEPT: f64 = 1e-12;
/// Mass drift up to this is repaired by renormalizing; anything larger is
/// reported as a numerical invariant failure.
const DRIFT_RENORMALIZE: f64 = 1e-9;

// ===== Posterior tables =====

/// A probability table over all `2^m` syndromes, indexed by the integer
/// encoding of `s` (coordinate 0 is the least significant bit).
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorTable {
    m: usize,
    probs: Vec<f64>,
}

impl PosteriorTable {
    /// Wraps a table, verifying the length is `2^m` and the mass is 1
    /// within [`DRIFT_RENORMALIZE`] (renormalizing when the drift exceeds
    /// [`DRIFT_ACCEPT`]).
    pub fn new(m: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << m {
            return Err(Error::InvalidInput(format!(
                "posterior table for m = {m} needs {} entries, got {}",
                1usize << m,
                probs.len()
            )));
        }
        let mut table = PosteriorTable { m, probs };
        table.settle_mass()?;
        Ok(table)
    }

    fn settle_mass(&mut self) -> Result<()> {
        let sum: f64 = self.probs.iter().sum();
        let drift = (sum - 1.0).abs();
        if drift > DRIFT_RENORMALIZE {
            return Err(Error::NormalizationDrift { sum, drift });
        }
        if drift > DRIFT_ACCEPT {
            for p in &mut self.probs {
                *p /= sum;
            }
        }
        Ok(())
    }

    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    #[must_use]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of the syndrome with integer encoding `s`.
    #[inline]
    #[must_use]
    pub fn prob(&self, s: u64) -> f64 {
        self.probs[s as usize]
    }

    /// Number of syndromes with strictly positive probability.
    #[must_use]
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }

    /// Shannon entropy in bits, with `0 log 0 = 0`.
    #[must_use]
    pub fn entropy_bits(&self) -> f64 {
        -self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.log2())
            .sum::<f64>()
    }
}

/// Leakage about one `m`-bit secret, reported next to the posterior entropy
/// it came from: `leakage_bits = m - entropy_bits`, clamped to `[0, m]`
/// against rounding at the ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageResult {
    pub m: usize,
    pub entropy_bits: f64,
    pub leakage_bits: f64,
}

impl LeakageResult {
    #[must_use]
    pub fn from_entropy(m: usize, entropy_bits: f64) -> Self {
        let leakage_bits = (m as f64 - entropy_bits).clamp(0.0, m as f64);
        LeakageResult {
            m,
            entropy_bits,
            leakage_bits,
        }
    }
}

// ===== The fold =====

pub(crate) fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::MessageLengthCap { m, cap });
    }
    // Past 57 the table length itself would overflow practical memory by
    // orders of magnitude; fail loud instead of aborting in the allocator.
    if m > 57 {
        return Err(Error::TooLarge(format!("2^{m}-entry posterior table")));
    }
    Ok(())
}

/// One XOR-convolution step: fold a column (as an index mask) with weights
/// `(w0, w1)`, `w0 + w1 = 1`. The pair map `s <-> s ^ mask` is an
/// involution, so the update runs in place.
#[inline]
fn fold_column(probs: &mut [f64], mask: usize, w0: f64, w1: f64) {
    if mask == 0 {
        return; // beta'[s] = (w0 + w1) beta[s] = beta[s]
    }
    for s in 0..probs.len() {
        let t = s ^ mask;
        if s < t {
            let (ps, pt) = (probs[s], probs[t]);
            probs[s] = w0 * ps + w1 * pt;
            probs[t] = w0 * pt + w1 * ps;
        }
    }
}

pub(crate) fn posterior_from_indices(
    a: &GF2Matrix,
    channel: &BinaryInputChannel,
    z_indices: &[usize],
    cap: usize,
) -> Result<PosteriorTable> {
    let (m, n) = (a.rows(), a.cols());
    check_cap(m, cap)?;
    if z_indices.len() != n {
        return Err(Error::InvalidInput(format!(
            "observation has {} symbols, matrix has {n} columns",
            z_indices.len()
        )));
    }
    let mut probs = vec![0.0; 1usize << m];
    probs[0] = 1.0;
    for (r, &z) in z_indices.iter().enumerate() {
        let (w0, w1) = channel.backward_pair(z).ok_or_else(|| Error::UnreachableSymbol {
            symbol: channel.alphabet()[z].clone(),
            position: r + 1,
        })?;
        fold_column(&mut probs, a.column_index(r) as usize, w0, w1);
    }
    PosteriorTable::new(m, probs)
}

// ===== Public operations =====

/// Exact posterior of the secret given one observation, for any
/// binary-input memoryless channel.
pub fn posterior_given_observation(
    a: &GF2Matrix,
    channel: &BinaryInputChannel,
    z: &Observation,
    cap: usize,
) -> Result<PosteriorTable> {
    check_cap(a.rows(), cap)?;
    let z_indices = z.resolve(channel)?;
    posterior_from_indices(a, channel, &z_indices, cap)
}

/// Conditional leakage `L(z^n) = m - H(S | Z^n = z^n)` in bits.
pub fn conditional_leakage(
    a: &GF2Matrix,
    channel: &BinaryInputChannel,
    z: &Observation,
    cap: usize,
) -> Result<LeakageResult> {
    let posterior = posterior_given_observation(a, channel, z, cap)?;
    Ok(LeakageResult::from_entropy(a.rows(), posterior.entropy_bits()))
}

/// Distribution of the noise syndrome `A v^n` for i.i.d. BSC noise with
/// crossover probability `delta`.
pub fn noise_syndrome_distribution(a: &GF2Matrix, delta: f64, cap: usize) -> Result<PosteriorTable> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidInput(format!(
            "delta = {delta} is not a probability in [0, 1]"
        )));
    }
    let m = a.rows();
    check_cap(m, cap)?;
    let mut probs = vec![0.0; 1usize << m];
    probs[0] = 1.0;
    for r in 0..a.cols() {
        fold_column(&mut probs, a.column_index(r) as usize, 1.0 - delta, delta);
    }
    PosteriorTable::new(m, probs)
}

/// Average leakage over a BSC: `I(S; Z^n) = m - H(A V^n)`. For the BSC the
/// conditional leakage is the same for every observation, so this is also
/// the conditional leakage of each `z^n`.
pub fn bsc_average_leakage(a: &GF2Matrix, delta: f64, cap: usize) -> Result<LeakageResult> {
    let syndrome = noise_syndrome_distribution(a, delta, cap)?;
    Ok(LeakageResult::from_entropy(a.rows(), syndrome.entropy_bits()))
}

//! Erasure-channel shortcut: leakage from the rank of erased columns.
//!
//! Over the binary erasure channel the posterior of the secret is uniform
//! on an affine subspace: unerased positions pin their coordinates, erased
//! positions contribute the span of the corresponding columns of `A`. With
//! `w = rank[a_j : z_j erased]` the posterior puts mass `2^-w` on exactly
//! `2^w` syndromes, so
//!
//! ```text
//! L(z^n) = m - w,
//! ```
//!
//! an integer that depends on the erasure pattern only, never on the
//! unerased values. This path needs no `2^m` table and is the workhorse
//! for large `m`.

use crate::channel::ERASURE;
use crate::error::{Error, Result};
use crate::gf2::GF2Matrix;
use crate::observation::Observation;

/// Shape of a BEC posterior without the table: uniform with mass `2^-w` on
/// `2^w` syndromes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BecPosteriorSummary {
    pub m: usize,
    /// Rank of the erased columns.
    pub w: usize,
    /// `m - w`, the conditional leakage in bits.
    pub leakage_bits: usize,
}

impl BecPosteriorSummary {
    /// `2^w`, the number of syndromes carrying mass (`None` when `2^w`
    /// overflows a `u128`).
    #[must_use]
    pub fn support_size(&self) -> Option<u128> {
        (self.w < 128).then(|| 1u128 << self.w)
    }
}

fn erased_indices_checked(a: &GF2Matrix, z: &Observation) -> Result<Vec<usize>> {
    if z.len() != a.cols() {
        return Err(Error::InvalidInput(format!(
            "observation has {} symbols, matrix has {} columns",
            z.len(),
            a.cols()
        )));
    }
    for (i, s) in z.symbols().iter().enumerate() {
        if s != "0" && s != "1" && s != ERASURE {
            return Err(Error::UnknownSymbol {
                symbol: s.clone(),
                position: i + 1,
            });
        }
    }
    Ok(z.erased_indices())
}

/// Conditional leakage over the BEC: `m - rank` of the erased columns.
pub fn bec_leakage_rank(a: &GF2Matrix, z: &Observation) -> Result<usize> {
    Ok(bec_posterior_summary(a, z)?.leakage_bits)
}

/// Full posterior shape over the BEC. In debug builds, for `m` small enough
/// to tabulate, the claimed uniform-on-`2^w`-points structure is verified
/// against the exact table.
pub fn bec_posterior_summary(a: &GF2Matrix, z: &Observation) -> Result<BecPosteriorSummary> {
    let erased = erased_indices_checked(a, z)?;
    let w = a.rank_of_columns(erased.iter().copied());
    let summary = BecPosteriorSummary {
        m: a.rows(),
        w,
        leakage_bits: a.rows() - w,
    };
    #[cfg(debug_assertions)]
    if a.rows() <= crate::posterior::DEFAULT_M_CAP {
        verify_support_structure(a, z, &summary);
    }
    Ok(summary)
}

/// Checks that the tabulated posterior is uniform with value `2^-w` on
/// exactly `2^w` syndromes and zero elsewhere.
#[cfg(debug_assertions)]
fn verify_support_structure(a: &GF2Matrix, z: &Observation, summary: &BecPosteriorSummary) {
    let channel = crate::channel::BinaryInputChannel::bec(0.5).expect("0.5 is a probability");
    let table = crate::posterior::posterior_given_observation(
        a,
        &channel,
        z,
        crate::posterior::DEFAULT_M_CAP,
    )
    .expect("tabulated posterior for support check");
    let mass = (summary.w as f64).exp2().recip();
    let mut support = 0usize;
    for (s, &p) in table.probs().iter().enumerate() {
        if p.abs() <= 1e-9 {
            continue;
        }
        support += 1;
        debug_assert!(
            (p - mass).abs() <= 1e-9,
            "syndrome {s}: posterior {p} differs from 2^-{}",
            summary.w
        );
    }
    debug_assert_eq!(
        support,
        1usize << summary.w,
        "posterior support is not 2^{}",
        summary.w
    );
}

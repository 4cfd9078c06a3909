//! Leakage statistics over a uniformly random parity-check matrix on the
//! binary erasure channel.
//!
//! For a uniform `m x n` matrix the erased-column submatrix is itself a
//! uniform `m x K` matrix with `K` binomial, so the leakage PMF needs only
//! the rank distribution of uniform matrices:
//!
//! ```text
//! F(m, n)    = prod_{i=0}^{n-1} (2^m - 2^i)      full-column-rank count
//! Q(r| m, n) = 2^{-nm} F(m, r) F(n, r) / F(r, r) rank distribution
//! p(l)       = sum_k C(n, k) (1-e)^{n-k} e^k Q(m - l | m, k).
//! ```
//!
//! `F(100, 100)` has more than 3000 decimal digits, so everything is carried
//! as base-2 logarithms and only the final probabilities are exponentiated;
//! terms below the smallest positive `f64` flush to zero harmlessly.

use crate::error::{Error, Result};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::LN_2;

/// `log2(2^k - 1)` for `k >= 1`, exact for large `k` where `2^k` itself
/// would overflow.
#[inline]
fn log2_pow2_minus_1(k: usize) -> f64 {
    let k = k as f64;
    k + (-(-k).exp2()).ln_1p() / LN_2
}

/// `[log2 F(m, r)]` for `r = 0..=up_to` (`up_to <= m`).
fn log2_f_prefix(m: usize, up_to: usize) -> Vec<f64> {
    debug_assert!(up_to <= m);
    let mut out = Vec::with_capacity(up_to + 1);
    let mut acc = 0.0;
    out.push(acc);
    for i in 0..up_to {
        acc += i as f64 + log2_pow2_minus_1(m - i);
        out.push(acc);
    }
    out
}

/// `log2 F(m, n)`, the base-2 log of the number of `m x n` matrices over
/// GF(2) with full column rank (`n <= m`).
pub fn log2_full_rank_count(m: usize, n: usize) -> Result<f64> {
    if n > m {
        return Err(Error::InvalidInput(format!(
            "full-rank count needs n <= m, got m = {m}, n = {n}"
        )));
    }
    Ok(log2_f_prefix(m, n)[n])
}

/// `Q(r | m, n)`: probability that a uniform `m x n` matrix over GF(2) has
/// rank `r`. Out-of-range ranks return 0.
#[must_use]
pub fn rank_probability(r: usize, m: usize, n: usize) -> f64 {
    if r > m.min(n) {
        return 0.0;
    }
    let log2_q = log2_f_prefix(m, r)[r] + log2_f_prefix(n, r)[r] - log2_f_prefix(r, r)[r]
        - (m as f64) * (n as f64);
    log2_q.exp2()
}

// ===== Leakage PMF =====

/// A probability mass function of the leakage `L` in `{0, 1, ..., m}`,
/// stored densely and indexed by `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakagePMF {
    m: usize,
    probs: Vec<f64>,
}

impl LeakagePMF {
    /// Wraps a dense table `probs[l] = P(L = l)`, `l = 0..=m`. Entries must
    /// be nonnegative and sum to 1 within `1e-9`.
    pub fn new(m: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != m + 1 {
            return Err(Error::InvalidInput(format!(
                "PMF over 0..={m} needs {} entries, got {}",
                m + 1,
                probs.len()
            )));
        }
        if let Some(bad) = probs.iter().find(|&&p| !(0.0..=1.0 + 1e-9).contains(&p)) {
            return Err(Error::InvalidInput(format!("PMF entry {bad} is not a probability")));
        }
        let sum: f64 = probs.iter().sum();
        let drift = (sum - 1.0).abs();
        if drift > 1e-9 {
            return Err(Error::NormalizationDrift { sum, drift });
        }
        Ok(LeakagePMF { m, probs })
    }

    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    #[must_use]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(L = l)`; zero for `l > m`.
    #[must_use]
    pub fn prob(&self, l: usize) -> f64 {
        self.probs.get(l).copied().unwrap_or(0.0)
    }

    /// `E[L]`.
    #[must_use]
    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(l, &p)| l as f64 * p).sum()
    }
}

/// `log2` of the binomial weights `C(n, k) (1 - eps)^{n-k} eps^k`; the
/// degenerate parameters put all weight on one term.
fn log2_binomial_weights(n: usize, eps: f64) -> Vec<f64> {
    let mut out = vec![f64::NEG_INFINITY; n + 1];
    if eps == 0.0 {
        out[0] = 0.0;
        return out;
    }
    if eps == 1.0 {
        out[n] = 0.0;
        return out;
    }
    let ln_n_fact = ln_gamma(n as f64 + 1.0);
    for (k, w) in out.iter_mut().enumerate() {
        let ln_choose = ln_n_fact - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0);
        *w = (ln_choose + (n - k) as f64 * (1.0 - eps).ln() + k as f64 * eps.ln()) / LN_2;
    }
    out
}

/// Exact PMF of the conditional leakage when the `m x n` parity-check
/// matrix is drawn uniformly and the eavesdropper's channel is a BEC with
/// erasure probability `epsilon`:
/// `P(L = l) = sum_k C(n, k) (1-eps)^{n-k} eps^k Q(m - l | m, k)`.
pub fn average_leakage_pmf(m: usize, n: usize, epsilon: f64) -> Result<LeakagePMF> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput(format!(
            "PMF needs positive dimensions, got m = {m}, n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidInput(format!(
            "epsilon = {epsilon} is not a probability in [0, 1]"
        )));
    }
    let lfm = log2_f_prefix(m, m);
    let lfrr: Vec<f64> = (0..=m).map(|r| log2_f_prefix(r, r)[r]).collect();
    let lfk: Vec<Vec<f64>> = (0..=n).map(|k| log2_f_prefix(k, k.min(m))).collect();
    let lw = log2_binomial_weights(n, epsilon);

    let mut probs = vec![0.0; m + 1];
    for (l, p) in probs.iter_mut().enumerate() {
        let r = m - l;
        for k in r..=n {
            if lw[k] == f64::NEG_INFINITY || r > k.min(m) {
                continue;
            }
            let log2_q = lfm[r] + lfk[k][r] - lfrr[r] - (k as f64) * (m as f64);
            *p += (lw[k] + log2_q).exp2();
        }
    }
    LeakagePMF::new(m, probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::GF2Matrix;

    /// Rank census of every `m x n` matrix over GF(2), by enumeration.
    fn enumerate_rank_counts(m: usize, n: usize) -> Vec<u64> {
        assert!(m * n <= 16);
        let mut counts = vec![0u64; m.min(n) + 1];
        for code in 0..1u64 << (m * n) {
            let mut a = GF2Matrix::zeros(m, n);
            for j in 0..n {
                for i in 0..m {
                    a.set(i, j, code >> (j * m + i) & 1 == 1);
                }
            }
            counts[a.rank()] += 1;
        }
        counts
    }

    #[test]
    fn full_rank_count_of_trivial_cases() {
        assert_eq!(log2_full_rank_count(1, 1).unwrap(), 0.0); // F = 1
        assert_eq!(log2_full_rank_count(5, 0).unwrap(), 0.0); // empty product
        let f22 = log2_full_rank_count(2, 2).unwrap();
        assert!((f22.exp2() - 6.0).abs() <= 1e-12);
    }

    #[test]
    fn full_rank_count_matches_enumeration() {
        for &(m, n) in &[(2usize, 2usize), (3, 2), (3, 3), (4, 3), (4, 4)] {
            let counted = enumerate_rank_counts(m, n)[n] as f64;
            let computed = log2_full_rank_count(m, n).unwrap().exp2();
            assert!(
                ((computed - counted) / counted).abs() <= 1e-12,
                "F({m}, {n}): computed {computed}, counted {counted}"
            );
        }
    }

    #[test]
    fn full_rank_count_is_finite_at_scale() {
        let v = log2_full_rank_count(100, 100).unwrap();
        assert!(v.is_finite());
        // log2 F(100, 100) is a hair under 100 * 100.
        assert!(v < 10_000.0 && v > 9_990.0);
    }

    #[test]
    fn wide_matrices_are_rejected() {
        assert!(log2_full_rank_count(2, 3).is_err());
    }

    #[test]
    fn rank_probability_of_known_small_cases() {
        assert!((rank_probability(1, 1, 1) - 0.5).abs() <= 1e-15);
        assert!((rank_probability(2, 2, 2) - 6.0 / 16.0).abs() <= 1e-15);
        assert_eq!(rank_probability(3, 2, 7), 0.0);
    }

    #[test]
    fn rank_probability_matches_enumeration() {
        for m in 1..=3usize {
            for n in 1..=3usize {
                let counts = enumerate_rank_counts(m, n);
                let total = (1u64 << (m * n)) as f64;
                for (r, &c) in counts.iter().enumerate() {
                    let q = rank_probability(r, m, n);
                    assert!(
                        (q - c as f64 / total).abs() <= 1e-12,
                        "Q({r} | {m}, {n}) = {q}, enumeration gives {}",
                        c as f64 / total
                    );
                }
            }
        }
    }

    #[test]
    fn rank_probabilities_sum_to_one_and_are_symmetric() {
        for m in 1..=16usize {
            for n in 1..=16usize {
                let sum: f64 = (0..=m.min(n)).map(|r| rank_probability(r, m, n)).sum();
                assert!((sum - 1.0).abs() <= 1e-9, "sum Q(. | {m}, {n}) = {sum}");
                for r in 0..=m.min(n) {
                    let d = (rank_probability(r, m, n) - rank_probability(r, n, m)).abs();
                    assert!(d <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn degenerate_one_by_one_pmf_is_known_in_closed_form() {
        // A is [0] or [1] with equal probability; the single position is
        // erased with probability eps. L = 0 only when A = [1] and the
        // position is erased.
        for &eps in &[0.3, 0.9] {
            let pmf = average_leakage_pmf(1, 1, eps).unwrap();
            assert!((pmf.prob(0) - eps / 2.0).abs() <= 1e-15);
            assert!((pmf.prob(1) - (1.0 - eps / 2.0)).abs() <= 1e-15);
        }
    }

    #[test]
    fn no_erasures_leak_everything() {
        let pmf = average_leakage_pmf(3, 7, 0.0).unwrap();
        assert_eq!(pmf.prob(3), 1.0);
        assert!((pmf.mean() - 3.0).abs() <= 1e-15);
    }

    #[test]
    fn certain_erasure_reduces_to_the_rank_distribution_of_a() {
        let pmf = average_leakage_pmf(2, 3, 1.0).unwrap();
        for l in 0..=2usize {
            assert!((pmf.prob(l) - rank_probability(2 - l, 2, 3)).abs() <= 1e-12);
        }
    }

    #[test]
    fn pmf_sums_to_one_at_awkward_sizes() {
        for &(m, n, eps) in &[(37usize, 80usize, 0.41), (64, 64, 0.5), (100, 200, 0.54)] {
            let pmf = average_leakage_pmf(m, n, eps).unwrap();
            let sum: f64 = pmf.probs().iter().sum();
            assert!((sum - 1.0).abs() <= 1e-9, "({m}, {n}, {eps}): sum = {sum}");
        }
    }

    #[test]
    fn leakage_is_stochastically_smaller_under_heavier_erasure() {
        let cdf = |pmf: &LeakagePMF, l: usize| -> f64 { (0..=l).map(|i| pmf.prob(i)).sum() };
        let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
        for pair in grid.windows(2) {
            let lo = average_leakage_pmf(5, 12, pair[0]).unwrap();
            let hi = average_leakage_pmf(5, 12, pair[1]).unwrap();
            for l in 0..=5usize {
                assert!(
                    cdf(&hi, l) >= cdf(&lo, l) - 1e-12,
                    "CDF ordering violated at l = {l} for eps {} -> {}",
                    pair[0],
                    pair[1]
                );
            }
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(average_leakage_pmf(0, 3, 0.5).is_err());
        assert!(average_leakage_pmf(2, 3, 1.5).is_err());
        assert!(average_leakage_pmf(2, 3, f64::NAN).is_err());
        assert!(LeakagePMF::new(2, vec![0.5, 0.5]).is_err());
        assert!(LeakagePMF::new(1, vec![0.9, 0.2]).is_err());
        assert!(LeakagePMF::new(1, vec![-0.1, 1.1]).is_err());
    }
}

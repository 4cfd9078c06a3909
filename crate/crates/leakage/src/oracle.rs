//! Exponential-time reference implementations.
//!
//! Everything here evaluates a definition by exhaustive enumeration:
//! posteriors by summing over all codewords, mutual information by summing
//! over all observations, ensemble statistics by enumerating all matrices.
//! These are the independent fixtures the fast paths are tested against,
//! and they refuse instances whose state space they cannot enumerate.

use crate::channel::BinaryInputChannel;
use crate::coset::CosetEncoder;
use crate::ensemble::LeakagePMF;
use crate::error::{Error, Result};
use crate::gf2::{GF2Matrix, GF2Vector};
use crate::observation::Observation;
use crate::posterior::PosteriorTable;

const MAX_CODEWORD_BITS: usize = 20;
const MAX_OBSERVATIONS: u128 = 1 << 22;

fn check_codeword_space(n: usize) -> Result<()> {
    if n > MAX_CODEWORD_BITS {
        return Err(Error::TooLarge(format!(
            "2^{n} codewords (limit 2^{MAX_CODEWORD_BITS})"
        )));
    }
    Ok(())
}

/// Posterior of the secret by direct summation:
/// `p(s | z) ~ sum_u prod_i W(z_i | x_i(s, u))`.
pub fn brute_posterior(
    a: &GF2Matrix,
    channel: &BinaryInputChannel,
    z: &Observation,
) -> Result<PosteriorTable> {
    let encoder = CosetEncoder::new(a.clone())?;
    let (m, n) = (a.rows(), a.cols());
    check_codeword_space(n)?;
    let z_indices = z.resolve(channel)?;
    if z_indices.len() != n {
        return Err(Error::InvalidInput(format!(
            "observation has {} symbols, matrix has {n} columns",
            z_indices.len()
        )));
    }
    for (i, &zi) in z_indices.iter().enumerate() {
        if channel.backward_pair(zi).is_none() {
            return Err(Error::UnreachableSymbol {
                symbol: channel.alphabet()[zi].clone(),
                position: i + 1,
            });
        }
    }

    let mut acc = vec![0.0f64; 1 << m];
    for s_code in 0..1u64 << m {
        let s = GF2Vector::from_index(s_code, m);
        for u_code in 0..1u64 << (n - m) {
            let u = GF2Vector::from_index(u_code, n - m);
            let x = encoder.encode(&s, &u)?;
            let mut weight = 1.0;
            for (i, &zi) in z_indices.iter().enumerate() {
                weight *= channel.forward(x.get(i), zi);
            }
            acc[s_code as usize] += weight;
        }
    }
    // Every position admits at least one input with positive probability and
    // the codewords sweep all of F_2^n, so the total is positive.
    let total: f64 = acc.iter().sum();
    for p in &mut acc {
        *p /= total;
    }
    PosteriorTable::new(m, acc)
}

/// `I(S; Z^n) = sum_z P(z) L(z)` by enumerating the whole observation
/// space.
pub fn brute_mutual_information(a: &GF2Matrix, channel: &BinaryInputChannel) -> Result<f64> {
    let encoder = CosetEncoder::new(a.clone())?;
    let (m, n) = (a.rows(), a.cols());
    check_codeword_space(n)?;
    let k = channel.alphabet().len();
    let z_count = (k as u128)
        .checked_pow(n as u32)
        .filter(|&c| c <= MAX_OBSERVATIONS)
        .ok_or_else(|| Error::TooLarge(format!("{k}^{n} observations")))? as usize;

    // Syndrome of every codeword, indexed by its integer encoding.
    let syndromes: Vec<usize> = (0..1usize << n)
        .map(|x| {
            let s = encoder.decode(&GF2Vector::from_index(x as u64, n))?;
            Ok(s.as_index() as usize)
        })
        .collect::<Result<_>>()?;

    let mut mi = 0.0;
    let mut digits = vec![0usize; n];
    let mut posterior = vec![0.0f64; 1 << m];
    for _ in 0..z_count {
        posterior.fill(0.0);
        let mut total = 0.0;
        for (x, &s) in syndromes.iter().enumerate() {
            let mut weight = 1.0;
            for (i, &zi) in digits.iter().enumerate() {
                weight *= channel.forward(x >> i & 1 == 1, zi);
            }
            posterior[s] += weight;
            total += weight;
        }
        if total > 0.0 {
            // X^n is uniform, so P(z) = total / 2^n.
            let pz = total / (1u64 << n) as f64;
            let mut entropy = 0.0;
            for &q in &posterior {
                if q > 0.0 {
                    let p = q / total;
                    entropy -= p * p.log2();
                }
            }
            mi += pz * (m as f64 - entropy);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < k {
                break;
            }
            *d = 0;
        }
    }
    Ok(mi)
}

/// Exact leakage PMF of a fixed matrix on the BEC, by enumerating all `2^n`
/// erasure patterns with their binomial weights.
pub fn brute_bec_leakage_pmf(a: &GF2Matrix, epsilon: f64) -> Result<LeakagePMF> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidInput(format!(
            "epsilon = {epsilon} is not a probability in [0, 1]"
        )));
    }
    let (m, n) = (a.rows(), a.cols());
    check_codeword_space(n)?;
    let pattern_weight: Vec<f64> = (0..=n)
        .map(|k| epsilon.powi(k as i32) * (1.0 - epsilon).powi((n - k) as i32))
        .collect();
    let mut probs = vec![0.0; m + 1];
    for mask in 0..1usize << n {
        let rank = a.rank_of_columns((0..n).filter(|j| mask >> j & 1 == 1));
        probs[m - rank] += pattern_weight[mask.count_ones() as usize];
    }
    LeakagePMF::new(m, probs)
}

/// Exact leakage PMF over a uniformly random `m x n` matrix on the BEC, by
/// enumerating all `2^{mn}` matrices.
pub fn brute_ensemble_pmf(m: usize, n: usize, epsilon: f64) -> Result<LeakagePMF> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput(format!(
            "PMF needs positive dimensions, got m = {m}, n = {n}"
        )));
    }
    if m * n > 16 {
        return Err(Error::TooLarge(format!(
            "2^{} matrices (limit 2^16)",
            m * n
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidInput(format!(
            "epsilon = {epsilon} is not a probability in [0, 1]"
        )));
    }
    let pattern_weight: Vec<f64> = (0..=n)
        .map(|k| epsilon.powi(k as i32) * (1.0 - epsilon).powi((n - k) as i32))
        .collect();
    let mut probs = vec![0.0; m + 1];
    for code in 0..1u64 << (m * n) {
        let mut a = GF2Matrix::zeros(m, n);
        for j in 0..n {
            for i in 0..m {
                a.set(i, j, code >> (j * m + i) & 1 == 1);
            }
        }
        for mask in 0..1usize << n {
            let rank = a.rank_of_columns((0..n).filter(|j| mask >> j & 1 == 1));
            probs[m - rank] += pattern_weight[mask.count_ones() as usize];
        }
    }
    let total = (1u64 << (m * n)) as f64;
    for p in &mut probs {
        *p /= total;
    }
    LeakagePMF::new(m, probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::parse_channel_spec;
    use crate::ensemble::average_leakage_pmf;
    use crate::error::ErrorClass;
    use crate::posterior::{
        bsc_average_leakage, posterior_given_observation, DEFAULT_M_CAP,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example_matrix() -> GF2Matrix {
        GF2Matrix::from_rows(&[&[1, 0, 1], &[0, 1, 1]])
    }

    fn asymmetric() -> BinaryInputChannel {
        BinaryInputChannel::from_rows(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.3, 0.6],
        )
        .unwrap()
    }

    fn h2(p: f64) -> f64 {
        let term = |q: f64| if q > 0.0 { -q * q.log2() } else { 0.0 };
        term(p) + term(1.0 - p)
    }

    #[test]
    fn brute_posterior_reproduces_worked_example() {
        let ch = BinaryInputChannel::bec(0.4).unwrap();
        let z = Observation::parse("1 0 e").unwrap();
        let t = brute_posterior(&example_matrix(), &ch, &z).unwrap();
        for (s, &p) in t.probs().iter().enumerate() {
            let expected = if s == 1 || s == 2 { 0.5 } else { 0.0 };
            assert!((p - expected).abs() <= 1e-15, "s = {s}: {p}");
        }
    }

    #[test]
    fn useless_channel_gives_uniform_posterior() {
        let ch = BinaryInputChannel::bsc(0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x0bac1e);
        let enc = CosetEncoder::random(2, 5, &mut rng).unwrap();
        let z = Observation::parse("0 1 1 0 1").unwrap();
        let t = brute_posterior(enc.matrix(), &ch, &z).unwrap();
        for &p in t.probs() {
            assert!((p - 0.25).abs() <= 1e-15);
        }
    }

    #[test]
    fn fast_posterior_matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0bac1f);
        let channels = [
            parse_channel_spec("bsc:0.1").unwrap(),
            parse_channel_spec("bsc:0.3").unwrap(),
            parse_channel_spec("bec:0.2").unwrap(),
            parse_channel_spec("bec:0.5").unwrap(),
            asymmetric(),
        ];
        for trial in 0..100 {
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(m + 1..=7);
            let enc = CosetEncoder::random(m, n, &mut rng).unwrap();
            let ch = &channels[trial % channels.len()];
            let symbols: Vec<String> = (0..n)
                .map(|_| ch.alphabet()[rng.gen_range(0..ch.alphabet().len())].clone())
                .collect();
            let z = Observation::from_symbols(symbols);
            let brute = brute_posterior(enc.matrix(), ch, &z).unwrap();
            let fast = posterior_given_observation(enc.matrix(), ch, &z, DEFAULT_M_CAP).unwrap();
            for (s, (&b, &f)) in brute.probs().iter().zip(fast.probs()).enumerate() {
                assert!(
                    (b - f).abs() <= 1e-12,
                    "trial {trial}, {ch}, s = {s}: brute {b}, fast {f}"
                );
            }
        }
    }

    #[test]
    fn mutual_information_of_clean_channel_is_m() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0bac20);
        let enc = CosetEncoder::random(2, 6, &mut rng).unwrap();
        let ch = BinaryInputChannel::bsc(0.0).unwrap();
        let mi = brute_mutual_information(enc.matrix(), &ch).unwrap();
        assert!((mi - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn mutual_information_of_parity_code_matches_closed_form() {
        let a = GF2Matrix::from_rows(&[&[1, 1]]);
        let mi = brute_mutual_information(&a, &BinaryInputChannel::bsc(0.25).unwrap()).unwrap();
        assert!((mi - (1.0 - h2(0.375))).abs() <= 1e-12);
    }

    #[test]
    fn mutual_information_agrees_with_syndrome_entropy_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0bac21);
        for _ in 0..5 {
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(m + 1..=8);
            let enc = CosetEncoder::random(m, n, &mut rng).unwrap();
            for &delta in &[0.05, 0.25, 0.45] {
                let mi = brute_mutual_information(
                    enc.matrix(),
                    &BinaryInputChannel::bsc(delta).unwrap(),
                )
                .unwrap();
                let avg = bsc_average_leakage(enc.matrix(), delta, DEFAULT_M_CAP).unwrap();
                assert!(
                    (mi - avg.leakage_bits).abs() <= 1e-10,
                    "m = {m}, n = {n}, delta = {delta}: {mi} vs {}",
                    avg.leakage_bits
                );
            }
        }
    }

    #[test]
    fn bec_mutual_information_is_the_mean_of_the_pattern_pmf() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0bac22);
        let enc = CosetEncoder::random(2, 4, &mut rng).unwrap();
        let ch = BinaryInputChannel::bec(0.3).unwrap();
        let mi = brute_mutual_information(enc.matrix(), &ch).unwrap();
        let pmf = brute_bec_leakage_pmf(enc.matrix(), 0.3).unwrap();
        assert!((mi - pmf.mean()).abs() <= 1e-12, "{mi} vs {}", pmf.mean());
    }

    #[test]
    fn pattern_pmf_of_example_matrix_in_closed_form() {
        // Erasing nothing leaks 2 bits; erasing exactly one position leaks
        // 1; any two or more erasures span the column space and leak 0.
        let eps = 0.4f64;
        let pmf = brute_bec_leakage_pmf(&example_matrix(), eps).unwrap();
        let q = 1.0 - eps;
        assert!((pmf.prob(2) - q * q * q).abs() <= 1e-15);
        assert!((pmf.prob(1) - 3.0 * eps * q * q).abs() <= 1e-15);
        assert!((pmf.prob(0) - (3.0 * eps * eps * q + eps * eps * eps)).abs() <= 1e-15);
    }

    #[test]
    fn tiny_ensemble_pmf_is_known_in_closed_form() {
        let pmf = brute_ensemble_pmf(1, 1, 0.6).unwrap();
        assert!((pmf.prob(0) - 0.3).abs() <= 1e-15);
        assert!((pmf.prob(1) - 0.7).abs() <= 1e-15);
    }

    #[test]
    fn ensemble_formula_matches_enumeration() {
        for &eps in &[0.1, 0.3, 0.7] {
            let brute = brute_ensemble_pmf(2, 3, eps).unwrap();
            let formula = average_leakage_pmf(2, 3, eps).unwrap();
            for l in 0..=2usize {
                assert!(
                    (brute.prob(l) - formula.prob(l)).abs() <= 1e-12,
                    "eps = {eps}, l = {l}: {} vs {}",
                    brute.prob(l),
                    formula.prob(l)
                );
            }
        }
    }

    #[test]
    fn oversized_instances_are_refused() {
        let wide = GF2Matrix::systematic(&GF2Matrix::zeros(2, 19));
        let ch = BinaryInputChannel::bsc(0.1).unwrap();
        let z = Observation::from_symbols(vec!["0".into(); 21]);
        let err = brute_posterior(&wide, &ch, &z).unwrap_err();
        assert_eq!(err.class(), ErrorClass::Resource);

        // 3^14 observations exceed the enumeration limit even though n <= 20.
        let tall = GF2Matrix::systematic(&GF2Matrix::zeros(3, 11));
        let err = brute_mutual_information(&tall, &asymmetric()).unwrap_err();
        assert_eq!(err.class(), ErrorClass::Resource);

        let err = brute_ensemble_pmf(3, 6, 0.5).unwrap_err();
        assert_eq!(err.class(), ErrorClass::Resource);
    }

    #[test]
    fn non_systematic_matrices_are_refused() {
        let a = GF2Matrix::from_rows(&[&[1, 1, 1], &[0, 1, 1]]);
        let ch = BinaryInputChannel::bsc(0.1).unwrap();
        assert!(brute_mutual_information(&a, &ch).is_err());
    }
}

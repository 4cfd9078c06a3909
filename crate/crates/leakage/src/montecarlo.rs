//! Monte Carlo leakage histograms with reproducible parallel sampling.
//!
//! Every sample draws from its own generator, seeded as `seed ^ index`
//! (ChaCha8), so the multiset of samples is a pure function of the
//! configuration: worker count and scheduling cannot change the result,
//! only how fast it arrives. The once-per-run matrix draw uses the
//! reserved stream index `u64::MAX`, which sample indices cannot reach.
//!
//! On the erasure channel a sample only needs its erasure pattern: the
//! leakage is `m` minus the rank of the erased columns, and no posterior
//! table is built, so `m` is unrestricted. Other channels go the long way
//! (encode, transmit, tabulate the posterior) and require `m <= m_cap`.

use std::collections::BTreeMap;

use ordered_float::OrderedFloat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{BinaryInputChannel, ChannelKind};
use crate::coset::CosetEncoder;
use crate::ensemble::LeakagePMF;
use crate::error::{Error, Result};
use crate::gf2::{GF2Matrix, GF2Vector};
use crate::posterior::{check_cap, posterior_from_indices, DEFAULT_M_CAP};

const MATRIX_STREAM: u64 = u64::MAX;

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index)
}

/// Where the parity-check matrix comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixMode {
    /// Use this matrix for every sample.
    Explicit(GF2Matrix),
    /// Draw one systematic matrix from the matrix stream, then keep it.
    FreshSystematic,
    /// Draw a fresh uniform matrix per sample (erasure channel only).
    ResampleUniform,
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub m: usize,
    pub n: usize,
    pub channel: BinaryInputChannel,
    pub samples: u64,
    pub seed: u64,
    pub matrix: MatrixMode,
    /// Worker threads; 0 means one per core.
    pub workers: usize,
    pub m_cap: usize,
}

impl SimulationConfig {
    pub fn new(m: usize, n: usize, channel: BinaryInputChannel, samples: u64, seed: u64) -> Self {
        SimulationConfig {
            m,
            n,
            channel,
            samples,
            seed,
            matrix: MatrixMode::FreshSystematic,
            workers: 0,
            m_cap: DEFAULT_M_CAP,
        }
    }
}

/// Leakage counts keyed by the exact sampled value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    m: usize,
    counts: BTreeMap<OrderedFloat<f64>, u64>,
    total: u64,
}

impl Histogram {
    pub fn new(m: usize) -> Self {
        Histogram {
            m,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn record(&mut self, leakage_bits: f64) {
        *self.counts.entry(OrderedFloat(leakage_bits)).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(mut self, other: Histogram) -> Histogram {
        debug_assert_eq!(self.m, other.m);
        for (key, count) in other.counts {
            *self.counts.entry(key).or_insert(0) += count;
        }
        self.total += other.total;
        self
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Bins in increasing leakage order.
    pub fn bins(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.counts.iter().map(|(key, &count)| (key.0, count))
    }

    pub fn frequency_of(&self, leakage_bits: f64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let count = self
            .counts
            .get(&OrderedFloat(leakage_bits))
            .copied()
            .unwrap_or(0);
        count as f64 / self.total as f64
    }
}

/// Empirical histogram against a reference PMF on the integer grid.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    /// Total variation distance over the union of support points.
    pub tv_distance: f64,
    /// `(leakage, empirical frequency - reference probability)` per point.
    pub residuals: Vec<(f64, f64)>,
}

pub fn compare_histogram_to_pmf(hist: &Histogram, pmf: &LeakagePMF) -> Result<ComparisonReport> {
    if hist.m() != pmf.m() {
        return Err(Error::InvalidInput(format!(
            "histogram is over 0..={} bits, PMF over 0..={}",
            hist.m(),
            pmf.m()
        )));
    }
    if hist.total() == 0 {
        return Err(Error::InvalidInput("empty histogram".into()));
    }
    let m = pmf.m();
    let mut points: Vec<OrderedFloat<f64>> = (0..=m).map(|l| OrderedFloat(l as f64)).collect();
    points.extend(hist.counts.keys().copied());
    points.sort_unstable();
    points.dedup();

    let mut residuals = Vec::with_capacity(points.len());
    let mut tv = 0.0;
    for key in points {
        let l = key.0;
        let reference = if l.fract() == 0.0 && (0.0..=m as f64).contains(&l) {
            pmf.prob(l as usize)
        } else {
            0.0
        };
        let residual = hist.frequency_of(l) - reference;
        tv += residual.abs();
        residuals.push((l, residual));
    }
    Ok(ComparisonReport {
        tv_distance: 0.5 * tv,
        residuals,
    })
}

/// One erasure-channel sample: leakage is `m - rank` of the erased columns.
/// Without a fixed matrix, the matrix is drawn first, then the pattern.
fn pattern_sample(
    fixed: Option<&GF2Matrix>,
    m: usize,
    n: usize,
    epsilon: f64,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let drawn;
    let a = match fixed {
        Some(a) => a,
        None => {
            drawn = GF2Matrix::random(m, n, rng);
            &drawn
        }
    };
    let erased: Vec<usize> = (0..n).filter(|_| rng.gen::<f64>() < epsilon).collect();
    (m - a.rank_of_columns(erased)) as f64
}

/// One general-channel sample: encode a uniform `(s, u)`, push every bit
/// through the channel, tabulate the posterior, read off the leakage.
fn full_sample(
    encoder: &CosetEncoder,
    channel: &BinaryInputChannel,
    m_cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let a = encoder.matrix();
    let (m, n) = (a.rows(), a.cols());
    let s = GF2Vector::random(m, rng);
    let u = GF2Vector::random(n - m, rng);
    let x = encoder.encode(&s, &u)?;
    let z_indices: Vec<usize> = (0..n).map(|i| channel.sample(x.get(i), rng)).collect();
    let table = posterior_from_indices(a, channel, &z_indices, m_cap)?;
    Ok((m as f64 - table.entropy_bits()).clamp(0.0, m as f64))
}

fn run_samples<F>(m: usize, samples: u64, workers: usize, sample: F) -> Result<Histogram>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        (0..samples)
            .into_par_iter()
            .map(&sample)
            .try_fold(
                || Histogram::new(m),
                |mut hist, leakage| {
                    hist.record(leakage?);
                    Ok(hist)
                },
            )
            .try_reduce(|| Histogram::new(m), |a, b| Ok(a.merge(b)))
    })
}

pub fn simulate_leakage_histogram(config: &SimulationConfig) -> Result<Histogram> {
    let (m, n) = (config.m, config.n);
    if m == 0 || n <= m {
        return Err(Error::InvalidInput(format!(
            "need 0 < m < n, got m = {m}, n = {n}"
        )));
    }
    if config.samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    if config.samples == u64::MAX {
        return Err(Error::InvalidInput(
            "sample count collides with the matrix stream".into(),
        ));
    }
    if let MatrixMode::Explicit(a) = &config.matrix {
        if a.rows() != m || a.cols() != n {
            return Err(Error::InvalidInput(format!(
                "matrix is {}x{}, configuration says {m}x{n}",
                a.rows(),
                a.cols()
            )));
        }
    }

    match config.channel.kind() {
        ChannelKind::Bec(epsilon) => {
            let fixed = match &config.matrix {
                MatrixMode::Explicit(a) => Some(a.clone()),
                MatrixMode::FreshSystematic => Some(
                    CosetEncoder::random(m, n, &mut stream(config.seed, MATRIX_STREAM))?
                        .matrix()
                        .clone(),
                ),
                MatrixMode::ResampleUniform => None,
            };
            run_samples(m, config.samples, config.workers, |index| {
                let mut rng = stream(config.seed, index);
                Ok(pattern_sample(fixed.as_ref(), m, n, epsilon, &mut rng))
            })
        }
        _ => {
            if config.matrix == MatrixMode::ResampleUniform {
                return Err(Error::InvalidInput(
                    "per-sample matrix resampling is only supported on the erasure channel".into(),
                ));
            }
            check_cap(m, config.m_cap)?;
            let encoder = match &config.matrix {
                MatrixMode::Explicit(a) => CosetEncoder::new(a.clone())?,
                MatrixMode::FreshSystematic => {
                    CosetEncoder::random(m, n, &mut stream(config.seed, MATRIX_STREAM))?
                }
                MatrixMode::ResampleUniform => unreachable!(),
            };
            let channel = &config.channel;
            run_samples(m, config.samples, config.workers, |index| {
                let mut rng = stream(config.seed, index);
                full_sample(&encoder, channel, config.m_cap, &mut rng)
            })
        }
    }
}

//! Exact information-leakage analysis for coset-coded transmission over
//! binary-input wiretap channels.
//!
//! A secret `s` of `m` bits is sent as a uniformly random member of the
//! coset `{x : A x = s}` of a systematic parity-check matrix `A = [I | A2]`;
//! the intended receiver gets a clean copy, the eavesdropper sees the
//! codeword through a binary-input memoryless channel. This crate computes,
//! exactly, how much the eavesdropper learns:
//!
//! - the syndrome posterior and conditional leakage `L(z^n)` for a single
//!   observation over any such channel ([`posterior_given_observation`],
//!   [`conditional_leakage`]);
//! - the observation-independent average leakage over a binary symmetric
//!   channel ([`bsc_average_leakage`]);
//! - the rank shortcut for the binary erasure channel, where
//!   `L(z^n) = m - rank` of the erased columns ([`bec_leakage_rank`]);
//! - the distribution of `L` over a uniformly random parity-check matrix on
//!   the erasure channel ([`average_leakage_pmf`]);
//! - Monte Carlo leakage histograms with reproducible, worker-independent
//!   sampling ([`simulate_leakage_histogram`]);
//! - exponential-time reference implementations used to validate all of the
//!   above ([`oracle`]).

pub mod bec;
pub mod channel;
pub mod coset;
pub mod ensemble;
mod error;
pub mod gf2;
pub mod montecarlo;
pub mod observation;
pub mod oracle;
pub mod posterior;

pub use bec::{bec_leakage_rank, bec_posterior_summary, BecPosteriorSummary};
pub use channel::{parse_channel_spec, parse_dmc_text, BinaryInputChannel, ChannelKind, ERASURE};
pub use coset::CosetEncoder;
pub use ensemble::{average_leakage_pmf, log2_full_rank_count, rank_probability, LeakagePMF};
pub use error::{Error, ErrorClass, Result};
pub use gf2::{GF2Matrix, GF2Vector};
pub use montecarlo::{
    compare_histogram_to_pmf, simulate_leakage_histogram, ComparisonReport, Histogram, MatrixMode,
    SimulationConfig,
};
pub use observation::Observation;
pub use posterior::{
    bsc_average_leakage, conditional_leakage, noise_syndrome_distribution,
    posterior_given_observation, LeakageResult, PosteriorTable, DEFAULT_M_CAP,
};

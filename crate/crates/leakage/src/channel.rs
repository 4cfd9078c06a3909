//! Binary-input discrete memoryless channels.
//!
//! A channel is two probability rows `W(z|0)` and `W(z|1)` over a finite
//! output alphabet of string symbols. The two workhorse channels have
//! dedicated constructors: the binary symmetric channel with crossover
//! probability `delta` and the binary erasure channel with erasure
//! probability `epsilon` (erasures are spelled [`ERASURE`]). Everything the
//! rest of the crate needs reduces to the forward probabilities and the
//! backward posterior `phi(x|z) = W(z|x) / (W(z|0) + W(z|1))` under a
//! uniform input.

use crate::error::{Error, Result};
use rand::Rng;
use std::fmt;
use std::path::Path;

/// The erasure output symbol of the binary erasure channel.
pub const ERASURE: &str = "e";

/// Probability rows must sum to one within this tolerance; inputs that
/// miss it are rejected rather than silently renormalized.
pub const ROW_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelKind {
    /// Binary symmetric channel with the given crossover probability.
    Bsc(f64),
    /// Binary erasure channel with the given erasure probability.
    Bec(f64),
    /// Anything supplied as explicit probability rows.
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryInputChannel {
    alphabet: Vec<String>,
    w0: Vec<f64>,
    w1: Vec<f64>,
    kind: ChannelKind,
}

impl BinaryInputChannel {
    /// Binary symmetric channel: output alphabet `{"0", "1"}`, crossover
    /// probability `delta`.
    pub fn bsc(delta: f64) -> Result<Self> {
        check_probability("delta", delta)?;
        Ok(BinaryInputChannel {
            alphabet: vec!["0".into(), "1".into()],
            w0: vec![1.0 - delta, delta],
            w1: vec![delta, 1.0 - delta],
            kind: ChannelKind::Bsc(delta),
        })
    }

    /// Binary erasure channel: output alphabet `{"0", "1", "e"}`, erasure
    /// probability `epsilon`.
    pub fn bec(epsilon: f64) -> Result<Self> {
        check_probability("epsilon", epsilon)?;
        Ok(BinaryInputChannel {
            alphabet: vec!["0".into(), "1".into(), ERASURE.into()],
            w0: vec![1.0 - epsilon, 0.0, epsilon],
            w1: vec![0.0, 1.0 - epsilon, epsilon],
            kind: ChannelKind::Bec(epsilon),
        })
    }

    /// Channel from explicit probability rows. Rows must be the same length
    /// as the alphabet, entries must lie in [0, 1], and each row must sum to
    /// one within [`ROW_SUM_TOL`].
    pub fn from_rows(alphabet: Vec<String>, w0: Vec<f64>, w1: Vec<f64>) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::InvalidInput("channel alphabet is empty".into()));
        }
        for (i, s) in alphabet.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidInput(format!("alphabet symbol {} is empty", i + 1)));
            }
            if alphabet[..i].contains(s) {
                return Err(Error::InvalidInput(format!(
                    "alphabet symbol {s:?} appears more than once"
                )));
            }
        }
        check_row("W(z|0)", &w0, alphabet.len())?;
        check_row("W(z|1)", &w1, alphabet.len())?;
        Ok(BinaryInputChannel {
            alphabet,
            w0,
            w1,
            kind: ChannelKind::General,
        })
    }

    #[must_use]
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    #[must_use]
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    #[must_use]
    pub fn symbol_index(&self, symbol: &str) -> Option<usize> {
        self.alphabet.iter().position(|s| s == symbol)
    }

    /// Forward probability `W(z|x)` for the output with index `z`.
    #[inline]
    #[must_use]
    pub fn forward(&self, x: bool, z: usize) -> f64 {
        if x {
            self.w1[z]
        } else {
            self.w0[z]
        }
    }

    /// `(phi(0|z), phi(1|z))` for the output with index `z`, or `None` when
    /// the symbol is unreachable (`W(z|0) = W(z|1) = 0`).
    #[inline]
    #[must_use]
    pub fn backward_pair(&self, z: usize) -> Option<(f64, f64)> {
        let total = self.w0[z] + self.w1[z];
        if total == 0.0 {
            None
        } else {
            Some((self.w0[z] / total, self.w1[z] / total))
        }
    }

    /// Backward posterior for a symbol given by name.
    pub fn backward_posterior(&self, symbol: &str) -> Result<(f64, f64)> {
        let z = self.symbol_index(symbol).ok_or_else(|| Error::UnknownSymbol {
            symbol: symbol.into(),
            position: 1,
        })?;
        self.backward_pair(z).ok_or_else(|| Error::UnreachableSymbol {
            symbol: symbol.into(),
            position: 1,
        })
    }

    /// Draws one output for the given input by inverting the CDF of the
    /// corresponding row; consumes exactly one `f64` from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, x: bool, rng: &mut R) -> usize {
        let row = if x { &self.w1 } else { &self.w0 };
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (z, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return z;
            }
        }
        // Rounding can leave u just above the accumulated sum; fall back to
        // the last symbol the input can actually produce.
        row.iter().rposition(|&p| p > 0.0).unwrap_or(self.alphabet.len() - 1)
    }
}

impl fmt::Display for BinaryInputChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChannelKind::Bsc(d) => write!(f, "bsc:{d}"),
            ChannelKind::Bec(e) => write!(f, "bec:{e}"),
            ChannelKind::General => write!(f, "dmc[{} symbols]", self.alphabet.len()),
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} = {p} is not a probability in [0, 1]")))
    }
}

fn check_row(name: &str, row: &[f64], alphabet_len: usize) -> Result<()> {
    if row.len() != alphabet_len {
        return Err(Error::InvalidInput(format!(
            "{name} has {} entries, expected {alphabet_len}",
            row.len()
        )));
    }
    for (i, &p) in row.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!(
                "{name} entry {}: {p} is not a probability in [0, 1]",
                i + 1
            )));
        }
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_SUM_TOL {
        return Err(Error::InvalidInput(format!(
            "{name} sums to {sum}, expected 1 within {ROW_SUM_TOL:e}"
        )));
    }
    Ok(())
}

// ===== Channel specification strings and files =====

/// Parses a channel specification: `bsc:<delta>`, `bec:<epsilon>`, or
/// `dmc:<path>` where the path points to a file in the format read by
/// [`parse_dmc_text`].
pub fn parse_channel_spec(spec: &str) -> Result<BinaryInputChannel> {
    if let Some(arg) = spec.strip_prefix("bsc:") {
        let delta: f64 = arg
            .parse()
            .map_err(|_| Error::Parse(format!("invalid bsc parameter {arg:?}")))?;
        BinaryInputChannel::bsc(delta)
    } else if let Some(arg) = spec.strip_prefix("bec:") {
        let epsilon: f64 = arg
            .parse()
            .map_err(|_| Error::Parse(format!("invalid bec parameter {arg:?}")))?;
        BinaryInputChannel::bec(epsilon)
    } else if let Some(path) = spec.strip_prefix("dmc:") {
        let text = std::fs::read_to_string(Path::new(path)).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        parse_dmc_text(&text)
    } else {
        Err(Error::Parse(format!(
            "unrecognized channel spec {spec:?}; expected bsc:<delta>, bec:<epsilon>, or dmc:<path>"
        )))
    }
}

/// Parses the plain-text channel format: line 1 lists the output alphabet
/// (whitespace-separated symbols), line 2 is the row `W(z|0)`, line 3 the
/// row `W(z|1)`. Trailing blank lines are ignored.
pub fn parse_dmc_text(text: &str) -> Result<BinaryInputChannel> {
    let mut lines = text.lines();
    let alphabet: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse("channel line 1: empty input, expected alphabet".into()))?
        .split_whitespace()
        .map(String::from)
        .collect();
    if alphabet.is_empty() {
        return Err(Error::Parse("channel line 1: no output symbols".into()));
    }
    let mut row = |line_no: usize, name: &str| -> Result<Vec<f64>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("channel line {line_no}: missing {name} row")))?;
        line.split_whitespace()
            .enumerate()
            .map(|(i, tok)| {
                tok.parse().map_err(|_| {
                    Error::Parse(format!(
                        "channel line {line_no}: entry {} ({tok:?}) is not a number",
                        i + 1
                    ))
                })
            })
            .collect()
    };
    let w0 = row(2, "W(z|0)")?;
    let w1 = row(3, "W(z|1)")?;
    if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
        return Err(Error::Parse(format!(
            "channel: unexpected extra content {extra:?} after line 3"
        )));
    }
    BinaryInputChannel::from_rows(alphabet, w0, w1)
}

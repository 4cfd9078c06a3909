//! Eavesdropper observations: a sequence of channel output symbols.

use crate::channel::{BinaryInputChannel, ERASURE};
use crate::error::{Error, Result};
use std::fmt;

/// One observed output sequence `z^n`. Symbols are kept as strings and only
/// resolved against a channel alphabet at the point of use, so the same
/// observation can be inspected structurally (erasure positions) without a
/// channel in hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    symbols: Vec<String>,
}

impl Observation {
    /// Parses a whitespace-separated list of output symbols.
    pub fn parse(text: &str) -> Result<Observation> {
        let symbols: Vec<String> = text.split_whitespace().map(String::from).collect();
        if symbols.is_empty() {
            return Err(Error::Parse("observation: no symbols".into()));
        }
        Ok(Observation { symbols })
    }

    #[must_use]
    pub fn from_symbols(symbols: Vec<String>) -> Observation {
        Observation { symbols }
    }

    /// Builds a binary-erasure observation: `bits` gives the unerased
    /// values and every position listed in `erased` is overwritten with
    /// [`ERASURE`].
    ///
    /// # Panics
    /// Panics if a bit is not 0/1 or an erased position is out of range.
    #[must_use]
    pub fn bec_from_parts(bits: &[u8], erased: &[usize]) -> Observation {
        let mut symbols: Vec<String> = bits
            .iter()
            .map(|&b| {
                assert!(b <= 1, "bit {b} is not 0 or 1");
                if b == 1 { "1".into() } else { "0".into() }
            })
            .collect();
        for &i in erased {
            symbols[i] = ERASURE.into();
        }
        Observation { symbols }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    #[must_use]
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Positions carrying the erasure symbol.
    #[must_use]
    pub fn erased_indices(&self) -> Vec<usize> {
        self.positions_of(ERASURE)
    }

    /// Positions carrying the symbol `"1"`.
    #[must_use]
    pub fn one_indices(&self) -> Vec<usize> {
        self.positions_of("1")
    }

    /// Whether every symbol belongs to the binary erasure alphabet
    /// `{0, 1, e}`.
    #[must_use]
    pub fn is_erasure_alphabet(&self) -> bool {
        self.symbols.iter().all(|s| s == "0" || s == "1" || s == ERASURE)
    }

    /// Maps each symbol to its index in the channel alphabet. The error for
    /// a foreign symbol names its (1-based) position.
    pub fn resolve(&self, channel: &BinaryInputChannel) -> Result<Vec<usize>> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| {
                channel.symbol_index(s).ok_or_else(|| Error::UnknownSymbol {
                    symbol: s.clone(),
                    position: i + 1,
                })
            })
            .collect()
    }

    fn positions_of(&self, symbol: &str) -> Vec<usize> {
        self.symbols
            .iter()
            .enumerate()
            .filter_map(|(i, s)| (s == symbol).then_some(i))
            .collect()
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbols.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_splits_on_whitespace() {
        let z = Observation::parse("1 0  e\n").unwrap();
        assert_eq!(z.symbols(), ["1", "0", "e"]);
        assert_eq!(z.len(), 3);
        assert_eq!(z.to_string(), "1 0 e");
    }

    #[test]
    fn empty_observation_is_rejected() {
        assert!(Observation::parse("  \n ").is_err());
    }

    #[test]
    fn index_sets_pick_out_symbols() {
        let z = Observation::parse("1 e 0 e 1").unwrap();
        assert_eq!(z.erased_indices(), [1, 3]);
        assert_eq!(z.one_indices(), [0, 4]);
        assert!(z.is_erasure_alphabet());
        assert!(!Observation::parse("1 x 0").unwrap().is_erasure_alphabet());
    }

    #[test]
    fn bec_from_parts_overwrites_erased_positions() {
        let z = Observation::bec_from_parts(&[1, 0, 1], &[2]);
        assert_eq!(z, Observation::parse("1 0 e").unwrap());
    }

    #[test]
    fn resolve_maps_to_alphabet_indices() {
        let ch = BinaryInputChannel::bec(0.5).unwrap();
        let z = Observation::parse("1 0 e").unwrap();
        assert_eq!(z.resolve(&ch).unwrap(), [1, 0, 2]);
    }

    #[test]
    fn resolve_names_the_position_of_a_foreign_symbol() {
        let ch = BinaryInputChannel::bsc(0.1).unwrap();
        let err = Observation::parse("1 0 e").unwrap().resolve(&ch).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("\"e\"") && msg.contains("position 3"), "{msg}");
    }
}

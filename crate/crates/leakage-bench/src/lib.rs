//! Benchmark-only crate; see `benches/leakage.rs`.

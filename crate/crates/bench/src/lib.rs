//! Benchmark-only crate; see `benches/chain.rs`.

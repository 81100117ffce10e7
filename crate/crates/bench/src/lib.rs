//! Benchmarks for the construction and verification pipeline live in `benches/`.

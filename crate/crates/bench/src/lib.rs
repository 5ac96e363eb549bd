//! Criterion benchmarks for `cvqkd-core`; see `benches/`.

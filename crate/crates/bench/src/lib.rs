//! Criterion benchmarks for `kahler-core` live under `benches/`.

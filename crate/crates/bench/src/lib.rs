//! Criterion benchmarks for the exact and numeric kernels; see `benches/`.

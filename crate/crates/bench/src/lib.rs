//! Criterion benchmarks for e2fact live under `benches/`.

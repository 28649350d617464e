//! Criterion benchmarks for substitution and the B-set operations live under `benches/`.

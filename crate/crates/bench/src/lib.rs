//! Criterion benchmarks for `l2coxeter`; see `benches/core.rs`.

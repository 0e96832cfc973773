//! Criterion benchmarks for `fortcalc-core`; see `benches/`.

//! Criterion benchmarks for `canonfan-core` live in `benches/kernels.rs`:
//! subduction, toric kernels, completion and fan traversal.
//!
//! Run them with `cargo bench -p canonfan-bench`.

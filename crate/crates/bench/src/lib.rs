//! Benchmarks for the kernel table, the moment quadrature and the Klain
//! function live in `benches/`. Run them with `cargo bench -p gcos-bench`.

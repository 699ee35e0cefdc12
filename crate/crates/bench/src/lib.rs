//! Criterion benchmarks of the simulator kernels (residual and tangent
//! assembly, sparse products, GMRES and a full step); see `benches/`.

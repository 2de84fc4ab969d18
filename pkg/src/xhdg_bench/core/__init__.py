"""Core modules: geometry, quadrature, bases, local and global solvers, benchmarks."""

//! Exact rational polytope toolkit: convex hulls and face lattices,
//! parametric polytope families, combinatorial equivalence, and exact
//! Minkowski decomposability with checkable certificates.

pub mod arith;
pub mod hull;
pub mod equiv;
pub mod families;
pub mod decomp;
pub mod io;

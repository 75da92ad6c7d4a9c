//! Symbolic machinery for covariant Hamiltonian field theory on composite
//! fibered bundles: canonical expressions, exterior calculus with valued
//! forms, jet prolongations and connections, and the derivation of
//! covariant Hamilton equations.

pub mod excalc;
pub mod geom;
pub mod ham;
pub mod symcore;

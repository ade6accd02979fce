//! Exact invariants of isolated Fano cone singularities: minimal
//! discrepancy, Reeb orbit indices, the first page of the equivariant
//! symplectic homology spectral sequence, and weighted projective
//! cohomology.

pub mod cone_model;
pub mod corpus;
pub mod discrepancy;
pub mod orb_topology;
pub mod rational;
pub mod reeb_orbits;
pub mod ss_engine;
pub mod sympath_index;

pub use rational::Rational;

//! Decides tautness of normal surface singularities from their resolution
//! graphs by exact rank computations on plumbing-scheme matrices.

pub mod analysis;
pub mod arith;
pub mod cycles;
pub mod graph;
pub mod linalg;
pub mod plumbing;
pub mod preset;
pub mod report;
pub mod sparse;

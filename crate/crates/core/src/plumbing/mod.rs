//! The plumbing scheme of a potentially taut graph and the sparse integer
//! matrix whose corank is `h^1` of its tangent sheaf.

mod assemble;
mod generators;
mod model;
mod rows;

use thiserror::Error;

pub use assemble::{assemble_matrix, estimate_footprint, Assembly, Footprint};
pub use generators::{enumerate_generators, expand_at_point, BinomialTable, Family, GeneratorColumn};
pub use model::{build_model, build_model_with_multiplicities, PlumbingModel, Slot, VertexChart};
pub use rows::{enumerate_points, row_space, IntersectionPoint, Kind, PointSide, RowIndex, RowSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlumbingError {
    #[error("j = {0} is not prime")]
    NotPrime(u64),
    #[error("prime {prime} divides multiplicity {multiplicity} of vertex {vertex}")]
    GcdViolation { prime: u64, vertex: usize, multiplicity: u64 },
    #[error("vertex {0} has multiplicity 0")]
    ZeroMultiplicity(usize),
    #[error("expected {expected} multiplicities, got {got}")]
    MultiplicityCount { expected: usize, got: usize },
    #[error("graph is not potentially taut ({0})")]
    NotPotentiallyTaut(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("invalid slots at vertex {vertex}: {reason}")]
    InvalidSlots { vertex: usize, reason: String },
    #[error("rows with delta = 0 are not supported (prime {prime} divides multiplicity of vertex {vertex})")]
    DeltaZero { prime: u64, vertex: usize },
    #[error("point {point} is not incident to vertex {vertex} or its neighbors")]
    PointNotIncident { point: usize, vertex: usize },
    #[error("generator term falls outside the row window at point {point}")]
    OutsideWindow { point: usize },
    #[error("matrix needs about {needed} bytes, cap is {cap}")]
    MemoryBudget { needed: u64, cap: u64 },
}

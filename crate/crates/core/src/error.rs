use thiserror::Error;

use crate::geometry::{LatticePoint, Region};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("affine map has determinant {0}, expected ±1")]
    NotUnimodularMap(i64),
    #[error("image of {0} is {1}, which is not a point of the configuration")]
    ImageOutsideConfiguration(LatticePoint, LatticePoint),
    #[error("region {0} is not symmetric under (x, y) -> (y, x)")]
    NotSymmetric(Region),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("dilation must be at least 1, got {0}")]
    InvalidDilation(u32),
    #[error("symmetric enumeration requires the full triangle, got {0}")]
    NotSymmetric(Region),
    #[error("simplex pool of {size} orbits exceeds the limit of {limit}")]
    PoolLimit { size: usize, limit: usize },
    #[error("search aborted after {nodes} nodes (limit {limit}); no count was produced")]
    NodeLimit { nodes: u64, limit: u64 },
    #[error("naive enumeration is restricted to d <= {max}, got {d}")]
    NaiveGuard { d: u32, max: u32 },
    #[error("split flag Anti at axis square {0} requires its lower triangle in the half triangulation")]
    InvalidSplit(usize),
    #[error("split vector has length {got}, expected {expected}")]
    SplitLength { got: usize, expected: usize },
    #[error("triangulation is not a symmetric unimodular triangulation: {0}")]
    NotDecomposable(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("sandwich violated at d = {d}: {detail}")]
    SandwichViolation { d: u32, detail: String },
    #[error("explicit bound violated at d = {d}: {detail}")]
    ExplicitBoundViolation { d: u32, detail: String },
    #[error("logarithm of a non-positive value")]
    NonPositive,
    #[error("capacity is undefined for d = {0}")]
    CapacityUndefined(u32),
    #[error("regression needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("regression design matrix is singular")]
    SingularDesign,
}

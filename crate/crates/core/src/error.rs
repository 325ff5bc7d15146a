use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid map parameters: {0}")]
    InvalidParams(String),

    #[error("point ({x}, {y}) lies outside the twist-map domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("point ({x}, {y}) lies on a region boundary; tangent map undefined")]
    OnBoundary { x: f64, y: f64 },

    #[error("parameters are not hyperbolic: {0}")]
    NonHyperbolicParams(String),

    #[error("cat-map bound is vacuous: matrix has spectral radius 1")]
    NonHyperbolicBound,

    #[error("braid word is empty")]
    EmptyWord,

    #[error("cannot parse braid word: {0}")]
    BraidParse(String),

    #[error("integer overflow in Burau matrix product")]
    Overflow,

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("segment near ({x}, {y}) leaves the twist-map domain")]
    SegmentOutsideDomain { x: f64, y: f64 },

    #[error("vertex budget exceeded: {count} vertices > {budget}")]
    VertexBudgetExceeded { count: usize, budget: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("non-positive length {value} at index {index}")]
    NonPositiveLength { index: usize, value: f64 },

    #[error("backward orbit hits the singular set at step {step}")]
    SingularOrbit { step: usize },

    #[error("continued fraction has a vanishing denominator")]
    ZeroDenominator,

    #[error("backward code carries no letters")]
    EmptyCode,

    #[error("pushed-forward vector degenerated")]
    DegenerateVector,

    #[error("edge {index} has length {length:e}, too short to carry a direction")]
    DegenerateSegment { index: usize, length: f64 },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

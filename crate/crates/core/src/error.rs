//! Error types for the exact engine.
//!
//! Every fallible operation returns a dedicated enum below. Programmer-level
//! precondition breaches (e.g. mixing dimensions through the internal `+`
//! operators) panic instead; the `Result` surface is reserved for conditions
//! that depend on runtime data.

use thiserror::Error;

/// Errors from parsing or constructing scalars.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("malformed rational in `{part}`: {text:?} (expected \"p\" or \"p/q\" with nonzero q)")]
    MalformedRational { part: &'static str, text: String },
}

/// Errors from jet arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum JetError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("multi-index {index} has length {found}, expected {expected}")]
    IndexLength {
        index: String,
        expected: usize,
        found: usize,
    },
    #[error("monomial {index} has degree {degree}, above truncation degree {trunc_degree}")]
    DegreeOverflow {
        index: String,
        degree: usize,
        trunc_degree: usize,
    },
    #[error("derivative of order {requested} exhausts reliability degree {available}")]
    ReliabilityExhausted { requested: usize, available: usize },
    #[error("evaluation point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("jet with zero constant term has no reciprocal")]
    NotInvertible,
    #[error("substitution matrix is singular")]
    SingularMatrix,
    #[error("substitution matrix is {rows}x{cols}, expected {dim}x{dim}")]
    MatrixShape { rows: usize, cols: usize, dim: usize },
    #[error("empty linear combination has no defined dimension")]
    EmptyCombination,
}

/// Errors from building or applying differential operators.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("operator has no terms")]
    Empty,
    #[error("operator of order {order} has no nonzero coefficient of that order")]
    OrderNotWitnessed { order: usize },
    #[error("term {alpha} has derivative order {degree}, above operator order {order}")]
    OrderExceeded {
        alpha: String,
        degree: usize,
        order: usize,
    },
    #[error("term {alpha} has length {found}, expected dimension {expected}")]
    AlphaLength {
        alpha: String,
        expected: usize,
        found: usize,
    },
    #[error("coefficient of {alpha} lives in dimension {found}, expected {expected}")]
    CoefficientDimension {
        alpha: String,
        expected: usize,
        found: usize,
    },
    #[error("coefficient of {alpha} has truncation degree {found}, expected {expected}")]
    CoefficientTruncation {
        alpha: String,
        expected: usize,
        found: usize,
    },
    #[error("operator expects dimension {expected}, argument has {found}")]
    ArgumentDimension { expected: usize, found: usize },
    #[error("argument reliability degree {available} is below operator order {order}")]
    ArgumentReliability { available: usize, order: usize },
    #[error(
        "leading coefficient in the last-variable direction vanishes at the origin; \
         operator is not in elliptic position"
    )]
    NotInEllipticPosition,
    #[error("order-zero operators cannot be put in canonical form")]
    OrderZero,
}

/// Errors from the boundary-value recursion.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("truncation degree {trunc_degree} is below operator order {order}")]
    TruncationBelowOrder { trunc_degree: usize, order: usize },
    #[error("polydisc radius {text} at position {position} is outside (0, 1)")]
    RadiusOutOfRange { position: usize, text: String },
    #[error("polydisc has {found} radii, expected {expected}")]
    RadiusCount { expected: usize, found: usize },
    #[error("boundary polynomial depends on the last variable")]
    BoundaryDependsOnLast,
    #[error("boundary polynomial is not homogeneous")]
    BoundaryNotHomogeneous,
    #[error("boundary polynomial lives in dimension {found}, expected {expected}")]
    BoundaryDimension { expected: usize, found: usize },
    #[error(
        "recursion did not stabilize within {iterations} iterations; \
         this contradicts the adic-order growth bound"
    )]
    NotStabilized { iterations: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Errors from the divergence-certificate pipeline, labeled by stage.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("max degree {k_max} exceeds truncation degree {trunc_degree}")]
    DegreeBudget { k_max: usize, trunc_degree: usize },
    #[error("certificate needs at least one boundary polynomial")]
    NoBoundaries,
    #[error("principal symbol vanishes at direction {direction}")]
    SymbolVanishes { direction: String },
    #[error("boundary polynomial for k={k} is zero")]
    ZeroBoundary { k: usize },
    #[error("boundary polynomial for k={k} has degree {found}")]
    BoundaryDegree { k: usize, found: String },
    #[error("boundary solve for k={k} failed: {source}")]
    Solve { k: usize, source: SolverError },
    #[error("solution for k={k} does not restrict to its boundary polynomial")]
    RestrictionMismatch { k: usize },
    #[error("solution for k={k} vanishes to order {found}, expected {k}")]
    OrderMismatch { k: usize, found: String },
    #[error("witness value for k={k} is zero at the chosen point")]
    ZeroWitness { k: usize },
    #[error("weight and solution lists have lengths {weights} and {solutions}")]
    MisalignedLists { weights: usize, solutions: usize },
    #[error(
        "assembled series is not flat under the operator: residual has nonzero \
         coefficient at {monomial} (degree {degree})"
    )]
    ResidualNonzero { monomial: String, degree: usize },
    #[error("divergence diagonal entry k={k} is {found}, expected {expected}")]
    DiagonalMismatch {
        k: usize,
        found: String,
        expected: String,
    },
    #[error("certificate names operator {expected}, got {found}")]
    DigestMismatch { expected: String, found: String },
    #[error("certificate marks the series as non-divergent")]
    DivergenceUnmarked,
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Errors from complex-coordinate analysis.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("real dimension {dim} is odd; paired complex coordinates need an even one")]
    OddDimension { dim: usize },
    #[error("jet is not formally holomorphic: barred exponent at {monomial}")]
    NotFormallyHolomorphic { monomial: String },
    #[error("form components {j} and {k} fail the closedness identity")]
    NotClosed { j: usize, k: usize },
    #[error("expected a jet in one complex variable, found complex dimension {found}")]
    NotUnivariate { found: usize },
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Errors from the one-variable contrast solver.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OdeError {
    #[error("problem order must be at least 1")]
    OrderZero,
    #[error("expected {expected} coefficient jets, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("jet in slot {slot} lives in dimension {found}, expected 1")]
    NotOneDimensional { slot: String, found: usize },
    #[error("jet in slot {slot} has reliability degree {found}, below problem degree {expected}")]
    TruncationTooLow {
        slot: String,
        expected: usize,
        found: usize,
    },
    #[error("truncation degree {trunc_degree} is below problem order {order}")]
    TruncationBelowOrder { trunc_degree: usize, order: usize },
}

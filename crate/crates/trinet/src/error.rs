//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state construction, linear-algebra operations, the
/// preparability criteria, and the optimizers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("subsystem dimensions {dims:?} multiply to {product}, but the data has size {size}")]
    DimsProductMismatch {
        dims: Vec<usize>,
        product: usize,
        size: usize,
    },

    #[error("subsystem dimension list is empty")]
    EmptyDims,

    #[error("subsystem dimensions must be positive, got {dims:?}")]
    NonPositiveDim { dims: Vec<usize> },

    #[error("total dimension {size} exceeds the supported maximum of {max}")]
    TotalDimTooLarge { size: usize, max: usize },

    #[error("state is not Hermitian: max elementwise |m - m†| = {deviation:.3e} exceeds {tol:.0e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("state trace is {trace:.12} (must equal 1 within {tol:.0e})")]
    TraceNotOne { trace: f64, tol: f64 },

    #[error("state is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} < -{tol:.0e}")]
    NotPositive { min_eigenvalue: f64, tol: f64 },

    #[error("vector norm is {norm:.12} (must equal 1 within {tol:.0e})")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("operator is not unitary: max elementwise |UU† - 1| = {deviation:.3e} exceeds {tol:.0e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("eigenvalue {value:.3e} below -{tol:.0e} signals an invalid state")]
    InvalidEigenvalue { value: f64, tol: f64 },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("subsystem index {index} appears more than once")]
    DuplicateSubsystem { index: usize },

    #[error("the kept subsystem set must not be empty")]
    EmptyKeep,

    #[error("permutation {perm:?} is not a bijection on 0..{count}")]
    InvalidPermutation { perm: Vec<usize>, count: usize },

    #[error("cut must split the subsystems into two non-empty parts")]
    DegenerateCut,

    #[error("total dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected a state with {expected} parties, got {found}")]
    PartyCount { expected: usize, found: usize },

    #[error("expected equal party dimensions, got {dims:?}")]
    UnequalPartyDims { dims: Vec<usize> },

    #[error("rank profile out of range: {detail}")]
    RankProfileOutOfRange { detail: String },

    #[error("invalid configuration: {detail}")]
    InvalidConfig { detail: String },

    #[error("witness overlap bound mu^2 = {mu_squared} must lie in [0, 1]")]
    WitnessMuOutOfRange { mu_squared: f64 },

    #[error("triangle sources must share one local dimension, got {found:?}")]
    SourceDimMismatch { found: Vec<usize> },

    #[error("source state must live on two equal subsystems, got dims {dims:?}")]
    BadSourceDims { dims: Vec<usize> },

    #[error("node unitary must have dimension {expected}, got {found}")]
    UnitaryDimMismatch { expected: usize, found: usize },

    #[error("mixture weights sum to {sum:.12} (must equal 1 within {tol:.0e})")]
    WeightsNotNormalized { sum: f64, tol: f64 },

    #[error("mixture weight {value} is negative")]
    NegativeWeight { value: f64 },

    #[error("mixture must contain at least one component")]
    EmptyMixture,

    #[error("operation requires pure source states")]
    SourcesNotPure,

    #[error("local dimension must be at least 2, got {d}")]
    LocalDimTooSmall { d: usize },

    #[error("k = {k} out of range [1, {max}]")]
    KOutOfRange { k: usize, max: usize },

    #[error("visibility {v} outside [0, 1]")]
    VisibilityOutOfRange { v: f64 },

    #[error("cannot embed subsystem of dimension {from} into smaller dimension {to}")]
    EmbedShrink { from: usize, to: usize },

    #[error("zero vector where a normalizable state was required")]
    ZeroVector,

    #[error("see-saw target party dimension {dim} does not equal d^2 = {expected}")]
    TargetDimNotSquare { dim: usize, expected: usize },

    #[error("analytical bound supports qubit sources only; party dimension {dim} exceeds 4")]
    BoundTargetTooLarge { dim: usize },

    #[error("Schmidt angle {angle} outside [0, pi/4]")]
    AngleOutOfRange { angle: f64 },

    #[error("Schmidt coefficient vector must be sorted non-increasing, got {coeffs:?}")]
    UnsortedCoefficients { coeffs: Vec<f64> },

    #[error("Schmidt coefficient vector squares to {sum:.12} (must equal 1 within {tol:.0e})")]
    UnnormalizedCoefficients { sum: f64, tol: f64 },

    #[error("product term leg {leg} has dimension {found}, tensor leg has {expected}")]
    TermDimMismatch {
        leg: usize,
        expected: usize,
        found: usize,
    },

    #[error("product term leg {leg} is a zero vector")]
    ZeroTermLeg { leg: usize },

    #[error("state file field `{field}`: {reason}")]
    StateFile { field: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

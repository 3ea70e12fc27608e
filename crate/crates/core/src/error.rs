use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {from} does not divide {to}")]
    ConductorMismatch { from: u32, to: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("UnsupportedType: {0}")]
    UnsupportedType(String),
    #[error("NonDominantWeight: {0}")]
    NonDominantWeight(String),
    #[error("NotADiagramSymmetry: {0}")]
    NotADiagramSymmetry(String),
    #[error("NotRootOfUnity: {0}")]
    NotRootOfUnity(String),
    #[error("NonCommuting: automorphisms {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("OrderMismatch: automorphism {index} has order {actual}, expected {expected}")]
    OrderMismatch { index: usize, actual: u32, expected: u32 },
    #[error("GroupOrderViolation: generated group has order {actual}, expected {expected}")]
    GroupOrderViolation { actual: usize, expected: usize },
    #[error("NotAHomomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("CartanNotPreserved: {0}")]
    CartanNotPreserved(String),
    #[error("DegreeNotInGamma: {0}")]
    DegreeNotInGamma(String),
    #[error("WindowOverflow: degree {0} outside the window")]
    WindowOverflow(String),
    #[error("NullRoot: the root has zero finite part")]
    NullRoot,
    #[error("NotInEigenspace: {0}")]
    NotInEigenspace(String),
    #[error("NotInField: {0}")]
    NotInField(String),
    #[error("WeightNotInOrbit: {0}")]
    WeightNotInOrbit(String),
    #[error("ZeroLambda: λ ∈ P_g⁺ \\ {{0}} required")]
    ZeroLambda,
    #[error("GradedIrreducibilityFailure: {0}")]
    GradedIrreducibilityFailure(String),
    #[error("IncompatibleGradings: {0}")]
    IncompatibleGradings(String),
    #[error("RootDataUnavailable: {0}")]
    RootDataUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

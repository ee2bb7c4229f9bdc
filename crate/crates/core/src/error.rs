use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph file: {0}")]
    Parse(String),
    #[error("duplicate vertex id \"{0}\"")]
    DuplicateVertex(String),
    #[error("unknown endpoint \"{0}\"")]
    UnknownEndpoint(String),
    #[error("nonpositive weight {weight} on edge {edge}")]
    NonpositiveWeight { edge: usize, weight: f64 },
    #[error("malformed shift on edge {0}: expected two integers")]
    MalformedShift(usize),
    #[error("edge {0} is a loop (same endpoint, zero shift)")]
    Loop(usize),
    #[error("edge {0} joins two vertices of the same color")]
    ColorConflict(usize),
    #[error("periodic graph is not connected")]
    Disconnected,
    #[error("embedding ambiguous: coincident edge directions at vertex \"{0}\"")]
    CoincidentDirections(String),
    #[error("face {face} is not contractible (net translation {net:?})")]
    NonContractibleFace { face: usize, net: [i64; 2] },
    #[error("Euler relation fails on the torus: V={v}, E={e}, F={f}")]
    Euler { v: usize, e: usize, f: usize },
    #[error("graph is not bipartite; odd cycle through {0:?}")]
    OddCycle(Vec<String>),
    #[error("unbalanced colors: {white} white vs {black} black vertices")]
    Unbalanced { white: usize, black: usize },
    #[error("Kasteleyn sign system infeasible at face {0}")]
    SignInfeasible(usize),
    #[error("face {0} has odd degree")]
    OddFace(usize),
    #[error("characteristic polynomial residual check failed (relative residual {0:e})")]
    Residual(f64),
    #[error("no four-term sign pattern reproduces the matching count (oracle {oracle}, values {values:?})")]
    NoSignPattern { oracle: f64, values: [f64; 4] },
    #[error("matching enumeration too large: frontier width {0} exceeds the limit")]
    TooLarge(usize),
    #[error("non-finite evaluation of log|P| on the quadrature grid")]
    NonFinite,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial has no positive degree in w")]
    ConstantInW,
    #[error("root finder did not converge")]
    RootFinder,
    #[error("singular Fourier block at ({0}, {1}): periodic graph disconnected")]
    SingularBlock(usize, usize),
    #[error("extrapolation did not converge: {0}")]
    Extrapolation(String),
    #[error("face {0} is not cyclic")]
    NonCyclicFace(usize),
    #[error("face {face} has circumradius {found}, expected {expected}")]
    RadiusMismatch { face: usize, found: f64, expected: f64 },
    #[error("circumcenter of face {0} lies outside the face")]
    CircumcenterOutside(usize),
    #[error("faces are not traceable: {0}")]
    Untraceable(String),
    #[error("bipyramid needs at least 2 sides, got {0}")]
    BipyramidDegree(usize),
    #[error("unknown example \"{0}\"")]
    UnknownExample(String),
    #[error("methods disagree for {example}: {detail}")]
    MethodDisagreement { example: String, detail: String },
    #[error("no face data and no stored bipyramid volume for {0}")]
    MissingVolume(String),
    #[error("appendix identity {name} has residual {residual:e} above tolerance {tolerance:e}")]
    AppendixResidual { name: String, residual: f64, tolerance: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

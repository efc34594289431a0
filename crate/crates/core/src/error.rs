use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("evaluation point lies on the kernel singularity (r = {r}, theta = {theta}, theta1 = {theta1})")]
    SingularPoint { r: f64, theta: f64, theta1: f64 },
    #[error("kernel quadrature did not converge (n = {n})")]
    Divergent { n: usize },
    #[error("series did not converge within {terms} terms (a/b = {ratio})")]
    SlowConvergence { ratio: f64, terms: usize },
    #[error("the T-term decomposition needs an even dimension, got n = {0}")]
    OddDimension(usize),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("collocation system is ill-conditioned (effective rank {rank} of {cols})")]
    IllConditioned { rank: usize, cols: usize },
    #[error("collocation residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("degenerate ratio: 1 - omega2 = {0:e} at an evaluation node")]
    DegenerateRatio(f64),
    #[error("negative part of sigma has total variation {0:e}")]
    NegativeSigma(f64),
    #[error("negative density {0:e} beyond tolerance")]
    NegativeDensity(f64),
    #[error("bisection failed: {0}")]
    BisectionFailure(String),
    #[error("no feasible sample found after {0} attempts")]
    FeasibilityTimeout(usize),
    #[error("point {0:?} is the pole of the Kelvin map")]
    PoleInput(Vec<f64>),
    #[error("extrapolation swamped by solver noise (spread {0:e})")]
    NoiseFloor(f64),
    #[error("square-root branch is ambiguous at theta = {0}")]
    BranchAmbiguity(f64),
    #[error("endpoint singularity: {0}")]
    EndpointSingularity(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("mass-move inversion out of range: {0}")]
    OutOfRange(String),
    #[error("ascent stagnated after {0} iterations without meeting the criterion")]
    AscentStagnation(usize),
    #[error("malformed CSV: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

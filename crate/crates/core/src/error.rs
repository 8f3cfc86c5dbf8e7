use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("d = {0} coincides with a regular singularity of the equation (0 or 1)")]
    SingularD(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("identity {identity} is not applicable: {reason}")]
    InapplicableIdentity { identity: &'static str, reason: String },
    #[error("target d = {0} is not reachable by the implemented identities")]
    UnreachableTarget(String),
    #[error("reduction conditions violated: {}", .0.join("; "))]
    ConditionsViolated(Vec<String>),
    #[error("logarithmic Frobenius case: Γ = {0} is a non-positive integer")]
    LogarithmicCase(String),
    #[error("degenerate hypergeometric parameter c = {0}")]
    DegenerateC(String),
    #[error("point {z} lies outside the evaluation domain (limit {limit})")]
    OutOfDomain { z: String, limit: f64 },
    #[error("point {0} is a singular point of the equation")]
    SingularPoint(String),
    #[error("series did not converge after {0} terms")]
    NotConverged(usize),
    #[error("no admissible grid points remain")]
    EmptyGrid,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate map: {0}")]
    DegenerateMap(&'static str),
}

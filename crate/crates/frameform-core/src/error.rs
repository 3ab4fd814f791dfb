//! Error types shared across the crate.

use alloc::boxed::Box;
use core::fmt;

/// Errors raised by geometric operations.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A matrix failed the full-rank tolerance `σ_min > RANK_RTOL·max(n,m)·σ_max`.
    RankDeficient,
    /// A matrix that must be symmetric positive-definite is not.
    NotSpd,
    /// An entry is NaN or infinite.
    NonFinite,
    /// Operands have incompatible shapes.
    ShapeMismatch,
    /// The operation requires different dimensions (e.g. `m = 1`, or `m ≤ n`).
    WrongDimension,
    /// A quantity that must be strictly positive is not.
    NotPositive,
    /// Two tangent vectors fail to span a 2-plane numerically.
    DegeneratePlane,
    /// A tangent vector is not horizontal (`ua⁺` not symmetric within tolerance).
    NotHorizontal,
    /// A tangent at a unimodular point has a nonzero trace component.
    NotUnimodularTangent,
    /// A grid map is not strictly increasing into `[0,1]`.
    NotMonotone,
    /// A discrete curve has a (numerically) vanishing derivative at `node`.
    NotImmersed { node: usize },
    /// Evaluation time outside the solution's domain (e.g. `t < 0`).
    OutOfDomain { t: f64 },
    /// Evaluation at or past the finite blow-up time of a geodesic.
    BeyondBlowup { t: f64, blowup: f64 },
    /// A node-indexed failure inside a discretized operation.
    AtNode { node: usize, source: Box<Error> },
}

impl Error {
    /// Wraps an error with the grid node index at which it occurred.
    pub fn at_node(self, node: usize) -> Self {
        Error::AtNode {
            node,
            source: Box::new(self),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RankDeficient => write!(f, "matrix is rank deficient within tolerance"),
            Error::NotSpd => write!(f, "matrix is not symmetric positive-definite"),
            Error::NonFinite => write!(f, "non-finite entry encountered"),
            Error::ShapeMismatch => write!(f, "operand shapes are incompatible"),
            Error::WrongDimension => write!(f, "operation not defined for these dimensions"),
            Error::NotPositive => write!(f, "quantity must be strictly positive"),
            Error::DegeneratePlane => write!(f, "tangent vectors do not span a 2-plane"),
            Error::NotHorizontal => write!(f, "tangent vector is not horizontal"),
            Error::NotUnimodularTangent => {
                write!(f, "tangent has a nonzero trace component at a unimodular point")
            }
            Error::NotMonotone => write!(f, "grid map is not strictly increasing into [0,1]"),
            Error::NotImmersed { node } => {
                write!(f, "curve derivative vanishes at node {node}")
            }
            Error::OutOfDomain { t } => write!(f, "time t = {t} outside the solution domain"),
            Error::BeyondBlowup { t, blowup } => {
                write!(f, "time t = {t} at or past blow-up time {blowup}")
            }
            Error::AtNode { node, source } => write!(f, "at node {node}: {source}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

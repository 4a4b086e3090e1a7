//! Exact construction and machine verification of 2-isogeny towers: decorated
//! binary trees of level structures, recursive halving chains, and 2-power
//! division fields of elliptic curves y² = (x−α₁)(x−α₂)(x−α₃).

pub mod chain;
pub mod claims;
pub mod curves;
pub mod decoration;
pub mod fields;
pub mod matrix_action;
pub mod towers;
pub mod tree;

pub use fields::{
    Field, FuncField, MultiPoly, Rat, RatField, RatFunc, TowerElem, TowerField,
};

/// Errors surfaced by exact arithmetic and the geometric constructions.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element owned by tower {elem_owner} used with tower {expected}")]
    OwnerMismatch { elem_owner: u64, expected: u64 },
    #[error("cannot adjoin a square root of zero")]
    ZeroRadicand,
    #[error("towers are not built over a common base field")]
    BaseMismatch,
    #[error("the three roots must be pairwise distinct")]
    DistinctRootsRequired,
    #[error("point fails the curve equation: {0}")]
    NotOnCurve(String),
    #[error("curve carries no ordered root data; construct it from three roots")]
    MissingRoots,
    #[error("operation needs a square root of -1 in the base field")]
    NeedsZeta4,
    #[error("degenerate quadratic: {0}")]
    DegenerateQuadratic(String),
    #[error("level {level} not supported here (max {max})")]
    LevelTooLarge { level: u32, max: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

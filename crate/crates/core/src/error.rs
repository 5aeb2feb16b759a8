//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a group table: {0}")]
    NonGroupTable(String),

    #[error("generator maps do not extend to a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("bad permutation: {0}")]
    BadPermutation(String),

    #[error("orbit-type verification failed: {0}")]
    InconsistentOrbitTypes(String),

    #[error("fixed-point set of the minimal isotropy group is empty")]
    EmptyFixedSet,

    #[error("covector is not fixed by group element {element}")]
    NotFixed { element: usize },

    #[error("symbol does not commute with the isotropy fiber action (defect {defect:.3e})")]
    NotEquivariant { defect: f64 },

    #[error("scenario action is not trivial")]
    NotTrivialAction,

    #[error("minimal isotropy subgroup is not normal")]
    NotNormal,

    #[error("minimal isotropy subgroup does not act trivially")]
    NotTriviallyActing,

    #[error("manifold is not a coset bundle for the action: {0}")]
    NotCosetAction(String),

    #[error("bad grid size {n}: {reason}")]
    BadGrid { n: usize, reason: String },

    #[error("rotation by {angle} is incommensurable with grid size {n}")]
    IncommensurableAngle { angle: String, n: usize },

    #[error("numerical index requested for a scenario that is not Fredholm")]
    NotFredholmScenario,

    #[error("symbol vanishes on the sample grid (|a| = {min:.3e} at theta = {theta:.6})")]
    VanishingSymbol { min: f64, theta: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

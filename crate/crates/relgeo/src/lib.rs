//! Relative differential geometry of parametric surfaces in Euclidean 3-space.
//!
//! A surface `x(u1, u2)` together with a transversal vector field `y` whose
//! derivatives are tangential is a *relatively normalized* surface. This crate
//! builds the full per-point frame of that geometry — support function,
//! covector, relative metric, shape operator, relative curvatures, Darboux
//! tensor, Tchebychev vector — constructs relatively parallel surfaces
//! `x* = x + mu * y`, and verifies the closed-form transformation laws between
//! a surface and its relative parallels as numerical identities on grids.
//!
//! Everything is evaluated through exact truncated Taylor jets ([`jet::Jet2`]),
//! so the only error budget in any identity is floating-point roundoff. Grid
//! sweeps run data-parallel through rayon (feature `parallel`, on by default)
//! with a sequential fallback.

pub mod catalog;
pub mod expr;
pub mod frame;
pub mod grid;
pub mod harness;
pub mod jet;
pub mod mesh;
pub mod parallel;
pub mod report;
pub mod surface;
pub mod tensor;
pub mod tol;

pub use catalog::{Catalog, SurfaceSpec};
pub use expr::Expr;
pub use frame::{RelativeFrame, SupportSpec};
pub use grid::{ExecMode, GridSpec};
pub use harness::{Suite, SuiteOptions};
pub use jet::{Axis, Jet2};
pub use parallel::FramePair;
pub use report::VerificationReport;
pub use surface::SurfaceJet;
pub use tensor::{JetVec3, Tensor2, Vec3};

/// Crate-wide error type. Variant names follow the geometric failure they
/// report; the CLI maps them onto its exit-code contract.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown constant `{0}` (bind it with a param)")]
    UnknownConstant(String),
    #[error("domain error: {func} of a jet with value term {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("division by a jet with zero value term")]
    DivisionByZero,
    #[error("jet order {have} too low: need {need} for {what}")]
    Order {
        what: &'static str,
        need: usize,
        have: usize,
    },
    #[error("surface not regular at ({u1}, {u2}): |x_1 x x_2| = {norm:.3e}")]
    Regularity { u1: f64, u2: f64, norm: f64 },
    #[error("flat point at ({u1}, {u2}): |det h| = {det_h:.3e} below 1e-12 |det g|")]
    FlatPoint { u1: f64, u2: f64, det_h: f64 },
    #[error("support function vanishes at ({u1}, {u2}): q = {q:.3e}")]
    ZeroSupport { u1: f64, u2: f64, q: f64 },
    #[error("complex relative principal curvatures at ({u1}, {u2}): H^2 - K = {disc:.3e}")]
    ComplexCurvature { u1: f64, u2: f64, disc: f64 },
    #[error("relative principal curvature vanishes on branch {branch}: kappa = {kappa:.3e}")]
    ZeroCurvature { branch: usize, kappa: f64 },
    #[error("degenerate parallel surface at ({u1}, {u2}): A = {a:.3e} for mu = {mu}")]
    DegenerateParallel { u1: f64, u2: f64, a: f64, mu: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("insufficient samples: {have} usable, {need} required")]
    InsufficientSamples { have: usize, need: usize },
    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable name of the error class, used in CLI messages and census
    /// entries.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::UnknownConstant(_) => "UnknownConstantError",
            Error::Domain { .. } => "DomainError",
            Error::DivisionByZero => "DivisionByZero",
            Error::Order { .. } => "OrderError",
            Error::Regularity { .. } => "RegularityError",
            Error::FlatPoint { .. } => "FlatPointError",
            Error::ZeroSupport { .. } => "ZeroSupportError",
            Error::ComplexCurvature { .. } => "ComplexCurvatureError",
            Error::ZeroCurvature { .. } => "ZeroCurvatureError",
            Error::DegenerateParallel { .. } => "DegenerateParallelError",
            Error::Precondition(_) => "PreconditionError",
            Error::InsufficientSamples { .. } => "InsufficientSamplesError",
            Error::UnknownSurface(_) => "UnknownSurfaceError",
            Error::UnknownSuite(_) => "UnknownSuiteError",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

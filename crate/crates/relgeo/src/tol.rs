//! Tolerance thresholds shared by the frame construction and the verification
//! suites.
//!
//! Jets are exact, so every tolerance here only has to absorb floating-point
//! roundoff; none of them hides a discretization error. Near-degenerate
//! points are censused, never silently passed.

/// Absolute threshold below which `|x_1 x x_2|` counts as a rank drop.
pub const REGULARITY: f64 = 1e-12;

/// `|det h| < FLAT_POINT * |det g|` is a flat point (the standing hypothesis
/// of nonvanishing Gaussian curvature fails).
pub const FLAT_POINT: f64 = 1e-12;

/// Minimum magnitude of the support function q.
pub const ZERO_SUPPORT: f64 = 1e-12;

/// `H^2 - K` below this marks the relative principal curvatures as complex.
pub const COMPLEX_CURVATURE: f64 = -1e-12;

/// |H^2 - K| below this (scaled by the curvature magnitudes) collapses the
/// principal curvatures to the double root H; otherwise the square root
/// inflates discriminant roundoff to ~1e-8.
pub const UMBILIC_DISC: f64 = 1e-12;

/// Minimum |kappa_i| for a principal-radius branch to exist.
pub const ZERO_CURVATURE: f64 = 1e-12;

/// Minimum |K| (or |K*|) for quotients like K~/K.
pub const ZERO_REL_CURVATURE: f64 = 1e-12;

/// Minimum |A| = |mu^2 K - 2 mu H + 1| for the parallel parametrization to
/// count as regular.
pub const DEGENERATE_PARALLEL: f64 = 1e-10;

/// Unit-normal orthonormality (absolute).
pub const ORTHONORMALITY: f64 = 1e-10;

/// Scaled tolerance for tensor identities recomputed through two routes.
pub const TENSOR_IDENTITY: f64 = 1e-9;

/// Scaled tolerance for the relative-frame identities.
pub const FRAME_IDENTITY: f64 = 1e-8;

/// Transform-oracle tolerance: predicted quantities of a parallel surface vs
/// direct recomputation on it.
pub const TRANSFORM_ORACLE: f64 = 1e-7;

/// Shared quantities (q, X, covariant B) between a surface and its parallels.
pub const SHARED_QUANTITY: f64 = 1e-8;

/// Determinant relations det g* = A^2 det g, det h* = A det h.
pub const DET_RELATION: f64 = 1e-8;

/// Tchebychev-vector norm bound for equiaffine and homothetic normalizations.
pub const TCHEBYCHEV_VANISHING: f64 = 1e-7;

/// Beltrami identity between the second- and third-form gradient operators.
pub const BELTRAMI_IDENTITY: f64 = 1e-9;

/// Grid constancy: max |value - mean| for a field to count as constant.
pub const GRID_CONSTANT: f64 = 1e-8;

/// Coarse constancy screen used by the mu-scan falsification tests.
pub const SCAN_CONSTANT: f64 = 1e-4;

/// Bonnet-type suites: deviation of the transformed curvature from its
/// predicted constant.
pub const BONNET: f64 = 1e-7;

/// Direction coincidence between corresponding relative lines of curvature.
pub const DIRECTION_ANGLE: f64 = 1e-7;

/// All coefficients of the curvature-line equation below this means the point
/// is a relative umbilic.
pub const UMBILIC: f64 = 1e-10;

/// Parallelism threshold on normalized cross products in the affine-normal
/// biconditional.
pub const AFFINE_PARALLEL: f64 = 1e-7;

/// Maximum fraction of censused grid points before a suite refuses to pass
/// (guards against vacuous sweeps).
pub const CENSUS_FRACTION: f64 = 0.2;

/// Rank test on {x_1, x_2, y}: smallest singular value over largest.
pub const RANK_RATIO: f64 = 1e-10;

/// Deviation of `a` from `b` normalized so it behaves absolutely near zero
/// and relatively for large values.
pub fn normalized_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

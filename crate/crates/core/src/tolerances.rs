//! Numerical thresholds used across the crate, in one place.
//!
//! Everything here is f64; there is no exact arithmetic anywhere in the
//! crate, so each analytic statement becomes a residual test against one of
//! these bands.

/// Light-like band: `v` counts as light-like when `|g(v,v)| <= TAU_LIGHTLIKE * |v|_e^2`,
/// with `|.|_e` the auxiliary Euclidean norm. The causal trichotomy is not
/// meaningful below rounding noise, so a relative band is required.
pub const TAU_LIGHTLIKE: f64 = 1e-9;

/// Frame degeneracy threshold on `|det G|` after row-scaling the induced
/// Gram matrix (each row divided by its largest absolute entry). Row-scaling
/// makes the verdict invariant under rescaling the frame vectors.
pub const DELTA_DEGENERATE: f64 = 1e-10;

/// Symmetry tolerance (absolute) when validating a metric's entries.
pub const METRIC_SYMMETRY_TOL: f64 = 1e-12;

/// Non-degeneracy floor on `|det g|` for an ambient metric.
pub const METRIC_DET_TOL: f64 = 1e-12;

/// Max-norm tolerance for the two structure identities `J^2 = eps*I` and
/// `J^t g J = sigma*g`.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Boundary band around lambda in {0, +/-1}: values inside the band classify
/// as the degenerate case (totally real / complex), never as a proper type.
pub const ETA_BOUNDARY: f64 = 1e-7;

/// Base for the scalarity residual test: `residualP2 <= TOL_RES_BASE * max(1, |lambda|)`.
pub const TOL_RES_BASE: f64 = 1e-7;

/// Allowed spread of the per-sample lambda estimates around their mean.
/// Two orders above the ~1e-9 relative noise of finite-difference Jacobians
/// on smooth maps (central differences, h = 1e-6).
pub const TOL_CONST: f64 = 1e-6;

/// Relative tolerance for the four exact operator identities
/// (tF + P^2 = eps I, f^2 + Ft = eps I, FP + fF = 0, signed self-adjointness).
pub const IDENTITY_TOL: f64 = 1e-8;

/// Default central-difference step factor for immersion Jacobians:
/// the per-axis step is `FD_STEP * (1 + |u_i|)`.
pub const FD_STEP: f64 = 1e-6;

/// Central-difference step for curve derivative providers.
pub const CURVE_FD_STEP: f64 = 1e-5;

/// Residual band for the geodesic-or-invariant disjunction on slant curves.
pub const THEOREM_CURVE_TOL: f64 = 1e-6;

/// Band used by gallery admissibility predicates when excluding parameter
/// values that sit on a degeneracy locus (for example `a^2 + b^2 = 1`).
pub const CONSTRAINT_BAND: f64 = 1e-9;

/// Fraction of degenerate samples above which classification refuses to
/// report instead of describing a sliver of the domain.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.5;

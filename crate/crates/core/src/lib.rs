//! Classification of submanifolds of flat semi-Riemannian spaces carrying a
//! compatible almost-structure (Norden or para-complex).
//!
//! Given a constant structure J with `J^2 = +/-I` on a flat metric g of
//! arbitrary signature, and an immersed submanifold, the crate computes the
//! tangential part P of J along the submanifold, tests whether `P^2` is a
//! constant multiple of the identity, and classifies the submanifold as
//! complex, totally real, or slant of type 1, 2, or 3 with its slant angle.
//! It ships a registry of named ambient structures, a gallery of fixture
//! immersions with closed-form expected values, runtime identity checks on
//! the induced operators, and a curve analyzer for 2-dimensional Norden
//! ambients.
//!
//! Modules follow the pipeline:
//!
//! * [`semiriemann`] - indefinite-metric linear algebra (causal characters,
//!   induced Gram matrices, projections, normal frames);
//! * [`structure`] - validation and classification of (J, g) pairs, plus the
//!   registry of named structures;
//! * [`exprdsl`] - the expression language for user-supplied components;
//! * [`immersion`] - parametrized maps with analytic or finite-difference
//!   Jacobians;
//! * [`gallery`] - the fixture gallery with expected lambda and type oracles;
//! * [`slant`] - the operator decomposition, classification, identity
//!   checks, and parameter sweeps;
//! * [`curves`] - slant curves and the geodesic-or-invariant disjunction;
//! * [`schema`] - JSON input documents and CSV output.

pub mod curves;
pub mod error;
pub mod exprdsl;
pub mod gallery;
pub mod immersion;
pub mod schema;
pub mod semiriemann;
pub mod slant;
pub mod structure;
pub mod tolerances;

pub use curves::{curve_classify, theorem_check, Curve, CurveReport, CurveVerdict};
pub use error::{Error, Result};
pub use gallery::{gallery, gallery_get, GalleryEntry};
pub use immersion::Immersion;
pub use schema::{CurveDoc, ImmersionDoc, ManifoldDoc};
pub use semiriemann::{causal_character, CausalCharacter, Metric, TangentFrame};
pub use slant::{
    classify, identity_checks, lambda_at, operators_at, sweep, OperatorDecomposition,
    SamplerConfig, SlantClassification, SlantType, SweepRow,
};
pub use structure::{
    classify_structure, registry, registry_get, Compatibility, CompatibleStructure, Provenance,
    StructureClass, StructureRegistryEntry,
};

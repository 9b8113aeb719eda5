//! Numerics for closed planar elastic curves.
//!
//! The central question this crate makes computable: how small can the
//! product of bending energy and length get before a closed curve is
//! forced to cross itself? The sharp threshold is attained by the
//! figure-eight elastica; everything here exists to evaluate, sample,
//! test, and evolve curves around that threshold.
//!
//! * [`elliptic`]: complete/incomplete elliptic integrals, Jacobi
//!   amplitude and elliptic functions, and the special constants of the
//!   figure eight (the modulus where `2E = K`, its energy, length, and
//!   their product).
//! * [`prototypes`]: closed-form arc-length parametrizations of the five
//!   planar elastica families and the figure eight in two
//!   parametrizations.
//! * [`curve`]: closed polylines with discrete length, bending energy,
//!   total curvature, winding number, constant-speed resampling, and the
//!   tangent-extended-arc construction with total curvature `4pi - 4beta`.
//! * [`intersect`]: grid-accelerated self-intersection reports with an
//!   all-pairs oracle they must match exactly, plus the
//!   chord-over-parameter embeddedness ratio.
//! * [`flow`]: explicit stepping of the length-preserving and
//!   length-penalized elastic flows with energy monitoring, mesh
//!   redistribution, and circle-fit diagnostics.
//! * [`sweep`]: seeded curve families (tangent-arc, perturbed figure
//!   eight, lens) for threshold sweeps.

pub mod curve;
pub mod elliptic;
pub mod flow;
pub mod intersect;
pub mod prototypes;
pub mod sweep;

mod error;
mod vec2;

pub use curve::{fenchel_example, liyau_check, DiscreteCurve, LiYauReport, Verdict};
pub use elliptic::{compute_constants_with, EllipticConstants, Modulus};
pub use error::{Error, Result};
pub use flow::{
    circle_fit, lambda_length_preserving, penalized_energy, run, stable_dt, step, velocity_field,
    CircleFit, DiagnosticsRecord, FlowConfig, FlowMode, FlowState, Redistribution,
};
pub use intersect::{
    embeddedness_ratio, self_intersections, self_intersections_bruteforce, IntersectionEvent,
    IntersectionReport, PointMultiplicity,
};
pub use prototypes::{
    circle_curve, figure_eight_curve, ElasticaPrototype, FigureEight, Parametrization,
    PrototypeKind, RigidMotion,
};
pub use sweep::{lens_curve, perturbed_figure_eight, sweep, sweep_sample, SweepFamily, SweepSample};
pub use vec2::Vec2;

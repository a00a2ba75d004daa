//! Bound sequences for the joint spectral radius and joint spectral
//! subradius of finite matrix sets, with special support for sets that
//! leave polyhedral cones invariant.
//!
//! The crate is organized in three layers:
//!
//! * [`matrix`] and [`spectral`] — dense real matrix arithmetic, operator
//!   norms, Kronecker products, and spectral radius computation;
//! * [`lp`], [`cone`], and [`embed`] — a small phase-one simplex kernel,
//!   polyhedral cones in generator form with membership / invariance /
//!   positivity / primitivity tests, and embedded cone pairs with their
//!   embedding constant;
//! * [`engine`] — the bound engines: exhaustive product enumeration,
//!   Kronecker lifting, trace sequences, the conic subradius lower bound,
//!   and the perturbation study.

pub mod cone;
pub mod embed;
pub mod engine;
pub mod error;
pub mod lp;
pub mod matrix;
pub mod spectral;

pub use cone::{
    cone_membership, default_primitivity_horizon, is_invariant, is_positive_map, is_primitive,
    Membership, MembershipCheck, PolyhedralCone, Primitivity,
};
pub use embed::{construct_embedded_pair, estimate_beta, is_embedded_pair, EmbeddedPair};
pub use engine::bounds::{
    enumerate_bounds, subradius_bounds, BoundReport, EnumConfig, Interval, SubradiusOutcome,
};
pub use engine::conic::{conic_subradius_lower, ConicBound};
pub use engine::kron_lift::{kron_lift_bounds, trace_kron_inequality, KronReport, TraceKronCheck};
pub use engine::perturb::{hausdorff_distance, perturbation_study, PerturbationReport, SetNorm};
pub use engine::trace_seq::{trace_sequence, TraceDiagnostic, TraceSeqReport};
pub use error::{Error, Result};
pub use matrix::{mat_product, operator_norm, Matrix, MatrixSet, NormKind, DEFAULT_DIM_CAP};
pub use spectral::{dominant_eigenvalue, eigenvalues, spectral_radius};

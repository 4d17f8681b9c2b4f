//! Bayesian D-optimal experimental designs for nonlinear dose-response models.
//!
//! This crate computes, certifies, and evaluates approximate designs for
//! three classical dose-response families (Emax, exponential, linear-in-log),
//! both for a single trial and for several administration-frequency groups
//! that share location or location-and-scale parameters.
//!
//! An approximate design `ξ` places weights `w_j` on doses `d_j` in `[0, d_max]`;
//! for `M` groups a composite design `(ξ_1, …, ξ_M, μ)` adds an allocation
//! measure `μ` splitting the total sample size between groups. Designs are
//! ranked by the Bayesian D-criterion
//!
//! ```text
//! Φ_π(ξ) = ∫ log det M(ξ, θ) π(dθ),
//! ```
//!
//! the prior-averaged log-determinant of the Fisher information matrix, with
//! finitely supported priors so the integral is an exact sum.
//!
//! The crate offers two complementary solvers plus a certificate:
//!
//! * [`saturated`] — closed-form/root-finding constructions of optimal
//!   *saturated* designs (total support = number of parameters `m`),
//!   including the four-case selection rule for two groups sharing location
//!   and scale;
//! * [`pso`] — a deterministic, seeded particle-swarm optimizer over all
//!   composite designs, used when the saturated class is not globally
//!   optimal and for locally optimal reference designs;
//! * [`criteria::check_equivalence`] — an equivalence-theorem certificate:
//!   a design is optimal iff every group's sensitivity function `τ_i(d)`
//!   stays `≤ 0`, with equality at support points.
//!
//! A worked tour lives in the [`guide`] module (rendered by the mdbook under
//! `book/`); the `dosedesign` binary in the companion CLI crate drives the
//! same functionality from problem files.
//!
//! ```
//! use dosedesign::{DiscretePrior, ModelKind};
//! use dosedesign::saturated::saturated_individual;
//!
//! // Locally D-optimal design for an Emax model with ED50 = 0.2 on [0, 1]:
//! // three equally weighted doses, the middle one at d_max·θ2/(d_max + 2θ2).
//! let prior = DiscretePrior::dirac(vec![0.2]);
//! let sol = saturated_individual(ModelKind::Emax, &prior, 1.0, 1.0).unwrap();
//! let d = sol.design.groups()[0].points();
//! assert_eq!(d.len(), 3);
//! assert!((d[1] - 1.0 / 7.0).abs() < 1e-12);
//! ```

pub mod criteria;
pub mod design;
pub mod guide;
pub mod models;
pub mod pso;
pub mod saturated;

pub use crate::criteria::{
    bayes_logdet, check_equivalence, d_efficiency, EquivalenceReport, InfoMatrix, Verdict,
};
pub use crate::design::{
    product_prior, validate_design, AllocationMeasure, CompositeDesign, Design, DesignSpace,
    DiscretePrior, FullParameterVector, ParameterStructure, SharingMode, ValidationReport,
};
pub use crate::models::ModelKind;
pub use crate::pso::{PsoConfig, PsoOutcome};
pub use crate::saturated::{
    common_location_design, common_location_scale_design, locally_d_optimal, saturated_individual,
    CaseLabel, SaturatedSolution,
};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A design, prior, or allocation violated a structural invariant.
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    /// Model parameters outside the admissible domain (e.g. `θ2 ≤ 0`).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Dimension mismatch between a value and the parameter structure.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Floating-point overflow in a model evaluation.
    #[error("overflow evaluating {kind} model at d = {dose}, θ2 = {theta2}")]
    Overflow {
        kind: crate::models::ModelKind,
        dose: f64,
        theta2: f64,
    },

    /// An information matrix was singular where an inverse was required.
    #[error("singular information matrix: {0}")]
    Singular(String),

    /// A defining equation had no sign change over the probe grid.
    #[error("no root: {0}")]
    NoRoot(String),

    /// Threshold-based case selection disagreed with the criterion argmax.
    #[error(
        "case selection inconsistent: selected {selected} with Φ = {selected_phi}, \
         but {best} attains Φ = {best_phi}"
    )]
    CaseSelection {
        selected: &'static str,
        best: &'static str,
        selected_phi: f64,
        best_phi: f64,
    },

    /// Every particle of a swarm decoded to a singular design.
    #[error("swarm infeasible: every particle is singular after initialization ({0})")]
    SwarmInfeasible(String),

    /// The operation is not defined for this structure.
    #[error("unsupported structure: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            detail: detail.into(),
        }
    }
}

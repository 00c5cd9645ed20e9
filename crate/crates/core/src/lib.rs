//! Exact jet arithmetic over the Gaussian rationals, with the machinery
//! built on top of it:
//!
//! - truncated multivariate power series (jets) with tracked reliability,
//! - linear differential operators with jet coefficients, canonical forms,
//!   and a sampled ellipticity screen,
//! - a Picard-style solver for boundary problems that stabilizes exactly
//!   at the working truncation,
//! - divergence certificates: formal series annihilated by an elliptic
//!   operator whose coefficients grow factorially along a witnessed ray,
//! - a Wirtinger view of even-dimensional jets with a d-bar operator and
//!   solution classification,
//! - a one-variable analogue where the same fixed-point loop always
//!   converges, for contrast,
//! - canonical JSON for every persisted artifact.
//!
//! Everything here is exact: coefficients are pairs of big rationals and
//! no float enters any invariant. Degrees above a jet's truncation degree
//! are unknown, not zero, and every operation tracks how far its result
//! can be trusted.

pub mod certificate;
pub mod dbar;
pub mod error;
pub mod io;
pub mod jet;
pub mod linalg;
pub mod multi_index;
pub mod ode1d;
pub mod operator;
pub mod scalar;
pub mod solver;

pub use certificate::{
    assemble_series, baire_point, build_certificate, build_certificate_with, default_boundary,
    divergence_table, factorial_weight, flatness_residual, BairePoint,
    CounterexampleCertificate, DivergenceRow,
};
pub use dbar::{
    classify, dbar_apply, from_wirtinger, separable_sum, to_wirtinger, SolutionClass,
    WirtingerJet, ZeroOneForm,
};
pub use error::{
    CertificateError, ComplexError, JetError, OdeError, OperatorError, ScalarError, SolverError,
};
pub use io::IoError;
pub use jet::{Jet, VanishingOrder};
pub use multi_index::MultiIndex;
pub use ode1d::OdeProblem;
pub use operator::{
    format_direction, CanonicalOperator, DiffOperator, EllipticityReport, EllipticityVerdict,
};
pub use scalar::{factorial, Scalar};
pub use solver::{
    integrate_last, majorant_bound, picard_iterate, solve_boundary_problem, BoundarySolution,
    SolveTrace, SolverConfig,
};

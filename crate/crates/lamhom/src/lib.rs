//! Homogenized elasticity of periodic laminates and ellipticity diagnostics.
//!
//! The crate computes effective (homogenized) stiffness tensors of layered
//! elastic composites and certifies or refutes coercivity properties of the
//! resulting energies:
//!
//! * [`tensors`] — fourth-order stiffness tensors in the orthonormal Mandel
//!   basis, isotropic phases, acoustic matrices, cofactors, laminate profiles;
//! * [`ellipticity`] — strong / very strong ellipticity constants, closed
//!   forms for isotropic tensors and an alternating eigen-iteration for the
//!   general rank-one minimum;
//! * [`translation`] — the translated quadratic form `L M:M + D:Cof(M)` as a
//!   9x9 matrix, per-layer positive-semidefiniteness certificates, admissible
//!   scalar translation intervals, and a feasibility search over `D`;
//! * [`lamination`] — closed-form two-phase lamination, the general
//!   averaged-relation laminate formula, and homogenized-energy sweeps under
//!   `delta`-perturbations of the layers;
//! * [`cell`] — an independent 1-D periodic finite-element oracle for the
//!   cell problem, plus quasi-affinity (null-Lagrangian) residual checks;
//! * [`coercivity`] — sufficient conditions for positive periodic coercivity
//!   and pointwise certificates for loss of strong ellipticity at rank-one
//!   matrices;
//! * [`gutierrez`] — the Gutierrez rank-two lamination construction: parameter
//!   selection, refinement strategies, and a full numerical audit;
//! * [`cli`] — the `lamhom` command-line front end (JSON in, JSON/CSV out).
//!
//! Each capability has a runnable demonstration under `examples/`:
//!
//! ```text
//! cargo run --example ellipticity_closed_forms
//! cargo run --example rank_one_laminate
//! cargo run --example translation_certificate
//! cargo run --example cell_problem
//! cargo run --example per_coercivity
//! cargo run --example gutierrez_construction
//! cargo run --example delta_sweep
//! ```

pub mod cell;
pub mod cli;
pub mod coercivity;
pub mod ellipticity;
pub mod gutierrez;
pub mod lamination;
pub mod report;
pub mod tensors;
pub mod translation;

pub use report::Tolerances;
pub use tensors::{Axis, ElasticTensor, IsotropicPhase, LaminateProfile, Layer};

/// Errors shared by every module: invalid inputs, degenerate systems, and
/// violated construction constraints.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },
    #[error("invalid layer fractions: {detail}")]
    InvalidFractions { detail: String },
    #[error("matrix input is not symmetric: {context}")]
    NotSymmetric { context: &'static str },
    #[error("layer {index} is degenerate: {detail}")]
    DegenerateLayer { index: usize, detail: String },
    #[error("phase is not strongly elliptic: {detail}")]
    NotStronglyElliptic { detail: String },
    #[error("discrete cell energy is unbounded below (Rayleigh quotient {rayleigh:.3e})")]
    UnboundedBelow { rayleigh: f64 },
    #[error("matrix is not rank-one: |Cof(M)|/|M|^2 = {defect:.3e}")]
    NotRankOne { defect: f64 },
    #[error("seed constraint `{name}` violated: {detail}")]
    SeedConstraint { name: &'static str, detail: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

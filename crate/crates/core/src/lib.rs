//! Symmetry-preserving finite differences for u_t = u u_x + u_xxx.
//!
//! The equation admits a four-parameter point symmetry group: space and
//! time translations, the Galilean boost, and an anisotropic dilation.  A
//! six-point implicit stencil carries exactly ten difference invariants of
//! that group, and a scheme written in the invariants alone inherits every
//! symmetry of the continuous equation.  This crate provides
//!
//! * the stencil, its invariants, and the prolonged group action
//!   ([`stencil`], [`symmetry`]),
//! * three discretisations and their continuum-limit diagnostics
//!   ([`schemes`]): the invariant uniform-layer scheme on a self-similar
//!   moving mesh, the classical scheme on a static mesh, and an advected
//!   scheme whose nodes ride the flow,
//! * moving-lattice rules, a banded implicit solver, and a trajectory
//!   integrator ([`lattice`], [`solver`]),
//! * an experiment harness around the exact self-similar solution
//!   u = -x/t with CSV and plot-script output ([`experiments`]),
//! * numerical certification of the headline claims ([`verify`]).

// Positivity guards are written `!(v > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod lattice;
pub mod schemes;
pub mod solver;
pub mod stencil;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use experiments::{
    exact_solution, linf_error, run, sweep, ErrorReport, RunOutput, RunSpec, SweepParameter,
    SweepPoint, SweepSpec, EXACT_REGIME_FLOOR,
};
pub use lattice::{
    advance_evolutive, advance_lagrangian, advance_orthogonal, build_layer, FieldLayer, Mesh,
    MIN_LAYER_NODES,
};
pub use schemes::{
    continuum_limit_check, residual_invariant_form, residual_lagrangian, residual_standard,
    residual_uniform, residual_uniform_with, sample_uniform_stencil, ContinuumLimitReport,
    ContinuumVerdict, DecayingSine, ManufacturedSolution, MeshDrift, RampSolution, Residual,
    SchemeKind,
};
pub use solver::banded::{solve_banded, BandedSystem};
pub use solver::{
    advance_for, integrate, step, BoundaryClosure, StepConfig, StepResult, Trajectory,
    DEFAULT_NEWTON_MAX_ITERS, DEFAULT_NEWTON_TOL,
};
pub use stencil::{
    DiscreteDerivatives, I6Variant, InvariantVector, Spacings, Stencil, STENCIL_DIM,
};
pub use symmetry::{
    invariant_count, prolonged_action, z_matrix, Generator, GroupElement, InvariantCount, Point,
    TangentVector, ZMatrix,
};
pub use verify::{all_passed, run_all, Check, DEFAULT_SEED};

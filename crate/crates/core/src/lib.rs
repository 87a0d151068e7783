//! p-biased Fourier analysis of Boolean functions.
//!
//! Functions are dense `±1` truth tables over at most [`MAX_ARITY`] inputs.
//! The crate computes biased spectra and projections, exact mismatch
//! probabilities and noise sensitivity under correlated input pairs, and the
//! optimal k-junta and linear Boolean approximations of a function. The
//! [`oracle`] module recomputes each of these by direct enumeration.

pub mod approx;
pub mod builtin;
pub mod error;
pub mod export;
pub mod function;
pub mod joint;
pub mod oracle;
pub mod spectrum;
pub mod truth_table;

pub use approx::{
    best_k_junta, best_linear, junta_bounds, weighted_subset_transform, ApproximationClass,
    ApproximationReport, MismatchBounds, WeightedSubsetStats,
};
pub use builtin::{builtin, Builtin};
pub use error::{BfnError, Result};
pub use function::{sign, subsets_of_size, Bias, BooleanFunction, SubsetMask, MAX_ARITY};
pub use joint::{
    cross_expectation, feasible_rho_interval, make_joint, mismatch_probability, noise_sensitivity,
    JointInputModel, JointReport,
};
pub use oracle::OracleConfig;
pub use spectrum::{
    inverse_transform, l1_norm, l2_norm_sq, project, transform, BiasedSpectrum, HypercubeFunction,
    RealTable,
};
pub use truth_table::{emit_truth_table, parse_truth_table};

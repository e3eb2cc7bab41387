//! Random sparse instances: sampling, sparsity, boundary sets, parameters and bounds.

pub mod boundary;
pub mod hard;
pub mod hireal;
pub mod params;
pub mod sampling;
pub mod sparsity;

pub use boundary::{degrees, find_boundary_sets, is_boundary_set, sdr, BoundarySet, BoundaryType};
pub use hard::{generate_hard_instance, records_csv, AttemptRecord, HardDiagnostics, HardOptions, HardOutcome};
pub use hireal::Real;
pub use params::{
    check_conditions, chernoff_bound, delta_prime, derive_parameters, p1, p2, ConditionReport, DeriveRequest, Mode, ParameterSet,
};
pub use sampling::sample_hypergraph;
pub use sparsity::{is_alpha_beta_sparse, sparse_up_to, SparsityMode, SparsityVerdict};

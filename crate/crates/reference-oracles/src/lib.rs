//! Slow, direct ground truth for every distance notion used by the oracle
//! crates. Intended for small graphs only.

mod audit;
mod certificate;
mod exact;
mod faraway;
mod trapezoid;

pub use audit::{audit_well_behaved, witness_path, DepthStats};
pub use certificate::{
    brute_decomposable, brute_expath, expath_certificate, min_transitions, prefix_bound_violations, PathWalk,
};
pub use exact::{exact_replacement, exact_short, replacement_matrix};
pub use faraway::brute_faraway_decomposable;
pub use trapezoid::{far_away, trapezoid, Trapezoid};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),
}

//! Truncated Fock-space computation of the connection from the displacement,
//! squeezing and two-mode operators.

mod space;
mod wz;

pub use space::{single_mode_unitary, two_mode_unitary, FockSpace, OperatorKind, OperatorSet};
pub use wz::{
    kind_of, oracle_domain_point, wz_connection_at_cutoff, wz_connection_numeric, OracleConfig, OracleConnection,
    OracleValue, PhaseGauge, CONVERGENCE_MARGIN,
};

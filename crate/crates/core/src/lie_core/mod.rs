//! Small dense complex linear algebra and real Lie-algebra machinery.

mod expm;
mod matrix;
mod span;

pub use expm::{mat_exp, mat_exp_by_sectors, mat_log_unitary, SectorExp};
pub use matrix::{c, cis, ComplexMatrix, I};
pub use span::{
    block_coupling, block_preserving, bracket, bracket_closure, center_dimension, real_span_dimension, Partition,
    SpanBasis, DEFAULT_RANK_TOL,
};

//! Parallel transport around piecewise-linear loops in parameter space.

mod path;
mod transport;

pub use path::{commutator_loop, rect_loop, LoopFile, LoopPath, Space, CLOSURE_TOL};
pub use transport::{
    small_loop_curvature, small_loop_curvature_with, transport, AnalyticConnection, Connection, HolonomyResult,
    COMMUTATOR_LOOP_SIGN, DEFAULT_STEPS_PER_SEGMENT, HOLONOMY_CURVATURE_SIGN, MAX_UNITARITY_DEFECT,
};

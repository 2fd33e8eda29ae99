//! Closed-form connection, curvature, covariant-derivative and bracket
//! matrices, their numeric re-derivation, and the convention record.

mod brackets;
mod calibration;
pub(crate) mod connection;
mod curvature;
mod numeric;
mod params;
pub mod printed;

pub use brackets::{
    bracket_analytic, bracket_analytic_with, bracket_direct, bracket_unit, double_bracket_delta, BracketCoefficients,
    BracketLabel,
};
pub use calibration::{
    calibrate_conventions, calibrate_with, CalibrationOptions, ConventionRecord, Correction, Evidence,
    COMPOSITION_CONVENTION,
};
pub use connection::{connection, connection_embedded, embed_native, embed_q1, embed_q2};
pub use curvature::{
    covariant_derivative_analytic, curvature_analytic, curvature_embedded, CovariantLabel, CurvatureLabel, Field,
};
pub use numeric::{
    covariant_derivative_numeric, covariant_derivative_with, curvature_from_connection, curvature_numeric, FiniteDiff,
};
pub use params::{CoordName, ParamPoint, Subsystem};

use crate::lie_core::ComplexMatrix;

/// A named generator of the control algebra, evaluated in the 4x4 space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Curvature(CurvatureLabel),
    Covariant(CovariantLabel),
    Bracket(BracketLabel),
}

impl Generator {
    pub fn eval_embedded(self, p: &ParamPoint) -> ComplexMatrix {
        match self {
            Generator::Curvature(l) => curvature_embedded(p, l),
            Generator::Covariant(l) => covariant_derivative_analytic(p, l),
            Generator::Bracket(l) => bracket_analytic(p, l),
        }
    }

    pub fn name(self) -> String {
        match self {
            Generator::Curvature(l) => match l.subsystem() {
                Subsystem::Qubit1 => format!("{l} (x) 1"),
                Subsystem::Qubit2 => format!("1 (x) {l}"),
                Subsystem::Interaction => l.name(),
            },
            Generator::Covariant(l) => l.name().to_string(),
            Generator::Bracket(l) => l.name().to_string(),
        }
    }
}

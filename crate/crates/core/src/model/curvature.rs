//! Closed-form curvature components and covariant derivatives.

use std::fmt;
use std::str::FromStr;

use super::connection::{embed_native, QubitCoords};
use super::params::{CoordName, ParamPoint, Subsystem};
use crate::lie_core::{c, cis, ComplexMatrix, I};
use crate::{Error, Result};

/// The twelve curvature components with closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvatureLabel {
    X1Y1,
    R1Theta1,
    Y1R1,
    X1R1,
    X2Y2,
    R4Theta4,
    Y2R4,
    X2R4,
    R2R3,
    R2Theta2,
    R2Theta3,
    R3Theta3,
}

impl CurvatureLabel {
    pub const ALL: [CurvatureLabel; 12] = [
        CurvatureLabel::X1Y1,
        CurvatureLabel::R1Theta1,
        CurvatureLabel::Y1R1,
        CurvatureLabel::X1R1,
        CurvatureLabel::X2Y2,
        CurvatureLabel::R4Theta4,
        CurvatureLabel::Y2R4,
        CurvatureLabel::X2R4,
        CurvatureLabel::R2R3,
        CurvatureLabel::R2Theta2,
        CurvatureLabel::R2Theta3,
        CurvatureLabel::R3Theta3,
    ];

    /// The ordered coordinate pair `(i, j)` of `F_ij`.
    pub fn coords(self) -> (CoordName, CoordName) {
        use CoordName::*;
        use CurvatureLabel as L;
        match self {
            L::X1Y1 => (X1, Y1),
            L::R1Theta1 => (R1, Theta1),
            L::Y1R1 => (Y1, R1),
            L::X1R1 => (X1, R1),
            L::X2Y2 => (X2, Y2),
            L::R4Theta4 => (R4, Theta4),
            L::Y2R4 => (Y2, R4),
            L::X2R4 => (X2, R4),
            L::R2R3 => (R2, R3),
            L::R2Theta2 => (R2, Theta2),
            L::R2Theta3 => (R2, Theta3),
            L::R3Theta3 => (R3, Theta3),
        }
    }

    pub fn subsystem(self) -> Subsystem {
        self.coords().0.subsystem()
    }

    /// Looks up the label for a coordinate pair in either order; the sign is
    /// `-1` when the pair is reversed (`F_ji = -F_ij`).
    pub fn for_pair(a: CoordName, b: CoordName) -> Option<(CurvatureLabel, f64)> {
        CurvatureLabel::ALL.into_iter().find_map(|l| {
            let (i, j) = l.coords();
            if (i, j) == (a, b) {
                Some((l, 1.0))
            } else if (j, i) == (a, b) {
                Some((l, -1.0))
            } else {
                None
            }
        })
    }

    pub fn name(self) -> String {
        let (i, j) = self.coords();
        format!("F_{}{}", i.name(), j.name())
    }
}

impl fmt::Display for CurvatureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The three covariant-derivative generators of the interaction block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CovariantLabel {
    /// `D_{theta2} F_{r2 theta2}`
    DTheta2,
    /// `D_{r2} F_{r2 theta2}`
    DR2,
    /// `D_{theta2} D_{theta2} F_{r2 theta2}`
    DTheta2DTheta2,
}

impl CovariantLabel {
    pub const ALL: [CovariantLabel; 3] = [
        CovariantLabel::DTheta2,
        CovariantLabel::DR2,
        CovariantLabel::DTheta2DTheta2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CovariantLabel::DTheta2 => "D_theta2 F_r2theta2",
            CovariantLabel::DR2 => "D_r2 F_r2theta2",
            CovariantLabel::DTheta2DTheta2 => "D_theta2 D_theta2 F_r2theta2",
        }
    }

    /// Differentiation direction and the field it acts on.
    pub fn decompose(self) -> (CoordName, Field) {
        match self {
            CovariantLabel::DTheta2 => (CoordName::Theta2, Field::Curvature(CurvatureLabel::R2Theta2)),
            CovariantLabel::DR2 => (CoordName::R2, Field::Curvature(CurvatureLabel::R2Theta2)),
            CovariantLabel::DTheta2DTheta2 => (CoordName::Theta2, Field::Covariant(CovariantLabel::DTheta2)),
        }
    }
}

impl fmt::Display for CovariantLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An adjoint-valued field with a closed form: a curvature component or a
/// covariant derivative of one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Curvature(CurvatureLabel),
    Covariant(CovariantLabel),
}

impl Field {
    pub fn subsystem(self) -> Subsystem {
        match self {
            Field::Curvature(l) => l.subsystem(),
            Field::Covariant(_) => Subsystem::Interaction,
        }
    }

    pub fn eval(self, p: &ParamPoint) -> ComplexMatrix {
        match self {
            Field::Curvature(l) => curvature_analytic(p, l),
            Field::Covariant(l) => covariant_derivative_analytic(p, l),
        }
    }

    pub fn name(self) -> String {
        match self {
            Field::Curvature(l) => l.name(),
            Field::Covariant(l) => l.name().to_string(),
        }
    }
}

impl FromStr for CurvatureLabel {
    type Err = Error;

    /// Parses `F_x1y1`, `x1y1`, `x1,y1` and similar spellings.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .trim_start_matches("F_")
            .trim_start_matches("f_")
            .chars()
            .filter(|ch| !matches!(ch, ',' | ' ' | '_'))
            .collect::<String>()
            .replace('θ', "theta");
        CurvatureLabel::ALL
            .into_iter()
            .find(|l| {
                let (i, j) = l.coords();
                format!("{}{}", i.name(), j.name()) == key
            })
            .ok_or_else(|| Error::UnknownLabel(format!("curvature '{s}'")))
    }
}

pub(crate) fn qubit_curvature(q: QubitCoords, label: CurvatureLabel) -> ComplexMatrix {
    use CurvatureLabel as L;
    let (ch, sh) = (q.ch(), q.sh());
    match label {
        L::X1Y1 | L::X2Y2 => ComplexMatrix::real_diagonal(&[0.0, 1.0], c(0.0, 4.0)),
        L::R1Theta1 | L::R4Theta4 => ComplexMatrix::real_diagonal(&[1.0, 3.0], I * (4.0 * q.r).sinh()),
        L::Y1R1 | L::Y2R4 => ComplexMatrix::sparse(
            2,
            &[
                (0, 1, c(0.0, -2.0) * (cis(-q.theta) * ch + sh)),
                (1, 0, c(0.0, -2.0) * (cis(q.theta) * ch + sh)),
            ],
        ),
        L::X1R1 | L::X2R4 => ComplexMatrix::sparse(
            2,
            &[
                (0, 1, -2.0 * (cis(-q.theta) * ch - sh)),
                (1, 0, 2.0 * (cis(q.theta) * ch - sh)),
            ],
        ),
        _ => unreachable!("not a single-qubit curvature"),
    }
}

fn interaction_curvature(p: &ParamPoint, label: CurvatureLabel) -> ComplexMatrix {
    use CurvatureLabel as L;
    let sh2 = (2.0 * p.r2).sinh();
    let sin3 = (2.0 * p.r3).sin();
    match label {
        L::R2R3 => ComplexMatrix::sparse(
            4,
            &[
                (1, 2, -cis(-p.theta3) * (2.0 * sh2)),
                (2, 1, cis(p.theta3) * (2.0 * sh2)),
            ],
        ),
        L::R2Theta2 => ComplexMatrix::real_diagonal(&[0.0, 1.0, 1.0, 2.0], I * (2.0 * sh2)),
        L::R2Theta3 => {
            let s = I * (sin3 * sh2);
            ComplexMatrix::sparse(4, &[(1, 2, cis(-p.theta3) * s), (2, 1, cis(p.theta3) * s)])
        }
        L::R3Theta3 => ComplexMatrix::real_diagonal(&[0.0, -1.0, 1.0, 0.0], I * (sin3 * sh2 * sh2)),
        _ => unreachable!("not an interaction curvature"),
    }
}

/// Closed-form curvature `F_ij` at `p`, in native (2x2 or 4x4) form.
pub fn curvature_analytic(p: &ParamPoint, label: CurvatureLabel) -> ComplexMatrix {
    match label.subsystem() {
        Subsystem::Interaction => interaction_curvature(p, label),
        which => qubit_curvature(QubitCoords::of(p, which), label),
    }
}

/// Closed-form curvature embedded in the 4x4 two-qubit space.
pub fn curvature_embedded(p: &ParamPoint, label: CurvatureLabel) -> ComplexMatrix {
    embed_native(&curvature_analytic(p, label), label.subsystem())
}

/// Closed-form covariant derivative of `F_{r2 theta2}`.
pub fn covariant_derivative_analytic(p: &ParamPoint, label: CovariantLabel) -> ComplexMatrix {
    let sh2 = (2.0 * p.r2).sinh();
    let ch2 = (2.0 * p.r2).cosh();
    let (e_minus, e_plus) = (cis(-p.theta2), cis(p.theta2));
    match label {
        CovariantLabel::DTheta2 => {
            let s = 2.0 * sh2 * sh2;
            ComplexMatrix::sparse(4, &[(0, 3, -e_minus * s), (3, 0, e_plus * s)])
        }
        CovariantLabel::DR2 => {
            let s = I * (4.0 * sh2);
            let mut m = ComplexMatrix::sparse(4, &[(0, 3, -e_minus * s), (3, 0, -e_plus * s)]);
            m += &ComplexMatrix::real_diagonal(&[0.0, 1.0, 1.0, 2.0], I * (4.0 * ch2));
            m
        }
        CovariantLabel::DTheta2DTheta2 => {
            let s = I * (2.0 * sh2 * sh2 * ch2);
            let mut m = ComplexMatrix::sparse(4, &[(0, 3, e_minus * s), (3, 0, e_plus * s)]);
            m += &ComplexMatrix::real_diagonal(&[1.0, 0.0, 0.0, -1.0], I * (2.0 * sh2.powi(3)));
            m
        }
    }
}

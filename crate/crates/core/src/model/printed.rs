//! The connection, curvature and bracket tables exactly as originally typeset.
//!
//! These are kept for comparison only. They differ from the shipped forms in:
//! - the single-qubit off-diagonal phases (`e^{i theta}` and `e^{-i theta}`
//!   swapped throughout, which also propagates into the brackets),
//! - `A_{y2}` carrying `cosh 2 r2` in its (0,1) entry,
//! - the 4x4 printing of `1 ⊗ F_{x2 y2}` with a stray (0,1) entry,
//! - the `sinh^3 r2` diagonal of `D_theta2 D_theta2 F_{r2 theta2}`.

use num_complex::Complex64;

use super::brackets::{pattern_q1, pattern_q2, BracketLabel};
use super::connection::{connection, QubitCoords, QubitDir};
use super::curvature::{covariant_derivative_analytic, curvature_analytic, CovariantLabel, CurvatureLabel};
use super::params::{CoordName, ParamPoint, Subsystem};
use crate::lie_core::{c, cis, ComplexMatrix, I};

fn printed_qubit_connection(q: QubitCoords, dir: QubitDir, ch_upper: f64) -> ComplexMatrix {
    let (ch, sh) = (q.ch(), q.sh());
    match dir {
        QubitDir::X => ComplexMatrix::sparse(
            2,
            &[
                (0, 0, c(0.0, -q.y)),
                (0, 1, -(ch - cis(q.theta) * sh)),
                (1, 0, ch - cis(-q.theta) * sh),
                (1, 1, c(0.0, -q.y)),
            ],
        ),
        QubitDir::Y => ComplexMatrix::sparse(
            2,
            &[
                (0, 0, c(0.0, q.x)),
                (0, 1, I * (ch_upper + cis(q.theta) * sh)),
                (1, 0, I * (ch + cis(-q.theta) * sh)),
                (1, 1, c(0.0, q.x)),
            ],
        ),
        QubitDir::R => ComplexMatrix::zeros(2),
        QubitDir::Theta => ComplexMatrix::real_diagonal(&[1.0, 3.0], I * (0.25 * ((4.0 * q.r).cosh() - 1.0))),
    }
}

/// Connection component as printed.
pub fn printed_connection(p: &ParamPoint, coord: CoordName) -> ComplexMatrix {
    match coord.subsystem() {
        Subsystem::Interaction => connection(p, coord),
        which => {
            let q = QubitCoords::of(p, which);
            let ch_upper = if which == Subsystem::Qubit2 {
                (2.0 * p.r2).cosh()
            } else {
                q.ch()
            };
            printed_qubit_connection(q, QubitDir::of(coord).expect("single-qubit coordinate"), ch_upper)
        }
    }
}

/// Single-qubit curvature in 2x2 form as printed.
pub fn printed_curvature(p: &ParamPoint, label: CurvatureLabel) -> ComplexMatrix {
    use CurvatureLabel as L;
    let which = label.subsystem();
    if which == Subsystem::Interaction {
        return curvature_analytic(p, label);
    }
    let q = QubitCoords::of(p, which);
    let (ch, sh) = (q.ch(), q.sh());
    match label {
        L::Y1R1 | L::Y2R4 => ComplexMatrix::sparse(
            2,
            &[
                (0, 1, c(0.0, -2.0) * (cis(q.theta) * ch + sh)),
                (1, 0, c(0.0, -2.0) * (cis(-q.theta) * ch + sh)),
            ],
        ),
        L::X1R1 | L::X2R4 => ComplexMatrix::sparse(
            2,
            &[
                (0, 1, -2.0 * (cis(q.theta) * ch - sh)),
                (1, 0, 2.0 * (cis(-q.theta) * ch - sh)),
            ],
        ),
        _ => curvature_analytic(p, label),
    }
}

/// Curvature in the printed 4x4 embedded form.
pub fn printed_curvature_embedded(p: &ParamPoint, label: CurvatureLabel) -> ComplexMatrix {
    use CurvatureLabel as L;
    match label {
        L::X2Y2 => ComplexMatrix::sparse(4, &[(0, 1, c(0.0, 4.0)), (3, 3, c(0.0, 4.0))]),
        _ => match label.subsystem() {
            Subsystem::Qubit1 => printed_curvature(p, label).kron(&ComplexMatrix::identity(2)),
            Subsystem::Qubit2 => ComplexMatrix::identity(2).kron(&printed_curvature(p, label)),
            Subsystem::Interaction => curvature_analytic(p, label),
        },
    }
}

/// Covariant derivative as printed.
pub fn printed_covariant(p: &ParamPoint, label: CovariantLabel) -> ComplexMatrix {
    match label {
        CovariantLabel::DTheta2DTheta2 => {
            let sh2 = (2.0 * p.r2).sinh();
            let ch2 = (2.0 * p.r2).cosh();
            let s = I * (2.0 * sh2 * sh2 * ch2);
            let mut m = ComplexMatrix::sparse(4, &[(0, 3, cis(-p.theta2) * s), (3, 0, cis(p.theta2) * s)]);
            m += &ComplexMatrix::real_diagonal(&[1.0, 0.0, 0.0, -1.0], I * (2.0 * p.r2.sinh().powi(3)));
            m
        }
        _ => covariant_derivative_analytic(p, label),
    }
}

/// Bracket closed form as printed.
pub fn printed_bracket(p: &ParamPoint, label: BracketLabel) -> ComplexMatrix {
    let (c1, s1) = ((2.0 * p.r1).cosh(), (2.0 * p.r1).sinh());
    let (c4, s4) = ((2.0 * p.r4).cosh(), (2.0 * p.r4).sinh());
    let sh = (2.0 * p.r2).sinh();
    let sn = (2.0 * p.r3).sin();
    let (t1, t3, t4) = (p.theta1, p.theta3, p.theta4);
    let e = |phi: f64| -> Complex64 { cis(phi) };
    match label {
        BracketLabel::X1R1R2R3 => pattern_q1(
            1.0,
            e(t1 + t3) * (4.0 * sh) * (c1 - e(-t1) * s1),
            e(-(t1 + t3)) * (4.0 * sh) * (c1 - e(t1) * s1),
        ),
        BracketLabel::X2R4R2R3 => pattern_q2(
            e(-(t3 - t4)) * (4.0 * sh) * (c4 - e(-t4) * s4),
            e(t3 - t4) * (4.0 * sh) * (c4 - e(t4) * s4),
        ),
        BracketLabel::Y1R1R2Theta3 => pattern_q1(
            -1.0,
            e(t1 + t3) * (2.0 * sn * sh) * (c1 + e(-t1) * s1),
            e(-(t1 + t3)) * (2.0 * sn * sh) * (c1 + e(t1) * s1),
        ),
        BracketLabel::Y2R4R2Theta3 => pattern_q2(
            e(-(t3 - t4)) * (2.0 * sn * sh) * (c4 + e(-t4) * s4),
            e(t3 - t4) * (2.0 * sn * sh) * (c4 + e(t4) * s4),
        ),
        BracketLabel::Double => {
            let delta = 16.0
                * sh
                * (-s1 * ((t3 - t4).cos() * c4 + t3.cos() * s4)
                    + c1 * ((t1 + t3 - t4).cos() * c4 + (t1 + t3).cos() * s4));
            ComplexMatrix::real_diagonal(&[-1.0, 1.0, 1.0, -1.0], c(0.0, delta))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::bracket;
    use crate::model::brackets::bracket_analytic;
    use crate::model::connection::connection as shipped;

    fn mirror(p: &ParamPoint) -> ParamPoint {
        p.with(CoordName::Theta1, -p.theta1).with(CoordName::Theta4, -p.theta4)
    }

    #[test]
    fn printed_single_qubit_tables_are_phase_mirrors() {
        let p = ParamPoint::reference();
        for coord in [CoordName::X1, CoordName::Y1, CoordName::X2] {
            let d = (&printed_connection(&p, coord) - &shipped(&mirror(&p), coord)).max_abs();
            assert!(d < 1e-14, "{coord}");
        }
        for l in CurvatureLabel::ALL {
            let d = (&printed_curvature(&p, l) - &curvature_analytic(&mirror(&p), l)).max_abs();
            assert!(d < 1e-14, "{l}");
        }
        for l in BracketLabel::ALL {
            let d = (&printed_bracket(&p, l) - &bracket_analytic(&mirror(&p), l)).max_abs();
            assert!(d < 1e-12, "{l}");
        }
    }

    #[test]
    fn printed_y2_uses_r2() {
        let p = ParamPoint::reference();
        let a = printed_connection(&p, CoordName::Y2);
        let b = shipped(&mirror(&p), CoordName::Y2);
        let expected = (2.0 * p.r2).cosh() - (2.0 * p.r4).cosh();
        assert!(((a[(0, 1)] - b[(0, 1)]) - c(0.0, expected)).norm() < 1e-14);
        assert!(a.anti_hermitian_defect() > 0.1);
    }

    #[test]
    fn printed_brackets_are_self_consistent() {
        let p = ParamPoint::reference();
        let f = |l| printed_curvature_embedded(&p, l);
        let d = bracket(&f(CurvatureLabel::X1R1), &f(CurvatureLabel::R2R3)).unwrap();
        assert!((&d - &printed_bracket(&p, BracketLabel::X1R1R2R3)).max_abs() < 1e-10);
    }

    #[test]
    fn printed_x2y2_embedding_is_not_a_kronecker_product() {
        let p = ParamPoint::reference();
        let printed = printed_curvature_embedded(&p, CurvatureLabel::X2Y2);
        let kron = ComplexMatrix::identity(2).kron(&curvature_analytic(&p, CurvatureLabel::X2Y2));
        assert!((&printed - &kron).max_abs() > 3.9);
        assert!(printed.anti_hermitian_defect() > 1.0);
    }

    #[test]
    fn printed_double_derivative_diagonal() {
        let p = ParamPoint::reference();
        let d = printed_covariant(&p, CovariantLabel::DTheta2DTheta2);
        assert!((d[(0, 0)] - c(0.0, 2.0 * 0.7f64.sinh().powi(3))).norm() < 1e-14);
    }
}

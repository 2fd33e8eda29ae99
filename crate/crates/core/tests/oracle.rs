mod common;

use common::random_points;
use hqc_core::fock_oracle::{
    oracle_domain_point, wz_connection_at_cutoff, wz_connection_numeric, OperatorKind, OracleConfig, OracleConnection,
    PhaseGauge,
};
use hqc_core::holonomy::{rect_loop, transport, AnalyticConnection, Space};
use hqc_core::lie_core::ComplexMatrix;
use hqc_core::model::{
    covariant_derivative_analytic, covariant_derivative_with, curvature_analytic, curvature_embedded,
    curvature_from_connection, printed, CoordName, CovariantLabel, CurvatureLabel, Field, FiniteDiff, ParamPoint,
    Subsystem,
};

fn oracle(p: &ParamPoint, coord: CoordName) -> ComplexMatrix {
    let cutoff = match coord.subsystem() {
        Subsystem::Interaction => 24,
        _ => 48,
    };
    wz_connection_at_cutoff(p, coord, cutoff, 1e-5).unwrap()
}

#[test]
fn oracle_connection_is_anti_hermitian() {
    for p in random_points(3, 3, 0.1, 0.3, 0.3) {
        for coord in CoordName::ALL {
            let kind = match coord.subsystem() {
                Subsystem::Interaction => OperatorKind::TwoMode,
                _ => OperatorKind::SingleMode,
            };
            let v = wz_connection_numeric(kind, &p, coord, &OracleConfig::for_kind(kind)).unwrap();
            assert!(v.matrix.anti_hermitian_defect() <= 1e-6, "A_{coord}");
            assert!(
                v.truncation_weight < 1e-12,
                "A_{coord} weight {:e}",
                v.truncation_weight
            );
        }
    }
}

#[test]
fn oracle_rejects_mismatched_kind() {
    let p = ParamPoint::reference();
    assert!(wz_connection_numeric(OperatorKind::TwoMode, &p, CoordName::X1, &OracleConfig::two_mode()).is_err());
}

#[test]
fn unconverged_cutoff_is_reported() {
    // Radii near 1 push weight past a cutoff of 8.
    let p = ParamPoint::reference()
        .with(CoordName::R1, 1.0)
        .with(CoordName::X1, 1.0);
    let cfg = OracleConfig {
        cutoff: 8,
        ..OracleConfig::single_mode()
    };
    let err = wz_connection_numeric(OperatorKind::SingleMode, &p, CoordName::X1, &cfg).unwrap_err();
    assert!(
        matches!(
            err,
            hqc_core::Error::CutoffNotConverged {
                cutoff: 8,
                next: 16,
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn gauge_phase_cancels_on_closed_loops() {
    let p = oracle_domain_point(&ParamPoint::reference());
    let l = rect_loop(&p, CoordName::X1, CoordName::Y1, 0.05, 0.05).unwrap();
    let plain = OracleConnection::new(Subsystem::Qubit1, 32, 1e-5).unwrap();
    let gauge = PhaseGauge {
        basis: 0,
        slope: {
            let mut s = [0.0; 12];
            s[CoordName::X1.index()] = 1.3;
            s[CoordName::Y1.index()] = -0.4;
            s
        },
    };
    let gauged = plain.clone().with_gauge(gauge).unwrap();
    let g = transport(&l, 12, &plain).unwrap().unitary;
    let gg = transport(&l, 12, &gauged).unwrap().unitary;
    let phase = gauge.matrix(&p, 2);
    let expected = &(&phase.adjoint() * &g) * &phase;
    assert!((&gg - &expected).max_abs() <= 1e-6);
    for k in 0..2 {
        assert!((gg[(k, k)] - g[(k, k)]).norm() <= 1e-6);
    }
    let analytic = transport(&l, 12, &AnalyticConnection(Space::Q1)).unwrap().unitary;
    assert!((&g - &analytic).max_abs() <= 1e-6);
}

#[test]
fn oracle_curvature_adjudicates_x2y2() {
    let p = oracle_domain_point(&ParamPoint::reference());
    let fd = FiniteDiff::new(1e-3, 1).unwrap();
    let f = curvature_from_connection(oracle, &p, CoordName::X2, CoordName::Y2, &fd, 1.0).unwrap();
    let shipped = curvature_analytic(&p, CurvatureLabel::X2Y2);
    assert!((&f - &shipped).max_abs() <= 1e-4);
    let emb = hqc_core::model::embed_q2(&f).unwrap();
    let printed_emb = printed::printed_curvature_embedded(&p, CurvatureLabel::X2Y2);
    assert!((&emb - &curvature_embedded(&p, CurvatureLabel::X2Y2)).max_abs() <= 1e-4);
    assert!((&emb - &printed_emb).max_abs() >= 1e-2);
}

#[test]
fn oracle_curvature_fixes_the_bracket_weight() {
    let p = oracle_domain_point(&ParamPoint::reference());
    let fd = FiniteDiff::new(1e-3, 1).unwrap();
    // F_x1y1 is pure bracket term: A_x1 does not depend on y1 and vice versa.
    let (i, j) = CurvatureLabel::X1Y1.coords();
    let full = curvature_from_connection(oracle, &p, i, j, &fd, 1.0).unwrap();
    let half = curvature_from_connection(oracle, &p, i, j, &fd, 0.5).unwrap();
    let target = curvature_analytic(&p, CurvatureLabel::X1Y1);
    assert!((&full - &target).max_abs() <= 1e-4);
    assert!((&half - &target).max_abs() >= 1.0);
    let (i, j) = CurvatureLabel::X1R1.coords();
    let full = curvature_from_connection(oracle, &p, i, j, &fd, 1.0).unwrap();
    assert!((&full - &curvature_analytic(&p, CurvatureLabel::X1R1)).max_abs() <= 1e-4);
    assert!((&printed::printed_curvature(&p, CurvatureLabel::X1R1) - &full).max_abs() >= 1e-2);
}

#[test]
fn oracle_covariant_derivative_adjudicates_the_sinh_cube() {
    let p = oracle_domain_point(&ParamPoint::reference());
    let fd = FiniteDiff::new(1e-3, 1).unwrap();
    let field = |q: &ParamPoint| Field::Covariant(CovariantLabel::DTheta2).eval(q);
    let dd = covariant_derivative_with(oracle, field, &p, CoordName::Theta2, &fd).unwrap();
    let shipped = covariant_derivative_analytic(&p, CovariantLabel::DTheta2DTheta2);
    let as_printed = printed::printed_covariant(&p, CovariantLabel::DTheta2DTheta2);
    let tol = 1e-3;
    assert!((&dd - &shipped).max_abs() <= tol);
    assert!((&dd - &as_printed).max_abs() >= 100.0 * tol);
}

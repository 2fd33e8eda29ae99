//! Local Wilczek-Zee connection components.
//!
//! Single-qubit components are returned in 2x2 form over `{|0>, |1>}`;
//! interaction components in 4x4 form over `{|00>, |01>, |10>, |11>}`.
//! The single-qubit off-diagonal phases follow the frame `D(lambda) S(mu)|rho>`
//! computed in the Fock space (see [`crate::model::printed`] for the
//! table as originally typeset, whose phases are conjugated).

use super::params::{CoordName, ParamPoint, Subsystem};
use crate::lie_core::{c, cis, ComplexMatrix, I};

/// Coordinates of one single-qubit block: `lambda = x + i y`, `mu = r e^{i theta}`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct QubitCoords {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub theta: f64,
}

impl QubitCoords {
    pub fn of(p: &ParamPoint, which: Subsystem) -> Self {
        match which {
            Subsystem::Qubit1 => Self {
                x: p.x1,
                y: p.y1,
                r: p.r1,
                theta: p.theta1,
            },
            Subsystem::Qubit2 => Self {
                x: p.x2,
                y: p.y2,
                r: p.r4,
                theta: p.theta4,
            },
            Subsystem::Interaction => panic!("interaction block has no qubit coordinates"),
        }
    }

    pub fn ch(&self) -> f64 {
        (2.0 * self.r).cosh()
    }

    pub fn sh(&self) -> f64 {
        (2.0 * self.r).sinh()
    }
}

/// Which of the four single-qubit directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum QubitDir {
    X,
    Y,
    R,
    Theta,
}

impl QubitDir {
    pub fn of(c: CoordName) -> Option<Self> {
        use CoordName::*;
        match c {
            X1 | X2 => Some(QubitDir::X),
            Y1 | Y2 => Some(QubitDir::Y),
            R1 | R4 => Some(QubitDir::R),
            Theta1 | Theta4 => Some(QubitDir::Theta),
            _ => None,
        }
    }
}

pub(crate) fn qubit_connection(q: QubitCoords, dir: QubitDir) -> ComplexMatrix {
    let (ch, sh) = (q.ch(), q.sh());
    match dir {
        QubitDir::X => ComplexMatrix::sparse(
            2,
            &[
                (0, 0, c(0.0, -q.y)),
                (0, 1, -(ch - cis(-q.theta) * sh)),
                (1, 0, ch - cis(q.theta) * sh),
                (1, 1, c(0.0, -q.y)),
            ],
        ),
        QubitDir::Y => ComplexMatrix::sparse(
            2,
            &[
                (0, 0, c(0.0, q.x)),
                (0, 1, I * (ch + cis(-q.theta) * sh)),
                (1, 0, I * (ch + cis(q.theta) * sh)),
                (1, 1, c(0.0, q.x)),
            ],
        ),
        QubitDir::R => ComplexMatrix::zeros(2),
        QubitDir::Theta => ComplexMatrix::real_diagonal(&[1.0, 3.0], I * (0.25 * ((4.0 * q.r).cosh() - 1.0))),
    }
}

fn interaction_connection(p: &ParamPoint, coord: CoordName) -> ComplexMatrix {
    let ch2 = (2.0 * p.r2).cosh();
    let sh2 = (2.0 * p.r2).sinh();
    match coord {
        CoordName::R2 => ComplexMatrix::sparse(4, &[(0, 3, -cis(-p.theta2)), (3, 0, cis(p.theta2))]),
        CoordName::R3 => {
            // 2 cosh^2 r2 - 1 = cosh 2 r2
            ComplexMatrix::sparse(4, &[(1, 2, -cis(-p.theta3) * ch2), (2, 1, cis(p.theta3) * ch2)])
        }
        CoordName::Theta2 => {
            let off = I * (0.5 * sh2);
            let mut m = ComplexMatrix::sparse(4, &[(0, 3, cis(-p.theta2) * off), (3, 0, cis(p.theta2) * off)]);
            m += &ComplexMatrix::real_diagonal(&[1.0, 2.0, 2.0, 3.0], I * (0.5 * (ch2 - 1.0)));
            m
        }
        CoordName::Theta3 => {
            let off = I * (0.5 * ch2 * (2.0 * p.r3).sin());
            let mut m = ComplexMatrix::sparse(4, &[(1, 2, cis(-p.theta3) * off), (2, 1, cis(p.theta3) * off)]);
            m += &ComplexMatrix::real_diagonal(&[0.0, 1.0, -1.0, 0.0], I * p.r3.sin().powi(2));
            m
        }
        _ => unreachable!("not an interaction coordinate"),
    }
}

/// Connection component `A_c` at `p` in its native block form.
pub fn connection(p: &ParamPoint, coord: CoordName) -> ComplexMatrix {
    match coord.subsystem() {
        Subsystem::Interaction => interaction_connection(p, coord),
        which => qubit_connection(
            QubitCoords::of(p, which),
            QubitDir::of(coord).expect("single-qubit coordinate"),
        ),
    }
}

/// `m ⊗ Id_2`: qubit 1 is the left Kronecker factor.
pub fn embed_q1(m: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    check_two(m)?;
    Ok(m.kron(&ComplexMatrix::identity(2)))
}

/// `Id_2 ⊗ m`.
pub fn embed_q2(m: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    check_two(m)?;
    Ok(ComplexMatrix::identity(2).kron(m))
}

fn check_two(m: &ComplexMatrix) -> crate::Result<()> {
    if m.dim() != 2 {
        return Err(crate::Error::Shape(format!(
            "single-qubit embedding expects a 2x2 matrix, got {0}x{0}",
            m.dim()
        )));
    }
    Ok(())
}

/// Embeds a native-form matrix of `which` into the 4x4 two-qubit space.
pub fn embed_native(m: &ComplexMatrix, which: Subsystem) -> ComplexMatrix {
    match which {
        Subsystem::Qubit1 => embed_q1(m).expect("2x2 block"),
        Subsystem::Qubit2 => embed_q2(m).expect("2x2 block"),
        Subsystem::Interaction => m.clone(),
    }
}

/// Connection component embedded in the 4x4 two-qubit space.
pub fn connection_embedded(p: &ParamPoint, coord: CoordName) -> ComplexMatrix {
    embed_native(&connection(p, coord), coord.subsystem())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::{block_preserving, Partition};

    #[test]
    fn radial_components_vanish() {
        let p = ParamPoint::reference();
        assert_eq!(connection(&p, CoordName::R1).max_abs(), 0.0);
        assert_eq!(connection(&p, CoordName::R4).max_abs(), 0.0);
        let p0 = p.with(CoordName::R1, 0.0);
        assert_eq!(connection(&p0, CoordName::Theta1).max_abs(), 0.0);
    }

    #[test]
    fn x1_component_at_origin() {
        let a = connection(&ParamPoint::origin(), CoordName::X1);
        let expected = ComplexMatrix::sparse(2, &[(0, 1, c(-1.0, 0.0)), (1, 0, c(1.0, 0.0))]);
        assert!((&a - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn all_components_anti_hermitian() {
        let p = ParamPoint::reference();
        for coord in CoordName::ALL {
            assert!(connection(&p, coord).anti_hermitian_defect() < 1e-12, "{coord}");
        }
    }

    #[test]
    fn embeddings() {
        let d = ComplexMatrix::real_diagonal(&[0.0, 1.0], c(0.0, 4.0));
        assert_eq!(
            embed_q1(&d).unwrap(),
            ComplexMatrix::real_diagonal(&[0.0, 0.0, 1.0, 1.0], c(0.0, 4.0))
        );
        let d13 = ComplexMatrix::real_diagonal(&[1.0, 3.0], c(1.0, 0.0));
        assert_eq!(
            embed_q2(&d13).unwrap(),
            ComplexMatrix::real_diagonal(&[1.0, 3.0, 1.0, 3.0], c(1.0, 0.0))
        );
        assert_eq!(
            embed_q1(&ComplexMatrix::identity(2)).unwrap(),
            ComplexMatrix::identity(4)
        );
        assert!(embed_q1(&ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn embedded_qubit_connection_couples_parity_sectors() {
        let a = connection_embedded(&ParamPoint::reference(), CoordName::X1);
        assert!(a[(0, 2)].norm() > 0.1);
        assert!(!block_preserving(&a, &Partition::two_qubit_parity()));
    }
}

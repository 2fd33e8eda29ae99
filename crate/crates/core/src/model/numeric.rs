//! Finite-difference re-derivation of curvature and covariant derivatives
//! from the connection.

use super::connection::connection;
use super::curvature::Field;
use super::params::{CoordName, ParamPoint};
use crate::lie_core::{bracket, ComplexMatrix};
use crate::{Error, Result};

/// Central differences with optional Richardson extrapolation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteDiff {
    pub step: f64,
    pub richardson_levels: usize,
}

impl Default for FiniteDiff {
    fn default() -> Self {
        Self {
            step: 1e-4,
            richardson_levels: 1,
        }
    }
}

impl FiniteDiff {
    pub fn new(step: f64, richardson_levels: usize) -> Result<Self> {
        let fd = Self {
            step,
            richardson_levels,
        };
        fd.check()?;
        Ok(fd)
    }

    /// Plain central differences, second order.
    pub fn central(step: f64) -> Result<Self> {
        Self::new(step, 0)
    }

    fn check(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "finite-difference step must be positive, got {}",
                self.step
            )));
        }
        Ok(())
    }

    /// `d/dc f(p)`.
    pub fn derivative<F>(&self, f: F, p: &ParamPoint, coord: CoordName) -> Result<ComplexMatrix>
    where
        F: Fn(&ParamPoint) -> ComplexMatrix,
    {
        self.check()?;
        let central = |h: f64| {
            let plus = f(&p.shifted(coord, h));
            let minus = f(&p.shifted(coord, -h));
            (&plus - &minus).scale_real(0.5 / h)
        };
        // Richardson tableau over h, h/2, h/4, ...
        let mut row: Vec<ComplexMatrix> = Vec::with_capacity(self.richardson_levels + 1);
        for level in 0..=self.richardson_levels {
            let mut next = vec![central(self.step / f64::powi(2.0, level as i32))];
            for k in 1..=level {
                let factor = f64::powi(4.0, k as i32);
                let better = (&next[k - 1].scale_real(factor) - &row[k - 1]).scale_real(1.0 / (factor - 1.0));
                next.push(better);
            }
            row = next;
        }
        let out = row.pop().expect("non-empty tableau");
        if !out.is_finite() {
            return Err(Error::NonFinite(format!("derivative along {coord}")));
        }
        Ok(out)
    }
}

fn check_pair(i: CoordName, j: CoordName) -> Result<()> {
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "curvature needs two distinct coordinates, got {i} twice"
        )));
    }
    if i.subsystem() != j.subsystem() {
        return Err(Error::MixedSubsystem(i.to_string(), j.to_string()));
    }
    Ok(())
}

/// `F_ij = d_i A_j - d_j A_i + w [A_i, A_j]` for an arbitrary connection `conn`.
pub fn curvature_from_connection<C>(
    conn: C,
    p: &ParamPoint,
    i: CoordName,
    j: CoordName,
    fd: &FiniteDiff,
    bracket_weight: f64,
) -> Result<ComplexMatrix>
where
    C: Fn(&ParamPoint, CoordName) -> ComplexMatrix,
{
    check_pair(i, j)?;
    let di_aj = fd.derivative(|q| conn(q, j), p, i)?;
    let dj_ai = fd.derivative(|q| conn(q, i), p, j)?;
    let comm = bracket(&conn(p, i), &conn(p, j))?;
    Ok(&(&di_aj - &dj_ai) + &comm.scale_real(bracket_weight))
}

/// Curvature from the shipped closed-form connection, unit bracket weight.
pub fn curvature_numeric(p: &ParamPoint, i: CoordName, j: CoordName, fd: &FiniteDiff) -> Result<ComplexMatrix> {
    curvature_from_connection(connection, p, i, j, fd, 1.0)
}

/// `D_dir X = d_dir X + [A_dir, X]` for arbitrary connection and field.
pub fn covariant_derivative_with<C, X>(
    conn: C,
    field: X,
    p: &ParamPoint,
    dir: CoordName,
    fd: &FiniteDiff,
) -> Result<ComplexMatrix>
where
    C: Fn(&ParamPoint, CoordName) -> ComplexMatrix,
    X: Fn(&ParamPoint) -> ComplexMatrix,
{
    let d = fd.derivative(&field, p, dir)?;
    let a = conn(p, dir);
    let x = field(p);
    Ok(&d + &bracket(&a, &x)?)
}

/// Covariant derivative of a closed-form field along `dir` using the shipped
/// connection.
pub fn covariant_derivative_numeric(
    p: &ParamPoint,
    dir: CoordName,
    field: Field,
    fd: &FiniteDiff,
) -> Result<ComplexMatrix> {
    if dir.subsystem() != field.subsystem() {
        return Err(Error::MixedSubsystem(dir.to_string(), field.name()));
    }
    covariant_derivative_with(connection, |q| field.eval(q), p, dir, fd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::c;
    use crate::model::curvature::{covariant_derivative_analytic, curvature_analytic, CovariantLabel, CurvatureLabel};

    #[test]
    fn x1y1_pair() {
        let f = curvature_numeric(
            &ParamPoint::reference(),
            CoordName::X1,
            CoordName::Y1,
            &FiniteDiff::default(),
        )
        .unwrap();
        let expected = ComplexMatrix::real_diagonal(&[0.0, 1.0], c(0.0, 4.0));
        assert!((&f - &expected).max_abs() < 1e-7);
    }

    #[test]
    fn r1theta1_at_r1_point_three() {
        let p = ParamPoint::reference().with(CoordName::R1, 0.3);
        let f = curvature_numeric(&p, CoordName::R1, CoordName::Theta1, &FiniteDiff::default()).unwrap();
        let expected = ComplexMatrix::real_diagonal(&[1.0, 3.0], c(0.0, 1.2f64.sinh()));
        assert!((&f - &expected).max_abs() < 1e-7);
    }

    #[test]
    fn all_pairs_match_closed_forms() {
        let p = ParamPoint::reference();
        for l in CurvatureLabel::ALL {
            let (i, j) = l.coords();
            let f = curvature_numeric(&p, i, j, &FiniteDiff::default()).unwrap();
            let r = (&f - &curvature_analytic(&p, l)).max_abs();
            assert!(r < 1e-6, "{l}: {r}");
        }
    }

    #[test]
    fn covariant_derivatives_match() {
        let p = ParamPoint::reference().with(CoordName::R2, 0.5);
        let fd = FiniteDiff::default();
        for l in CovariantLabel::ALL {
            let (dir, field) = l.decompose();
            let d = covariant_derivative_numeric(&p, dir, field, &fd).unwrap();
            let r = (&d - &covariant_derivative_analytic(&p, l)).max_abs();
            assert!(r < 1e-6, "{l}: {r}");
        }
    }

    #[test]
    fn nested_double_derivative_from_numeric_curvature() {
        let p = ParamPoint::reference();
        let fd = FiniteDiff::new(1e-3, 1).unwrap();
        let f = |q: &ParamPoint| curvature_numeric(q, CoordName::R2, CoordName::Theta2, &fd).unwrap();
        let d1 = |q: &ParamPoint| covariant_derivative_with(connection, f, q, CoordName::Theta2, &fd).unwrap();
        let d2 = covariant_derivative_with(connection, d1, &p, CoordName::Theta2, &fd).unwrap();
        let r = (&d2 - &covariant_derivative_analytic(&p, CovariantLabel::DTheta2DTheta2)).max_abs();
        assert!(r < 1e-5, "{r}");
    }

    #[test]
    fn zero_field_has_zero_derivative() {
        let d = covariant_derivative_with(
            connection,
            |_| ComplexMatrix::zeros(4),
            &ParamPoint::reference(),
            CoordName::Theta2,
            &FiniteDiff::default(),
        )
        .unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn rejects_bad_requests() {
        let p = ParamPoint::reference();
        let fd = FiniteDiff::default();
        assert!(matches!(
            curvature_numeric(&p, CoordName::X1, CoordName::R2, &fd),
            Err(Error::MixedSubsystem(..))
        ));
        assert!(curvature_numeric(&p, CoordName::X1, CoordName::X1, &fd).is_err());
        assert!(FiniteDiff::central(0.0).is_err());
        assert!(FiniteDiff::central(-1e-3).is_err());
    }

    #[test]
    fn second_order_convergence_without_richardson() {
        let p = ParamPoint::reference();
        let exact = curvature_analytic(&p, CurvatureLabel::R2R3);
        let res = |h: f64| {
            let f = curvature_numeric(&p, CoordName::R2, CoordName::R3, &FiniteDiff::central(h).unwrap()).unwrap();
            (&f - &exact).max_abs()
        };
        let ratio = res(2e-2) / res(1e-2);
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }
}

use num_complex::Complex64;

use super::space::{single_mode_unitary, two_mode_unitary, FockSpace, OperatorKind, OperatorSet};
use crate::lie_core::{c, cis, ComplexMatrix};
use crate::model::{CoordName, ParamPoint, Subsystem};
use crate::{Error, Result};

/// Settings for the numeric Wilczek-Zee connection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Per-mode Fock cutoff.
    pub cutoff: usize,
    /// Central-difference step for the unitary.
    pub step: f64,
    /// Largest entrywise shift tolerated between `cutoff` and
    /// `cutoff + CONVERGENCE_MARGIN`.
    pub convergence_tol: f64,
}

pub const CONVERGENCE_MARGIN: usize = 8;

impl OracleConfig {
    pub fn single_mode() -> Self {
        Self {
            cutoff: 48,
            step: 1e-5,
            convergence_tol: 1e-6,
        }
    }

    pub fn two_mode() -> Self {
        Self {
            cutoff: 24,
            ..Self::single_mode()
        }
    }

    pub fn for_kind(kind: OperatorKind) -> Self {
        match kind {
            OperatorKind::SingleMode => Self::single_mode(),
            OperatorKind::TwoMode => Self::two_mode(),
        }
    }
}

/// The operator family that carries a given subsystem.
pub fn kind_of(which: Subsystem) -> OperatorKind {
    match which {
        Subsystem::Interaction => OperatorKind::TwoMode,
        _ => OperatorKind::SingleMode,
    }
}

/// A position-dependent phase `exp(i phi(p))` on one frame vector, with
/// `phi(p) = sum_k slope[k] * p[k]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGauge {
    pub basis: usize,
    pub slope: [f64; 12],
}

impl PhaseGauge {
    fn phase(&self, p: &ParamPoint) -> f64 {
        self.slope.iter().zip(p.to_array()).map(|(s, x)| s * x).sum()
    }

    /// `G(p) = diag(..., e^{i phi(p)}, ...)` of size `dim`.
    pub fn matrix(&self, p: &ParamPoint, dim: usize) -> ComplexMatrix {
        let mut g = ComplexMatrix::identity(dim);
        g[(self.basis, self.basis)] = cis(self.phase(p));
        g
    }
}

/// The degenerate-subspace frame `U(p)|rho>` of one subsystem.
struct Frame {
    which: Subsystem,
    space: FockSpace,
}

impl Frame {
    fn new(which: Subsystem, cutoff: usize) -> Result<Self> {
        if kind_of(which) == OperatorKind::TwoMode && cutoff < 8 {
            return Err(Error::InvalidArgument(format!(
                "two-mode cutoff must be at least 8, got {cutoff}"
            )));
        }
        Ok(Self {
            which,
            space: FockSpace::new(cutoff)?,
        })
    }

    fn unitary(&self, p: &ParamPoint) -> Result<OperatorSet> {
        match self.which {
            Subsystem::Interaction => two_mode_unitary(&self.space, cis(p.theta3) * p.r3, cis(p.theta2) * p.r2),
            which => {
                let [x, y, r, theta] = which.coords().map(|c| p.get(c));
                single_mode_unitary(&self.space, c(x, y), cis(theta) * r)
            }
        }
    }

    fn inputs(&self) -> Vec<usize> {
        let s = &self.space;
        match self.which {
            Subsystem::Interaction => vec![
                s.pair_index(0, 0),
                s.pair_index(0, 1),
                s.pair_index(1, 0),
                s.pair_index(1, 1),
            ],
            _ => vec![0, 1],
        }
    }

    fn vectors(&self, p: &ParamPoint, gauge: Option<&PhaseGauge>) -> Result<Vec<Vec<Complex64>>> {
        let u = self.unitary(p)?;
        let dim = u.dim();
        Ok(self
            .inputs()
            .iter()
            .enumerate()
            .map(|(rho, &k)| {
                let mut e = vec![c(0.0, 0.0); dim];
                e[k] = c(1.0, 0.0);
                let mut v = u.apply(&e);
                if let Some(g) = gauge.filter(|g| g.basis == rho) {
                    let ph = cis(g.phase(p));
                    v.iter_mut().for_each(|z| *z *= ph);
                }
                v
            })
            .collect())
    }

    /// `A_v[rho_bar, rho] = <f_rho_bar(p) | d_v f_rho(p)>` for a velocity `v`.
    fn connection_along(
        &self,
        p: &ParamPoint,
        velocity: &[f64; 12],
        step: f64,
        gauge: Option<&PhaseGauge>,
    ) -> Result<ComplexMatrix> {
        let scale = velocity.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let n = self.inputs().len();
        if scale == 0.0 {
            return Ok(ComplexMatrix::zeros(n));
        }
        let h = step / scale;
        let shift = |sign: f64| {
            let mut q = p.to_array();
            for (x, v) in q.iter_mut().zip(velocity) {
                *x += sign * h * v;
            }
            ParamPoint::from_array(q)
        };
        let base = self.vectors(p, gauge)?;
        let plus = self.vectors(&shift(1.0), gauge)?;
        let minus = self.vectors(&shift(-1.0), gauge)?;
        let m = ComplexMatrix::from_fn(n, |i, j| {
            base[i]
                .iter()
                .zip(plus[j].iter().zip(&minus[j]))
                .map(|(b, (f, g))| b.conj() * (f - g))
                .sum::<Complex64>()
                / (2.0 * h)
        });
        if !m.is_finite() {
            return Err(Error::NonFinite("oracle connection".into()));
        }
        Ok(m)
    }
}

fn unit(coord: CoordName) -> [f64; 12] {
    let mut v = [0.0; 12];
    v[coord.index()] = 1.0;
    v
}

/// Numeric connection component at a fixed cutoff, without a convergence check.
pub fn wz_connection_at_cutoff(p: &ParamPoint, coord: CoordName, cutoff: usize, step: f64) -> Result<ComplexMatrix> {
    check_step(step)?;
    Frame::new(coord.subsystem(), cutoff)?.connection_along(p, &unit(coord), step, None)
}

/// Numeric connection with the cutoff convergence check.
#[derive(Clone, Debug)]
pub struct OracleValue {
    pub matrix: ComplexMatrix,
    pub cutoff: usize,
    pub next_cutoff: usize,
    /// Entrywise shift between the two cutoffs.
    pub shift: f64,
    /// Frame weight on the top two Fock levels at `cutoff`.
    pub truncation_weight: f64,
}

/// `A_c = <rho_bar| U^dag dU/dc |rho>` by central differences of `U` in a
/// truncated Fock space, for the operator family that carries `coord`.
///
/// The result is recomputed at `cutoff + 8`; if any entry moves by more than
/// `config.convergence_tol` the call fails with both cutoffs in the error.
pub fn wz_connection_numeric(
    kind: OperatorKind,
    p: &ParamPoint,
    coord: CoordName,
    config: &OracleConfig,
) -> Result<OracleValue> {
    check_step(config.step)?;
    if kind != kind_of(coord.subsystem()) {
        return Err(Error::InvalidArgument(format!(
            "coordinate {coord} is not carried by the {kind:?} operators"
        )));
    }
    let frame = Frame::new(coord.subsystem(), config.cutoff)?;
    let matrix = frame.connection_along(p, &unit(coord), config.step, None)?;
    let next_cutoff = config.cutoff + CONVERGENCE_MARGIN;
    let next = wz_connection_at_cutoff(p, coord, next_cutoff, config.step)?;
    let shift = (&matrix - &next).max_abs();
    if shift > config.convergence_tol {
        return Err(Error::CutoffNotConverged {
            cutoff: config.cutoff,
            next: next_cutoff,
            shift,
            tol: config.convergence_tol,
        });
    }
    let truncation_weight = frame.unitary(p)?.truncation_weight(&frame.inputs());
    Ok(OracleValue {
        matrix,
        cutoff: config.cutoff,
        next_cutoff,
        shift,
        truncation_weight,
    })
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "differentiation step must be positive, got {step}"
        )));
    }
    Ok(())
}

/// Maps a point into the region where the truncated oracle is accurate:
/// radii scaled so the largest is at most `0.3`, and likewise for `|x|, |y|`.
pub fn oracle_domain_point(p: &ParamPoint) -> ParamPoint {
    const LIMIT: f64 = 0.3;
    let radial = [CoordName::R1, CoordName::R2, CoordName::R3, CoordName::R4];
    let cartesian = [CoordName::X1, CoordName::Y1, CoordName::X2, CoordName::Y2];
    let mut q = *p;
    for group in [radial, cartesian] {
        let m = group.iter().fold(0.0f64, |m, c| m.max(p.get(*c).abs()));
        if m > LIMIT {
            for c in group {
                q.set(c, p.get(c) * LIMIT / m);
            }
        }
    }
    q
}

/// The oracle as a connection on one subsystem, for parallel transport.
#[derive(Clone, Debug)]
pub struct OracleConnection {
    which: Subsystem,
    cutoff: usize,
    step: f64,
    gauge: Option<PhaseGauge>,
}

impl OracleConnection {
    pub fn new(which: Subsystem, cutoff: usize, step: f64) -> Result<Self> {
        check_step(step)?;
        Frame::new(which, cutoff)?;
        Ok(Self {
            which,
            cutoff,
            step,
            gauge: None,
        })
    }

    pub fn with_gauge(mut self, gauge: PhaseGauge) -> Result<Self> {
        if gauge.basis >= self.which.matrix_dim() {
            return Err(Error::InvalidArgument(format!(
                "gauge basis index {} out of range",
                gauge.basis
            )));
        }
        self.gauge = Some(gauge);
        Ok(self)
    }

    pub fn subsystem(&self) -> Subsystem {
        self.which
    }

    pub fn dim(&self) -> usize {
        self.which.matrix_dim()
    }

    pub fn along(&self, p: &ParamPoint, velocity: &[f64; 12]) -> Result<ComplexMatrix> {
        Frame::new(self.which, self.cutoff)?.connection_along(p, velocity, self.step, self.gauge.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::connection;

    #[test]
    fn x1_at_origin() {
        let v = wz_connection_numeric(
            OperatorKind::SingleMode,
            &ParamPoint::origin(),
            CoordName::X1,
            &OracleConfig::single_mode(),
        )
        .unwrap();
        let expected = ComplexMatrix::sparse(2, &[(0, 1, c(-1.0, 0.0)), (1, 0, c(1.0, 0.0))]);
        assert!((&v.matrix - &expected).max_abs() < 1e-6);
    }

    #[test]
    fn radial_single_mode_component_vanishes() {
        let p = oracle_domain_point(&ParamPoint::reference());
        let a = wz_connection_at_cutoff(&p, CoordName::R1, 32, 1e-5).unwrap();
        assert!(a.max_abs() < 1e-5);
    }

    #[test]
    fn two_mode_r2_component() {
        let p = ParamPoint::origin()
            .with(CoordName::R2, 0.3)
            .with(CoordName::Theta2, 0.4)
            .with(CoordName::R3, 0.0);
        let a = wz_connection_at_cutoff(&p, CoordName::R2, 24, 1e-5).unwrap();
        let expected = ComplexMatrix::sparse(4, &[(0, 3, -cis(-0.4)), (3, 0, cis(0.4))]);
        assert!((&a - &expected).max_abs() < 1e-4);
    }

    #[test]
    fn matches_closed_forms_in_domain() {
        let p = oracle_domain_point(&ParamPoint::reference());
        for coord in [CoordName::X1, CoordName::Y1, CoordName::Theta1, CoordName::Y2] {
            let a = wz_connection_at_cutoff(&p, coord, 32, 1e-5).unwrap();
            let r = (&a - &connection(&p, coord)).max_abs();
            assert!(r < 1e-4, "{coord}: {r}");
        }
    }

    #[test]
    fn domain_mapping() {
        let q = oracle_domain_point(&ParamPoint::reference());
        assert!((q.r4 - 0.3).abs() < 1e-15 && (q.y2 - 0.3).abs() < 1e-15);
        assert!(q.r1 < q.r2 && q.r2 < q.r3);
        assert_eq!(q.theta3, ParamPoint::reference().theta3);
        let small = ParamPoint::origin().with(CoordName::R1, 0.1);
        assert_eq!(oracle_domain_point(&small), small);
    }

    #[test]
    fn rejects_bad_configuration() {
        let p = ParamPoint::origin();
        assert!(wz_connection_numeric(OperatorKind::TwoMode, &p, CoordName::X1, &OracleConfig::two_mode()).is_err());
        assert!(wz_connection_at_cutoff(&p, CoordName::X1, 48, 0.0).is_err());
        assert!(wz_connection_at_cutoff(&p, CoordName::X1, 3, 1e-5).is_err());
    }

    #[test]
    fn unconverged_cutoff_is_reported() {
        let p = ParamPoint::origin().with(CoordName::R1, 0.9).with(CoordName::X1, 0.9);
        let cfg = OracleConfig {
            cutoff: 8,
            step: 1e-5,
            convergence_tol: 1e-6,
        };
        let err = wz_connection_numeric(OperatorKind::SingleMode, &p, CoordName::X1, &cfg).unwrap_err();
        assert!(
            matches!(
                err,
                Error::CutoffNotConverged {
                    cutoff: 8,
                    next: 16,
                    ..
                }
            ),
            "{err}"
        );
    }
}

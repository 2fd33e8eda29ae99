use super::path::{rect_loop, LoopPath, Space};
use crate::fock_oracle::OracleConnection;
use crate::lie_core::{mat_log_unitary, ComplexMatrix};
use crate::model::{connection, connection_embedded, CoordName, ParamPoint};
use crate::{Error, Result};

pub const DEFAULT_STEPS_PER_SEGMENT: usize = 2000;

/// Transports whose unitarity defect exceeds this are rejected.
pub const MAX_UNITARITY_DEFECT: f64 = 1e-6;

/// Sign `s` in `log g(eps-rectangle in (a, b)) ~ s eps^2 F_ab`; measured by
/// the convention calibration, which reports any disagreement.
pub const HOLONOMY_CURVATURE_SIGN: f64 = -1.0;

/// Sign in `log g(l1 . l2 . l1^-1 . l2^-1) ~ COMMUTATOR_LOOP_SIGN * eps^4 [F_1, F_2]`.
///
/// With `g` composed as later-times-earlier, each rectangle gives
/// `g_k ~ exp(s eps^2 F_k)` and the group commutator
/// `g_2^-1 g_1^-1 g_2 g_1` is `exp(s^2 eps^4 [F_2, F_1])`, so the sign is
/// `-1` whatever `s` is.
pub const COMMUTATOR_LOOP_SIGN: f64 = -1.0;

/// A connection one-form evaluated along a velocity.
pub trait Connection {
    fn dim(&self) -> usize;

    /// `sum_c A_c(p) v_c`.
    fn along(&self, p: &ParamPoint, velocity: &[f64; 12]) -> Result<ComplexMatrix>;
}

/// The closed-form connection restricted to one matrix space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyticConnection(pub Space);

impl Connection for AnalyticConnection {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn along(&self, p: &ParamPoint, velocity: &[f64; 12]) -> Result<ComplexMatrix> {
        let mut a = ComplexMatrix::zeros(self.dim());
        for c in CoordName::ALL {
            let v = velocity[c.index()];
            if v == 0.0 {
                continue;
            }
            if !self.0.accepts(c) {
                return Err(Error::InvalidLoop(format!(
                    "path moves {c}, which is outside space \"{}\"",
                    self.0
                )));
            }
            let comp = match self.0 {
                Space::Full => connection_embedded(p, c),
                _ => connection(p, c),
            };
            a += &comp.scale_real(v);
        }
        Ok(a)
    }
}

impl Connection for OracleConnection {
    fn dim(&self) -> usize {
        OracleConnection::dim(self)
    }

    fn along(&self, p: &ParamPoint, velocity: &[f64; 12]) -> Result<ComplexMatrix> {
        let which = self.subsystem();
        if let Some(c) = CoordName::ALL
            .into_iter()
            .find(|c| velocity[c.index()] != 0.0 && c.subsystem() != which)
        {
            return Err(Error::InvalidLoop(format!(
                "oracle connection for {which:?} cannot move {c}"
            )));
        }
        OracleConnection::along(self, p, velocity)
    }
}

#[derive(Clone, Debug)]
pub struct HolonomyResult {
    pub unitary: ComplexMatrix,
    /// Principal logarithm, present when `||g - Id||_F < 1`.
    pub generator: Option<ComplexMatrix>,
    /// Why the generator is missing, if it is.
    pub generator_note: Option<String>,
    pub unitarity_defect: f64,
    pub steps_used: usize,
    pub distance_from_identity: f64,
}

/// Integrates `dg/dt = -A g`, `g(0) = Id`, along each segment with classical
/// RK4 and composes segments as `g = g_last * ... * g_first`.
pub fn transport<C: Connection + ?Sized>(
    path: &LoopPath,
    steps_per_segment: usize,
    conn: &C,
) -> Result<HolonomyResult> {
    if steps_per_segment == 0 {
        return Err(Error::InvalidArgument("steps per segment must be at least 1".into()));
    }
    let n = conn.dim();
    let id = ComplexMatrix::identity(n);
    let mut total = id.clone();
    let dt = 1.0 / steps_per_segment as f64;
    for w in path.waypoints().windows(2) {
        let (start, end) = (&w[0], &w[1]);
        let (a0, a1) = (start.to_array(), end.to_array());
        let mut velocity = [0.0; 12];
        for k in 0..12 {
            velocity[k] = a1[k] - a0[k];
        }
        let gen = |t: f64| -> Result<ComplexMatrix> { Ok(-conn.along(&start.lerp(end, t), &velocity)?) };
        let mut g = id.clone();
        let mut m_start = gen(0.0)?;
        for s in 0..steps_per_segment {
            let t = s as f64 * dt;
            let m_mid = gen(t + 0.5 * dt)?;
            let m_end = gen(if s + 1 == steps_per_segment { 1.0 } else { t + dt })?;
            let k1 = &m_start * &g;
            let k2 = &m_mid * &(&g + &k1.scale_real(0.5 * dt));
            let k3 = &m_mid * &(&g + &k2.scale_real(0.5 * dt));
            let k4 = &m_end * &(&g + &k3.scale_real(dt));
            let incr = &(&k1 + &k2.scale_real(2.0)) + &(&k3.scale_real(2.0) + &k4);
            g += &incr.scale_real(dt / 6.0);
            m_start = m_end;
        }
        total = &g * &total;
    }
    let steps_used = steps_per_segment * path.segments();
    let unitarity_defect = total.unitarity_defect();
    if !total.is_finite() {
        return Err(Error::NonFinite("holonomy".into()));
    }
    if unitarity_defect > MAX_UNITARITY_DEFECT {
        return Err(Error::UnitarityDefect {
            defect: unitarity_defect,
            limit: MAX_UNITARITY_DEFECT,
            steps: steps_per_segment,
        });
    }
    let distance_from_identity = (&total - &id).frobenius_norm();
    let (generator, generator_note) = match mat_log_unitary(&total) {
        Ok(x) => (Some(x), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(HolonomyResult {
        unitary: total,
        generator,
        generator_note,
        unitarity_defect,
        steps_used,
        distance_from_identity,
    })
}

/// `log g(rect_loop(p, a, b, eps, eps)) / eps^2` with the closed-form
/// connection in the native space of the pair.
pub fn small_loop_curvature(
    p: &ParamPoint,
    a: CoordName,
    b: CoordName,
    eps: f64,
    steps: usize,
) -> Result<ComplexMatrix> {
    if a.subsystem() != b.subsystem() {
        return Err(Error::MixedSubsystem(a.to_string(), b.to_string()));
    }
    small_loop_curvature_with(&AnalyticConnection(Space::native(a.subsystem())), p, a, b, eps, steps)
}

pub fn small_loop_curvature_with<C: Connection + ?Sized>(
    conn: &C,
    p: &ParamPoint,
    a: CoordName,
    b: CoordName,
    eps: f64,
    steps: usize,
) -> Result<ComplexMatrix> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("loop size must be positive, got {eps}")));
    }
    let h = transport(&rect_loop(p, a, b, eps, eps)?, steps, conn)?;
    let g = h.generator.ok_or(Error::LogOutOfRange(h.distance_from_identity))?;
    Ok(g.scale_real(1.0 / (eps * eps)))
}

//! Closed forms of the higher-order brackets between single-qubit and
//! interaction curvatures.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::curvature::{curvature_embedded, CurvatureLabel};
use super::params::ParamPoint;
use crate::lie_core::{bracket, cis, ComplexMatrix, I};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BracketLabel {
    /// `[F_{x1 r1} ⊗ 1, F_{r2 r3}]`
    X1R1R2R3,
    /// `[1 ⊗ F_{x2 r4}, F_{r2 r3}]`
    X2R4R2R3,
    /// `[F_{y1 r1} ⊗ 1, F_{r2 theta3}]`
    Y1R1R2Theta3,
    /// `[1 ⊗ F_{y2 r4}, F_{r2 theta3}]`
    Y2R4R2Theta3,
    /// `[1 ⊗ F_{y2 r4}, [F_{x1 r1} ⊗ 1, F_{r2 r3}]]`
    Double,
}

impl BracketLabel {
    pub const ALL: [BracketLabel; 5] = [
        BracketLabel::X1R1R2R3,
        BracketLabel::X2R4R2R3,
        BracketLabel::Y1R1R2Theta3,
        BracketLabel::Y2R4R2Theta3,
        BracketLabel::Double,
    ];

    /// Short key used in coefficient files and report check names.
    pub fn key(self) -> &'static str {
        match self {
            BracketLabel::X1R1R2R3 => "x1r1_r2r3",
            BracketLabel::X2R4R2R3 => "x2r4_r2r3",
            BracketLabel::Y1R1R2Theta3 => "y1r1_r2theta3",
            BracketLabel::Y2R4R2Theta3 => "y2r4_r2theta3",
            BracketLabel::Double => "y2r4_x1r1_r2r3",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BracketLabel::X1R1R2R3 => "[F_x1r1 (x) 1, F_r2r3]",
            BracketLabel::X2R4R2R3 => "[1 (x) F_x2r4, F_r2r3]",
            BracketLabel::Y1R1R2Theta3 => "[F_y1r1 (x) 1, F_r2theta3]",
            BracketLabel::Y2R4R2Theta3 => "[1 (x) F_y2r4, F_r2theta3]",
            BracketLabel::Double => "[1 (x) F_y2r4, [F_x1r1 (x) 1, F_r2r3]]",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BracketLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BracketLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        BracketLabel::ALL
            .into_iter()
            .find(|l| l.key() == s || l.name() == s)
            .ok_or_else(|| Error::UnknownLabel(format!("bracket '{s}'")))
    }
}

/// Leading numeric coefficients of the five bracket closed forms.
///
/// Defaults are `4, 4, 2, 2, 16`. A JSON object keyed by [`BracketLabel::key`]
/// overrides individual entries; this is how a deliberately corrupted table is
/// fed to `hqc verify --coefficients`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketCoefficients(pub [f64; 5]);

impl Default for BracketCoefficients {
    fn default() -> Self {
        Self([4.0, 4.0, 2.0, 2.0, 16.0])
    }
}

impl BracketCoefficients {
    pub fn get(&self, label: BracketLabel) -> f64 {
        self.0[label.index()]
    }

    pub fn is_default(&self) -> bool {
        *self == Self::default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let map: BTreeMap<String, f64> =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("coefficients: {e}")))?;
        let mut out = Self::default();
        for (k, v) in map {
            let label: BracketLabel = k.parse()?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("coefficient '{k}' is not finite")));
            }
            out.0[label.index()] = v;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        BracketLabel::ALL
            .iter()
            .map(|l| (l.key().to_string(), self.get(*l)))
            .collect()
    }
}

impl Serialize for BracketCoefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BracketCoefficients {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, f64>::deserialize(d)?;
        let text = serde_json::to_string(&map).map_err(serde::de::Error::custom)?;
        Self::from_json(&text).map_err(serde::de::Error::custom)
    }
}

/// `upper` at (0,1), (2,3) with signs -1, +1 and `lower` at (1,0), (3,2) with +1, -1.
pub(crate) fn pattern_q1(sign: f64, upper: num_complex::Complex64, lower: num_complex::Complex64) -> ComplexMatrix {
    ComplexMatrix::sparse(
        4,
        &[
            (0, 1, -sign * upper),
            (2, 3, sign * upper),
            (1, 0, sign * lower),
            (3, 2, -sign * lower),
        ],
    )
}

/// `upper` at (0,2), (1,3) with signs +1, -1 and `lower` at (2,0), (3,1) with -1, +1.
pub(crate) fn pattern_q2(upper: num_complex::Complex64, lower: num_complex::Complex64) -> ComplexMatrix {
    ComplexMatrix::sparse(4, &[(0, 2, upper), (1, 3, -upper), (2, 0, -lower), (3, 1, lower)])
}

struct Shorthand {
    c1: f64,
    s1: f64,
    c4: f64,
    s4: f64,
    sh: f64,
    sn: f64,
}

impl Shorthand {
    fn of(p: &ParamPoint) -> Self {
        Self {
            c1: (2.0 * p.r1).cosh(),
            s1: (2.0 * p.r1).sinh(),
            c4: (2.0 * p.r4).cosh(),
            s4: (2.0 * p.r4).sinh(),
            sh: (2.0 * p.r2).sinh(),
            sn: (2.0 * p.r3).sin(),
        }
    }
}

/// Scalar `delta` of the double bracket `diag(-1, 1, 1, -1) delta`, without its
/// leading coefficient.
pub fn double_bracket_delta(p: &ParamPoint) -> num_complex::Complex64 {
    let s = Shorthand::of(p);
    let (t1, t3, t4) = (p.theta1, p.theta3, p.theta4);
    let inner = -s.s1 * ((t3 + t4).cos() * s.c4 + t3.cos() * s.s4)
        + s.c1 * ((t3 - t1 + t4).cos() * s.c4 + (t3 - t1).cos() * s.s4);
    I * (s.sh * inner)
}

/// Closed-form bracket with the default coefficients.
pub fn bracket_analytic(p: &ParamPoint, label: BracketLabel) -> ComplexMatrix {
    bracket_analytic_with(p, label, &BracketCoefficients::default())
}

pub fn bracket_analytic_with(p: &ParamPoint, label: BracketLabel, coeffs: &BracketCoefficients) -> ComplexMatrix {
    let s = Shorthand::of(p);
    let k = coeffs.get(label);
    let (t1, t3, t4) = (p.theta1, p.theta3, p.theta4);
    match label {
        BracketLabel::X1R1R2R3 => pattern_q1(
            1.0,
            cis(t3 - t1) * (k * s.sh) * (s.c1 - cis(t1) * s.s1),
            cis(t1 - t3) * (k * s.sh) * (s.c1 - cis(-t1) * s.s1),
        ),
        BracketLabel::X2R4R2R3 => pattern_q2(
            cis(-(t3 + t4)) * (k * s.sh) * (s.c4 - cis(t4) * s.s4),
            cis(t3 + t4) * (k * s.sh) * (s.c4 - cis(-t4) * s.s4),
        ),
        BracketLabel::Y1R1R2Theta3 => pattern_q1(
            -1.0,
            cis(t3 - t1) * (k * s.sn * s.sh) * (s.c1 + cis(t1) * s.s1),
            cis(t1 - t3) * (k * s.sn * s.sh) * (s.c1 + cis(-t1) * s.s1),
        ),
        BracketLabel::Y2R4R2Theta3 => pattern_q2(
            cis(-(t3 + t4)) * (k * s.sn * s.sh) * (s.c4 + cis(t4) * s.s4),
            cis(t3 + t4) * (k * s.sn * s.sh) * (s.c4 + cis(-t4) * s.s4),
        ),
        BracketLabel::Double => ComplexMatrix::real_diagonal(&[-1.0, 1.0, 1.0, -1.0], double_bracket_delta(p) * k),
    }
}

/// The bracket computed directly from the embedded curvature matrices.
pub fn bracket_direct(p: &ParamPoint, label: BracketLabel) -> ComplexMatrix {
    let f = |l| curvature_embedded(p, l);
    let br = |a: &ComplexMatrix, b: &ComplexMatrix| bracket(a, b).expect("4x4 operands");
    use CurvatureLabel as L;
    match label {
        BracketLabel::X1R1R2R3 => br(&f(L::X1R1), &f(L::R2R3)),
        BracketLabel::X2R4R2R3 => br(&f(L::X2R4), &f(L::R2R3)),
        BracketLabel::Y1R1R2Theta3 => br(&f(L::Y1R1), &f(L::R2Theta3)),
        BracketLabel::Y2R4R2Theta3 => br(&f(L::Y2R4), &f(L::R2Theta3)),
        BracketLabel::Double => br(&f(L::Y2R4), &br(&f(L::X1R1), &f(L::R2R3))),
    }
}

/// Unit-coefficient form, handy for error messages about a single entry.
pub fn bracket_unit(p: &ParamPoint, label: BracketLabel) -> ComplexMatrix {
    let mut k = BracketCoefficients::default();
    k.0[label.index()] = 1.0;
    bracket_analytic_with(p, label, &k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_core::c;
    use crate::lie_core::{block_preserving, Partition};
    use crate::model::params::CoordName;

    #[test]
    fn closed_forms_equal_direct_brackets() {
        let p = ParamPoint::reference();
        for l in BracketLabel::ALL {
            let diff = (&bracket_analytic(&p, l) - &bracket_direct(&p, l)).max_abs();
            assert!(diff < 1e-10, "{l}: {diff}");
        }
    }

    #[test]
    fn vanishing_factors() {
        let p = ParamPoint::reference().with(CoordName::R2, 0.0);
        assert_eq!(bracket_analytic(&p, BracketLabel::X1R1R2R3).max_abs(), 0.0);
        let p = ParamPoint::reference().with(CoordName::R3, 0.0);
        assert_eq!(bracket_analytic(&p, BracketLabel::Y2R4R2Theta3).max_abs(), 0.0);
    }

    #[test]
    fn delta_without_squeezing() {
        let p = ParamPoint::reference()
            .with(CoordName::R1, 0.0)
            .with(CoordName::R4, 0.0);
        let d = double_bracket_delta(&p) * 16.0;
        let expected = 16.0 * 1.4f64.sinh() * (p.theta3 - p.theta1 + p.theta4).cos();
        assert!((d - c(0.0, expected)).norm() < 1e-12);
        let direct = bracket_direct(&p, BracketLabel::Double);
        assert!((direct[(1, 1)] - c(0.0, expected)).norm() < 1e-12);
    }

    #[test]
    fn structure() {
        let p = ParamPoint::reference();
        let part = Partition::two_qubit_parity();
        for l in BracketLabel::ALL {
            let m = bracket_analytic(&p, l);
            assert!(m.anti_hermitian_defect() < 1e-12, "{l}");
            // only the double bracket is diagonal; the single brackets mix a
            // qubit flip into the interaction block
            assert_eq!(block_preserving(&m, &part), l == BracketLabel::Double, "{l}");
            assert_eq!(l.key().parse::<BracketLabel>().unwrap(), l);
        }
    }

    #[test]
    fn coefficient_overrides() {
        let k = BracketCoefficients::from_json(r#"{"x2r4_r2r3": 5.0}"#).unwrap();
        assert_eq!(k.0, [4.0, 5.0, 2.0, 2.0, 16.0]);
        assert!(!k.is_default());
        assert!(BracketCoefficients::from_json(r#"{"nope": 1.0}"#).is_err());
        assert!(BracketCoefficients::from_json("[1, 2]").is_err());
        let p = ParamPoint::reference();
        let scaled = bracket_analytic_with(&p, BracketLabel::X2R4R2R3, &k);
        let base = bracket_analytic(&p, BracketLabel::X2R4R2R3);
        assert!((&scaled - &base.scale_real(1.25)).max_abs() < 1e-12);
        let back: BracketCoefficients = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        assert_eq!(back, k);
    }
}

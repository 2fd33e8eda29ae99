use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The twelve real control coordinates.
///
/// `lambda1 = x1 + i y1`, `mu1 = r1 e^{i theta1}` (qubit 1),
/// `zeta = r2 e^{i theta2}`, `xi = r3 e^{i theta3}` (interaction),
/// `lambda2 = x2 + i y2`, `mu2 = r4 e^{i theta4}` (qubit 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoordName {
    X1,
    Y1,
    R1,
    Theta1,
    R2,
    Theta2,
    R3,
    Theta3,
    X2,
    Y2,
    R4,
    Theta4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Qubit1,
    Qubit2,
    Interaction,
}

impl CoordName {
    pub const ALL: [CoordName; 12] = [
        CoordName::X1,
        CoordName::Y1,
        CoordName::R1,
        CoordName::Theta1,
        CoordName::R2,
        CoordName::Theta2,
        CoordName::R3,
        CoordName::Theta3,
        CoordName::X2,
        CoordName::Y2,
        CoordName::R4,
        CoordName::Theta4,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            CoordName::X1 => "x1",
            CoordName::Y1 => "y1",
            CoordName::R1 => "r1",
            CoordName::Theta1 => "theta1",
            CoordName::R2 => "r2",
            CoordName::Theta2 => "theta2",
            CoordName::R3 => "r3",
            CoordName::Theta3 => "theta3",
            CoordName::X2 => "x2",
            CoordName::Y2 => "y2",
            CoordName::R4 => "r4",
            CoordName::Theta4 => "theta4",
        }
    }

    pub fn subsystem(self) -> Subsystem {
        use CoordName::*;
        match self {
            X1 | Y1 | R1 | Theta1 => Subsystem::Qubit1,
            X2 | Y2 | R4 | Theta4 => Subsystem::Qubit2,
            R2 | Theta2 | R3 | Theta3 => Subsystem::Interaction,
        }
    }

    pub fn is_radial(self) -> bool {
        matches!(self, CoordName::R1 | CoordName::R2 | CoordName::R3 | CoordName::R4)
    }
}

impl Subsystem {
    pub fn coords(self) -> [CoordName; 4] {
        use CoordName::*;
        match self {
            Subsystem::Qubit1 => [X1, Y1, R1, Theta1],
            Subsystem::Qubit2 => [X2, Y2, R4, Theta4],
            Subsystem::Interaction => [R2, Theta2, R3, Theta3],
        }
    }

    /// Matrix size of this block's connection in its native form.
    pub fn matrix_dim(self) -> usize {
        match self {
            Subsystem::Interaction => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for CoordName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoordName {
    type Err = Error;

    /// Accepts `theta1` as well as `θ1` / `th1` spellings.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('θ', "theta");
        let key = key.strip_prefix("th").map_or(key.clone(), |rest| {
            if rest.starts_with("eta") {
                key.clone()
            } else {
                format!("theta{rest}")
            }
        });
        CoordName::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::UnknownLabel(format!("coordinate '{s}'")))
    }
}

/// A point in the 12-dimensional control space.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ParamPoint {
    pub x1: f64,
    pub y1: f64,
    pub r1: f64,
    pub theta1: f64,
    pub r2: f64,
    pub theta2: f64,
    pub r3: f64,
    pub theta3: f64,
    pub x2: f64,
    pub y2: f64,
    pub r4: f64,
    pub theta4: f64,
}

impl ParamPoint {
    /// Generic reference point: every sinh/sin factor nonzero, angles
    /// incommensurate.
    pub fn reference() -> Self {
        Self {
            x1: 0.2,
            y1: 0.3,
            r1: 0.6,
            theta1: 0.5,
            r2: 0.7,
            theta2: 1.1,
            r3: 0.8,
            theta3: 1.7,
            x2: 0.4,
            y2: 0.5,
            r4: 0.9,
            theta4: 2.3,
        }
    }

    pub fn origin() -> Self {
        Self::default()
    }

    pub fn from_array(v: [f64; 12]) -> Self {
        let mut p = Self::default();
        for (c, x) in CoordName::ALL.into_iter().zip(v) {
            p.set(c, x);
        }
        p
    }

    pub fn to_array(&self) -> [f64; 12] {
        CoordName::ALL.map(|c| self.get(c))
    }

    pub fn get(&self, c: CoordName) -> f64 {
        use CoordName::*;
        match c {
            X1 => self.x1,
            Y1 => self.y1,
            R1 => self.r1,
            Theta1 => self.theta1,
            R2 => self.r2,
            Theta2 => self.theta2,
            R3 => self.r3,
            Theta3 => self.theta3,
            X2 => self.x2,
            Y2 => self.y2,
            R4 => self.r4,
            Theta4 => self.theta4,
        }
    }

    pub fn set(&mut self, c: CoordName, v: f64) {
        use CoordName::*;
        let slot = match c {
            X1 => &mut self.x1,
            Y1 => &mut self.y1,
            R1 => &mut self.r1,
            Theta1 => &mut self.theta1,
            R2 => &mut self.r2,
            Theta2 => &mut self.theta2,
            R3 => &mut self.r3,
            Theta3 => &mut self.theta3,
            X2 => &mut self.x2,
            Y2 => &mut self.y2,
            R4 => &mut self.r4,
            Theta4 => &mut self.theta4,
        };
        *slot = v;
    }

    pub fn with(mut self, c: CoordName, v: f64) -> Self {
        self.set(c, v);
        self
    }

    /// Moves along one coordinate. Radial coordinates may go negative here:
    /// the closed forms are smooth through `r = 0` and finite differences
    /// need both sides.
    pub fn shifted(mut self, c: CoordName, delta: f64) -> Self {
        self.set(c, self.get(c) + delta);
        self
    }

    /// Affine combination `(1 - t) self + t other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        let a = self.to_array();
        let b = other.to_array();
        let mut out = [0.0; 12];
        for k in 0..12 {
            out[k] = a[k] + t * (b[k] - a[k]);
        }
        Self::from_array(out)
    }

    pub fn max_coord_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Checks the user-facing invariants: finite, non-negative radii.
    pub fn validate(&self) -> Result<()> {
        for c in CoordName::ALL {
            let v = self.get(c);
            if !v.is_finite() {
                return Err(Error::InvalidPoint(format!("{c} = {v} is not finite")));
            }
            if c.is_radial() && v < 0.0 {
                return Err(Error::InvalidPoint(format!("radial coordinate {c} = {v} is negative")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_names_round_trip() {
        for c in CoordName::ALL {
            assert_eq!(c.name().parse::<CoordName>().unwrap(), c);
        }
        assert_eq!("θ2".parse::<CoordName>().unwrap(), CoordName::Theta2);
        assert_eq!("th4".parse::<CoordName>().unwrap(), CoordName::Theta4);
        assert!("z9".parse::<CoordName>().is_err());
    }

    #[test]
    fn array_round_trip_and_indices() {
        let p = ParamPoint::reference();
        assert_eq!(ParamPoint::from_array(p.to_array()), p);
        for (k, c) in CoordName::ALL.into_iter().enumerate() {
            assert_eq!(c.index(), k);
        }
    }

    #[test]
    fn validation() {
        assert!(ParamPoint::reference().validate().is_ok());
        assert!(ParamPoint::reference().with(CoordName::R3, -0.1).validate().is_err());
        assert!(ParamPoint::reference()
            .with(CoordName::X1, f64::NAN)
            .validate()
            .is_err());
    }

    #[test]
    fn subsystems_partition_coordinates() {
        let mut all: Vec<CoordName> = [Subsystem::Qubit1, Subsystem::Qubit2, Subsystem::Interaction]
            .iter()
            .flat_map(|s| s.coords())
            .collect();
        all.sort();
        assert_eq!(all, CoordName::ALL.to_vec());
    }
}

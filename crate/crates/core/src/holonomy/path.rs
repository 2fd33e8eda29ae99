use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{CoordName, ParamPoint, Subsystem};
use crate::{Error, Result};

/// Tolerance for "same point" checks on loop endpoints.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Matrix space a transport runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Qubit-1 block, 2x2.
    Q1,
    /// Qubit-2 block, 2x2.
    Q2,
    /// Two-qubit space, 4x4; single-qubit components are embedded.
    Full,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::Full => 4,
            _ => 2,
        }
    }

    pub fn accepts(self, c: CoordName) -> bool {
        match self {
            Space::Q1 => c.subsystem() == Subsystem::Qubit1,
            Space::Q2 => c.subsystem() == Subsystem::Qubit2,
            Space::Full => true,
        }
    }

    /// The natural space of a subsystem's native matrices.
    pub fn native(which: Subsystem) -> Self {
        match which {
            Subsystem::Qubit1 => Space::Q1,
            Subsystem::Qubit2 => Space::Q2,
            Subsystem::Interaction => Space::Full,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::Q1 => "q1",
            Space::Q2 => "q2",
            Space::Full => "full",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q1" => Ok(Space::Q1),
            "q2" => Ok(Space::Q2),
            "full" => Ok(Space::Full),
            other => Err(Error::Parse(format!(
                "space must be one of \"q1\", \"q2\", \"full\", got \"{other}\""
            ))),
        }
    }
}

/// A piecewise-linear path through parameter space.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopPath {
    base: ParamPoint,
    waypoints: Vec<ParamPoint>,
    closed: bool,
}

impl LoopPath {
    pub fn new(base: ParamPoint, waypoints: Vec<ParamPoint>, closed: bool) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::InvalidLoop(format!(
                "need at least 2 waypoints, got {}",
                waypoints.len()
            )));
        }
        if let Some(k) = waypoints.iter().position(|w| !w.is_finite()) {
            return Err(Error::InvalidLoop(format!("waypoint {k} has non-finite coordinates")));
        }
        if let Some(k) = waypoints.windows(2).position(|w| w[0].max_coord_diff(&w[1]) == 0.0) {
            return Err(Error::InvalidLoop(format!("waypoints {k} and {} coincide", k + 1)));
        }
        if closed {
            let gap = waypoints[0].max_coord_diff(waypoints.last().expect("non-empty"));
            if gap > CLOSURE_TOL {
                return Err(Error::InvalidLoop(format!(
                    "closed loop ends {gap:.3e} away from its start"
                )));
            }
        }
        Ok(Self {
            base,
            waypoints,
            closed,
        })
    }

    pub fn base(&self) -> &ParamPoint {
        &self.base
    }

    pub fn waypoints(&self) -> &[ParamPoint] {
        &self.waypoints
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn segments(&self) -> usize {
        self.waypoints.len() - 1
    }

    pub fn start(&self) -> &ParamPoint {
        &self.waypoints[0]
    }

    pub fn end(&self) -> &ParamPoint {
        self.waypoints.last().expect("non-empty")
    }

    /// Sum of segment lengths in the max-coordinate norm.
    pub fn length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| w[0].max_coord_diff(&w[1])).sum()
    }

    /// Coordinates that change along some segment.
    pub fn moving_coords(&self) -> Vec<CoordName> {
        CoordName::ALL
            .into_iter()
            .filter(|c| self.waypoints.windows(2).any(|w| w[0].get(*c) != w[1].get(*c)))
            .collect()
    }

    pub fn reverse(&self) -> Self {
        let mut w = self.waypoints.clone();
        w.reverse();
        Self {
            base: self.base,
            waypoints: w,
            closed: self.closed,
        }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let gap = self.end().max_coord_diff(other.start());
        if gap > CLOSURE_TOL {
            return Err(Error::InvalidLoop(format!("paths do not join: gap {gap:.3e}")));
        }
        let mut w = self.waypoints.clone();
        w.extend_from_slice(&other.waypoints[1..]);
        let closed = w[0].max_coord_diff(w.last().expect("non-empty")) <= CLOSURE_TOL;
        Self::new(self.base, w, closed)
    }
}

/// Closed rectangle `p -> p + ea a -> p + ea a + eb b -> p + eb b -> p`.
///
/// Zero edges are dropped, so `ea = 0` gives an out-and-back path.
pub fn rect_loop(p: &ParamPoint, a: CoordName, b: CoordName, eps_a: f64, eps_b: f64) -> Result<LoopPath> {
    if a == b {
        return Err(Error::InvalidArgument(format!(
            "rectangle needs two distinct coordinates, got {a} twice"
        )));
    }
    let corners = [
        *p,
        p.shifted(a, eps_a),
        p.shifted(a, eps_a).shifted(b, eps_b),
        p.shifted(b, eps_b),
        *p,
    ];
    let mut w: Vec<ParamPoint> = Vec::with_capacity(5);
    for c in corners {
        if w.last().is_none_or(|last| last.max_coord_diff(&c) != 0.0) {
            w.push(c);
        }
    }
    if w.len() < 2 {
        return Err(Error::InvalidLoop(
            "rectangle with both sides zero has no segments".into(),
        ));
    }
    LoopPath::new(*p, w, true)
}

/// `l1 . l2 . l1^-1 . l2^-1` for closed loops sharing a start point.
pub fn commutator_loop(l1: &LoopPath, l2: &LoopPath) -> Result<LoopPath> {
    if !l1.closed() || !l2.closed() {
        return Err(Error::InvalidLoop("commutator loop needs closed loops".into()));
    }
    let gap = l1.start().max_coord_diff(l2.start());
    if gap > CLOSURE_TOL {
        return Err(Error::InvalidLoop(format!(
            "loops start at different base points (gap {gap:.3e})"
        )));
    }
    l1.concat(l2)?.concat(&l1.reverse())?.concat(&l2.reverse())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopFileRaw {
    base: BTreeMap<String, f64>,
    waypoints: Vec<BTreeMap<String, f64>>,
    closed: bool,
    space: String,
}

/// A loop read from a JSON loop file.
#[derive(Clone, Debug)]
pub struct LoopFile {
    pub path: LoopPath,
    pub space: Space,
}

fn coords_of(map: &BTreeMap<String, f64>, field: &str) -> Result<Vec<(CoordName, f64)>> {
    map.iter()
        .map(|(k, v)| {
            let c: CoordName = k
                .parse()
                .map_err(|_| Error::Parse(format!("{field}: unknown coordinate \"{k}\"")))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("{field}.{k}: value must be finite")));
            }
            Ok((c, *v))
        })
        .collect()
}

impl LoopFile {
    /// Parses the loop-file format: `base` maps coordinate names to values
    /// (omitted names are 0), each waypoint maps names to offsets from `base`.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: LoopFileRaw = serde_json::from_str(text).map_err(|e| Error::Parse(format!("loop file: {e}")))?;
        let space: Space = raw
            .space
            .parse()
            .map_err(|e: Error| Error::Parse(format!("space: {e}")))?;
        let mut base = ParamPoint::origin();
        for (c, v) in coords_of(&raw.base, "base")? {
            base.set(c, v);
        }
        base.validate().map_err(|e| Error::Parse(format!("base: {e}")))?;
        let mut waypoints = Vec::with_capacity(raw.waypoints.len());
        for (k, delta) in raw.waypoints.iter().enumerate() {
            let field = format!("waypoints[{k}]");
            let mut w = base;
            for (c, v) in coords_of(delta, &field)? {
                if v != 0.0 && !space.accepts(c) {
                    return Err(Error::Parse(format!(
                        "{field}.{c}: coordinate is outside space \"{space}\""
                    )));
                }
                w.set(c, base.get(c) + v);
            }
            waypoints.push(w);
        }
        let path = LoopPath::new(base, waypoints, raw.closed).map_err(|e| Error::Parse(format!("waypoints: {e}")))?;
        Ok(Self { path, space })
    }

    pub fn to_json(&self) -> String {
        let base = self.path.base();
        let map = |p: &ParamPoint, relative: bool| -> BTreeMap<String, f64> {
            CoordName::ALL
                .into_iter()
                .filter_map(|c| {
                    let v = if relative { p.get(c) - base.get(c) } else { p.get(c) };
                    (v != 0.0).then(|| (c.name().to_string(), v))
                })
                .collect()
        };
        let doc = serde_json::json!({
            "base": map(base, false),
            "waypoints": self.path.waypoints().iter().map(|w| map(w, true)).collect::<Vec<_>>(),
            "closed": self.path.closed(),
            "space": self.space.name(),
        });
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::Report;
use crate::fock_oracle::{
    kind_of, wz_connection_at_cutoff, wz_connection_numeric, OperatorKind, OracleConfig, OracleConnection, PhaseGauge,
};
use crate::holonomy::{transport, AnalyticConnection, LoopFile, Space, COMMUTATOR_LOOP_SIGN, HOLONOMY_CURVATURE_SIGN};
use crate::lie_core::{
    block_coupling, bracket_closure, c, center_dimension, real_span_dimension, ComplexMatrix, Partition,
};
use crate::model::{
    bracket_analytic, bracket_analytic_with, bracket_direct, calibrate_with, connection, covariant_derivative_analytic,
    covariant_derivative_numeric, curvature_analytic, curvature_embedded, curvature_numeric, BracketCoefficients,
    BracketLabel, CalibrationOptions, CoordName, CovariantLabel, CurvatureLabel, FiniteDiff, Generator, ParamPoint,
    Subsystem,
};
use crate::{Error, Result};

/// Targets of `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    AppendixA,
    AppendixB,
    AppendixC,
    All,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::AppendixA => "appendix-a",
            Target::AppendixB => "appendix-b",
            Target::AppendixC => "appendix-c",
            Target::All => "all",
        }
    }
}

pub const DEFAULT_SEED: u64 = 42;
pub const TOL_APPENDIX_C: f64 = 1e-9;
pub const TOL_APPENDIX_B: f64 = 1e-6;
pub const TOL_ORACLE_SINGLE: f64 = 1e-4;
pub const TOL_ORACLE_TWO: f64 = 1e-3;
pub const SINGLE_MODE_LADDER: [usize; 3] = [24, 32, 48];
pub const TWO_MODE_LADDER: [usize; 3] = [16, 20, 24];

/// Settings for `verify`.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub target: Target,
    /// `None` picks 5 points for appendix-a and 20 otherwise.
    pub points: Option<usize>,
    pub seed: u64,
    /// Overrides every per-target tolerance.
    pub tol: Option<f64>,
    pub fock_cutoff: usize,
    pub fock_cutoff_two: usize,
    pub coefficients: BracketCoefficients,
    pub coefficients_path: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            target: Target::All,
            points: None,
            seed: DEFAULT_SEED,
            tol: None,
            fock_cutoff: OracleConfig::single_mode().cutoff,
            fock_cutoff_two: OracleConfig::two_mode().cutoff,
            coefficients: BracketCoefficients::default(),
            coefficients_path: None,
        }
    }
}

/// Uniform draws with ChaCha8: radii in `[0.1, 1]`, angles in `[0, 2 pi)`,
/// Cartesian coordinates in `[-1, 1]`.
pub fn sample_points(seed: u64, n: usize) -> Vec<ParamPoint> {
    sample(seed, n, 0.1..=1.0, 1.0)
}

/// As [`sample_points`] but inside the oracle domain: radii in `[0.1, 0.3]`,
/// `|x|, |y| <= 0.3`.
pub fn sample_oracle_points(seed: u64, n: usize) -> Vec<ParamPoint> {
    sample(seed, n, 0.1..=0.3, 0.3)
}

fn sample(seed: u64, n: usize, radii: std::ops::RangeInclusive<f64>, cart: f64) -> Vec<ParamPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut p = ParamPoint::origin();
            for coord in CoordName::ALL {
                let v = if coord.is_radial() {
                    rng.random_range(radii.clone())
                } else if coord.name().starts_with("theta") {
                    rng.random_range(0.0..std::f64::consts::TAU)
                } else {
                    rng.random_range(-cart..=cart)
                };
                p.set(coord, v);
            }
            p
        })
        .collect()
}

fn check_points(points: usize) -> Result<usize> {
    if points == 0 {
        return Err(Error::InvalidArgument("--points must be at least 1".into()));
    }
    Ok(points)
}

fn check_tol(tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "--tol must be positive and finite, got {tol}"
        )));
    }
    Ok(tol)
}

pub fn cmd_verify(opts: &VerifyOptions) -> Result<Report> {
    if let Some(tol) = opts.tol {
        check_tol(tol)?;
    }
    if let Some(n) = opts.points {
        check_points(n)?;
    }
    let mut r = Report::new(format!("verify {}", opts.target.name()), opts.seed);
    r.input("target", opts.target.name());
    r.input("points", opts.points);
    r.input("tol", opts.tol);
    r.input("fock_cutoff", opts.fock_cutoff);
    r.input("fock_cutoff_two", opts.fock_cutoff_two);
    r.input("coefficients", opts.coefficients.to_map());
    r.input(
        "coefficients_file",
        opts.coefficients_path.as_ref().map(|p| p.display().to_string()),
    );
    let targets = match opts.target {
        Target::All => vec![Target::AppendixC, Target::AppendixB, Target::AppendixA],
        t => vec![t],
    };
    for t in targets {
        match t {
            Target::AppendixC => verify_c(&mut r, opts)?,
            Target::AppendixB => verify_b(&mut r, opts)?,
            Target::AppendixA => verify_a(&mut r, opts)?,
            Target::All => unreachable!(),
        }
    }
    Ok(r)
}

fn verify_c(r: &mut Report, opts: &VerifyOptions) -> Result<()> {
    let tol = opts.tol.unwrap_or(TOL_APPENDIX_C);
    let pts = sample_points(opts.seed, opts.points.unwrap_or(20));
    for l in BracketLabel::ALL {
        let residual = pts
            .iter()
            .map(|p| (&bracket_analytic_with(p, l, &opts.coefficients) - &bracket_direct(p, l)).max_abs())
            .fold(0.0, nan_max);
        r.check(format!("appendix-c/{}", l.key()), residual, tol);
    }
    Ok(())
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn verify_b(r: &mut Report, opts: &VerifyOptions) -> Result<()> {
    let tol = opts.tol.unwrap_or(TOL_APPENDIX_B);
    let fd = FiniteDiff::default();
    let pts = sample_points(opts.seed, opts.points.unwrap_or(20));
    let cal = calibrate_with(
        &ParamPoint::reference(),
        &CalibrationOptions {
            fd,
            tol,
            oracle_tol_single: None,
            ..CalibrationOptions::default()
        },
    )?;
    let s = f64::from(cal.curvature_sign);
    for l in CurvatureLabel::ALL {
        let (i, j) = l.coords();
        let mut residual: f64 = 0.0;
        for p in &pts {
            let f = curvature_numeric(p, i, j, &fd)?.scale_real(s);
            residual = nan_max(residual, (&f - &curvature_analytic(p, l)).max_abs());
        }
        r.check(format!("appendix-b/{}", l.name()), residual, tol);
    }
    for l in CovariantLabel::ALL {
        let (dir, field) = l.decompose();
        let mut residual: f64 = 0.0;
        for p in &pts {
            let d = covariant_derivative_numeric(p, dir, field, &fd)?.scale_real(s);
            residual = nan_max(residual, (&d - &covariant_derivative_analytic(p, l)).max_abs());
        }
        r.check(format!("appendix-b/{}", l.name()), residual, tol);
    }
    for corr in &cal.corrections {
        let ev = &corr.evidence;
        r.check(
            format!("appendix-b/corrected/{}", corr.matrix),
            ev.residual_corrected,
            ev.tolerance,
        );
        r.check(
            format!("appendix-b/printed-separation/{}", corr.matrix),
            100.0 * ev.tolerance / ev.residual_printed,
            1.0,
        );
    }
    for w in &cal.warnings {
        r.warn(w.clone());
    }
    r.artifact("conventions", &cal);
    Ok(())
}

fn verify_a(r: &mut Report, opts: &VerifyOptions) -> Result<()> {
    let pts = sample_oracle_points(opts.seed, opts.points.unwrap_or(5));
    let single = OracleConfig {
        cutoff: opts.fock_cutoff,
        ..OracleConfig::single_mode()
    };
    let two = OracleConfig {
        cutoff: opts.fock_cutoff_two,
        ..OracleConfig::two_mode()
    };
    let tol_of = |kind: OperatorKind| match kind {
        OperatorKind::SingleMode => opts.tol.unwrap_or(TOL_ORACLE_SINGLE),
        OperatorKind::TwoMode => opts.tol.unwrap_or(TOL_ORACLE_TWO),
    };
    let mut max_shift = [0.0f64; 2];
    let mut max_weight = [0.0f64; 2];
    for coord in CoordName::ALL {
        let kind = kind_of(coord.subsystem());
        let (config, k) = match kind {
            OperatorKind::SingleMode => (&single, 0),
            OperatorKind::TwoMode => (&two, 1),
        };
        let mut residual: f64 = 0.0;
        for p in &pts {
            let m = match wz_connection_numeric(kind, p, coord, config) {
                Ok(v) => {
                    max_shift[k] = max_shift[k].max(v.shift);
                    max_weight[k] = max_weight[k].max(v.truncation_weight);
                    v.matrix
                }
                Err(Error::CutoffNotConverged { shift, .. }) => {
                    max_shift[k] = nan_max(max_shift[k], shift);
                    wz_connection_at_cutoff(p, coord, config.cutoff, config.step)?
                }
                Err(e) => return Err(e),
            };
            residual = nan_max(residual, (&m - &connection(p, coord)).max_abs());
        }
        r.check(format!("appendix-a/A_{coord}"), residual, tol_of(kind));
    }
    let conv = OracleConfig::single_mode().convergence_tol;
    r.check("appendix-a/cutoff-convergence/single-mode", max_shift[0], conv);
    r.check("appendix-a/cutoff-convergence/two-mode", max_shift[1], conv);
    r.artifact("truncation_weight_single_mode", max_weight[0]);
    r.artifact("truncation_weight_two_mode", max_weight[1]);

    let p0 = pts[0];
    let ladders = [
        ("single-mode", Subsystem::Qubit1, SINGLE_MODE_LADDER),
        ("two-mode", Subsystem::Interaction, TWO_MODE_LADDER),
    ];
    for (name, which, ladder) in ladders {
        let mut res = Vec::new();
        for cutoff in ladder {
            let mut m: f64 = 0.0;
            for coord in which.coords() {
                let a = wz_connection_at_cutoff(&p0, coord, cutoff, single.step)?;
                m = nan_max(m, (&a - &connection(&p0, coord)).max_abs());
            }
            res.push(m);
        }
        let rise = res.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold(0.0, nan_max);
        r.check(format!("appendix-a/ladder/{name}"), rise, 1e-8);
        r.artifact(
            &format!("ladder_{}", name.replace('-', "_")),
            ladder.iter().zip(&res).map(|(n, v)| (*n, *v)).collect::<Vec<_>>(),
        );
    }

    // A'_v = G^dag A_v G + G^dag d_v G for a phase gauge on one frame vector.
    let gauge = PhaseGauge {
        basis: 1,
        slope: {
            let mut s = [0.0; 12];
            s[CoordName::X1.index()] = 0.7;
            s
        },
    };
    let oracle = OracleConnection::new(Subsystem::Qubit1, single.cutoff, single.step)?.with_gauge(gauge)?;
    let mut v = [0.0; 12];
    v[CoordName::X1.index()] = 1.0;
    let gauged = oracle.along(&p0, &v)?;
    let g = gauge.matrix(&p0, 2);
    let mut expected = &(&g.adjoint() * &connection(&p0, CoordName::X1)) * &g;
    expected[(1, 1)] += c(0.0, 0.7);
    r.check("appendix-a/gauge-covariance", (&gauged - &expected).max_abs(), 1e-6);

    let cal = calibrate_with(
        &ParamPoint::reference(),
        &CalibrationOptions {
            oracle_tol_single: Some(opts.tol.unwrap_or(TOL_ORACLE_SINGLE)),
            oracle_tol_two: opts.tol.unwrap_or(TOL_ORACLE_TWO),
            ..CalibrationOptions::default()
        },
    )?;
    let mut flagged = Vec::new();
    for corr in cal.corrections.iter().filter(|c| c.matrix.starts_with("A_")) {
        let ev = &corr.evidence;
        r.check(
            format!("appendix-a/corrected/{}", corr.matrix),
            ev.residual_corrected,
            ev.tolerance,
        );
        r.check(
            format!("appendix-a/printed-separation/{}", corr.matrix),
            100.0 * ev.tolerance / ev.residual_printed,
            1.0,
        );
        flagged.push(corr.clone());
    }
    for w in cal.warnings.iter().filter(|w| w.contains("A_")) {
        r.warn(w.clone());
    }
    r.artifact("connection_corrections", flagged);
    Ok(())
}

/// Generators of a named set, evaluated in the 4x4 space.
///
/// `c1`, `c2`, `c12`, `c12sq` are the control sets; `u2q1`, `u2q2` the four
/// curvatures of each qubit; `interaction` the four interaction curvatures
/// and three covariant derivatives.
pub fn named_set(name: &str) -> Result<Vec<Generator>> {
    use CurvatureLabel as F;
    let curv = |ls: &[F]| ls.iter().map(|l| Generator::Curvature(*l)).collect::<Vec<_>>();
    let mut v = match name {
        "c1" => curv(&[F::R1Theta1, F::Y1R1, F::X1R1]),
        "c2" => curv(&[F::X2Y2, F::Y2R4, F::X2R4]),
        "c12" => {
            let mut v = curv(&[F::R2R3, F::R2Theta2, F::R2Theta3]);
            v.push(Generator::Covariant(CovariantLabel::DTheta2));
            v.push(Generator::Covariant(CovariantLabel::DTheta2DTheta2));
            v
        }
        "c12sq" => BracketLabel::ALL.iter().map(|l| Generator::Bracket(*l)).collect(),
        "u2q1" => curv(&[F::X1Y1, F::R1Theta1, F::Y1R1, F::X1R1]),
        "u2q2" => curv(&[F::X2Y2, F::R4Theta4, F::Y2R4, F::X2R4]),
        "interaction" => curv(&[F::R2R3, F::R2Theta2, F::R2Theta3, F::R3Theta3]),
        other => return Err(Error::UnknownLabel(format!("generator set \"{other}\""))),
    };
    if name == "interaction" {
        v.extend(CovariantLabel::ALL.iter().map(|l| Generator::Covariant(*l)));
    }
    Ok(v)
}

pub const SET_NAMES: [&str; 7] = ["c1", "c2", "c12", "c12sq", "u2q1", "u2q2", "interaction"];

/// Parses `reference`, `origin`, or `name=value,...` applied on top of the
/// reference point.
pub fn parse_point(text: &str) -> Result<ParamPoint> {
    let text = text.trim();
    let p = match text {
        "reference" => ParamPoint::reference(),
        "origin" => ParamPoint::origin(),
        _ => {
            let mut p = ParamPoint::reference();
            for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("point entry \"{item}\" is not name=value")))?;
                let coord: CoordName = k.trim().parse()?;
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("point entry \"{item}\": \"{}\" is not a number", v.trim())))?;
                p.set(coord, v);
            }
            p
        }
    };
    p.validate()?;
    Ok(p)
}

#[derive(Clone, Debug)]
pub struct RankOptions {
    pub sets: Vec<String>,
    pub point: ParamPoint,
    pub point_text: String,
    pub closure: bool,
    pub tol: f64,
}

pub fn cmd_rank(opts: &RankOptions) -> Result<Report> {
    check_tol(opts.tol)?;
    if opts.sets.is_empty() {
        return Err(Error::InvalidArgument("--sets needs at least one set".into()));
    }
    let p = opts.point;
    p.validate()?;
    let mut r = Report::new("rank", DEFAULT_SEED);
    r.input("sets", &opts.sets);
    r.input("point", &opts.point_text);
    r.input("closure", opts.closure);
    r.input("tol", opts.tol);
    r.artifact("point", p);

    let mut gens: Vec<Generator> = Vec::new();
    for s in &opts.sets {
        for g in named_set(s)? {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
    }
    let mats: Vec<ComplexMatrix> = gens.iter().map(|g| g.eval_embedded(&p)).collect();
    r.artifact("generators", gens.iter().map(|g| g.name()).collect::<Vec<_>>());

    let interaction: Vec<(String, &ComplexMatrix)> = gens
        .iter()
        .zip(&mats)
        .filter(|(g, _)| is_interaction(**g))
        .map(|(g, m)| (g.name(), m))
        .collect();
    let inter_mats: Vec<ComplexMatrix> = named_set("interaction")?.iter().map(|g| g.eval_embedded(&p)).collect();
    let (inter_dim, _) = real_span_dimension(&inter_mats, opts.tol)?;
    if inter_dim < inter_mats.len() {
        r.warn(format!(
            "degenerate point: the {} interaction generators span only {inter_dim} dimension(s)",
            inter_mats.len()
        ));
    }

    let (dim, basis) = real_span_dimension(&mats, opts.tol)?;
    let expected = mats.len().min(16);
    r.artifact("span_dimension", dim);
    r.check(
        format!("rank/span-dimension (expected {expected})"),
        expected.abs_diff(dim) as f64,
        0.0,
    );
    r.check("rank/span-basis-orthonormality", basis.gram_defect(), 1e-10);

    let partition = Partition::two_qubit_parity();
    for (name, m) in &interaction {
        r.check(
            format!("rank/block-preserving/{name}"),
            block_coupling(m, &partition),
            1e-12,
        );
    }

    if opts.closure {
        let closure = bracket_closure(&mats, opts.tol, 16)?;
        r.artifact("closure_dimension", closure.len());
        let has = |s: &str| opts.sets.iter().any(|x| x == s);
        let only_interaction = gens.iter().all(|g| is_interaction(*g));
        if has("c1") && has("c2") && has("c12") {
            r.check(
                "rank/closure-dimension (expected 16)",
                16usize.abs_diff(closure.len()) as f64,
                0.0,
            );
        } else if only_interaction && has("interaction") {
            r.check(
                "rank/closure-dimension (expected 7)",
                7usize.abs_diff(closure.len()) as f64,
                0.0,
            );
            let center = center_dimension(&closure, opts.tol)?;
            r.artifact("center_dimension", center);
            r.check(
                "rank/center-dimension (at least 1)",
                1usize.saturating_sub(center) as f64,
                0.0,
            );
        } else if !has("c1") && !has("c2") && !has("c12") && !has("c12sq") && !has("interaction") {
            let expected = 4 * opts.sets.len();
            r.check(
                format!("rank/closure-dimension (expected {expected})"),
                expected.abs_diff(closure.len()) as f64,
                0.0,
            );
        }
    }
    Ok(r)
}

fn is_interaction(g: Generator) -> bool {
    match g {
        Generator::Curvature(l) => l.subsystem() == Subsystem::Interaction,
        Generator::Covariant(_) => true,
        Generator::Bracket(l) => l == BracketLabel::Double,
    }
}

/// The reference direction a holonomy generator is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Bracket(BracketLabel),
    Curvature(CurvatureLabel),
}

impl std::str::FromStr for Expectation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(l) = s.parse::<BracketLabel>() {
            return Ok(Expectation::Bracket(l));
        }
        if let Ok(l) = s.parse::<CurvatureLabel>() {
            return Ok(Expectation::Curvature(l));
        }
        Err(Error::UnknownLabel(format!(
            "\"{s}\" is neither a bracket key nor a curvature label"
        )))
    }
}

impl Expectation {
    fn name(self) -> String {
        match self {
            Expectation::Bracket(l) => l.key().to_string(),
            Expectation::Curvature(l) => l.name(),
        }
    }

    /// Expected generator direction at `p` in `space`.
    fn direction(self, p: &ParamPoint, space: Space) -> Result<ComplexMatrix> {
        match (self, space) {
            (Expectation::Bracket(l), Space::Full) => Ok(bracket_analytic(p, l).scale_real(COMMUTATOR_LOOP_SIGN)),
            (Expectation::Bracket(_), _) => Err(Error::InvalidArgument(
                "bracket expectations need space \"full\"".into(),
            )),
            (Expectation::Curvature(l), Space::Full) => {
                Ok(curvature_embedded(p, l).scale_real(HOLONOMY_CURVATURE_SIGN))
            }
            (Expectation::Curvature(l), s) if Space::native(l.subsystem()) == s => {
                Ok(curvature_analytic(p, l).scale_real(HOLONOMY_CURVATURE_SIGN))
            }
            (Expectation::Curvature(l), s) => Err(Error::InvalidArgument(format!(
                "{} does not act in space \"{s}\"",
                l.name()
            ))),
        }
    }
}

pub const EXPECT_TOL: f64 = 0.01;

#[derive(Clone, Debug)]
pub struct HolonomyOptions {
    pub loop_file: PathBuf,
    pub steps: usize,
    pub expect: Option<Expectation>,
}

pub fn load_loop(path: &Path) -> Result<LoopFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read loop file {}: {e}", path.display())))?;
    LoopFile::parse(&text)
}

pub fn cmd_holonomy(opts: &HolonomyOptions) -> Result<Report> {
    if opts.steps == 0 {
        return Err(Error::InvalidArgument("--steps must be at least 1".into()));
    }
    let lf = load_loop(&opts.loop_file)?;
    let mut r = Report::new("holonomy", DEFAULT_SEED);
    r.input("loop", opts.loop_file.display().to_string());
    r.input("space", lf.space);
    r.input("steps", opts.steps);
    r.input("expect", opts.expect.map(Expectation::name));
    let limit = crate::holonomy::MAX_UNITARITY_DEFECT;
    let h = match transport(&lf.path, opts.steps, &AnalyticConnection(lf.space)) {
        Ok(h) => h,
        Err(Error::UnitarityDefect { defect, .. }) => {
            r.check("holonomy/unitarity-defect", defect, limit);
            r.warn(format!(
                "unitarity defect {defect:.3e} exceeds {limit:.1e}; increase --steps"
            ));
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    r.check("holonomy/unitarity-defect", h.unitarity_defect, limit);
    r.artifact("distance_from_identity", h.distance_from_identity);
    r.artifact("steps_used", h.steps_used);
    r.matrix("unitary", &h.unitary);
    match &h.generator {
        Some(g) => r.matrix("generator", g),
        None => r.warn(h.generator_note.clone().unwrap_or_default()),
    }
    if let Some(exp) = opts.expect {
        let target = exp.direction(lf.path.base(), lf.space)?;
        let cos = h.generator.as_ref().map_or(f64::NAN, |g| g.cosine(&target));
        r.artifact("cosine", cos);
        r.check(format!("holonomy/direction/{}", exp.name()), 1.0 - cos, EXPECT_TOL);
    }
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub plane: (CoordName, CoordName),
    pub eps: Vec<f64>,
    pub point: ParamPoint,
    pub point_text: String,
    pub steps: usize,
}

/// One row of the sweep table.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SweepRow {
    pub eps: f64,
    pub residual_vs_f: f64,
    /// `residual(previous eps) / residual(this eps)`; absent on the first row.
    pub ratio: Option<f64>,
}

/// Residuals below this are treated as exact and not ratio-tested.
pub const SWEEP_FLOOR: f64 = 1e-9;

/// Allowed relative deviation of a ratio from the first-order prediction.
pub const SWEEP_RATIO_TOL: f64 = 0.15;

pub fn sweep_rows(opts: &SweepOptions) -> Result<(Vec<SweepRow>, f64)> {
    let (a, b) = opts.plane;
    if a.subsystem() != b.subsystem() {
        return Err(Error::MixedSubsystem(a.to_string(), b.to_string()));
    }
    let (label, orient) = CurvatureLabel::for_pair(a, b)
        .ok_or_else(|| Error::InvalidArgument(format!("({a}, {b}) is not a curvature plane")))?;
    if opts.eps.len() < 2 {
        return Err(Error::InvalidArgument("--eps needs at least two values".into()));
    }
    if opts.eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) || opts.eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(
            "--eps values must be positive and strictly descending".into(),
        ));
    }
    if opts.steps == 0 {
        return Err(Error::InvalidArgument("--steps must be at least 1".into()));
    }
    opts.point.validate()?;
    let space = Space::native(a.subsystem());
    let target = curvature_analytic(&opts.point, label).scale_real(orient * HOLONOMY_CURVATURE_SIGN);
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut defect: f64 = 0.0;
    for &eps in &opts.eps {
        let l = crate::holonomy::rect_loop(&opts.point, a, b, eps, eps)?;
        let h = transport(&l, opts.steps, &AnalyticConnection(space))?;
        defect = defect.max(h.unitarity_defect);
        let g = h.generator.ok_or(Error::LogOutOfRange(h.distance_from_identity))?;
        let residual = (&g.scale_real(1.0 / (eps * eps)) - &target).frobenius_norm();
        let ratio = rows.last().map(|prev| prev.residual_vs_f / residual);
        rows.push(SweepRow {
            eps,
            residual_vs_f: residual,
            ratio,
        });
    }
    Ok((rows, defect))
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("eps,residual_vs_F,ratio\n");
    for row in rows {
        let ratio = row.ratio.map(|x| format!("{x:e}")).unwrap_or_default();
        out.push_str(&format!("{:e},{:e},{}\n", row.eps, row.residual_vs_f, ratio));
    }
    out
}

pub fn cmd_sweep(opts: &SweepOptions) -> Result<(Report, Vec<SweepRow>)> {
    let (rows, defect) = sweep_rows(opts)?;
    let mut r = Report::new("sweep", DEFAULT_SEED);
    r.input("plane", [opts.plane.0.name(), opts.plane.1.name()]);
    r.input("eps", &opts.eps);
    r.input("point", &opts.point_text);
    r.input("steps", opts.steps);
    r.check("sweep/unitarity-defect", defect, crate::holonomy::MAX_UNITARITY_DEFECT);
    for w in rows.windows(2) {
        let (prev, row) = (w[0], w[1]);
        let name = format!("sweep/eps={}", row.eps);
        if prev.residual_vs_f < SWEEP_FLOOR && row.residual_vs_f < SWEEP_FLOOR {
            r.check(format!("{name}/residual-floor"), row.residual_vs_f, SWEEP_FLOOR);
        } else {
            let predicted = prev.eps / row.eps;
            let ratio = row.ratio.unwrap_or(f64::NAN);
            r.check(
                format!("{name}/ratio (predicted {predicted})"),
                (ratio - predicted).abs(),
                SWEEP_RATIO_TOL * predicted,
            );
        }
    }
    r.artifact("rows", &rows);
    Ok((r, rows))
}

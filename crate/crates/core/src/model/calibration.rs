//! Empirical determination of sign conventions and of the entries of the
//! typeset tables that fail numeric verification.

use serde::Serialize;

use super::brackets::{bracket_direct, BracketLabel};
use super::connection::{connection, embed_native};
use super::curvature::{covariant_derivative_analytic, curvature_analytic, CovariantLabel, CurvatureLabel};
use super::numeric::{covariant_derivative_numeric, curvature_from_connection, FiniteDiff};
use super::params::{CoordName, ParamPoint, Subsystem};
use super::printed;
use crate::fock_oracle::{kind_of, oracle_domain_point, wz_connection_numeric, OperatorKind, OracleConfig};
use crate::holonomy::{commutator_loop, rect_loop, small_loop_curvature, transport, AnalyticConnection, Space};
use crate::lie_core::ComplexMatrix;
use crate::model::bracket_analytic;
use crate::Result;

pub const COMPOSITION_CONVENTION: &str =
    "g(path) = g(later segment) * g(earlier segment), each segment solving dg/dt = -A g with g(0) = Id";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub method: String,
    /// Max-entry residual of the typeset matrix against the reference.
    pub residual_printed: f64,
    /// Max-entry residual of the shipped matrix against the reference.
    pub residual_corrected: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Correction {
    pub matrix: String,
    /// Entries `(row, col)` where the typeset matrix misses the reference.
    pub entries: Vec<(usize, usize)>,
    pub printed_expression: String,
    pub corrected_expression: String,
    /// False when the shipped form also misses the reference.
    pub resolved: bool,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionRecord {
    /// `+1` if `d_i A_j - d_j A_i + [A_i, A_j]` equals the tabulated `F_ij`.
    pub curvature_sign: i8,
    /// Weight of the commutator term in the curvature; `1` or `1/2`.
    pub bracket_weight: f64,
    /// Sign `s` in `log g(eps-rectangle in (a, b)) ~ s eps^2 F_ab`.
    pub holonomy_curvature_sign: i8,
    /// Measured sign in `log g(commutator loop) ~ s eps^4 [F_1, F_2]`.
    pub commutator_loop_sign: i8,
    pub composition: String,
    pub corrections: Vec<Correction>,
    pub warnings: Vec<String>,
}

impl ConventionRecord {
    pub fn correction(&self, matrix: &str) -> Option<&Correction> {
        self.corrections.iter().find(|c| c.matrix == matrix)
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &Correction> {
        self.corrections.iter().filter(|c| !c.resolved)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CalibrationOptions {
    pub fd: FiniteDiff,
    /// Tolerance for curvature, covariant-derivative and bracket entries.
    pub tol: f64,
    /// Tolerance for single-mode oracle comparisons; `None` skips the oracle.
    pub oracle_tol_single: Option<f64>,
    pub oracle_tol_two: f64,
    pub loop_eps: f64,
    pub loop_steps: usize,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            fd: FiniteDiff::default(),
            tol: 1e-6,
            oracle_tol_single: Some(1e-4),
            oracle_tol_two: 1e-3,
            loop_eps: 0.005,
            loop_steps: 200,
        }
    }
}

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

fn bad_entries(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Vec<(usize, usize)> {
    let n = a.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if (a[(i, j)] - b[(i, j)]).norm() > tol {
                out.push((i, j));
            }
        }
    }
    out
}

fn qubit_symbols(which: Subsystem) -> (&'static str, &'static str) {
    match which {
        Subsystem::Qubit1 => ("r1", "theta1"),
        _ => ("r4", "theta4"),
    }
}

/// Human-readable (printed, corrected) expressions for a typeset matrix.
fn expressions(matrix: &str) -> (String, String) {
    let phase_pair = |which: Subsystem, template: &dyn Fn(&str, &str, &str, &str) -> String| {
        let (r, t) = qubit_symbols(which);
        (template(r, t, "", "-"), template(r, t, "-", ""))
    };
    let q = |name: &str| {
        if ["x2", "y2", "r4"].iter().any(|k| name.contains(k)) {
            Subsystem::Qubit2
        } else {
            Subsystem::Qubit1
        }
    };
    match matrix {
        "A_x1" | "A_x2" => phase_pair(q(matrix), &|r, t, up, lo| {
            format!("(0,1) = -(cosh 2{r} - e^{{{up}i {t}}} sinh 2{r}), (1,0) = cosh 2{r} - e^{{{lo}i {t}}} sinh 2{r}")
        }),
        "A_y1" => {
            phase_pair(Subsystem::Qubit1, &|r, t, up, lo| {
                format!("(0,1) = i(cosh 2{r} + e^{{{up}i {t}}} sinh 2{r}), (1,0) = i(cosh 2{r} + e^{{{lo}i {t}}} sinh 2{r})")
            })
        }
        "A_y2" => (
            "(0,1) = i(cosh 2r2 + e^{i theta4} sinh 2r4), (1,0) = i(cosh 2r4 + e^{-i theta4} sinh 2r4)".into(),
            "(0,1) = i(cosh 2r4 + e^{-i theta4} sinh 2r4), (1,0) = i(cosh 2r4 + e^{i theta4} sinh 2r4)".into(),
        ),
        "F_y1r1" | "F_y1r1 (x) 1" | "F_y2r4" | "1 (x) F_y2r4" => phase_pair(q(matrix), &|r, t, up, lo| {
            format!("(0,1) = -2i(e^{{{up}i {t}}} cosh 2{r} + sinh 2{r}), (1,0) = -2i(e^{{{lo}i {t}}} cosh 2{r} + sinh 2{r})")
        }),
        "F_x1r1" | "F_x1r1 (x) 1" | "F_x2r4" | "1 (x) F_x2r4" => {
            phase_pair(q(matrix), &|r, t, up, lo| {
                format!("(0,1) = -2(e^{{{up}i {t}}} cosh 2{r} - sinh 2{r}), (1,0) = 2(e^{{{lo}i {t}}} cosh 2{r} - sinh 2{r})")
            })
        }
        "1 (x) F_x2y2" => ("4i at (0,1) and (3,3)".into(), "4i diag(0, 1, 0, 1)".into()),
        "D_theta2 D_theta2 F_r2theta2" => (
            "diag(1,0,0,-1) 2i sinh^3 r2 + [(0,3) e^{-i theta2}, (3,0) e^{i theta2}] 2i sinh^2 2r2 cosh 2r2".into(),
            "diag(1,0,0,-1) 2i sinh^3 2r2 + [(0,3) e^{-i theta2}, (3,0) e^{i theta2}] 2i sinh^2 2r2 cosh 2r2".into(),
        ),
        m if m.starts_with('[') => (
            "as typeset, with phases in theta1 and theta4".into(),
            "same form with theta1 -> -theta1 and theta4 -> -theta4 in every phase factor".into(),
        ),
        _ => ("as typeset".into(), "no closed-form correction identified".into()),
    }
}

struct Check<'a> {
    matrix: String,
    printed: ComplexMatrix,
    shipped: ComplexMatrix,
    reference: ComplexMatrix,
    method: &'a str,
    tol: f64,
}

impl Check<'_> {
    fn correction(self) -> Option<Correction> {
        let residual_printed = max_diff(&self.printed, &self.reference);
        if residual_printed <= self.tol {
            return None;
        }
        let residual_corrected = max_diff(&self.shipped, &self.reference);
        let (printed_expression, corrected_expression) = expressions(&self.matrix);
        Some(Correction {
            entries: bad_entries(&self.printed, &self.reference, self.tol),
            matrix: self.matrix,
            printed_expression,
            corrected_expression,
            resolved: residual_corrected <= self.tol,
            evidence: Evidence {
                method: self.method.to_string(),
                residual_printed,
                residual_corrected,
                tolerance: self.tol,
            },
        })
    }
}

fn sign_of(plus: f64, minus: f64) -> i8 {
    if plus <= minus {
        1
    } else {
        -1
    }
}

/// Calibrates with default options and finite-difference step `h`.
pub fn calibrate_conventions(p: &ParamPoint, h: f64, tol: f64) -> Result<ConventionRecord> {
    let opts = CalibrationOptions {
        fd: FiniteDiff::new(h, 1)?,
        tol,
        ..CalibrationOptions::default()
    };
    calibrate_with(p, &opts)
}

pub fn calibrate_with(p: &ParamPoint, opts: &CalibrationOptions) -> Result<ConventionRecord> {
    p.validate()?;
    let fd = &opts.fd;
    let mut warnings = Vec::new();
    let mut corrections = Vec::new();

    // Curvature sign and commutator weight, from the shipped connection.
    let mut numeric = Vec::new();
    let (mut plus, mut minus, mut half) = (0.0, 0.0, 0.0);
    for l in CurvatureLabel::ALL {
        let (i, j) = l.coords();
        let f = curvature_from_connection(connection, p, i, j, fd, 1.0)?;
        let f_half = curvature_from_connection(connection, p, i, j, fd, 0.5)?;
        let target = curvature_analytic(p, l);
        plus += max_diff(&f, &target);
        minus += max_diff(&f, &-&target);
        half += max_diff(&f_half, &target).min(max_diff(&f_half, &-&target));
        numeric.push((l, f));
    }
    let curvature_sign = sign_of(plus, minus);
    let best_unit = plus.min(minus);
    let bracket_weight = if best_unit <= half { 1.0 } else { 0.5 };
    if best_unit.min(half) > opts.tol * CurvatureLabel::ALL.len() as f64 {
        warnings.push(format!(
            "no curvature convention fits all labels (summed residual {:.3e})",
            best_unit.min(half)
        ));
    }
    let s = f64::from(curvature_sign);

    for (l, f) in &numeric {
        let reference = f.scale_real(s);
        let which = l.subsystem();
        let mut checks = vec![Check {
            matrix: l.name(),
            printed: printed::printed_curvature(p, *l),
            shipped: curvature_analytic(p, *l),
            reference: reference.clone(),
            method: "finite-difference curvature of the connection",
            tol: opts.tol,
        }];
        if which != Subsystem::Interaction {
            checks.push(Check {
                matrix: super::Generator::Curvature(*l).name(),
                printed: printed::printed_curvature_embedded(p, *l),
                shipped: embed_native(&curvature_analytic(p, *l), which),
                reference: embed_native(&reference, which),
                method: "finite-difference curvature, Kronecker-embedded",
                tol: opts.tol,
            });
        }
        corrections.extend(checks.into_iter().filter_map(Check::correction));
    }

    for l in CovariantLabel::ALL {
        let (dir, field) = l.decompose();
        let d = covariant_derivative_numeric(p, dir, field, fd)?;
        corrections.extend(
            Check {
                matrix: l.name().to_string(),
                printed: printed::printed_covariant(p, l),
                shipped: covariant_derivative_analytic(p, l),
                reference: d.scale_real(s),
                method: "finite-difference covariant derivative",
                tol: opts.tol,
            }
            .correction(),
        );
    }

    for l in BracketLabel::ALL {
        corrections.extend(
            Check {
                matrix: l.name().to_string(),
                printed: printed::printed_bracket(p, l),
                shipped: bracket_analytic(p, l),
                reference: bracket_direct(p, l),
                method: "direct bracket of the shipped curvatures",
                tol: opts.tol,
            }
            .correction(),
        );
    }

    if let Some(tol_single) = opts.oracle_tol_single {
        let q = oracle_domain_point(p);
        for c in CoordName::ALL {
            let kind = kind_of(c.subsystem());
            let (config, tol) = match kind {
                OperatorKind::SingleMode => (OracleConfig::single_mode(), tol_single),
                OperatorKind::TwoMode => (OracleConfig::two_mode(), opts.oracle_tol_two),
            };
            match wz_connection_numeric(kind, &q, c, &config) {
                Ok(v) => corrections.extend(
                    Check {
                        matrix: format!("A_{c}"),
                        printed: printed::printed_connection(&q, c),
                        shipped: connection(&q, c),
                        reference: v.matrix,
                        method: "Fock-space connection (scaled point)",
                        tol,
                    }
                    .correction(),
                ),
                Err(e) => warnings.push(format!("oracle skipped for A_{c}: {e}")),
            }
        }
    }

    // Holonomy sign from a small (x1, y1) rectangle, where F is constant.
    let f_loop = small_loop_curvature(p, CoordName::X1, CoordName::Y1, opts.loop_eps, opts.loop_steps)?;
    let target = curvature_analytic(p, CurvatureLabel::X1Y1).scale_real(s);
    let (rp, rm) = (max_diff(&f_loop, &target), max_diff(&f_loop, &-&target));
    let holonomy_curvature_sign = sign_of(rp, rm);
    if rp.min(rm) > 0.02 * target.max_abs() {
        warnings.push(format!(
            "small-loop curvature misses F_x1y1 by {:.3e} under both signs",
            rp.min(rm)
        ));
    }

    // Commutator-loop sign from the (x1, r1) x (r2, r3) gadget.
    let eps = 0.02;
    let l1 = rect_loop(p, CoordName::X1, CoordName::R1, eps, eps)?;
    let l2 = rect_loop(p, CoordName::R2, CoordName::R3, eps, eps)?;
    let h = transport(
        &commutator_loop(&l1, &l2)?,
        opts.loop_steps,
        &AnalyticConnection(Space::Full),
    )?;
    let commutator_loop_sign = match &h.generator {
        Some(g) => {
            let cos = g.cosine(&bracket_analytic(p, BracketLabel::X1R1R2R3));
            if cos.abs() < 0.9 {
                warnings.push(format!(
                    "commutator-loop generator is poorly aligned with the bracket (cosine {cos:.4})"
                ));
            }
            if cos >= 0.0 {
                1
            } else {
                -1
            }
        }
        None => {
            warnings.push("commutator-loop holonomy has no principal logarithm".into());
            crate::holonomy::COMMUTATOR_LOOP_SIGN as i8
        }
    };

    for c in corrections.iter().filter(|c| !c.resolved) {
        warnings.push(format!(
            "{}: unresolved, shipped form misses the reference by {:.3e}",
            c.matrix, c.evidence.residual_corrected
        ));
    }

    Ok(ConventionRecord {
        curvature_sign,
        bracket_weight,
        holonomy_curvature_sign,
        commutator_loop_sign,
        composition: COMPOSITION_CONVENTION.to_string(),
        corrections,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> ConventionRecord {
        let opts = CalibrationOptions {
            oracle_tol_single: None,
            ..CalibrationOptions::default()
        };
        calibrate_with(&ParamPoint::reference(), &opts).unwrap()
    }

    #[test]
    fn signs_and_weight() {
        let r = record();
        assert_eq!(r.curvature_sign, 1);
        assert_eq!(r.bracket_weight, 1.0);
        assert_eq!(r.holonomy_curvature_sign, -1);
        assert_eq!(r.commutator_loop_sign, -1);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    }

    #[test]
    fn flags_the_known_misprints() {
        let r = record();
        for name in [
            "1 (x) F_x2y2",
            "D_theta2 D_theta2 F_r2theta2",
            "F_x1r1",
            "F_y2r4",
            "[F_x1r1 (x) 1, F_r2r3]",
        ] {
            let c = r.correction(name).unwrap_or_else(|| panic!("{name} not flagged"));
            assert!(c.resolved);
            assert!(c.evidence.residual_printed >= 100.0 * c.evidence.tolerance, "{name}");
        }
        let x2y2 = r.correction("1 (x) F_x2y2").unwrap();
        assert!(x2y2.entries.contains(&(0, 1)));
        assert!(r.correction("F_x1y1").is_none());
        assert!(r.correction("F_r2r3").is_none());
        assert_eq!(r.unresolved().count(), 0);
    }

    #[test]
    fn deterministic() {
        assert_eq!(record(), record());
    }
}

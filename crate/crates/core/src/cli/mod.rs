//! The `hqc` command-line front end.
//!
//! Exit codes: `0` when every check passes, `1` when any check fails, `2` on
//! usage, parse or input errors.

mod commands;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::{
    cmd_holonomy, cmd_rank, cmd_sweep, cmd_verify, load_loop, named_set, parse_point, sample_oracle_points,
    sample_points, sweep_csv, sweep_rows, Expectation, HolonomyOptions, RankOptions, SweepOptions, SweepRow, Target,
    VerifyOptions, DEFAULT_SEED, EXPECT_TOL, SET_NAMES, SINGLE_MODE_LADDER, SWEEP_FLOOR, SWEEP_RATIO_TOL,
    TOL_APPENDIX_B, TOL_APPENDIX_C, TOL_ORACLE_SINGLE, TOL_ORACLE_TWO, TWO_MODE_LADDER,
};
pub use report::{matrix_json, CheckResult, Report, Verdict};

use crate::holonomy::DEFAULT_STEPS_PER_SEGMENT;
use crate::lie_core::DEFAULT_RANK_TOL;
use crate::model::{BracketCoefficients, CoordName};
use crate::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hqc",
    version,
    about = "Verify connection, curvature and holonomy closed forms for squeezed-state two-qubit control"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    AppendixA,
    AppendixB,
    AppendixC,
    All,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::AppendixA => Target::AppendixA,
            TargetArg::AppendixB => Target::AppendixB,
            TargetArg::AppendixC => Target::AppendixC,
            TargetArg::All => Target::All,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Re-derive the closed forms numerically at seeded random points.
    Verify {
        #[arg(value_enum)]
        target: TargetArg,
        /// Sample points (default 5 for appendix-a, 20 otherwise).
        #[arg(long)]
        points: Option<usize>,
        /// Seed for the ChaCha8 point sampler.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Overrides every per-target tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Single-mode Fock cutoff.
        #[arg(long, default_value_t = 48)]
        fock_cutoff: usize,
        /// Per-mode Fock cutoff for the two-mode operators.
        #[arg(long, default_value_t = 24)]
        fock_cutoff_two: usize,
        /// JSON object overriding bracket coefficients, keyed like `x1r1_r2r3`.
        #[arg(long)]
        coefficients: Option<PathBuf>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Real-span and bracket-closure dimensions of generator sets.
    Rank {
        /// Comma-separated: c1, c2, c12, c12sq, u2q1, u2q2, interaction.
        #[arg(long, value_delimiter = ',', default_value = "c1,c2,c12,c12sq")]
        sets: Vec<String>,
        /// `reference`, `origin`, or `name=value,...` on top of the reference point.
        #[arg(long, default_value = "reference")]
        point: String,
        /// Also compute the bracket closure.
        #[arg(long)]
        closure: bool,
        /// Relative singular-value cutoff.
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parallel transport around a loop read from a JSON file.
    Holonomy {
        #[arg(long = "loop")]
        loop_file: PathBuf,
        /// RK4 steps per segment.
        #[arg(long, default_value_t = DEFAULT_STEPS_PER_SEGMENT)]
        steps: usize,
        /// Compare the generator direction with a bracket key or curvature label.
        #[arg(long)]
        expect: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Small-loop holonomy against the curvature over shrinking loop sizes.
    Sweep {
        /// Two coordinates of one subsystem, e.g. `x1,y1`.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        plane: Vec<String>,
        /// Strictly descending loop sizes.
        #[arg(long, value_delimiter = ',', default_value = "0.02,0.01,0.005")]
        eps: Vec<f64>,
        #[arg(long, default_value = "reference")]
        point: String,
        #[arg(long, default_value_t = DEFAULT_STEPS_PER_SEGMENT)]
        steps: usize,
        /// Write `eps,residual_vs_F,ratio` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Io(_)
        | Error::InvalidArgument(_)
        | Error::InvalidPoint(_)
        | Error::InvalidLoop(_)
        | Error::UnknownLabel(_)
        | Error::MixedSubsystem(..) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Runs the CLI with explicit arguments and output streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(report) => {
            for f in report.failures() {
                let _ = writeln!(
                    stderr,
                    "failed: {} (residual {:.3e} > tolerance {:.3e})",
                    f.name, f.residual, f.tolerance
                );
            }
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn finish(report: Report, out: Option<PathBuf>, stdout: &mut dyn Write) -> crate::Result<Report> {
    write!(stdout, "{}", report.table())?;
    if let Some(path) = out {
        report.write(&path)?;
    }
    Ok(report)
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> crate::Result<Report> {
    match command {
        Command::Verify {
            target,
            points,
            seed,
            tol,
            fock_cutoff,
            fock_cutoff_two,
            coefficients,
            out,
        } => {
            let coeffs = match &coefficients {
                Some(path) => BracketCoefficients::load(path)?,
                None => BracketCoefficients::default(),
            };
            let opts = VerifyOptions {
                target: target.into(),
                points,
                seed,
                tol,
                fock_cutoff,
                fock_cutoff_two,
                coefficients: coeffs,
                coefficients_path: coefficients,
            };
            finish(cmd_verify(&opts)?, out, stdout)
        }
        Command::Rank {
            sets,
            point,
            closure,
            tol,
            out,
        } => {
            let opts = RankOptions {
                sets,
                point: parse_point(&point)?,
                point_text: point,
                closure,
                tol,
            };
            finish(cmd_rank(&opts)?, out, stdout)
        }
        Command::Holonomy {
            loop_file,
            steps,
            expect,
            out,
        } => {
            let opts = HolonomyOptions {
                loop_file,
                steps,
                expect: expect.map(|s| s.parse()).transpose()?,
            };
            let report = cmd_holonomy(&opts)?;
            let report = finish(report, out, stdout)?;
            let defect = report.checks.first().map_or(f64::NAN, |c| c.residual);
            writeln!(stdout, "unitarity defect: {defect:.3e}")?;
            if let Some(d) = report.artifacts.get("distance_from_identity") {
                writeln!(stdout, "||g - Id||_F: {}", d)?;
            }
            Ok(report)
        }
        Command::Sweep {
            plane,
            eps,
            point,
            steps,
            csv,
            out,
        } => {
            let [a, b] = plane.as_slice() else {
                return Err(Error::InvalidArgument(format!(
                    "--plane needs exactly two coordinates, got {}",
                    plane.len()
                )));
            };
            let opts = SweepOptions {
                plane: (a.parse::<CoordName>()?, b.parse::<CoordName>()?),
                eps,
                point: parse_point(&point)?,
                point_text: point,
                steps,
            };
            let (report, rows) = cmd_sweep(&opts)?;
            if let Some(path) = csv {
                std::fs::write(path, sweep_csv(&rows))?;
            }
            finish(report, out, stdout)
        }
    }
}

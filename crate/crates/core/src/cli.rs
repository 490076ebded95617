//! The `fq` command-line front end.
//!
//! Exit status is 0 on success, 1 when the answer is negative (a validation
//! failure, a parity contradiction, an uncertified assignment, a ruled-out
//! lattice or any other domain error) and 2 on usage or file errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::coloring::{solve_good_coloring, ColoringOutcome, SolveMode};
use crate::complex::{dual_graph, validate, SurfaceComplex};
use crate::error::FormatError;
use crate::io;
use crate::lattice::{assign_groups, certificate, decide, TypeSequence, Verdict};
use crate::loops::trace_geodesic_loops;
use crate::tessellation::{
    build_block_tessellation, build_rect_tessellation, default_grid, face_count, subdivide,
};

#[derive(Debug, Parser)]
#[command(
    name = "fq",
    version,
    about = "Surface quotients of Fuchsian buildings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the number of p-gons in a tessellation of the genus-g surface.
    Faces {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        genus: usize,
    },
    /// Build a right-angled tessellation.
    ///
    /// Uses the block construction when 4 divides the face count and the
    /// rectangular one otherwise.
    Tessellate {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        genus: usize,
        /// Force the rectangular construction on an AxB grid.
        #[arg(long, value_parser = parse_grid)]
        rect: Option<(usize, usize)>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the surface and labeling axioms.
    Validate {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        genus: Option<i64>,
    },
    /// Trace geodesic loops.
    Loops {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Find a good 2-coloring of the edges.
    Color {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Enumerate all colorings instead of propagating constraints.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Cut every face into two or four pieces.
    Subdivide {
        #[arg(long)]
        pieces: usize,
        #[arg(long)]
        axis: Option<usize>,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the subdivision map.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Assign local groups and check the link conditions.
    Certify {
        #[arg(short, long)]
        input: PathBuf,
        /// Coloring file; solved on the fly when omitted.
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        q: TypeSequence,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether a lattice exists.
    Decide {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        q: TypeSequence,
        /// Run the construction and attach its certificate.
        #[arg(long)]
        certify: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export the dual graph.
    Export {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected AxB, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug)]
enum Failure {
    /// Negative answer; the message goes to stderr, exit 1.
    Domain(String),
    /// Bad input file or path, exit 2.
    Input(FormatError),
}

impl<E: std::error::Error> From<E> for Failure
where
    E: DomainError,
{
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// Library errors that count as negative answers.
trait DomainError {}
impl DomainError for crate::error::ComplexError {}
impl DomainError for crate::error::TessellationError {}
impl DomainError for crate::error::LoopError {}
impl DomainError for crate::error::ColoringError {}
impl DomainError for crate::error::LatticeError {}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Complex(c) => Failure::Domain(c.to_string()),
            other => Failure::Input(other),
        }
    }
}

/// What a successful subcommand produced.
struct Outcome {
    /// Written to `--output` or stdout.
    text: String,
    /// Exit 1 even though the command ran (e.g. validation failed).
    negative: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            negative: false,
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let output = output_path(&cli.command).map(Path::to_path_buf);
    match execute(cli.command) {
        Ok(outcome) => {
            let written =
                match &output {
                    Some(path) => io::write_string(path, &outcome.text),
                    None => stdout.write_all(outcome.text.as_bytes()).map_err(|source| {
                        FormatError::Io {
                            path: "<stdout>".into(),
                            source,
                        }
                    }),
                };
            match written {
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    2
                }
                Ok(()) => i32::from(outcome.negative),
            }
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn output_path(command: &Command) -> Option<&Path> {
    match command {
        Command::Tessellate { output, .. }
        | Command::Color { output, .. }
        | Command::Subdivide { output, .. }
        | Command::Certify { output, .. }
        | Command::Decide { output, .. }
        | Command::Export { output, .. } => output.as_deref(),
        Command::Loops { report, .. } => report.as_deref(),
        Command::Faces { .. } | Command::Validate { .. } => None,
    }
}

fn load_complex(path: &Path) -> Result<SurfaceComplex, Failure> {
    Ok(io::complex_from_json(&io::read_to_string(path)?)?)
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Faces { p, genus } => Ok(Outcome::ok(format!("{}\n", face_count(p, genus)?))),
        Command::Tessellate { p, genus, rect, .. } => {
            let faces = face_count(p, genus)?;
            let complex = match rect {
                Some((a, b)) if a * b != faces => {
                    return Err(Failure::Domain(format!(
                        "a {a}x{b} grid has {} faces, genus {genus} needs {faces}",
                        a * b
                    )))
                }
                Some((a, b)) => build_rect_tessellation(p, a, b)?,
                None if faces % 4 == 0 => build_block_tessellation(p, genus)?,
                None => {
                    let (a, b) = default_grid(faces);
                    build_rect_tessellation(p, a, b)?
                }
            };
            Ok(Outcome::ok(io::complex_to_json(&complex)))
        }
        Command::Validate { input, genus } => {
            let report = validate(&load_complex(&input)?, genus);
            Ok(Outcome {
                negative: !report.passed,
                text: io::validation_to_json(&report),
            })
        }
        Command::Loops { input, .. } => {
            let report = trace_geodesic_loops(&load_complex(&input)?)?;
            Ok(Outcome::ok(io::loops_to_json(&report)))
        }
        Command::Color {
            input, exhaustive, ..
        } => {
            let mode = if exhaustive {
                SolveMode::Exhaustive
            } else {
                SolveMode::Propagate
            };
            let outcome = solve_good_coloring(&load_complex(&input)?, mode)?;
            let negative = matches!(outcome, ColoringOutcome::Contradiction(_));
            Ok(Outcome {
                negative,
                text: io::coloring_to_json(&outcome, mode),
            })
        }
        Command::Subdivide {
            pieces,
            axis,
            input,
            map,
            ..
        } => {
            let (complex, subdivision) = subdivide(&load_complex(&input)?, pieces, axis)?;
            if let Some(path) = map {
                io::write_string(&path, &io::subdivision_to_json(&subdivision))?;
            }
            Ok(Outcome::ok(io::complex_to_json(&complex)))
        }
        Command::Certify {
            input, coloring, q, ..
        } => {
            let complex = load_complex(&input)?;
            let coloring = match coloring {
                Some(path) => io::coloring_from_json(&io::read_to_string(&path)?)?,
                None => match solve_good_coloring(&complex, SolveMode::Propagate)? {
                    ColoringOutcome::Colored(c) => c,
                    ColoringOutcome::Contradiction(_) => {
                        return Err(Failure::Domain("complex has no good coloring".into()))
                    }
                },
            };
            let cert = certificate(&assign_groups(&complex, &coloring, &q)?, None);
            Ok(Outcome {
                negative: !cert.certified,
                text: io::certificate_to_json(&cert),
            })
        }
        Command::Decide {
            p,
            genus,
            q,
            certify,
            ..
        } => {
            let decision = decide(p, &q, genus, certify)?;
            let negative = matches!(decision.verdict, Verdict::RuledOut { .. });
            Ok(Outcome {
                negative,
                text: io::decision_to_json(&decision),
            })
        }
        Command::Export {
            input,
            format: ExportFormat::Dot,
            ..
        } => Ok(Outcome::ok(dual_graph(&load_complex(&input)?)?.to_dot())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("fq").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn faces_exit_codes() {
        assert_eq!(
            run_str(&["faces", "--p", "6", "--genus", "2"]),
            (0, "4\n".into(), String::new())
        );
        let (code, _, err) = run_str(&["faces", "--p", "7", "--genus", "2"]);
        assert_eq!(code, 1);
        assert!(err.contains("8/3"), "{err}");
        assert_eq!(run_str(&["faces", "--p", "x"]).0, 2);
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("3x3"), Ok((3, 3)));
        assert_eq!(parse_grid("1X2"), Ok((1, 2)));
        assert!(parse_grid("3").is_err());
    }
}

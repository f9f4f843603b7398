//! The `kqr` command line.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when a verification
//! fails. Diagnostics go to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::assembly::{assemble_absorber, verify_absorber_parts, AssemblyOptions};
use crate::booster::{build_booster, verify_booster};
use crate::error::Error;
use crate::format::{
    describe_violation, emit_booster, emit_certificate, emit_hinge, emit_weights,
    parse_certificate, parse_graph, LabelTable,
};
use crate::hinge::{build_independent_hinge, verify_hinge};
use crate::hypergraph::{is_divisible, Clique, RGraph, VertexArena, VertexId};
use crate::integral::{integral_decomposition, pad_vertices, SolverOptions, DEFAULT_VERTEX_CAP};
use crate::layering::orthogonalize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

/// How many violations to list per failed check.
const SHOWN_VIOLATIONS: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "kqr", version, about = "Build and verify K_q^r-absorbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that every i-set codegree is divisible by binom(q-i, r-i).
    CheckDivisible {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Find integer clique weights summing to 1 on edges and 0 on non-edges.
    IntegralDecomp {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        l1_reduce: bool,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        vertex_cap: usize,
    },
    /// Booster for the clique on vertices 1..q.
    Booster {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Orthogonal booster for the clique on vertices 1..q.
    OrthogonalBooster {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Independent hinge between {1..q} and {1..r} + {q+1..2q-r}.
    Hinge {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build an absorber certificate for a divisible graph.
    Absorber {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        vertex_cap: usize,
        #[arg(long)]
        l1_reduce: bool,
    },
    /// Re-check a certificate from the file alone.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
}

/// A failure carrying its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_internal() {
                EXIT_FAILED
            } else {
                EXIT_INVALID
            },
            message: format!("{}: {e}", e.name()),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

type Outcome = std::result::Result<i32, Failure>;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("kqr: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| invalid(format!("cannot write {}: {e}", p.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| invalid(format!("cannot write output: {e}"))),
    }
}

fn read_graph(path: &Path) -> Result<(RGraph, LabelTable), Failure> {
    parse_graph(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn check_params(q: usize, r: usize) -> Result<(), Failure> {
    if r == 0 || q <= r {
        return Err(Error::BadParameters { q, r }.into());
    }
    Ok(())
}

fn numbered_clique(ids: impl IntoIterator<Item = u32>) -> Clique {
    Clique::new(ids.into_iter().map(VertexId)).expect("distinct ids")
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::CheckDivisible { q, input } => {
            let (g, _) = read_graph(&input)?;
            check_params(q, g.r())?;
            if !is_divisible(&g, q) {
                return Err(Error::NotDivisible.into());
            }
            println!("divisible");
            Ok(EXIT_OK)
        }
        Command::IntegralDecomp {
            q,
            input,
            output,
            l1_reduce,
            vertex_cap,
        } => {
            let (g, table) = read_graph(&input)?;
            check_params(q, g.r())?;
            let mut arena = VertexArena::above(g.vertices());
            let padded = pad_vertices(&g, q, &mut arena);
            let options = SolverOptions {
                vertex_cap,
                l1_reduce,
            };
            let w = integral_decomposition(&padded, q, &options)?;
            eprintln!("{} cliques, l1 norm {}", w.weights.len(), w.l1_norm());
            write(
                output.as_deref(),
                &emit_weights(&w, padded.vertices(), &table),
            )?;
            Ok(EXIT_OK)
        }
        Command::Booster { q, r, output } => {
            check_params(q, r)?;
            let mut arena = VertexArena::starting_at(q as u32);
            let b = build_booster(&numbered_clique(0..q as u32), r, &mut arena, None)?;
            if !verify_booster(&b).valid() {
                return Err(Error::Internal("booster fails verification".into()).into());
            }
            eprintln!(
                "{} vertices, {} edges",
                b.graph.vertex_count(),
                b.graph.edge_count()
            );
            write(
                output.as_deref(),
                &emit_booster(&b, None, &LabelTable::numbered(q)),
            )?;
            Ok(EXIT_OK)
        }
        Command::OrthogonalBooster { q, r, output } => {
            check_params(q, r)?;
            let mut arena = VertexArena::starting_at(q as u32);
            let b = build_booster(&numbered_clique(0..q as u32), r, &mut arena, None)?;
            let state = orthogonalize(b, &mut arena)?;
            if !verify_booster(&state.booster).valid() {
                return Err(Error::Internal("booster fails verification".into()).into());
            }
            eprintln!(
                "{} vertices, {} edges, {} layering steps",
                state.booster.graph.vertex_count(),
                state.booster.graph.edge_count(),
                state.steps
            );
            let text = emit_booster(&state.booster, Some(state.steps), &LabelTable::numbered(q));
            write(output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Hinge { q, r, output } => {
            check_params(q, r)?;
            let (q32, r32) = (q as u32, r as u32);
            let s1 = numbered_clique(0..q32);
            let s2 = numbered_clique((0..r32).chain(q32..2 * q32 - r32));
            let mut arena = VertexArena::starting_at(2 * q32 - r32);
            let h = build_independent_hinge(&s1, &s2, r, &mut arena)?;
            if !verify_hinge(&h).valid_independent() {
                return Err(Error::Internal("hinge fails verification".into()).into());
            }
            eprintln!(
                "{} vertices, {} edges",
                h.graph.vertex_count(),
                h.graph.edge_count()
            );
            write(
                output.as_deref(),
                &emit_hinge(&h, &LabelTable::numbered(2 * q - r)),
            )?;
            Ok(EXIT_OK)
        }
        Command::Absorber {
            q,
            input,
            output,
            vertex_cap,
            l1_reduce,
        } => {
            let (g, table) = read_graph(&input)?;
            check_params(q, g.r())?;
            let options = AssemblyOptions {
                solver: SolverOptions {
                    vertex_cap,
                    l1_reduce,
                },
            };
            let cert = assemble_absorber(&g, q, &options)?;
            let s = cert.sizes();
            eprintln!(
                "A: {} vertices, {} edges; {} boosters, {} hinges; {} + {} cliques",
                s.vertices, s.edges, s.boosters, s.hinges, s.cliques_a, s.cliques_al
            );
            write(output.as_deref(), &emit_certificate(&cert, &table))?;
            Ok(EXIT_OK)
        }
        Command::Verify { input } => {
            let cert = parse_certificate(&read(&input)?)
                .map_err(|e| invalid(format!("{}: {e}", input.display())))?;
            let report =
                verify_absorber_parts(&cert.l, cert.q, &cert.a, &cert.cliques_a, &cert.cliques_al);
            for (name, ok) in report.checks() {
                println!("{} {name}", if ok { "ok  " } else { "FAIL" });
            }
            for (name, d) in [
                ("A", &report.decomposition_a),
                ("A + L", &report.decomposition_al),
            ] {
                for v in d.violations.iter().take(SHOWN_VIOLATIONS) {
                    eprintln!(
                        "decomposition of {name}: {}",
                        describe_violation(v, &cert.table)
                    );
                }
                if d.violations.len() > SHOWN_VIOLATIONS {
                    eprintln!(
                        "decomposition of {name}: {} more violations",
                        d.violations.len() - SHOWN_VIOLATIONS
                    );
                }
            }
            if report.valid() {
                Ok(EXIT_OK)
            } else {
                eprintln!("kqr: certificate is not a valid absorber");
                Ok(EXIT_FAILED)
            }
        }
    }
}

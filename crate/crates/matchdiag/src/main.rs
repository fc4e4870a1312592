//! Command-line front end: reads point lists or distance matrices, runs the
//! pipeline, and serializes documents, diffs, plots, and decompositions.
//!
//! Exit codes: 0 success, 1 failed `--assert-bound`, 2 unreadable or
//! malformed input, 3 mapping errors, 4 internal invariant violations,
//! 5 block functions that do not decompose into ladders.

use clap::{Parser, Subcommand};
use matchdiag::blockfn::SetMapping;
use matchdiag::decomposition::ladder_decomposition;
use matchdiag::document::{compute_document, ComputeOptions, DiagramDocument};
use matchdiag::geomfn::{build_g, render_tripartite};
use matchdiag::io::{infer_mapping, parse_distance_matrix, parse_mapping, parse_points};
use matchdiag::matching::min_delta_matching;
use matchdiag::metric::FiniteMetricSpace;
use matchdiag::svg::{render_diagram, render_overlay};
use matchdiag::{Error, Result};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "matchdiag",
    version,
    about = "0-dimensional persistence barcodes, block functions, and matching diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the diagram document for a domain, a codomain, and a mapping
    /// between them.
    Compute {
        /// Domain point file (or distance matrix with --distance-matrix).
        domain: PathBuf,
        /// Codomain point file (or distance matrix with --distance-matrix).
        codomain: PathBuf,
        /// Mapping file ("i j" per line); inferred by exact coordinate
        /// equality when omitted.
        #[arg(long)]
        mapping: Option<PathBuf>,
        /// Read both inputs as distance-matrix files instead of point lists.
        #[arg(long)]
        distance_matrix: bool,
        /// Compute the block function through component-graph cycle counts
        /// instead of the component-count sweep.
        #[arg(long)]
        geometric: bool,
        /// Group death values within this absolute tolerance into one bar.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
        /// Print the component graph at the given (a, b) to standard error.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        dump_graph: Option<Vec<f64>>,
        /// Write the document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the matching diagrams of two documents.
    Diff {
        first: PathBuf,
        second: PathBuf,
        /// Exit with status 1 when the minimal delta exceeds this bound.
        #[arg(long)]
        assert_bound: Option<f64>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a document's matching diagram as SVG.
    Plot {
        doc: PathBuf,
        /// Second document to draw over the first, with matching segments.
        #[arg(long)]
        overlay: Option<PathBuf>,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the ladder decomposition of a document.
    Decompose {
        doc: PathBuf,
        /// Write the listing here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::EmptySpace
        | Error::DuplicatePoint(..)
        | Error::DimensionMismatch { .. }
        | Error::InvalidCoordinate { .. }
        | Error::InvalidDistance { .. }
        | Error::NotSymmetric { .. }
        | Error::InconsistentParts(_)
        | Error::Io(_) => 2,
        Error::MappingOutOfRange { .. }
        | Error::MappingNotTotal(_)
        | Error::MappingMissing(_)
        | Error::NoCoordinateMatch { .. }
        | Error::SizeMismatch(..) => 3,
        Error::NotInjectiveDecomposable(_) => 5,
        _ => 4,
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

/// Writes to `--out` when given, standard output otherwise.
fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_document(path: &Path) -> Result<DiagramDocument> {
    DiagramDocument::from_json(&read_file(path)?)
}

/// Cubic-time triangle check, so only applied to small matrices.
const TRIANGLE_CHECK_LIMIT: usize = 300;

fn warn_on_triangle_defect(space: &FiniteMetricSpace, path: &Path) {
    if space.len() <= TRIANGLE_CHECK_LIMIT {
        let defect = space.max_triangle_defect();
        if defect > 1e-9 {
            eprintln!(
                "warning: {} violates the triangle inequality (max defect {defect})",
                path.display()
            );
        }
    }
}

struct ComputeInputs {
    domain: FiniteMetricSpace,
    codomain: FiniteMetricSpace,
    mapping: SetMapping,
}

fn load_compute_inputs(
    domain: &Path,
    codomain: &Path,
    mapping: Option<&Path>,
    distance_matrix: bool,
) -> Result<ComputeInputs> {
    if distance_matrix {
        let domain_space = parse_distance_matrix(&read_file(domain)?)?;
        warn_on_triangle_defect(&domain_space, domain);
        let codomain_space = parse_distance_matrix(&read_file(codomain)?)?;
        warn_on_triangle_defect(&codomain_space, codomain);
        let mapping_path = mapping.ok_or_else(|| {
            Error::MappingMissing(
                "distance matrices carry no coordinates to infer from; pass --mapping".into(),
            )
        })?;
        let mapping = parse_mapping(
            &read_file(mapping_path)?,
            domain_space.len(),
            codomain_space.len(),
        )?;
        Ok(ComputeInputs {
            domain: domain_space,
            codomain: codomain_space,
            mapping,
        })
    } else {
        let domain_points = parse_points(&read_file(domain)?)?;
        let codomain_points = parse_points(&read_file(codomain)?)?;
        let mapping = match mapping {
            Some(path) => parse_mapping(
                &read_file(path)?,
                domain_points.len(),
                codomain_points.len(),
            )?,
            None => infer_mapping(&domain_points, &codomain_points)?,
        };
        Ok(ComputeInputs {
            domain: domain_points.to_space()?,
            codomain: codomain_points.to_space()?,
            mapping,
        })
    }
}

fn endpoint_pair(p: (matchdiag::blockfn::Endpoint, f64)) -> String {
    format!("({}, {})", p.0, p.1)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Compute {
            domain,
            codomain,
            mapping,
            distance_matrix,
            geometric,
            tol,
            dump_graph,
            out,
        } => {
            if !tol.is_finite() || tol < 0.0 {
                return Err(Error::Io(format!(
                    "--tol must be a nonnegative number, got {tol}"
                )));
            }
            let inputs =
                load_compute_inputs(&domain, &codomain, mapping.as_deref(), distance_matrix)?;
            if let Some(thresholds) = dump_graph {
                let (a, b) = (thresholds[0], thresholds[1]);
                let g = build_g(&inputs.domain, &inputs.codomain, &inputs.mapping, a, b)?;
                eprint!("{}", render_tripartite(&g, a, b));
            }
            let options = ComputeOptions { geometric, tol };
            let doc = compute_document(&inputs.domain, &inputs.codomain, &inputs.mapping, &options)?;
            emit(out.as_deref(), &doc.to_json())?;
            Ok(0)
        }
        Command::Diff {
            first,
            second,
            assert_bound,
            out,
        } => {
            let d1 = load_document(&first)?.to_matching_diagram()?;
            let d2 = load_document(&second)?.to_matching_diagram()?;
            let matching = min_delta_matching(&d1, &d2);
            let mut report = String::new();
            let _ = writeln!(report, "delta {}", matching.delta());
            for &(p, q) in matching.pairs() {
                let _ = writeln!(
                    report,
                    "match {} -> {}",
                    endpoint_pair(p),
                    endpoint_pair(q)
                );
            }
            for &p in matching.unmatched_left() {
                let _ = writeln!(report, "unmatched left {}", endpoint_pair(p));
            }
            for &p in matching.unmatched_right() {
                let _ = writeln!(report, "unmatched right {}", endpoint_pair(p));
            }
            emit(out.as_deref(), &report)?;
            if let Some(bound) = assert_bound {
                if matching.delta() > bound {
                    eprintln!("delta {} exceeds bound {bound}", matching.delta());
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Command::Plot { doc, overlay, out } => {
            let diagram = load_document(&doc)?.to_matching_diagram()?;
            let svg = match overlay {
                Some(path) => {
                    let second = load_document(&path)?.to_matching_diagram()?;
                    let matching = min_delta_matching(&diagram, &second);
                    render_overlay(&diagram, &second, &matching)
                }
                None => render_diagram(&diagram),
            };
            emit(Some(&out), &svg)?;
            Ok(0)
        }
        Command::Decompose { doc, out } => {
            let document = load_document(&doc)?;
            let bf = document.to_block_function()?;
            let domain = document.domain_barcode.to_barcode()?;
            let codomain = document.codomain_barcode.to_barcode()?;
            let ladders = ladder_decomposition(&bf, &domain, &codomain)?;
            let mut listing = String::new();
            for &(a, b, mult) in ladders.ladders() {
                let _ = writeln!(listing, "kappa({a}) -> kappa({b}) x {mult}");
            }
            for &(b, mult) in ladders.births_only() {
                let _ = writeln!(listing, "0 -> kappa({b}) x {mult}");
            }
            if ladders.has_infinite() {
                let _ = writeln!(listing, "kappa(inf) -> kappa(inf)");
            }
            emit(out.as_deref(), &listing)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

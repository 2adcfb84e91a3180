//! Command-line front end: check instances, compute and verify nowhere-zero
//! 6-flows, reduce to cubic form, generate test instances, and sweep
//! signatures.
//!
//! Machine-readable output goes to stdout, diagnostics to stderr. The `flow`
//! subcommand exits with a distinct code per rejected precondition:
//! 2 not cubic, 3 loops, 4 not flow-admissible, 5 cyclic connectivity below
//! five, 10 internal invariant breach. Other failures exit 1.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sixflow::analysis::{balanced_component_count, cyclic_edge_connectivity, is_flow_admissible};
use sixflow::convert::{six_flow_pipeline, verify_flow, PipelineError};
use sixflow::reduce::{reduce_to_cubic, LiftStep};
use sixflow::SignedGraph;
use sixflow_cli::formats::{bind_flw, parse_flw, parse_sgf, serialize_flw, serialize_sgf};
use sixflow_cli::gen::random_cubic_signed;
use sixflow_cli::sweep::{run_sweep, SweepMode};

#[derive(Parser)]
#[command(
    name = "sixflow",
    version,
    about = "Nowhere-zero 6-flows on signed graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print structural facts about a signed graph.
    Check { input: PathBuf },
    /// Compute a verified nowhere-zero 6-flow.
    Flow {
        input: PathBuf,
        /// Write the flow here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a flow file against its graph.
    Verify {
        graph: PathBuf,
        flow: PathBuf,
        /// Flow bound: values must satisfy 0 < |v| <= k-1.
        #[arg(short, default_value_t = 6)]
        k: i64,
    },
    /// Reduce to a cubic graph, writing the recipe as a sidecar.
    Reduce {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate a random simple cubic signed graph.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long = "neg-prob", default_value_t = 0.0)]
        neg_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the flow pipeline across signatures of one underlying graph.
    Sweep {
        input: PathBuf,
        /// Visit every signature with at most this many negative edges.
        #[arg(long = "max-neg", conflicts_with_all = ["samples", "seed"])]
        max_neg: Option<usize>,
        /// Visit this many uniformly sampled signatures.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // Help and version requests.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn read_graph(path: &Path) -> Result<SignedGraph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_sgf(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => {
            std::fs::write(p, content).map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn pipeline_exit_code(e: &PipelineError) -> u8 {
    match e {
        PipelineError::NotCubic => 2,
        PipelineError::HasLoop => 3,
        PipelineError::NotFlowAdmissible => 4,
        PipelineError::CyclicConnectivityBelow5(_) => 5,
        PipelineError::SearchGuard(_) => 1,
        PipelineError::Breach(_) => 10,
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Check { input } => {
            let g = read_graph(&input)?;
            println!("cubic {}", g.is_cubic());
            println!("loops {}", g.has_loops());
            println!("balanced-components {}", balanced_component_count(&g));
            println!("flow-admissible {}", is_flow_admissible(&g));
            println!("cyclic-edge-connectivity {}", cyclic_edge_connectivity(&g));
            Ok(0)
        }
        Command::Flow { input, output } => {
            let g = read_graph(&input)?;
            match six_flow_pipeline(&g) {
                Ok((tau, f)) => {
                    // Never emit an unverified flow.
                    if !verify_flow(&g, &tau, &f, 6) {
                        eprintln!("error: produced flow failed re-verification");
                        return Ok(10);
                    }
                    write_or_print(&output, &serialize_flw(&g, &tau, &f))?;
                    eprintln!("verified nowhere-zero 6-flow on {} edges", g.edge_count());
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    if let PipelineError::Breach(b) = &e {
                        eprintln!("state dump:\n{}", b.dump);
                    }
                    Ok(pipeline_exit_code(&e))
                }
            }
        }
        Command::Verify { graph, flow, k } => {
            let g = read_graph(&graph)?;
            let text = std::fs::read_to_string(&flow)
                .map_err(|e| format!("cannot read {}: {e}", flow.display()))?;
            let entries = parse_flw(&text).map_err(|e| format!("{}: {e}", flow.display()))?;
            let (tau, f) = match bind_flw(&g, &entries) {
                Ok(bound) => bound,
                Err(e) => {
                    eprintln!("error: {e}");
                    println!("fail");
                    return Ok(1);
                }
            };
            if verify_flow(&g, &tau, &f, k) {
                println!("ok");
                Ok(0)
            } else {
                println!("fail");
                Ok(1)
            }
        }
        Command::Reduce { input, output } => {
            let g = read_graph(&input)?;
            match reduce_to_cubic(&g) {
                Ok((reduced, recipe)) => {
                    std::fs::write(&output, serialize_sgf(&reduced))
                        .map_err(|e| format!("cannot write {}: {e}", output.display()))?;
                    let sidecar = output.with_extension("recipe");
                    std::fs::write(&sidecar, render_recipe(&recipe.steps))
                        .map_err(|e| format!("cannot write {}: {e}", sidecar.display()))?;
                    eprintln!(
                        "reduced to {} vertices, {} edges in {} steps",
                        reduced.vertex_count(),
                        reduced.edge_count(),
                        recipe.steps.len()
                    );
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    let code = match e {
                        sixflow::reduce::ReduceError::NotFlowAdmissible => 4,
                        _ => 1,
                    };
                    Ok(code)
                }
            }
        }
        Command::Gen {
            n,
            neg_prob,
            seed,
            output,
        } => {
            let g = random_cubic_signed(n, neg_prob, seed).map_err(|e| e.to_string())?;
            write_or_print(&output, &serialize_sgf(&g))?;
            Ok(0)
        }
        Command::Sweep {
            input,
            max_neg,
            samples,
            seed,
        } => {
            let g = read_graph(&input)?;
            let mode = match (max_neg, samples) {
                (Some(k), None) => SweepMode::MaxNegatives(k),
                (None, Some(count)) => SweepMode::Samples { count, seed },
                _ => return Err("pass exactly one of --max-neg or --samples".into()),
            };
            let name = input
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| input.display().to_string());
            let report = run_sweep(&g, mode);
            print!(
                "{}",
                report.render(&name, g.vertex_count(), g.edge_count(), mode)
            );
            Ok(if report.summary.failures == 0 { 0 } else { 1 })
        }
    }
}

/// Human-auditable recipe rendering. Ids refer to the reduction's working
/// graph, in which edge slots stay stable across steps.
fn render_recipe(steps: &[LiftStep]) -> String {
    let mut out = String::new();
    out.push_str("# reduction recipe: one step per line, in application order\n");
    for step in steps {
        match step {
            LiftStep::Suppress {
                vertex,
                removed,
                merged,
            } => {
                writeln!(
                    out,
                    "suppress vertex {} removed {} {} merged {}",
                    vertex, removed[0], removed[1], merged
                )
                .unwrap();
            }
            LiftStep::Uncontract {
                vertex,
                new_vertex,
                moved_ends,
                new_edge,
                kept,
            } => {
                let ends = moved_ends
                    .iter()
                    .map(|(e, i)| format!("{e}:{i}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                writeln!(
                    out,
                    "uncontract vertex {vertex} new-vertex {new_vertex} moved {ends} new-edge {new_edge} kept {kept}"
                )
                .unwrap();
            }
            LiftStep::Switch { vertex } => {
                writeln!(out, "switch vertex {vertex}").unwrap();
            }
        }
    }
    out
}

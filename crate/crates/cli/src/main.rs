use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use outraag::decision::analyze;
use outraag::homo_rep::FreeProductShape;
use outraag::raag_words::verify_pc_transvection_relations;
use outraag::standard_rep::verify_splitting_relations;
use outraag::domination_data;
use outraag_cli::census::{run_census, Check};
use outraag_cli::parse::{read_graph, Format};
use outraag_cli::{report, CliError};

#[derive(Parser)]
#[command(name = "outraag", version, about = "Property (T) and virtual indicability for Out of right-angled Artin groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one graph and report the verdict.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        json: bool,
        /// Include span certificates, witnesses and matrices.
        #[arg(long)]
        certify: bool,
    },
    /// Run property checks over every graph up to a size.
    Census {
        #[arg(long)]
        max_vertices: usize,
        #[arg(long, value_enum, default_value = "all")]
        check: Check,
        #[arg(long)]
        json: bool,
    },
    /// Dump the representation matrices for a free product shape `c0,c1,...:d`.
    Rep {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        json: bool,
    },
    /// Check the automorphism relation suites on one graph.
    Relations {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        json: bool,
    },
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Analyze {
            file,
            format,
            json,
            certify,
        } => {
            let g = read_graph(&file, format)?;
            let r = analyze(&g);
            if json {
                print_json(&report::analysis_json(&g, &r, certify));
            } else {
                print!("{}", report::analysis_text(&g, &r, certify));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Census {
            max_vertices,
            check,
            json,
        } => {
            let r = run_census(max_vertices, check)?;
            if json {
                print_json(&serde_json::to_value(&r).expect("plain data"));
            } else {
                for (n, c) in &r.graphs_per_size {
                    println!("{n} vertices: {c} graphs");
                }
                for (v, c) in &r.verdicts {
                    println!("{v}: {c}");
                }
                for (k, c) in &r.checked {
                    println!("check {k}: {c} graphs");
                }
                for v in &r.violations {
                    println!("VIOLATION {} on n={} edges {:?}: {}", v.check, v.n, v.edges, v.detail);
                }
                println!("{} violations", r.violations.len());
            }
            Ok(if r.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Rep { shape, json } => {
            let shape = FreeProductShape::parse(&shape)?;
            let v = report::shape_json(&shape)?;
            if json {
                print_json(&v);
            } else {
                print!("{}", report::shape_text(&v));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Relations { file, format, json } => {
            let g = read_graph(&file, format)?;
            let dd = domination_data(&g);
            let pc = verify_pc_transvection_relations(&g, &dd);
            let split = verify_splitting_relations(&g, &dd);
            if json {
                print_json(&report::relations_json(&g, &pc, &split));
            } else {
                print!("{}", report::relations_text(&g, &pc, &split));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("outraag: {e}");
            ExitCode::from(2)
        }
    }
}

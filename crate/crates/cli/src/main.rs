use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ckl_core::catalog::{all_examples, lattice, LATTICES};
use ckl_core::ckl::{appendix_report, MethodKind, VerifyConfig};
use ckl_core::kasteleyn::{assign_kasteleyn_signs, char_poly};
use ckl_core::mahler::{mahler_jensen_default, mahler_quadrature};
use ckl_core::periodic_graph::load_graph;
use ckl_core::report::{run_report, Format, Selection};
use ckl_core::spanning_tree::{tree_entropy_fd, DEFAULT_SCHEDULE};
use ckl_core::{Error, Result};
use clap::{ArgGroup, Parser, Subcommand};
use serde_json::json;

/// Mahler measures of toroidal dimer models against bipyramid volumes of links.
#[derive(Parser)]
#[command(name = "ckl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog examples and lattices.
    List,
    /// Check 2πM ≥ vol⋄ for catalog examples.
    #[command(group(ArgGroup::new("which").required(true).args(["example", "all"])))]
    Verify {
        #[arg(long)]
        example: Vec<String>,
        /// Every example plus the dilogarithm identities.
        #[arg(long)]
        all: bool,
        #[arg(long, value_delimiter = ',', default_value = "jensen,quadrature,isoradial,trees")]
        methods: Vec<MethodKind>,
        /// Base grid of the quadrature method.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE)]
        n_schedule: Vec<usize>,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mahler measure of the characteristic polynomial of a graph file.
    Mahler {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Spanning-tree entropy of a catalog lattice.
    Trees {
        #[arg(long)]
        lattice: String,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SCHEDULE)]
        n_schedule: Vec<usize>,
    },
    /// Residuals of the dilogarithm identities for the 4·8·8 closed form.
    AppendixCheck {
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn output(out: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    let mut w = io::stdout().lock();
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    Ok(())
}

/// `Ok(true)` when every checked inequality or identity holds.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::List => {
            println!("examples:");
            for ex in all_examples() {
                let e = ex.expected;
                let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
                println!(
                    "  {:<20} tait={:<12} 2piM={:<12} vol={:<10} isoradial={}",
                    ex.name,
                    ex.tait_graph.name,
                    fmt(e.two_pi_m),
                    fmt(e.vol_bipyramid),
                    ex.isoradial_lattice.is_some()
                );
            }
            println!("lattices: {}", LATTICES.join(", "));
            Ok(true)
        }
        Command::Verify { example, all, methods, grid, n_schedule, format, out } => {
            let selection = if all { Selection::all() } else { Selection { examples: example, appendix: None } };
            let config = VerifyConfig { methods, grid, n_schedule, ..VerifyConfig::default() };
            let report = run_report(&selection, &config)?;
            let mut w = output(out.as_ref())?;
            report.write(format, &mut w)?;
            if format == Format::Json {
                writeln!(w)?;
            }
            w.flush()?;
            Ok(report.pass)
        }
        Command::Mahler { graph, grid } => {
            let g = load_graph(&std::fs::read_to_string(&graph)?)?;
            let signs = assign_kasteleyn_signs(&g)?;
            let p = char_poly(&g, &signs)?;
            let j = mahler_jensen_default(&p)?;
            let q = mahler_quadrature(&p, grid)?;
            print_json(&json!({
                "graph": g.name,
                "polynomial": p,
                "jensen": j,
                "quadrature": q,
                "two_pi_M": 2.0 * std::f64::consts::PI * j.value,
            }))?;
            Ok(true)
        }
        Command::Trees { lattice: name, n_schedule } => {
            let t = tree_entropy_fd(&lattice(&name)?, &n_schedule)?;
            print_json(&json!({ "lattice": name, "entropy": t }))?;
            Ok(true)
        }
        Command::AppendixCheck { tol } => {
            let r = appendix_report(tol);
            print_json(&r)?;
            Ok(r.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::MethodDisagreement { .. } = e {
                eprintln!("hint: a method disagreement usually means a mis-transcribed lattice");
            }
            ExitCode::from(2)
        }
    }
}

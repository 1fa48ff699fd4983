use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quadcolor::coloring::{verify_coloring, winding_report};
use quadcolor::format::{parse_col, parse_emb, write_col, write_emb};
use quadcolor::map::find_essential;
use quadcolor::solver::{solve, SolveConfig};
use quadcolor::testkit::{generate, oracle_solve, GeneratorSpec};
use quadcolor::{Coloring, EmbeddedGraph, Error, SolveResult};

/// Precoloring extension for quadrangulations of surfaces.
#[derive(Parser)]
#[command(name = "quadcolor", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated instance.
    Gen {
        family: String,
        args: Vec<usize>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Surface signature and face list.
    Faces { file: PathBuf },
    /// Winding numbers of the cuff coloring.
    Winding { file: PathBuf, colfile: PathBuf },
    /// Decide whether the cuff coloring extends.
    Solve {
        file: PathBuf,
        colfile: PathBuf,
        #[arg(long, default_value_t = 12)]
        budget: usize,
        #[arg(long)]
        heuristic_nu: Option<usize>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Check a coloring, optionally against a precoloring.
    Verify {
        file: PathBuf,
        colfile: PathBuf,
        #[arg(long)]
        pre: Option<PathBuf>,
    },
    /// Exhaustive backtracking search.
    Oracle { file: PathBuf, colfile: PathBuf },
    /// Search for a connected essential subgraph.
    Essential {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        budget: usize,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(file: &Path) -> Result<EmbeddedGraph, Error> {
    parse_emb(&read(file)?)
}

fn load_col(file: &Path, g: &EmbeddedGraph) -> Result<Coloring, Error> {
    parse_col(&read(file)?, g.vertex_count())
}

fn faces_report(g: &EmbeddedGraph) -> String {
    let s = g.signature();
    let t = g.faces();
    let mut r = String::new();
    let _ = writeln!(r, "vertices: {}", g.vertex_count());
    let _ = writeln!(r, "edges: {}", g.edge_count());
    let _ = writeln!(r, "faces: {}", t.face_count());
    let _ = writeln!(r, "orientable: {}", s.orientable);
    let _ = writeln!(r, "euler_genus: {}", s.euler_genus);
    let _ = writeln!(r, "cuffs: {}", s.cuffs);
    let _ = writeln!(r, "euler_char: {}", s.euler_char);
    let _ = writeln!(r, "quadrangulation: {}", g.check_quadrangulation().is_ok());
    let join = |vs: Vec<usize>| vs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    for (i, &f) in t.faces().iter().enumerate() {
        let _ = writeln!(r, "face {i}: {}", join(t.orbit_vertices(g, f)));
    }
    for (i, c) in g.cuffs().iter().enumerate() {
        let _ = writeln!(r, "cuff {i}: {}", join(c.clone()));
    }
    r
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Gen { family, args, o } => {
            let g = generate(&GeneratorSpec::parse(&family, &args)?)?;
            emit(o.as_deref(), &write_emb(&g))?;
            Ok(0)
        }
        Cmd::Faces { file } => {
            print!("{}", faces_report(&load(&file)?));
            Ok(0)
        }
        Cmd::Winding { file, colfile } => {
            let g = load(&file)?;
            let r = winding_report(&g, &load_col(&colfile, &g)?)?;
            for (i, w) in r.per_boundary.iter().enumerate() {
                println!("omega_{i}: {w}");
            }
            println!("total: {}", r.total);
            match r.parity_p {
                Some(p) => println!("parity_p: {p}"),
                None => println!("parity_p: none"),
            }
            println!("verdict: {}", r.verdict);
            Ok(0)
        }
        Cmd::Solve {
            file,
            colfile,
            budget,
            heuristic_nu,
            o,
        } => {
            let g = load(&file)?;
            let psi = load_col(&colfile, &g)?;
            let config = SolveConfig {
                essential_budget: budget,
                heuristic_nu,
                ..SolveConfig::from_env()
            };
            match solve(&g, &psi, &config)? {
                SolveResult::Yes(c) => {
                    println!("verdict: Yes");
                    emit(o.as_deref(), &write_col(&c))?;
                    Ok(0)
                }
                SolveResult::No(w) => {
                    println!("verdict: No");
                    println!("{w}");
                    Ok(1)
                }
                SolveResult::HeuristicYes(c, note) => {
                    println!("verdict: HeuristicYes");
                    println!("note: {note}");
                    if let Some(c) = c {
                        emit(o.as_deref(), &write_col(&c))?;
                    }
                    Ok(2)
                }
                SolveResult::HeuristicNo(note) => {
                    println!("verdict: HeuristicNo");
                    println!("note: {note}");
                    Ok(2)
                }
            }
        }
        Cmd::Verify { file, colfile, pre } => {
            let g = load(&file)?;
            let c = load_col(&colfile, &g)?;
            let pre = match pre {
                Some(p) => load_col(&p, &g)?,
                None => Coloring::new(g.vertex_count()),
            };
            if verify_coloring(&g, &c, &pre) {
                println!("valid");
                Ok(0)
            } else {
                println!("invalid");
                Ok(1)
            }
        }
        Cmd::Oracle { file, colfile } => {
            let g = load(&file)?;
            let psi = load_col(&colfile, &g)?;
            match oracle_solve(&g, &psi) {
                SolveResult::Yes(c) => {
                    println!("verdict: Yes");
                    print!("{}", write_col(&c));
                    Ok(0)
                }
                _ => {
                    println!("verdict: No");
                    Ok(1)
                }
            }
        }
        Cmd::Essential { file, budget } => {
            let g = load(&file)?;
            match find_essential(&g, budget)? {
                Some(h) => {
                    let ids: Vec<String> = h.iter().map(usize::to_string).collect();
                    println!("essential: {}", ids.join(" "));
                }
                None => println!("essential: none"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {first}");
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}: {e}", e.category());
            ExitCode::from(3)
        }
    }
}

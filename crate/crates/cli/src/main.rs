//! `superlogic`: print gate symbols, run invariant suites, evaluate automaton
//! words.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use superlogic::automaton::{
    compare_word, word_matrix, word_symbol_convolution, word_symbol_path_integral, Word,
};
use superlogic::composer::build_circuit;
use superlogic::parse::{parse_circuit, parse_word};
use superlogic::symbols::covariant_symbol;
use superlogic::verify::{self, Scope};

const COMPARE_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "superlogic", version, about = "Grassmann-symbol calculus for qubit logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the symbol of a circuit: covariant if square, matrix otherwise.
    Symbol { path: PathBuf },
    /// Run an invariant suite.
    Verify {
        #[arg(value_parser = parse_scope)]
        scope: Scope,
    },
    /// Evaluate a word file.
    Automaton {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Compare)]
        method: Method,
        /// Split every deutsch_prime(φ) letter into n letters of φ/n.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        slices: u32,
        /// Evaluate the path integral without the O_k terms.
        #[arg(long)]
        drop_odd_term: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Matrix,
    Convolution,
    Pathint,
    Compare,
}

fn parse_scope(s: &str) -> Result<Scope, String> {
    s.parse()
}

enum Failure {
    Verification,
    Usage(String),
}

impl From<superlogic::Error> for Failure {
    fn from(e: superlogic::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_symbol(path: &Path) -> Result<(), Failure> {
    let text = read(path)?;
    let tree = parse_circuit(&text).map_err(|d| Failure::Usage(format!("{}: {d}", path.display())))?;
    let gate = build_circuit(&tree)?;
    println!("{}", gate.symbol.render());
    Ok(())
}

fn cmd_verify(scope: Scope) -> Result<(), Failure> {
    let checks = verify::run(scope)?;
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    println!("{} checks, {} failed", checks.len(), failed);
    if failed > 0 {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn cmd_automaton(path: &Path, method: Method, slices: u32, drop_odd_term: bool) -> Result<(), Failure> {
    let text = read(path)?;
    let word: Word = parse_word(&text)
        .map_err(|d| Failure::Usage(format!("{}: {d}", path.display())))?
        .refine(slices as usize);
    if !matches!(method, Method::Compare) {
        println!("word: {word}");
    }
    match method {
        Method::Matrix => {
            let m = word_matrix(&word)?;
            println!("{m}");
            println!("{}", covariant_symbol(&m)?.render());
        }
        Method::Convolution => println!("{}", word_symbol_convolution(&word)?.render()),
        Method::Pathint => {
            let s = word_symbol_path_integral(&word, drop_odd_term)?;
            println!("{}", s.render());
            if drop_odd_term {
                let full = word_symbol_path_integral(&word, false)?;
                println!("deviation from the full action: {:.3e}", s.max_deviation(&full));
            }
        }
        Method::Compare => {
            let report = compare_word(&word, COMPARE_TOL)?;
            println!("{report}");
            if drop_odd_term {
                // informational: the truncated action is expected to disagree
                let dropped = word_symbol_path_integral(&word, true)?;
                let exact = &report.results[0].symbol;
                println!("path integral without O_k deviates by {:.3e}", dropped.max_deviation(exact));
            }
            if !report.passed() {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Symbol { path } => cmd_symbol(&path),
        Command::Verify { scope } => cmd_verify(scope),
        Command::Automaton {
            path,
            method,
            slices,
            drop_odd_term,
        } => cmd_automaton(&path, method, slices, drop_odd_term),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

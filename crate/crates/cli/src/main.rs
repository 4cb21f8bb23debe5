use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rnmf_cli::{
    cmd_lmc_check, cmd_npp2d, cmd_plot, cmd_rank, cmd_reduce, cmd_rnmf3, cmd_verify_irrational, cmd_verify_paz,
    Direction, Output,
};

/// Exact restricted nonnegative matrix factorization tools.
#[derive(Parser)]
#[command(name = "rnmf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    ToNpp,
    ToMatrix,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of a matrix file.
    Rank { matrix: PathBuf },
    /// Minimal restricted NMF of a matrix of rank at most 3.
    Rnmf3 { matrix: PathBuf },
    /// Minimum-vertex nested polygon of a planar instance.
    Npp2d {
        npp: PathBuf,
        /// Also write a picture of the instance and the solution.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Convert between a matrix and its nested polytope instance.
    Reduce {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        input: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a witness matrix shows one chain covering another.
    LmcCheck {
        gadget: PathBuf,
        covering: PathBuf,
        witness: PathBuf,
    },
    /// Verify the cube-based covering counterexample.
    VerifyPaz,
    /// Verify the instance whose minimal restricted NMF needs sqrt2.
    VerifyIrrational,
    /// SVG of a planar instance and optionally a solution file.
    Plot {
        npp: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Usage, input and library errors.
const EXIT_ERROR: u8 = 2;
const EXIT_FAILED: u8 = 1;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn lib<T>(r: rnmf_core::Result<T>, file: Option<&Path>) -> Result<T, String> {
    r.map_err(|e| match file {
        Some(p) => format!("{}: {e}", p.display()),
        None => e.to_string(),
    })
}

fn run(cli: Cli) -> Result<Output, String> {
    match cli.command {
        Command::Rank { matrix } => lib(cmd_rank(&read(&matrix)?), Some(&matrix)),
        Command::Rnmf3 { matrix } => lib(cmd_rnmf3(&read(&matrix)?), Some(&matrix)),
        Command::Npp2d { npp, svg } => {
            let (out, _, picture) = lib(cmd_npp2d(&read(&npp)?, svg.is_some()), Some(&npp))?;
            if let (Some(path), Some(picture)) = (svg, picture) {
                write(&path, &picture)?;
            }
            Ok(out)
        }
        Command::Reduce {
            direction,
            input,
            output,
        } => {
            let dir = match direction {
                DirectionArg::ToNpp => Direction::ToNpp,
                DirectionArg::ToMatrix => Direction::ToMatrix,
            };
            let out = lib(cmd_reduce(dir, &read(&input)?), Some(&input))?;
            emit(&out.text, output.as_deref())?;
            Ok(Output {
                text: String::new(),
                ..out
            })
        }
        Command::LmcCheck {
            gadget,
            covering,
            witness,
        } => lib(cmd_lmc_check(&read(&gadget)?, &read(&covering)?, &read(&witness)?), None),
        Command::VerifyPaz => Ok(cmd_verify_paz()),
        Command::VerifyIrrational => Ok(cmd_verify_irrational()),
        Command::Plot {
            npp,
            solution,
            output,
        } => {
            let sol = solution.as_deref().map(read).transpose()?;
            let picture = lib(cmd_plot(&read(&npp)?, sol.as_deref()), Some(&npp))?;
            emit(&picture, output.as_deref())?;
            Ok(Output {
                text: String::new(),
                report: None,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(r) = &out.report {
                println!("{r}");
            }
            if out.success() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

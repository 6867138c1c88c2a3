use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaudin_cli::emit::{miura_to_csv, solutions_to_csv, to_json, verify_to_csv};
use gaudin_cli::run::*;

#[derive(Parser)]
#[command(
    name = "gaudin-opers",
    version,
    about = "Bethe equations, Miura opers and Gaudin spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Bethe equations by multi-start Newton. Accepts a problem or a
    /// solutions document (whose roots become the starts).
    Solve { input: PathBuf },
    /// Evaluate residuals, Jacobian rank, cell label and regularity for given roots.
    Verify { input: PathBuf },
    /// Build the scalar oper of the Miura transform for given roots.
    Miura { input: PathBuf },
    /// Reproduce the root tuple in one direction.
    Reproduce { input: PathBuf },
    /// Explore the population generated from a seed tuple.
    Population { input: PathBuf },
    /// Compare Bethe vectors with Gaudin Hamiltonian eigenvectors (type A).
    GaudinCheck { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct Flags {
    /// Newton residual tolerance [default: 1e-12]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Collision guard [default: 1e-6 times the site diameter]
    #[arg(long, global = true)]
    coll_tol: Option<f64>,
    /// Tolerance for polynomial roots and residues [default: 1e-9]
    #[arg(long, global = true)]
    rat_tol: Option<f64>,
    /// Threshold for an erased Laurent tail [default: 1e-8]
    #[arg(long, global = true)]
    erase_tol: Option<f64>,
    /// Number of random Newton starts [default: 64]
    #[arg(long, global = true)]
    starts: Option<usize>,
    /// Random seed [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Population depth [default: 1]
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Weyl group iteration cap [default: 10000]
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Largest weight space for gaudin-check [default: 200]
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Lowering cutoff per tensor factor [default: 8]
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Output format; csv covers solve, verify and miura
    #[arg(long, global = true, value_enum, default_value = "json")]
    out: OutFormat,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            tol: self.tol,
            coll_tol: self.coll_tol,
            rat_tol: self.rat_tol,
            erase_tol: self.erase_tol,
            starts: self.starts,
            seed: self.seed,
            depth: self.depth,
            cap: self.cap,
            max_dim: self.max_dim,
            cutoff: self.cutoff,
        }
    }
}

fn read_input(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))
    }
}

fn csv_unsupported(cmd: &str) -> CliError {
    CliError::Input(format!("--out csv is not available for {cmd}"))
}

fn execute(cli: &Cli) -> CliResult<String> {
    let (Command::Solve { input: path }
    | Command::Verify { input: path }
    | Command::Miura { input: path }
    | Command::Reproduce { input: path }
    | Command::Population { input: path }
    | Command::GaudinCheck { input: path }) = &cli.command;
    let input = parse_input(&read_input(path)?)?;
    let settings = Settings::resolve(&cli.flags.overrides(), input.problem().options.as_ref());
    let problem = input.problem();
    let csv = matches!(cli.flags.out, OutFormat::Csv);
    match &cli.command {
        Command::Solve { .. } => {
            let d = run_solve(&input, &settings)?;
            if csv {
                solutions_to_csv(&d)
            } else {
                to_json(&d)
            }
        }
        Command::Verify { .. } => {
            let d = run_verify(problem, &settings)?;
            if csv {
                verify_to_csv(&d)
            } else {
                to_json(&d)
            }
        }
        Command::Miura { .. } => {
            let d = run_miura(problem, &settings)?;
            if csv {
                miura_to_csv(&d)
            } else {
                to_json(&d)
            }
        }
        Command::Reproduce { .. } if csv => Err(csv_unsupported("reproduce")),
        Command::Reproduce { .. } => to_json(&run_reproduce(problem, &settings)?),
        Command::Population { .. } if csv => Err(csv_unsupported("population")),
        Command::Population { .. } => to_json(&run_population(problem, &settings)?),
        Command::GaudinCheck { .. } if csv => Err(csv_unsupported("gaudin-check")),
        Command::GaudinCheck { .. } => to_json(&run_gaudin_check(problem, &settings)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            if out.ends_with('\n') {
                print!("{out}");
            } else {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gaudin-opers: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

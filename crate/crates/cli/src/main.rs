use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

use report::Output;

#[derive(Debug, Parser)]
#[command(
    name = "sdepth",
    version,
    about = "Exact Stanley depth of squarefree monomial ideals, with checkable partition certificates"
)]
struct Cli {
    /// Wall-clock budget in seconds for each search.
    #[arg(long, global = true, value_parser = parse_timeout)]
    timeout: Option<Duration>,

    /// Worker threads used by the search.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Which module the poset describes.
#[derive(Debug, Clone, Args)]
#[group(multiple = false)]
pub struct PosetArgs {
    /// The ideal I itself.
    #[arg(long, value_name = "FILE")]
    ideal: Option<PathBuf>,

    /// The quotient S/I.
    #[arg(long, value_name = "FILE")]
    quotient: Option<PathBuf>,

    /// J/I for I contained in J; the larger ideal comes first.
    #[arg(long, num_args = 2, value_names = ["J_FILE", "I_FILE"])]
    pair: Option<Vec<PathBuf>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write an ideal file for a standard family or normalize an existing one.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Stanley depth of a module, exactly or from closed-form bounds.
    Sdepth {
        #[command(flatten)]
        poset: PosetArgs,

        /// Run the exact search (the default).
        #[arg(long, conflicts_with = "bounds_only")]
        exact: bool,

        /// Report closed-form bounds only; works for non-squarefree ideals.
        #[arg(long)]
        bounds_only: bool,

        /// Write the partition certificate as JSON.
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,

        /// Enable the matching check during search.
        #[arg(long)]
        hall: bool,

        /// Start the upward scan at this level instead of the best known lower bound.
        #[arg(long, value_name = "K")]
        lower_hint: Option<usize>,
    },
    /// Check a partition certificate.
    Verify {
        /// Poset to check against; defaults to the one recorded in the certificate.
        #[command(flatten)]
        poset: PosetArgs,

        certificate: PathBuf,
    },
    /// Level counts and the alpha sequence at level k.
    Alpha {
        #[command(flatten)]
        poset: PosetArgs,

        #[arg(short)]
        k: usize,
    },
    /// Print level counts and simple statistics of a poset.
    Poset {
        #[command(flatten)]
        poset: PosetArgs,
    },
    /// Recompute the reference table for path and cycle ideals.
    Reproduce {
        /// Also recompute the n = 13 cycle.
        #[arg(long)]
        include_slow: bool,
    },
    /// Decide sdepth(S/J_n) >= ceil(n/3) for cycles with n = 1 mod 3.
    Conjecture {
        #[arg(required = true)]
        n: Vec<usize>,

        /// Directory for certificates of confirmed cases.
        #[arg(long, value_name = "DIR")]
        certificate_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Edge ideal of the path on n vertices.
    Line { n: usize },
    /// Edge ideal of the cycle on n vertices.
    Cycle { n: usize },
    /// All squarefree monomials of degree d in n variables.
    Veronese { n: usize, d: usize },
    /// Re-emit an ideal file with minimal generators in canonical order.
    File { path: PathBuf },
}

fn parse_timeout(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(secs > 0.0 && secs.is_finite()) {
        return Err("timeout must be a positive number of seconds".into());
    }
    Ok(Duration::from_secs_f64(secs))
}

/// Exit statuses.
pub mod status {
    pub const OK: u8 = 0;
    pub const INPUT: u8 = 1;
    pub const INCONCLUSIVE: u8 = 2;
    pub const REGRESSION: u8 = 3;
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => status::OK,
                _ => status::INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = commands::Config {
        timeout: cli.timeout,
        workers: cli.workers as usize,
    };
    let mut out = Output::new(cli.format);
    let result = match cli.command {
        Command::Gen { family } => commands::gen(&family, &mut out),
        Command::Sdepth {
            poset,
            exact: _,
            bounds_only,
            certificate,
            hall,
            lower_hint,
        } => commands::sdepth(
            &config,
            &poset,
            bounds_only,
            certificate.as_deref(),
            hall,
            lower_hint,
            &mut out,
        ),
        Command::Verify { poset, certificate } => commands::verify(&poset, &certificate, &mut out),
        Command::Alpha { poset, k } => commands::alpha(&poset, k, &mut out),
        Command::Poset { poset } => commands::poset(&poset, &mut out),
        Command::Reproduce { include_slow } => commands::reproduce(&config, include_slow, &mut out),
        Command::Conjecture { n, certificate_dir } => {
            commands::conjecture(&config, &n, certificate_dir.as_deref(), &mut out)
        }
    };
    match result {
        Ok(code) => match out.flush(cli.output.as_deref()) {
            Ok(()) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(status::INPUT)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(status::INPUT)
        }
    }
}
